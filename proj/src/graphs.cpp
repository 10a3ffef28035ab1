#include "qzk/graphs.hpp"

#include <algorithm>
#include <sstream>

#include "qzk/error.hpp"

namespace qzk {

namespace {
constexpr int kGroupLimit = 6;    // n! enumeration
constexpr int kColoringLimit = 8; // 3^n scan
} // namespace

int pair_slot(int u, int v, int n) {
    if (u < 1 || v < 1 || u > n || v > n || u == v)
        throw PreconditionError("pair_slot: invalid vertex pair");
    if (u > v) std::swap(u, v);
    return (u - 1) * n - (u - 1) * u / 2 + (v - u - 1);
}

int pair_slot_count(int n) { return n * (n - 1) / 2; }

Graph::Graph(int n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n < 1 || n > 11) throw PreconditionError("Graph: vertex count out of range");
    const int slots = pair_slot_count(n);
    if (slots < 64 && (bits >> slots) != 0)
        throw PreconditionError("Graph: bitmask has bits beyond the pair slots");
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    std::uint64_t bits = 0;
    for (const auto& [u, v] : edges) bits |= std::uint64_t{1} << pair_slot(u, v, n);
    return Graph(n, bits);
}

Graph Graph::empty_graph(int n) { return Graph(n, 0); }

Graph Graph::complete(int n) {
    return Graph(n, (std::uint64_t{1} << pair_slot_count(n)) - 1);
}

int Graph::edge_count() const { return __builtin_popcountll(bits_); }

bool Graph::has_edge(int u, int v) const {
    return (bits_ >> pair_slot(u, v, n_)) & 1;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= n_; ++u)
        for (int v = u + 1; v <= n_; ++v)
            if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 1 || v > static_cast<int>(images_.size()) || seen[v - 1])
            throw PreconditionError("Permutation: images are not a bijection on {1..n}");
        seen[v - 1] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = i + 1;
    return Permutation(std::move(img));
}

int Permutation::apply(int v) const {
    if (v < 1 || v > degree()) throw PreconditionError("Permutation: vertex out of range");
    return images_[v - 1];
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 0; i < degree(); ++i) inv[images_[i] - 1] = i + 1;
    return Permutation(std::move(inv));
}

Graph apply_permutation(const Permutation& pi, const Graph& g) {
    if (pi.degree() != g.vertex_count())
        throw PreconditionError("apply_permutation: degree mismatch");
    std::uint64_t bits = 0;
    for (const auto& [u, v] : g.edges())
        bits |= std::uint64_t{1} << pair_slot(pi.apply(u), pi.apply(v), g.vertex_count());
    return Graph(g.vertex_count(), bits);
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
    if (outer.degree() != inner.degree())
        throw PreconditionError("compose: degree mismatch");
    std::vector<int> img(outer.degree());
    for (int i = 1; i <= outer.degree(); ++i) img[i - 1] = outer.apply(inner.apply(i));
    return Permutation(std::move(img));
}

std::vector<Permutation> enumerate_group(int n) {
    if (n < 1 || n > kGroupLimit)
        throw PreconditionError("enumerate_group: degree beyond enumeration limit");
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = i + 1;
    std::vector<Permutation> out;
    do {
        out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

std::optional<Permutation> find_isomorphism(const Graph& g0, const Graph& g1) {
    if (g0.vertex_count() != g1.vertex_count())
        throw PreconditionError("find_isomorphism: vertex count mismatch");
    for (const Permutation& sigma : enumerate_group(g0.vertex_count()))
        if (apply_permutation(sigma, g1) == g0) return sigma;
    return std::nullopt;
}

std::vector<Graph> graph_orbit(const Graph& g) {
    std::vector<std::uint64_t> masks;
    for (const Permutation& pi : enumerate_group(g.vertex_count()))
        masks.push_back(apply_permutation(pi, g).bits());
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::vector<Graph> out;
    out.reserve(masks.size());
    for (std::uint64_t m : masks) out.emplace_back(g.vertex_count(), m);
    return out;
}

std::vector<Graph> all_graphs(int n) {
    const int slots = pair_slot_count(n);
    if (slots >= 20) throw PreconditionError("all_graphs: too many graphs to enumerate");
    std::vector<Graph> out;
    out.reserve(std::size_t{1} << slots);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots); ++bits)
        out.emplace_back(n, bits);
    return out;
}

bool is_valid_coloring(const Graph& g, const ColorAssignment& c) {
    if (c.n != g.vertex_count() || static_cast<int>(c.colors.size()) != c.n)
        throw PreconditionError("is_valid_coloring: assignment does not match graph");
    for (int v : c.colors)
        if (v < 1 || v > 3) throw PreconditionError("is_valid_coloring: color outside {1,2,3}");
    for (const auto& [u, v] : g.edges())
        if (c.colors[u - 1] == c.colors[v - 1]) return false;
    return true;
}

double ColoringScore::fraction() const {
    return total_edges == 0 ? 1.0 : static_cast<double>(best_edges) / static_cast<double>(total_edges);
}

ColoringScore best_coloring_score(const Graph& g) {
    const int n = g.vertex_count();
    if (n > kColoringLimit)
        throw PreconditionError("best_coloring_score: vertex count beyond brute-force limit");
    const auto edge_list = g.edges();
    ColoringScore score;
    score.total_edges = static_cast<long>(edge_list.size());
    score.best = ColorAssignment{n, std::vector<int>(n, 1)};
    if (edge_list.empty()) {
        score.best_edges = 0;
        return score;
    }
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    long best = -1;
    for (long code = 0; code < total; ++code) {
        std::vector<int> colors(n);
        long rem = code;
        for (int i = 0; i < n; ++i) {
            colors[i] = static_cast<int>(rem % 3) + 1;
            rem /= 3;
        }
        long good = 0;
        for (const auto& [u, v] : edge_list)
            if (colors[u - 1] != colors[v - 1]) ++good;
        if (good > best) {
            best = good;
            score.best = ColorAssignment{n, colors};
        }
    }
    score.best_edges = best;
    return score;
}

GraphText parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    std::optional<ColorAssignment> colors;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::istringstream ls(line.substr(start));
        if (n < 0) {
            if (!(ls >> n) || n < 1) throw PreconditionError("graph text: bad vertex count line");
            continue;
        }
        std::string head;
        ls >> head;
        if (head == "colors:") {
            ColorAssignment c;
            c.n = n;
            int v;
            while (ls >> v) c.colors.push_back(v);
            if (static_cast<int>(c.colors.size()) != n)
                throw PreconditionError("graph text: colors line length mismatch");
            colors = std::move(c);
            continue;
        }
        int u = 0, v = 0;
        std::istringstream es(line.substr(start));
        if (!(es >> u >> v)) throw PreconditionError("graph text: bad edge line '" + line + "'");
        edges.emplace_back(u, v);
    }
    if (n < 0) throw PreconditionError("graph text: missing vertex count");
    return GraphText{Graph::from_edges(n, edges), std::move(colors)};
}

std::string graph_to_text(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << "\n";
    for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
    return out.str();
}

} // namespace qzk
