#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qzk {

// 0-based slot of the unordered pair {u,v} (1 <= u < v <= n) in the
// lexicographic order (1,2),(1,3),...,(n-1,n). This fixes the edge-bitmask
// encoding and the basis order of every message register built from graphs.
int pair_slot(int u, int v, int n);
int pair_slot_count(int n);

// Simple undirected graph on vertex set {1..n}; edges as a bitmask over
// pair slots. The encoding rules out loops and duplicates.
class Graph {
  public:
    Graph() = default;
    Graph(int n, std::uint64_t bits);
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    static Graph empty_graph(int n);
    static Graph complete(int n);

    int vertex_count() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    int edge_count() const;
    bool has_edge(int u, int v) const;
    std::vector<std::pair<int, int>> edges() const; // ascending pair slots

    bool operator==(const Graph& other) const = default;

  private:
    int n_ = 0;
    std::uint64_t bits_ = 0;
};

class Permutation {
  public:
    explicit Permutation(std::vector<int> images); // images[i] = pi(i+1)
    static Permutation identity(int n);

    int degree() const { return static_cast<int>(images_.size()); }
    int apply(int v) const;
    const std::vector<int>& images() const { return images_; }
    Permutation inverse() const;

    bool operator==(const Permutation& other) const = default;

  private:
    std::vector<int> images_;
};

// Relabeled graph: edge {u,v} maps to {pi(u), pi(v)}.
Graph apply_permutation(const Permutation& pi, const Graph& g);

// compose(outer, inner)(i) = outer(inner(i)); the right factor acts first,
// so compose(pi, sigma) applied to G equals pi(sigma(G)).
Permutation compose(const Permutation& outer, const Permutation& inner);

// All n! permutations in lexicographic order of image lists (n <= 6).
std::vector<Permutation> enumerate_group(int n);

// First permutation (in enumeration order) with sigma(g1) = g0, if any.
std::optional<Permutation> find_isomorphism(const Graph& g0, const Graph& g1);

// Distinct relabelings of g, sorted by bitmask.
std::vector<Graph> graph_orbit(const Graph& g);

// All 2^(n(n-1)/2) graphs on n vertices, ascending bitmask.
std::vector<Graph> all_graphs(int n);

struct ColorAssignment {
    int n = 0;
    std::vector<int> colors; // entries in {1,2,3}
};

bool is_valid_coloring(const Graph& g, const ColorAssignment& c);

struct ColoringScore {
    long best_edges = 0;
    long total_edges = 0;
    ColorAssignment best; // first maximizer in scan order
    double fraction() const;
};

// Brute force over all 3^n assignments (n <= 8). The empty graph scores 1.
ColoringScore best_coloring_score(const Graph& g);

// --- text format -------------------------------------------------------
// First line: n. Each following "u v" line is an edge (1-indexed). An
// optional "colors: c1 c2 ... cn" line carries a witness coloring.

struct GraphText {
    Graph graph;
    std::optional<ColorAssignment> colors;
};

GraphText parse_graph_text(const std::string& text);
std::string graph_to_text(const Graph& g);

} // namespace qzk
