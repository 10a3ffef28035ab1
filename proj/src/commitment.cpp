#include "qzk/commitment.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "qzk/error.hpp"

namespace qzk {

namespace {

constexpr int kBindingScanLimit = 6;

int encode_width(int gamma) {
    int w = 1;
    while ((1 << w) < gamma) ++w;
    return w;
}

std::string value_prefix(int a, int gamma) {
    const int w = encode_width(gamma);
    std::string s(w, '0');
    int v = a - 1;
    for (int i = w - 1; i >= 0; --i) {
        s[i] = (v & 1) ? '1' : '0';
        v >>= 1;
    }
    return s;
}

void check_value(int a, int gamma) {
    if (a < 1 || a > gamma) throw PreconditionError("commitment value outside Gamma");
}

void check_randomness(const std::string& x, int n) {
    if (static_cast<int>(x.size()) != n)
        throw PreconditionError("commitment randomness has wrong length");
    for (char c : x)
        if (c != '0' && c != '1') throw PreconditionError("commitment randomness is not binary");
}

std::string bits_of(unsigned long long v, int n) {
    std::string s(n, '0');
    for (int i = n - 1; i >= 0; --i) {
        s[i] = (v & 1) ? '1' : '0';
        v >>= 1;
    }
    return s;
}

} // namespace

CommitmentScheme CommitmentScheme::transparent(int security_parameter, int gamma_size) {
    if (security_parameter < 1) throw PreconditionError("security parameter must be >= 1");
    if (gamma_size < 2) throw PreconditionError("Gamma must have at least 2 values");
    CommitmentScheme s;
    s.kind_ = SchemeKind::transparent;
    s.gamma_ = gamma_size;
    s.n_ = security_parameter;
    return s;
}

CommitmentScheme CommitmentScheme::ideal(int support_size, int gamma_size) {
    if (support_size < 1) throw PreconditionError("ideal support must be nonempty");
    if (gamma_size < 2) throw PreconditionError("Gamma must have at least 2 values");
    CommitmentScheme s;
    s.kind_ = SchemeKind::ideal;
    s.gamma_ = gamma_size;
    s.support_size_ = support_size;
    return s;
}

CommitmentScheme CommitmentScheme::leaky(double epsilon, int filler_count, int gamma_size) {
    if (epsilon < 0.0 || epsilon > 1.0) throw PreconditionError("epsilon must lie in [0,1]");
    if (filler_count < 1) throw PreconditionError("leaky scheme needs at least one filler symbol");
    if (gamma_size < 2) throw PreconditionError("Gamma must have at least 2 values");
    CommitmentScheme s;
    s.kind_ = SchemeKind::leaky;
    s.gamma_ = gamma_size;
    s.support_size_ = filler_count;
    s.epsilon_ = epsilon;
    return s;
}

CommitmentScheme CommitmentScheme::broken_fixture(int security_parameter, int gamma_size) {
    CommitmentScheme s = transparent(security_parameter, gamma_size);
    s.broken_ = true;
    return s;
}

std::string CommitmentScheme::commit(int a, const std::string& x) const {
    if (!deterministic())
        throw UnsupportedError("commit: scheme has no string representation");
    check_value(a, gamma_);
    check_randomness(x, n_);
    if (broken_) return x;
    return value_prefix(a, gamma_) + x;
}

bool CommitmentScheme::verify_opening(const std::string& s, int a, const std::string& x) const {
    return commit(a, x) == s;
}

CommitmentDistribution CommitmentScheme::distribution(int a) const {
    check_value(a, gamma_);
    CommitmentDistribution dist;
    dist.value = a;
    switch (kind_) {
        case SchemeKind::transparent: {
            if (n_ > 16)
                throw UnsupportedError("distribution: transparent support too large to enumerate");
            const double p = std::ldexp(1.0, -n_);
            for (unsigned long long v = 0; v < (1ULL << n_); ++v)
                dist.table.emplace_back(commit(a, bits_of(v, n_)), p);
            break;
        }
        case SchemeKind::ideal: {
            const double p = 1.0 / support_size_;
            for (int i = 0; i < support_size_; ++i)
                dist.table.emplace_back("#" + std::to_string(i), p);
            break;
        }
        case SchemeKind::leaky: {
            for (int v = 1; v <= gamma_; ++v)
                dist.table.emplace_back("=" + std::to_string(v), v == a ? epsilon_ : 0.0);
            const double filler = (1.0 - epsilon_) / support_size_;
            for (int i = 0; i < support_size_; ++i)
                dist.table.emplace_back("~" + std::to_string(i), filler);
            break;
        }
    }
    return dist;
}

std::vector<std::string> CommitmentScheme::support_alphabet() const {
    std::vector<std::string> out;
    switch (kind_) {
        case SchemeKind::transparent:
            for (int a = 1; a <= gamma_; ++a)
                for (unsigned long long v = 0; v < (1ULL << n_); ++v)
                    out.push_back(broken_ ? bits_of(v, n_) : value_prefix(a, gamma_) + bits_of(v, n_));
            break;
        case SchemeKind::ideal:
            for (int i = 0; i < support_size_; ++i) out.push_back("#" + std::to_string(i));
            break;
        case SchemeKind::leaky:
            for (int v = 1; v <= gamma_; ++v) out.push_back("=" + std::to_string(v));
            for (int i = 0; i < support_size_; ++i) out.push_back("~" + std::to_string(i));
            break;
    }
    return out;
}

int CommitmentScheme::sample_count() const {
    switch (kind_) {
        case SchemeKind::ideal:
            return support_size_;
        case SchemeKind::leaky:
            return 1 + support_size_; // the revealing symbol plus the fillers
        case SchemeKind::transparent:
            throw UnsupportedError("sample_count: transparent commitments are not distributional");
    }
    return 0;
}

std::pair<int, double> CommitmentScheme::sample(int value, int slot) const {
    check_value(value, gamma_);
    if (slot < 0 || slot >= sample_count()) throw PreconditionError("sample slot out of range");
    if (kind_ == SchemeKind::ideal) return {slot, 1.0 / support_size_};
    // leaky: slot 0 reveals the value, the rest are fillers
    if (slot == 0) return {value - 1, epsilon_};
    return {gamma_ + (slot - 1), (1.0 - epsilon_) / support_size_};
}

BindingReport binding_check(const CommitmentScheme& scheme) {
    if (!scheme.deterministic())
        throw PreconditionError("binding_check: scheme has no string-level commitments");
    if (scheme.security_parameter() > kBindingScanLimit)
        throw PreconditionError("binding_check: security parameter too large for the exhaustive scan");
    const int n = scheme.security_parameter();
    BindingReport report;
    for (int a = 1; a <= scheme.gamma_size(); ++a)
        for (int b = 1; b <= scheme.gamma_size(); ++b) {
            if (a == b) continue;
            for (unsigned long long xv = 0; xv < (1ULL << n); ++xv)
                for (unsigned long long yv = 0; yv < (1ULL << n); ++yv) {
                    const std::string x = bits_of(xv, n);
                    const std::string y = bits_of(yv, n);
                    ++report.pairs_checked;
                    if (scheme.commit(a, x) == scheme.commit(b, y)) {
                        report.pass = false;
                        report.value_a = a;
                        report.value_b = b;
                        report.x = x;
                        report.y = y;
                        return report;
                    }
                }
        }
    report.pass = true;
    return report;
}

double concealing_tv(const CommitmentScheme& scheme, int a, int b) {
    std::map<std::string, double> diff;
    for (const auto& [sym, p] : scheme.distribution(a).table) diff[sym] += p;
    for (const auto& [sym, p] : scheme.distribution(b).table) diff[sym] -= p;
    double tv = 0.0;
    for (const auto& [sym, d] : diff) tv += std::abs(d);
    return 0.5 * tv;
}

std::string distribution_csv(const CommitmentScheme& scheme) {
    std::ostringstream out;
    out << "value,symbol,probability\n";
    for (int a = 1; a <= scheme.gamma_size(); ++a)
        for (const auto& [sym, p] : scheme.distribution(a).table)
            out << a << "," << sym << "," << p << "\n";
    return out.str();
}

} // namespace qzk
