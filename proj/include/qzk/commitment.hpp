#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qzk {

enum class SchemeKind { transparent, ideal, leaky };

// Exact probability table of commitment strings for one committed value.
struct CommitmentDistribution {
    int value = 0;
    std::vector<std::pair<std::string, double>> table; // (symbol, probability)
};

// Commitment scheme over Gamma = {1..gamma_size}. Three kinds:
//  - transparent: f(a, x) = binary(a-1) || x. Perfectly binding, not
//    concealing at all; drives the classical G3C engines.
//  - ideal: value-independent uniform strings over a small support;
//    no string-level commit function exists, only the distribution.
//  - leaky: the string names the committed value with probability
//    epsilon and is a value-independent filler otherwise, so any two
//    value distributions are exactly epsilon apart.
class CommitmentScheme {
  public:
    static CommitmentScheme transparent(int security_parameter, int gamma_size = 3);
    static CommitmentScheme ideal(int support_size = 2, int gamma_size = 3);
    static CommitmentScheme leaky(double epsilon, int filler_count = 1, int gamma_size = 3);
    // Test fixture violating the binding property: f(a, x) = x.
    static CommitmentScheme broken_fixture(int security_parameter, int gamma_size = 3);

    SchemeKind kind() const { return kind_; }
    bool broken() const { return broken_; }
    int gamma_size() const { return gamma_; }
    int security_parameter() const { return n_; }
    double epsilon() const { return epsilon_; }

    // String-level commitments exist only for deterministic kinds.
    bool deterministic() const { return kind_ == SchemeKind::transparent; }
    std::string commit(int a, const std::string& x) const;
    bool verify_opening(const std::string& s, int a, const std::string& x) const;

    CommitmentDistribution distribution(int a) const;

    // Union support in a fixed order; doubles as the per-symbol basis of
    // the quantum message registers for distributional kinds.
    std::vector<std::string> support_alphabet() const;

    // Purified sampling view used by the simulator preparation: the
    // number of sample slots per committed value, and the (alphabet
    // index, probability) of each slot.
    int sample_count() const;
    std::pair<int, double> sample(int value, int slot) const;

  private:
    CommitmentScheme() = default;
    SchemeKind kind_ = SchemeKind::transparent;
    bool broken_ = false;
    int gamma_ = 3;
    int n_ = 0;            // security parameter (bit length of x)
    int support_size_ = 0; // ideal support / leaky filler count
    double epsilon_ = 0.0;
};

struct BindingReport {
    bool pass = false;
    long long pairs_checked = 0;
    // Populated on failure.
    int value_a = 0, value_b = 0;
    std::string x, y;
};

// Exhaustive scan over all a != b and all randomness pairs (N <= 6).
BindingReport binding_check(const CommitmentScheme& scheme);

// Exact total-variation distance between the string distributions of two
// committed values.
double concealing_tv(const CommitmentScheme& scheme, int a, int b);

// CSV audit export: value,symbol,probability rows over the support.
std::string distribution_csv(const CommitmentScheme& scheme);

} // namespace qzk
