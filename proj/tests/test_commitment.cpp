#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "qzk/commitment.hpp"
#include "qzk/error.hpp"

using namespace qzk;

namespace {

// Independent total-variation oracle straight from the tables.
double tv_oracle(const CommitmentScheme& s, int a, int b) {
    std::map<std::string, double> pa, pb;
    for (const auto& [sym, p] : s.distribution(a).table) pa[sym] += p;
    for (const auto& [sym, p] : s.distribution(b).table) pb[sym] += p;
    std::set<std::string> support;
    for (const auto& [sym, p] : pa) support.insert(sym);
    for (const auto& [sym, p] : pb) support.insert(sym);
    double tv = 0.0;
    for (const auto& sym : support) {
        const double x = pa.count(sym) ? pa[sym] : 0.0;
        const double y = pb.count(sym) ? pb[sym] : 0.0;
        tv += std::abs(x - y);
    }
    return 0.5 * tv;
}

} // namespace

TEST_CASE("transparent commitments open correctly") {
    const CommitmentScheme s = CommitmentScheme::transparent(4);
    const std::string x = "0110";
    const std::string c = s.commit(2, x);
    CHECK(c.size() == 6); // 2-bit value prefix plus randomness
    CHECK(s.verify_opening(c, 2, x));
    CHECK_FALSE(s.verify_opening(c, 1, x));
    CHECK_FALSE(s.verify_opening(c, 2, "0111"));

    CHECK_THROWS_AS(s.commit(4, x), PreconditionError);
    CHECK_THROWS_AS(s.commit(2, "01"), PreconditionError);
    CHECK_THROWS_AS(s.commit(2, "01x0"), PreconditionError);
}

TEST_CASE("uniform commitment length") {
    const CommitmentScheme s = CommitmentScheme::transparent(3);
    std::set<std::size_t> lengths;
    for (int a = 1; a <= 3; ++a)
        for (const auto& [sym, p] : s.distribution(a).table) lengths.insert(sym.size());
    CHECK(lengths.size() == 1);
}

TEST_CASE("distributional kinds have no string commit") {
    CHECK_THROWS_AS(CommitmentScheme::ideal(2).commit(1, "0000"), UnsupportedError);
    CHECK_THROWS_AS(CommitmentScheme::leaky(0.1).commit(1, "0000"), UnsupportedError);
}

TEST_CASE("binding check") {
    SUBCASE("transparent passes for every N up to 6") {
        for (int n = 1; n <= 6; ++n) {
            const BindingReport r = binding_check(CommitmentScheme::transparent(n));
            CHECK(r.pass);
            CHECK(r.pairs_checked == 6LL * (1LL << (2 * n)));
        }
    }

    SUBCASE("broken fixture fails with a counterexample") {
        const BindingReport r = binding_check(CommitmentScheme::broken_fixture(3));
        CHECK_FALSE(r.pass);
        CHECK(r.value_a != r.value_b);
        const CommitmentScheme s = CommitmentScheme::broken_fixture(3);
        CHECK(s.commit(r.value_a, r.x) == s.commit(r.value_b, r.y));
    }

    SUBCASE("limits and preconditions") {
        CHECK_THROWS_AS(binding_check(CommitmentScheme::transparent(7)), PreconditionError);
        CHECK_THROWS_AS(binding_check(CommitmentScheme::ideal(2)), PreconditionError);
    }
}

TEST_CASE("concealing total variation") {
    SUBCASE("ideal: zero for every pair") {
        const CommitmentScheme s = CommitmentScheme::ideal(3);
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) CHECK(concealing_tv(s, a, b) == 0.0);
    }

    SUBCASE("transparent: disjoint supports give distance 1") {
        const CommitmentScheme s = CommitmentScheme::transparent(4);
        CHECK(concealing_tv(s, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("leaky: exactly epsilon, cross-checked by the table oracle") {
        for (const double eps : {0.0, 0.05, 0.3, 1.0}) {
            const CommitmentScheme s = CommitmentScheme::leaky(eps, 2);
            for (int a = 1; a <= 3; ++a)
                for (int b = 1; b <= 3; ++b) {
                    if (a == b) continue;
                    const double tv = concealing_tv(s, a, b);
                    CHECK(std::abs(tv - eps) <= 1e-12);
                    CHECK(tv == doctest::Approx(tv_oracle(s, a, b)).epsilon(1e-15));
                }
        }
    }

    SUBCASE("symmetry and triangle inequality are exact on Gamma triples") {
        const CommitmentScheme s = CommitmentScheme::leaky(0.2);
        const double d12 = concealing_tv(s, 1, 2);
        const double d23 = concealing_tv(s, 2, 3);
        const double d13 = concealing_tv(s, 1, 3);
        CHECK(d12 == concealing_tv(s, 2, 1));
        CHECK(d13 <= d12 + d23);
    }

    SUBCASE("leak 0 is distribution-identical to an ideal scheme") {
        const CommitmentScheme s = CommitmentScheme::leaky(0.0);
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) CHECK(concealing_tv(s, a, b) == 0.0);
    }
}

TEST_CASE("sampling view matches the distributions") {
    for (const auto& scheme :
         {CommitmentScheme::ideal(3), CommitmentScheme::leaky(0.25, 2)}) {
        const auto alphabet = scheme.support_alphabet();
        for (int value = 1; value <= 3; ++value) {
            std::map<std::string, double> sampled;
            double total = 0.0;
            for (int slot = 0; slot < scheme.sample_count(); ++slot) {
                const auto [sym, p] = scheme.sample(value, slot);
                REQUIRE(sym < static_cast<int>(alphabet.size()));
                sampled[alphabet[sym]] += p;
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
            for (const auto& [sym, p] : scheme.distribution(value).table)
                CHECK(std::abs((sampled.count(sym) ? sampled[sym] : 0.0) - p) < 1e-14);
        }
    }
    CHECK_THROWS_AS(CommitmentScheme::transparent(3).sample_count(), UnsupportedError);
}

TEST_CASE("csv audit export") {
    const std::string csv = distribution_csv(CommitmentScheme::leaky(0.5));
    CHECK(csv.find("value,symbol,probability") == 0);
    CHECK(csv.find("=1") != std::string::npos);
    CHECK(csv.find("~0") != std::string::npos);
}
