#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scandict/entropy.hpp"
#include "scandict/fields.hpp"
#include "scandict/rng.hpp"

using namespace scandict;

namespace {

std::vector<double> random_bits(std::size_t n, double p, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& x : out) {
        x = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    return out;
}

} // namespace

TEST_SUITE("entropy") {

TEST_CASE("empirical distribution of 010101 with k = 1")
{
    const std::vector<double> seq{0, 1, 0, 1, 0, 1};
    const EmpiricalModel m = empirical_dist(seq, 1);
    CHECK(m.windows() == 5);
    const std::vector<int> s01{0, 1}, s10{1, 0}, s00{0, 0}, s11{1, 1};
    CHECK(m.prob(s01) == doctest::Approx(3.0 / 5.0));
    CHECK(m.prob(s10) == doctest::Approx(2.0 / 5.0));
    CHECK(m.prob(s00) == 0.0);
    CHECK(m.prob(s11) == 0.0);
    CHECK_THROWS(empirical_dist(std::vector<double>{0, 1}, 2));
}

TEST_CASE("marginals are sums over the trailing symbol")
{
    const auto seq = random_bits(300, 0.4, 2);
    const EmpiricalModel m = empirical_dist(seq, 3);
    for (int len = 0; len <= 3; ++len) {
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::vector<int> s(static_cast<std::size_t>(len));
            for (int t = 0; t < len; ++t) {
                s[static_cast<std::size_t>(t)] = (bits >> t) & 1;
            }
            auto s0 = s, s1 = s;
            s0.push_back(0);
            s1.push_back(1);
            REQUIRE(m.count(s) == m.count(s0) + m.count(s1));
        }
    }
    const std::vector<int> empty;
    CHECK(m.count(empty) == m.windows());
}

TEST_CASE("constant sequences have zero entropy and a point mass")
{
    const std::vector<double> seq(50, 1.0);
    for (int k = 0; k <= 4; ++k) {
        const EmpiricalModel m = empirical_dist(seq, k);
        CHECK(cond_entropy(m) == 0.0);
        const std::vector<int> ones(static_cast<std::size_t>(k + 1), 1);
        CHECK(m.prob(ones) == 1.0);
    }
}

TEST_CASE("entropy estimates of fair bits and a Markov chain")
{
    const auto fair = random_bits(100000, 0.5, 4);
    CHECK(std::abs(cond_entropy(empirical_dist(fair, 0)) - std::log(2.0)) < 0.01);
    Rng rng(5);
    const DataArray chain = markov_chain(1, 100000, 0.25, ChainLayout::one_d, rng);
    const std::vector<double> seq(chain.cells().begin(), chain.cells().end());
    CHECK(std::abs(cond_entropy_bits(empirical_dist(seq, 1)) - binary_entropy_bits(0.25)) < 0.01);
}

TEST_CASE("consistency inequality agrees with an integer oracle")
{
    Rng rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const auto len = 8 + rng.below(150);
        const int k = static_cast<int>(rng.below(5));
        if (len <= static_cast<std::uint64_t>(k)) {
            continue;
        }
        const auto seq = random_bits(len, trial % 3 == 0 ? 0.1 : 0.5, 100 + static_cast<std::uint64_t>(trial));
        const std::vector<int> ints(seq.begin(), seq.end());
        const EmpiricalModel high = empirical_dist(seq, k);
        for (int j = 1; j <= k + 1; ++j) {
            const EmpiricalModel low = empirical_dist(seq, j - 1);
            const ConsistencyGap gap = consistency_gap(high, low);
            REQUIRE(gap.holds == oracle::consistency_holds(ints, k, j));
            REQUIRE(gap.holds);
            REQUIRE(gap.bound == doctest::Approx(static_cast<double>(k + 1 - j) / static_cast<double>(len - k)));
            if (j == k + 1) {
                REQUIRE(gap.max_gap == 0.0);
            }
        }
    }
}

TEST_CASE("random length-100 sequence, k = 3, j = 1")
{
    const auto seq = random_bits(100, 0.5, 77);
    const ConsistencyGap gap = consistency_gap(empirical_dist(seq, 3), empirical_dist(seq, 0));
    CHECK(gap.bound == doctest::Approx(3.0 / 97.0));
    CHECK(gap.max_gap <= gap.bound);
}

TEST_CASE("consistency_gap rejects models of different sequences")
{
    const auto a = random_bits(50, 0.5, 1);
    const auto b = random_bits(50, 0.5, 2);
    CHECK_THROWS_AS(consistency_gap(empirical_dist(a, 2), empirical_dist(b, 1)), DomainMismatch);
}

TEST_CASE("LZ78 parsing")
{
    const std::vector<double> seq{0, 1, 0, 0, 1, 1, 0, 1, 0};
    // 0 | 1 | 00 | 11 | 01 | 0
    CHECK(lz78_parse(seq).phrases == 6);
    const std::vector<double> zeros(100000, 0.0);
    CHECK(lz78_compressibility(zeros) < 0.05);
    auto periodic = [](std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = static_cast<double>(i % 2);
        }
        return v;
    };
    CHECK(lz78_compressibility(periodic(100000)) < 0.1);
    CHECK(lz78_compressibility(periodic(1000000)) < lz78_compressibility(periodic(10000)));
    const double rho = lz78_compressibility(random_bits(100000, 0.5, 3));
    CHECK(rho >= 0.9);
    CHECK(rho <= 1.3);
}

TEST_CASE("sandwich on deterministic and log-loss data")
{
    const LossFn hamming(LossKind::hamming);
    const AffineApprox approx = minimax_affine(hamming);
    const std::vector<double> seq(1000, 1.0);
    const SandwichResult r = sandwich_check(seq, 2, hamming, approx, 0.0);
    CHECK(r.entropy == 0.0);
    CHECK(r.residual == doctest::Approx(std::abs(approx.beta)));
    CHECK(r.holds);

    const LossFn log_loss(LossKind::log);
    const AffineApprox exact = minimax_affine(log_loss, EntropyUnit::nats);
    const SandwichResult l = sandwich_check_known(0.3, exact, 0.3);
    CHECK(l.residual < 1e-6);
}

}
