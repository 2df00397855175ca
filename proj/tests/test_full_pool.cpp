#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "doctest.h"
#include "scandict/experiments.hpp"
#include "scandict/full_pool.hpp"
#include "scandict/universal.hpp"

using namespace scandict;

namespace {

using Signature = std::vector<int>; // visited sites for each of the 16 patterns, concatenated

// Every adaptive visiting order of the four sites, enumerated directly as decision trees.
void enumerate_trees(std::set<Signature>& out)
{
    // tree[h] = site chosen after history h; histories indexed like the pool's nodes.
    std::vector<int> tree(7, -1);
    std::function<void(int)> fill = [&](int node) {
        if (node == 7) {
            Signature sig;
            for (unsigned pattern = 0; pattern < 16; ++pattern) {
                std::vector<bool> used(4, false);
                int history = 0;
                for (int t = 0; t < 4; ++t) {
                    int site = -1;
                    if (t < 3) {
                        site = tree[static_cast<std::size_t>((1 << t) - 1 + history)];
                    } else {
                        for (int s = 0; s < 4; ++s) {
                            if (!used[static_cast<std::size_t>(s)]) {
                                site = s;
                            }
                        }
                    }
                    if (site < 0 || used[static_cast<std::size_t>(site)]) {
                        return; // inconsistent tree
                    }
                    used[static_cast<std::size_t>(site)] = true;
                    sig.push_back(site);
                    history = 2 * history + static_cast<int>((pattern >> site) & 1U);
                }
            }
            out.insert(sig);
            return;
        }
        for (int s = 0; s < 4; ++s) {
            tree[static_cast<std::size_t>(node)] = s;
            fill(node + 1);
        }
    };
    fill(0);
}

} // namespace

TEST_SUITE("full_pool") {

TEST_CASE("the 576 encoded scanners are exactly the adaptive orders of a 2x2 block")
{
    std::set<Signature> encoded;
    for (std::size_t s = 0; s < FullPool2x2::kScanners; ++s) {
        Signature sig;
        for (unsigned pattern = 0; pattern < 16; ++pattern) {
            const auto path = FullPool2x2::path(s, pattern);
            std::set<int> sites;
            for (const auto& step : path) {
                sig.push_back(step.site);
                sites.insert(step.site);
                REQUIRE(step.value == static_cast<int>((pattern >> step.site) & 1U));
            }
            REQUIRE(sites.size() == 4);
        }
        encoded.insert(sig);
    }
    CHECK(encoded.size() == FullPool2x2::kScanners);
    std::set<Signature> direct;
    enumerate_trees(direct);
    CHECK(direct == encoded);
    CHECK(FullPool2x2::log_lambda() == doctest::Approx(std::log(576.0) + 15 * std::log(2.0)));
    CHECK_THROWS(FullPool2x2::path(576, 0));
}

TEST_CASE("factorized weights agree with explicit enumeration")
{
    const int n = 7;
    const DataArray a = mixed_array(ArrayMix::iid, n, 21);
    const std::vector<unsigned> patterns = block_patterns_2x2(a);
    REQUIRE(patterns.size() == 9);
    const std::vector<std::size_t> scanners{0, 37, 575};
    const double eta = 0.3;

    const std::size_t P = 1U << FullPool2x2::kNodes;
    const std::size_t J = scanners.size() * P;
    std::vector<double> cum(J, 0.0);
    double expected = 0.0;
    for (unsigned pattern : patterns) {
        const double lo = *std::min_element(cum.begin(), cum.end());
        double z = 0.0, e = 0.0;
        std::vector<double> block(J);
        for (std::size_t j = 0; j < J; ++j) {
            block[j] = FullPool2x2::block_loss(scanners[j / P], static_cast<std::uint32_t>(j % P), pattern);
            const double w = std::exp(-eta * (cum[j] - lo));
            z += w;
            e += w * block[j];
        }
        expected += e / z;
        for (std::size_t j = 0; j < J; ++j) {
            cum[j] += block[j];
        }
    }
    const double min_loss = *std::min_element(cum.begin(), cum.end());

    const FullPoolRun run = run_full_pool(patterns, n, eta, 1, scanners);
    CHECK(run.expected_loss == doctest::Approx(expected).epsilon(1e-10));
    CHECK(run.min_loss == min_loss);
    CHECK(run.bound == doctest::Approx(regret_bound(2, n, static_cast<double>(J), 1.0)));
}

TEST_CASE("block patterns follow row-major bit order")
{
    const DataArray a(4, 4, Alphabet::binary(), {1, 0, 0, 0, //
                                                 0, 1, 0, 0, //
                                                 0, 0, 1, 1, //
                                                 0, 0, 1, 1});
    const auto p = block_patterns_2x2(a);
    REQUIRE(p.size() == 1); // K = 1
    CHECK(p[0] == 0b1001U);
    CHECK_THROWS(block_patterns_2x2(DataArray(4, 4, Alphabet::real_unit())));
}

TEST_CASE("complete-pool regret stays below the bound")
{
    const double lambda = 576.0 * 32768.0;
    for (int kind = 0; kind < 4; ++kind) {
        const int n = 32;
        const DataArray a = mixed_array(static_cast<ArrayMix>(kind), n, 50 + static_cast<std::uint64_t>(kind));
        const auto patterns = block_patterns_2x2(a);
        const FullPoolRun run = run_full_pool(patterns, n, optimal_eta(2, n, lambda, 1.0), 3);
        CHECK(run.expected_loss - run.min_loss <= run.bound);
        CHECK(run.min_loss <= run.expected_loss);
    }
}

}
