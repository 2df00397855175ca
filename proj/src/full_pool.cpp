#include "scandict/full_pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scandict/rng.hpp"
#include "scandict/universal.hpp"

namespace scandict {

std::array<FullPool2x2::Step, FullPool2x2::kSites> FullPool2x2::path(std::size_t scanner, unsigned pattern)
{
    if (scanner >= kScanners || pattern >= 16) {
        throw InvalidArgument("full-pool scanner or pattern out of range");
    }
    const int first = static_cast<int>(scanner % 4);
    const std::size_t rest = scanner / 4;
    const int second_choice[2] = {static_cast<int>(rest % 3), static_cast<int>((rest / 3) % 3)};
    const std::size_t third_bits = rest / 9;

    std::array<Step, kSites> steps{};
    std::array<bool, kSites> used{};
    auto value_at = [&](int site) { return static_cast<int>((pattern >> site) & 1U); };
    auto pick_unused = [&](int choice) {
        for (int site = 0; site < kSites; ++site) {
            if (!used[static_cast<std::size_t>(site)] && choice-- == 0) {
                return site;
            }
        }
        return -1;
    };

    int history = 0;
    for (int t = 0; t < kSites; ++t) {
        int site = 0;
        if (t == 0) {
            site = first;
        } else if (t == 1) {
            site = pick_unused(second_choice[steps[0].value]);
        } else if (t == 2) {
            const int h = 2 * steps[0].value + steps[1].value;
            site = pick_unused(static_cast<int>((third_bits >> h) & 1U));
        } else {
            site = pick_unused(0);
        }
        used[static_cast<std::size_t>(site)] = true;
        const int node = (1 << t) - 1 + history;
        const int value = value_at(site);
        steps[static_cast<std::size_t>(t)] = {site, node, value};
        history = 2 * history + value;
    }
    return steps;
}

double FullPool2x2::log_lambda() { return std::log(static_cast<double>(kScanners)) + kNodes * std::log(2.0); }

int FullPool2x2::block_loss(std::size_t scanner, std::uint32_t predictor, unsigned pattern)
{
    int loss = 0;
    for (const Step& s : path(scanner, pattern)) {
        const int guess = static_cast<int>((predictor >> s.node) & 1U);
        loss += guess != s.value ? 1 : 0;
    }
    return loss;
}

std::vector<unsigned> block_patterns_2x2(const DataArray& array)
{
    if (array.alphabet().kind != AlphabetKind::binary || array.rows() != array.cols()) {
        throw InvalidArgument("full-pool runs need a square binary array");
    }
    const BlockLayout layout = block_partition(array.rows(), 2);
    std::vector<unsigned> out;
    out.reserve(layout.full_blocks.size());
    for (std::size_t idx : raster_block_order(layout)) {
        const Rect& b = layout.full_blocks[idx];
        unsigned pattern = 0;
        for (int i = 0; i < 4; ++i) {
            const int v = array.symbol({b.row0 + i / 2, b.col0 + i % 2});
            pattern |= static_cast<unsigned>(v) << i;
        }
        out.push_back(pattern);
    }
    return out;
}

FullPoolRun run_full_pool(std::span<const unsigned> patterns, int n, double eta, std::uint64_t seed,
                          std::span<const std::size_t> scanners)
{
    std::vector<std::size_t> pool(scanners.begin(), scanners.end());
    if (pool.empty()) {
        pool.resize(FullPool2x2::kScanners);
        for (std::size_t s = 0; s < pool.size(); ++s) {
            pool[s] = s;
        }
    }
    if (!(eta > 0.0)) {
        throw InvalidArgument("eta must be positive");
    }
    constexpr int N = FullPool2x2::kNodes;
    const std::size_t S = pool.size();

    // paths[s][pattern] precomputed.
    std::vector<std::array<FullPool2x2::Step, 4>> paths(S * 16);
    for (std::size_t i = 0; i < S; ++i) {
        for (unsigned pat = 0; pat < 16; ++pat) {
            paths[i * 16 + pat] = FullPool2x2::path(pool[i], pat);
        }
    }

    // counts[s][node][x]: how often value x followed history `node` under scanner s.
    std::vector<double> counts(S * N * 2, 0.0);
    auto c = [&](std::size_t s, int node, int x) -> double& {
        return counts[(s * N + static_cast<std::size_t>(node)) * 2 + static_cast<std::size_t>(x)];
    };
    // Log of sum over d of exp(-eta * loss of bit d at this node).
    auto node_log_weight = [&](std::size_t s, int node) {
        const double a = -eta * c(s, node, 1); // d = 0 errs on ones
        const double b = -eta * c(s, node, 0);
        const double top = std::max(a, b);
        return top + std::log(std::exp(a - top) + std::exp(b - top));
    };
    // P(d = 1 - v) at a node: the probability of erring on value v.
    auto err_prob = [&](std::size_t s, int node, int v) {
        const double lose = -eta * c(s, node, v);
        const double win = -eta * c(s, node, 1 - v);
        return 1.0 / (1.0 + std::exp(win - lose));
    };

    Rng rng(seed);
    FullPoolRun out;
    out.eta = eta;
    std::vector<double> log_w(S), p(S);
    for (unsigned pat : patterns) {
        if (pat >= 16) {
            throw InvalidArgument("block pattern out of range");
        }
        for (std::size_t s = 0; s < S; ++s) {
            double lw = 0.0;
            for (int node = 0; node < N; ++node) {
                lw += node_log_weight(s, node);
            }
            log_w[s] = lw;
        }
        const double top = *std::max_element(log_w.begin(), log_w.end());
        double z = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            p[s] = std::exp(log_w[s] - top);
            z += p[s];
        }
        for (double& v : p) {
            v /= z;
        }

        double expected = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            double e = 0.0;
            for (const auto& step : paths[s * 16 + pat]) {
                e += err_prob(s, step.node, step.value);
            }
            expected += p[s] * e;
        }
        out.expected_loss += expected;

        const std::size_t pick = rng.categorical(p);
        std::uint32_t predictor = 0;
        for (int node = 0; node < N; ++node) {
            // P(d = 1) is the probability of erring on a zero.
            if (rng.uniform() < err_prob(pick, node, 0)) {
                predictor |= 1U << node;
            }
        }
        out.alg_loss += FullPool2x2::block_loss(pool[pick], predictor, pat);

        for (std::size_t s = 0; s < S; ++s) {
            for (const auto& step : paths[s * 16 + pat]) {
                c(s, step.node, step.value) += 1.0;
            }
        }
    }

    out.min_loss = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < S; ++s) {
        double best = 0.0;
        for (int node = 0; node < N; ++node) {
            best += std::min(c(s, node, 0), c(s, node, 1));
        }
        if (best < out.min_loss) {
            out.min_loss = best;
            out.best_scanner = pool[s];
        }
    }
    const double lambda = static_cast<double>(S) * std::pow(2.0, N);
    out.bound = regret_bound(2, n, lambda, 1.0);
    return out;
}

} // namespace scandict
