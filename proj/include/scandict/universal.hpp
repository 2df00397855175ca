#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scandict/grid.hpp"
#include "scandict/loss.hpp"
#include "scandict/predict.hpp"
#include "scandict/scan.hpp"

namespace scandict {

// A block scandictor: scanner and predictor are both restarted on every block.
struct Expert {
    std::string name;
    ScannerFactory scanner;
    PredictorFactory predictor;
};

using ExpertPool = std::vector<Expert>;

// Raster orientations 0..count-1 (see RasterOrientation::from_index), each with a causal
// order-k Markov predictor.
ExpertPool raster_markov_pool(int count, int k, Alphabet alphabet, const LossFn& loss);

// Per-block losses of every expert, full blocks in boustrophedon order.
struct BlockLosses {
    std::size_t blocks = 0;
    std::size_t experts = 0;
    std::vector<double> loss; // blocks x experts
    // Edge blocks: every expert is charged l_max per site; the algorithm's actual loss there
    // (raster scan, neutral prediction) is recorded separately.
    double edge_charge = 0.0;
    double edge_actual = 0.0;
    double block_max = 0.0; // m^2 l_max

    double at(std::size_t block, std::size_t expert) const { return loss[block * experts + expert]; }
};

// OpenMP over (block, expert) pairs; results do not depend on the thread count.
BlockLosses evaluate_pool(const DataArray& array, const ExpertPool& pool, const BlockLayout& layout,
                          const LossFn& loss);
// Single-threaded reference.
BlockLosses evaluate_pool_serial(const DataArray& array, const ExpertPool& pool, const BlockLayout& layout,
                                 const LossFn& loss);

// Softmax of -eta * losses, stabilized by subtracting the minimum loss.
std::vector<double> weights_update(std::span<const double> cumulative_losses, double eta);

// Minimizer of log(lambda)/eta + eta m^2 l_max^2 (n+m)^2 / 8. For lambda = 1 any eta works; 1 is returned.
double optimal_eta(int m, int n, double lambda, double l_max);
// m (n+m) sqrt(log lambda) l_max / sqrt(2).
double regret_bound(int m, int n, double lambda, double l_max);
// exp(-2 (K+1)^2 eps^2 / (m^2 l_max)^2).
double chernoff_tail(int K, int m, double epsilon, double l_max);

struct RunLog {
    double eta = 0.0;
    std::vector<std::size_t> chosen;
    std::vector<double> block_loss;          // loss of the chosen expert
    std::vector<double> expected_block_loss; // sum_j P_i(j) L_j(block i)
    std::vector<double> cum_alg;
    std::vector<double> cum_expected;
    std::vector<double> cum_experts; // blocks x experts, after each block
    // Hoeffding margin of the per-step weight ratio:
    // (-eta E_P[L] + eta^2 (m^2 l_max)^2 / 8) - log(W_{i+1} / W_i); never negative in exact arithmetic.
    std::vector<double> weight_ratio_slack;
    std::vector<double> expert_totals;
    double alg_loss = 0.0;      // realized, full blocks
    double expected_loss = 0.0; // full blocks
    double min_loss = 0.0;      // best expert, full blocks
    double edge_charge = 0.0;
    double edge_actual = 0.0;

    double regret() const { return expected_loss - min_loss; }
    double min_weight_slack() const;
    void write_csv(std::ostream& out) const;
};

// Exponential weighting over precomputed block losses; one draw per block from Rng(seed).
RunLog run_exponential_weights(const BlockLosses& losses, double eta, std::uint64_t seed);

// Lightweight variant for Monte Carlo: only the totals and the slack minimum.
struct RunSummary {
    double alg_loss = 0.0;
    double expected_loss = 0.0;
    double min_loss = 0.0;
    double min_weight_slack = 0.0;
};
RunSummary run_exponential_weights_summary(const BlockLosses& losses, double eta, std::uint64_t seed);

// Full pipeline; eta defaults to optimal_eta(m, n, |pool|, l_max).
RunLog run_universal(const DataArray& array, const ExpertPool& pool, int m, const LossFn& loss,
                     std::optional<double> eta, std::uint64_t seed);

} // namespace scandict
