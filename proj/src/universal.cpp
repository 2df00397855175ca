#include "scandict/universal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>

#include "scandict/rng.hpp"

namespace scandict {

ExpertPool raster_markov_pool(int count, int k, Alphabet alphabet, const LossFn& loss)
{
    if (count < 1 || count > 8) {
        throw InvalidArgument("raster pool size must be in 1..8");
    }
    ExpertPool pool;
    for (int i = 0; i < count; ++i) {
        const RasterOrientation o = RasterOrientation::from_index(i);
        pool.push_back({"raster" + std::to_string(i) + "+markov" + std::to_string(k), raster_factory(o),
                        adaptive_markov_factory(k, alphabet, loss)});
    }
    return pool;
}

namespace {

void check_pool(const DataArray& array, const ExpertPool& pool, const BlockLayout& layout)
{
    if (pool.empty()) {
        throw InvalidArgument("expert pool is empty");
    }
    if (array.rows() != layout.n || array.cols() != layout.n) {
        throw InvalidArgument("array shape does not match the block layout");
    }
}

double expert_block_loss(const DataArray& array, const Expert& expert, const Rect& block, const LossFn& loss)
{
    ScannerPtr scanner = expert.scanner(block);
    if (!(scanner->domain() == block)) {
        throw InvalidArgument("expert '" + expert.name + "' does not match the block size");
    }
    PredictorPtr predictor = expert.predictor();
    return scandict(array, *scanner, *predictor, loss).loss;
}

BlockLosses prepare(const DataArray& array, const ExpertPool& pool, const BlockLayout& layout, const LossFn& loss)
{
    check_pool(array, pool, layout);
    BlockLosses out;
    out.blocks = layout.full_blocks.size();
    out.experts = pool.size();
    out.loss.assign(out.blocks * out.experts, 0.0);
    const double l_max = loss.l_max(array.alphabet());
    out.block_max = static_cast<double>(layout.m) * layout.m * l_max;
    ConstantPredictor neutral(loss.neutral());
    for (const Rect& edge : layout.edge_blocks) {
        out.edge_charge += static_cast<double>(edge.area()) * l_max;
        auto scanner = raster_scan(edge);
        out.edge_actual += scandict(array, *scanner, neutral, loss).loss;
    }
    return out;
}

} // namespace

BlockLosses evaluate_pool(const DataArray& array, const ExpertPool& pool, const BlockLayout& layout,
                          const LossFn& loss)
{
    BlockLosses out = prepare(array, pool, layout, loss);
    const std::vector<std::size_t> order = raster_block_order(layout);
    const auto tasks = static_cast<long long>(out.blocks * out.experts);
    const std::size_t experts = out.experts;
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (long long t = 0; t < tasks; ++t) {
        const auto b = static_cast<std::size_t>(t) / experts;
        const auto j = static_cast<std::size_t>(t) % experts;
        try {
            out.loss[static_cast<std::size_t>(t)] =
                expert_block_loss(array, pool[j], layout.full_blocks[order[b]], loss);
        } catch (...) {
#pragma omp critical(scandict_pool_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

BlockLosses evaluate_pool_serial(const DataArray& array, const ExpertPool& pool, const BlockLayout& layout,
                                 const LossFn& loss)
{
    BlockLosses out = prepare(array, pool, layout, loss);
    const std::vector<std::size_t> order = raster_block_order(layout);
    for (std::size_t b = 0; b < out.blocks; ++b) {
        for (std::size_t j = 0; j < out.experts; ++j) {
            out.loss[b * out.experts + j] = expert_block_loss(array, pool[j], layout.full_blocks[order[b]], loss);
        }
    }
    return out;
}

std::vector<double> weights_update(std::span<const double> cumulative_losses, double eta)
{
    if (cumulative_losses.empty()) {
        throw InvalidArgument("no experts");
    }
    if (!(eta > 0.0)) {
        throw InvalidArgument("eta must be positive");
    }
    const double lo = *std::min_element(cumulative_losses.begin(), cumulative_losses.end());
    std::vector<double> p(cumulative_losses.size());
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = std::exp(-eta * (cumulative_losses[j] - lo));
        total += p[j];
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

double optimal_eta(int m, int n, double lambda, double l_max)
{
    if (m < 1 || n < 1 || !(lambda >= 1.0) || !(l_max > 0.0)) {
        throw InvalidArgument("optimal_eta needs positive arguments and lambda >= 1");
    }
    if (lambda == 1.0) {
        return 1.0;
    }
    return std::sqrt(8.0 * std::log(lambda)) / (static_cast<double>(m) * l_max * static_cast<double>(n + m));
}

double regret_bound(int m, int n, double lambda, double l_max)
{
    if (m < 1 || n < 1 || !(lambda >= 1.0) || !(l_max > 0.0)) {
        throw InvalidArgument("regret_bound needs positive arguments and lambda >= 1");
    }
    return static_cast<double>(m) * static_cast<double>(n + m) * std::sqrt(std::log(lambda)) * l_max /
           std::sqrt(2.0);
}

double chernoff_tail(int K, int m, double epsilon, double l_max)
{
    if (K < 0 || m < 1 || !(l_max > 0.0) || epsilon < 0.0) {
        throw InvalidArgument("chernoff_tail needs non-negative epsilon and positive sizes");
    }
    const double k1 = static_cast<double>(K + 1);
    const double range = static_cast<double>(m) * m * l_max;
    return std::exp(-2.0 * k1 * k1 * epsilon * epsilon / (range * range));
}

namespace {

// Shared exponential-weighting loop; `log` may be null for the summary variant.
RunSummary exponential_weights(const BlockLosses& losses, double eta, std::uint64_t seed, RunLog* log)
{
    if (!(eta > 0.0)) {
        throw InvalidArgument("eta must be positive");
    }
    const std::size_t J = losses.experts;
    Rng rng(seed);
    std::vector<double> cum(J, 0.0);
    std::vector<double> p(J);
    RunSummary s;
    s.min_weight_slack = std::numeric_limits<double>::infinity();
    const double hoeffding = eta * eta * losses.block_max * losses.block_max / 8.0;
    if (log) {
        log->eta = eta;
        log->chosen.reserve(losses.blocks);
        log->cum_experts.reserve(losses.blocks * J);
    }
    for (std::size_t i = 0; i < losses.blocks; ++i) {
        const double lo = *std::min_element(cum.begin(), cum.end());
        double z = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            p[j] = std::exp(-eta * (cum[j] - lo));
            z += p[j];
        }
        for (double& v : p) {
            v /= z;
        }
        const std::size_t pick = rng.categorical(p);
        const double* row = &losses.loss[i * J];
        double expected = 0.0;
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < J; ++j) {
            expected += p[j] * row[j];
            if (p[j] > 0.0) {
                top = std::max(top, std::log(p[j]) - eta * row[j]);
            }
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            if (p[j] > 0.0) {
                acc += std::exp(std::log(p[j]) - eta * row[j] - top);
            }
        }
        const double log_ratio = top + std::log(acc);
        const double slack = (-eta * expected + hoeffding) - log_ratio;
        s.min_weight_slack = std::min(s.min_weight_slack, slack);
        s.alg_loss += row[pick];
        s.expected_loss += expected;
        for (std::size_t j = 0; j < J; ++j) {
            cum[j] += row[j];
        }
        if (log) {
            log->chosen.push_back(pick);
            log->block_loss.push_back(row[pick]);
            log->expected_block_loss.push_back(expected);
            log->cum_alg.push_back(s.alg_loss);
            log->cum_expected.push_back(s.expected_loss);
            log->cum_experts.insert(log->cum_experts.end(), cum.begin(), cum.end());
            log->weight_ratio_slack.push_back(slack);
        }
    }
    s.min_loss = *std::min_element(cum.begin(), cum.end());
    if (log) {
        log->expert_totals = cum;
        log->alg_loss = s.alg_loss;
        log->expected_loss = s.expected_loss;
        log->min_loss = s.min_loss;
        log->edge_charge = losses.edge_charge;
        log->edge_actual = losses.edge_actual;
    }
    return s;
}

} // namespace

RunLog run_exponential_weights(const BlockLosses& losses, double eta, std::uint64_t seed)
{
    RunLog log;
    exponential_weights(losses, eta, seed, &log);
    return log;
}

RunSummary run_exponential_weights_summary(const BlockLosses& losses, double eta, std::uint64_t seed)
{
    return exponential_weights(losses, eta, seed, nullptr);
}

double RunLog::min_weight_slack() const
{
    if (weight_ratio_slack.empty()) {
        return 0.0;
    }
    return *std::min_element(weight_ratio_slack.begin(), weight_ratio_slack.end());
}

void RunLog::write_csv(std::ostream& out) const
{
    const std::size_t J = expert_totals.size();
    out << "block,chosen_expert,block_loss,cum_alg_loss,cum_expected_loss,weight_ratio_slack";
    for (std::size_t j = 0; j < J; ++j) {
        out << ",cum_expert_" << j;
    }
    out << '\n';
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        out << i << ',' << chosen[i] << ',' << block_loss[i] << ',' << cum_alg[i] << ',' << cum_expected[i] << ','
            << weight_ratio_slack[i];
        for (std::size_t j = 0; j < J; ++j) {
            out << ',' << cum_experts[i * J + j];
        }
        out << '\n';
    }
}

RunLog run_universal(const DataArray& array, const ExpertPool& pool, int m, const LossFn& loss,
                     std::optional<double> eta, std::uint64_t seed)
{
    if (array.rows() != array.cols()) {
        throw InvalidArgument("universal scandictor needs a square array");
    }
    const BlockLayout layout = block_partition(array.rows(), m);
    const BlockLosses losses = evaluate_pool(array, pool, layout, loss);
    const double rate = eta.value_or(
        optimal_eta(m, layout.n, static_cast<double>(pool.size()), loss.l_max(array.alphabet())));
    return run_exponential_weights(losses, rate, seed);
}

} // namespace scandict
