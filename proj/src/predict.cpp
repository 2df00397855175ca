#include "scandict/predict.hpp"

#include <algorithm>
#include <cmath>

namespace scandict {

namespace {

constexpr std::size_t kMaxContexts = std::size_t{1} << 28;

int to_symbol(double v, int symbols)
{
    const int s = static_cast<int>(v);
    if (static_cast<double>(s) != v || s < 0 || s >= symbols) {
        throw InvalidArgument("value is not a symbol of the alphabet");
    }
    return s;
}

void push_history(std::vector<int>& history, int symbol, int order)
{
    if (order == 0) {
        return;
    }
    if (static_cast<int>(history.size()) == order) {
        history.erase(history.begin());
    }
    history.push_back(symbol);
}

} // namespace

ContextIndexer::ContextIndexer(int order, int symbols) : order_(order), symbols_(symbols)
{
    if (order < 0) {
        throw InvalidArgument("Markov order must be >= 0");
    }
    if (symbols < 2) {
        throw InvalidArgument("Markov contexts need a finite alphabet");
    }
    offsets_.push_back(0);
    std::size_t width = 1;
    for (int l = 0; l <= order; ++l) {
        offsets_.push_back(offsets_.back() + width);
        if (offsets_.back() > kMaxContexts) {
            throw InvalidArgument("Markov context table too large");
        }
        width *= static_cast<std::size_t>(symbols);
    }
}

std::size_t ContextIndexer::index(std::span<const int> history) const
{
    const std::size_t len = std::min(history.size(), static_cast<std::size_t>(order_));
    std::size_t value = 0;
    for (std::size_t i = history.size() - len; i < history.size(); ++i) {
        value = value * static_cast<std::size_t>(symbols_) + static_cast<std::size_t>(history[i]);
    }
    return offsets_[len] + value;
}

int ContextIndexer::length_of(std::size_t ctx) const
{
    for (int l = 0; l <= order_; ++l) {
        if (ctx < offsets_[static_cast<std::size_t>(l) + 1]) {
            return l;
        }
    }
    throw InvalidArgument("context index out of range");
}

MarkovTable::MarkovTable(int order, Alphabet alphabet, LossFn loss)
    : indexer_(order, alphabet.is_finite() ? alphabet.size : 0), alphabet_(alphabet), loss_(loss)
{
    counts_.assign(indexer_.count() * static_cast<std::size_t>(alphabet.size), 0);
    decisions_.assign(indexer_.count(), 0.0);
    decide();
}

void MarkovTable::accumulate(std::span<const double> segment)
{
    std::vector<int> history;
    history.reserve(static_cast<std::size_t>(order()) + 1);
    const auto q = static_cast<std::size_t>(alphabet_.size);
    for (double v : segment) {
        const int x = to_symbol(v, alphabet_.size);
        ++counts_[indexer_.index(history) * q + static_cast<std::size_t>(x)];
        push_history(history, x, order());
    }
}

void MarkovTable::decide()
{
    for (std::size_t ctx = 0; ctx < indexer_.count(); ++ctx) {
        const std::vector<double> dist = conditional(*this, ctx);
        decisions_[ctx] = bayes_predict(loss_, dist);
    }
}

std::span<const std::uint64_t> MarkovTable::counts(std::size_t ctx) const
{
    const auto q = static_cast<std::size_t>(alphabet_.size);
    return std::span<const std::uint64_t>(counts_).subspan(ctx * q, q);
}

std::uint64_t MarkovTable::occurrences(std::size_t ctx) const
{
    std::uint64_t total = 0;
    for (std::uint64_t c : counts(ctx)) {
        total += c;
    }
    return total;
}

double MarkovTable::predict(std::span<const int> history) const { return decisions_[indexer_.index(history)]; }

double MarkovTable::score(std::span<const double> segment) const
{
    std::vector<int> history;
    double total = 0.0;
    for (double v : segment) {
        total += loss_(v, predict(history));
        push_history(history, to_symbol(v, alphabet_.size), order());
    }
    return total;
}

std::vector<double> conditional(const MarkovTable& table, std::size_t ctx)
{
    const auto q = static_cast<std::size_t>(table.alphabet().size);
    const std::uint64_t total = table.occurrences(ctx);
    std::vector<double> dist(q, 1.0 / static_cast<double>(q));
    if (total > 0) {
        const auto c = table.counts(ctx);
        for (std::size_t x = 0; x < q; ++x) {
            dist[x] = static_cast<double>(c[x]) / static_cast<double>(total);
        }
    }
    return dist;
}

MarkovTable markov_fit(std::span<const double> sequence, int k, const LossFn& loss, Alphabet alphabet)
{
    const std::vector<double> one(sequence.begin(), sequence.end());
    return markov_fit(std::span<const std::vector<double>>(&one, 1), k, loss, alphabet);
}

MarkovTable markov_fit(std::span<const std::vector<double>> segments, int k, const LossFn& loss, Alphabet alphabet)
{
    if (!alphabet.is_finite()) {
        throw InvalidArgument("Markov tables need a finite alphabet");
    }
    if (loss.kind() == LossKind::log && alphabet.size != 2) {
        throw InvalidArgument("log loss Markov tables need a binary alphabet");
    }
    std::size_t longest = 0;
    for (const auto& s : segments) {
        longest = std::max(longest, s.size());
    }
    if (k < 0 || static_cast<std::size_t>(k) >= longest) {
        throw InvalidArgument("Markov order must be smaller than the sequence length");
    }
    MarkovTable table(k, alphabet, loss);
    for (const auto& s : segments) {
        table.accumulate(s);
    }
    table.decide();
    return table;
}

MarkovPredictor::MarkovPredictor(std::shared_ptr<const MarkovTable> table) : table_(std::move(table))
{
    if (!table_) {
        throw InvalidArgument("null Markov table");
    }
}

double MarkovPredictor::predict(Site) { return table_->predict(history_); }

void MarkovPredictor::observe(Site, double value)
{
    push_history(history_, to_symbol(value, table_->alphabet().size), table_->order());
}

AdaptiveMarkovPredictor::AdaptiveMarkovPredictor(int order, Alphabet alphabet, LossFn loss)
    : indexer_(order, alphabet.is_finite() ? alphabet.size : 0), loss_(loss)
{
    counts_.assign(indexer_.count() * static_cast<std::size_t>(alphabet.size), 0);
    scratch_.resize(static_cast<std::size_t>(alphabet.size));
}

void AdaptiveMarkovPredictor::reset()
{
    std::fill(counts_.begin(), counts_.end(), 0);
    history_.clear();
}

double AdaptiveMarkovPredictor::predict(Site)
{
    const auto q = static_cast<std::size_t>(indexer_.symbols());
    const std::size_t base = indexer_.index(history_) * q;
    std::uint64_t total = 0;
    for (std::size_t x = 0; x < q; ++x) {
        total += counts_[base + x];
    }
    for (std::size_t x = 0; x < q; ++x) {
        scratch_[x] = total ? static_cast<double>(counts_[base + x]) / static_cast<double>(total)
                            : 1.0 / static_cast<double>(q);
    }
    return bayes_predict(loss_, scratch_);
}

void AdaptiveMarkovPredictor::observe(Site, double value)
{
    const int x = to_symbol(value, indexer_.symbols());
    ++counts_[indexer_.index(history_) * static_cast<std::size_t>(indexer_.symbols()) + static_cast<std::size_t>(x)];
    push_history(history_, x, indexer_.order());
}

ChainBayesPredictor::ChainBayesPredictor(double flip_probability, int cols, LossFn loss, bool independent_rows)
    : p_(flip_probability), cols_(cols), loss_(loss), independent_rows_(independent_rows)
{
    if (!(p_ >= 0.0 && p_ <= 1.0) || cols < 1) {
        throw InvalidArgument("chain predictor needs p in [0,1] and cols >= 1");
    }
}

double ChainBayesPredictor::flip_after(long distance) const
{
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p_, static_cast<double>(distance)));
}

double ChainBayesPredictor::posterior(Site next) const
{
    const long pos = static_cast<long>(next.row) * cols_ + next.col;
    auto right = observed_.upper_bound(pos);
    auto same_row = [&](long other) { return !independent_rows_ || other / cols_ == next.row; };
    const bool has_right = right != observed_.end() && same_row(right->first);
    const bool has_left = right != observed_.begin() && same_row(std::prev(right)->first);
    // Probability of moving from symbol a to symbol b in d steps.
    auto step = [&](int a, int b, long d) { return a == b ? 1.0 - flip_after(d) : flip_after(d); };
    double w1 = 0.5, w0 = 0.5;
    if (has_left) {
        const auto& [lpos, lval] = *std::prev(right);
        w1 = step(lval, 1, pos - lpos);
        w0 = step(lval, 0, pos - lpos);
    }
    if (has_right) {
        const auto& [rpos, rval] = *right;
        w1 *= step(1, rval, rpos - pos);
        w0 *= step(0, rval, rpos - pos);
    }
    return w1 + w0 > 0.0 ? w1 / (w1 + w0) : 0.5;
}

double ChainBayesPredictor::predict(Site next) { return bayes_predict(loss_, posterior(next)); }

void ChainBayesPredictor::observe(Site site, double value)
{
    observed_[static_cast<long>(site.row) * cols_ + site.col] = to_symbol(value, 2);
}

ScandictResult scandict(const DataArray& array, Scanner& scanner, Predictor& predictor, const LossFn& loss)
{
    const std::size_t only_start = 0;
    return scandict(array, scanner, predictor, loss, std::span<const std::size_t>(&only_start, 1));
}

ScandictResult scandict(const DataArray& array, Scanner& scanner, Predictor& predictor, const LossFn& loss,
                        std::span<const std::size_t> restarts)
{
    const Rect dom = scanner.domain();
    CoverageTracker tracker(dom, array);
    predictor.reset();
    ScandictResult out;
    out.trajectory.domain = dom;
    out.trajectory.sites.reserve(dom.area());
    out.trajectory.values.reserve(dom.area());
    out.predictions.reserve(dom.area());
    std::size_t next_restart = 0;
    Site site = scanner.start();
    for (std::size_t t = 0; t < dom.area(); ++t) {
        if (t > 0) {
            site = scanner.advance(out.trajectory.values.back());
        }
        tracker.visit(site);
        while (next_restart < restarts.size() && restarts[next_restart] <= t) {
            if (restarts[next_restart] == t) {
                predictor.reset();
            }
            ++next_restart;
        }
        const double q = predictor.predict(site);
        const double x = array.at(site);
        out.loss += loss(x, q);
        predictor.observe(site, x);
        out.trajectory.sites.push_back(site);
        out.trajectory.values.push_back(x);
        out.predictions.push_back(q);
    }
    return out;
}

FittedScandict scandict_fitted(const DataArray& array, Scanner& scanner, int k, const LossFn& loss)
{
    ScanTrajectory traj = run_scan(scanner, array);
    MarkovTable table = markov_fit(traj.values, k, loss, array.alphabet());
    const double total = table.score(traj.values);
    return {total, std::move(traj), std::move(table)};
}

PredictorFactory adaptive_markov_factory(int order, Alphabet alphabet, LossFn loss)
{
    return [=] { return std::make_unique<AdaptiveMarkovPredictor>(order, alphabet, loss); };
}

PredictorFactory constant_factory(double value)
{
    return [=] { return std::make_unique<ConstantPredictor>(value); };
}

} // namespace scandict
