#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "scandict/grid.hpp"
#include "scandict/loss.hpp"
#include "scandict/scan.hpp"

namespace scandict {

// Sequential predictor. Before each site it is asked for a prediction of the value there,
// then told the true value. reset() starts a fresh scan (or block).
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual void reset() = 0;
    virtual double predict(Site next) = 0;
    virtual void observe(Site site, double value) = 0;
    virtual std::unique_ptr<Predictor> clone() const = 0;
};

using PredictorPtr = std::unique_ptr<Predictor>;
using PredictorFactory = std::function<PredictorPtr()>;

class ConstantPredictor final : public Predictor {
public:
    explicit ConstantPredictor(double value) : value_(value) {}
    void reset() override {}
    double predict(Site) override { return value_; }
    void observe(Site, double) override {}
    PredictorPtr clone() const override { return std::make_unique<ConstantPredictor>(*this); }

private:
    double value_;
};

// Context indexing shared by the Markov table and the adaptive predictor. Contexts of every
// length 0..k are distinct: a context shorter than k occurs only at the start of a scan, and the
// length itself acts as the start marker.
class ContextIndexer {
public:
    ContextIndexer(int order, int symbols);

    int order() const { return order_; }
    int symbols() const { return symbols_; }
    std::size_t count() const { return offsets_.back(); }
    // history = the most recent min(len, k) symbols, oldest first.
    std::size_t index(std::span<const int> history) const;
    // Length of the context with this index.
    int length_of(std::size_t ctx) const;

private:
    int order_;
    int symbols_;
    std::vector<std::size_t> offsets_; // offsets_[l] = first index of length-l contexts; size k+2
};

// Batch-fitted order-k decision table over a finite alphabet.
class MarkovTable {
public:
    MarkovTable(int order, Alphabet alphabet, LossFn loss);

    int order() const { return indexer_.order(); }
    const Alphabet& alphabet() const { return alphabet_; }
    const LossFn& loss() const { return loss_; }
    const ContextIndexer& indexer() const { return indexer_; }
    std::size_t context_count() const { return indexer_.count(); }

    // Adds one scan segment (the predictor restarts at its first symbol).
    void accumulate(std::span<const double> segment);
    // Recomputes every decision from the counts.
    void decide();

    std::span<const std::uint64_t> counts(std::size_t ctx) const;
    std::uint64_t occurrences(std::size_t ctx) const;
    double decision(std::size_t ctx) const { return decisions_[ctx]; }
    void set_decision(std::size_t ctx, double value) { decisions_[ctx] = value; }

    // Prediction after the given history (only the last k symbols are used).
    double predict(std::span<const int> history) const;
    // Cumulative loss of the table on a segment, restarting the context at its start.
    double score(std::span<const double> segment) const;

private:
    ContextIndexer indexer_;
    Alphabet alphabet_;
    LossFn loss_;
    std::vector<std::uint64_t> counts_; // contexts x symbols
    std::vector<double> decisions_;
};

// Conditional distribution of a context; unseen contexts give the uniform distribution.
std::vector<double> conditional(const MarkovTable& table, std::size_t ctx);

// Fits on one sequence. Throws InvalidArgument if k >= length or the alphabet is not finite.
MarkovTable markov_fit(std::span<const double> sequence, int k, const LossFn& loss, Alphabet alphabet);
// Fits on several segments, each starting with an empty context.
MarkovTable markov_fit(std::span<const std::vector<double>> segments, int k, const LossFn& loss, Alphabet alphabet);

// Plays a fixed table along the scan.
class MarkovPredictor final : public Predictor {
public:
    explicit MarkovPredictor(std::shared_ptr<const MarkovTable> table);
    void reset() override { history_.clear(); }
    double predict(Site) override;
    void observe(Site, double value) override;
    PredictorPtr clone() const override { return std::make_unique<MarkovPredictor>(*this); }

private:
    std::shared_ptr<const MarkovTable> table_;
    std::vector<int> history_;
};

// Causal order-k predictor: the Bayes decision for the counts seen so far in the current
// scan (or block); unseen contexts give the uniform-distribution decision.
class AdaptiveMarkovPredictor final : public Predictor {
public:
    AdaptiveMarkovPredictor(int order, Alphabet alphabet, LossFn loss);
    void reset() override;
    double predict(Site) override;
    void observe(Site, double value) override;
    PredictorPtr clone() const override { return std::make_unique<AdaptiveMarkovPredictor>(*this); }

private:
    ContextIndexer indexer_;
    LossFn loss_;
    std::vector<std::uint64_t> counts_;
    std::vector<int> history_;
    std::vector<double> scratch_;
};

// Bayes predictor for a stationary symmetric binary Markov chain laid out row-major on an
// array with `cols` columns (or one independent chain per row). Uses the nearest observed sites
// before and after the target along the chain, which is sufficient by the Markov property,
// under any scan order.
class ChainBayesPredictor final : public Predictor {
public:
    ChainBayesPredictor(double flip_probability, int cols, LossFn loss, bool independent_rows = false);
    void reset() override { observed_.clear(); }
    double predict(Site next) override;
    void observe(Site site, double value) override;
    PredictorPtr clone() const override { return std::make_unique<ChainBayesPredictor>(*this); }

    // P(x_next = 1) given the current observations.
    double posterior(Site next) const;

private:
    double flip_after(long distance) const;

    double p_;
    int cols_;
    LossFn loss_;
    bool independent_rows_;
    std::map<long, int> observed_; // chain position -> symbol
};

struct ScandictResult {
    double loss = 0.0;
    ScanTrajectory trajectory;
    std::vector<double> predictions;
};

// Runs scanner and predictor together: at each step the predictor sees exactly the prefix of
// observations in scan order. The scanner is restarted; the predictor is reset once.
ScandictResult scandict(const DataArray& array, Scanner& scanner, Predictor& predictor, const LossFn& loss);

// Same, but the predictor is reset at each trajectory position listed in `restarts`.
ScandictResult scandict(const DataArray& array, Scanner& scanner, Predictor& predictor, const LossFn& loss,
                        std::span<const std::size_t> restarts);

// Scans, fits the batch-optimal order-k table on the scanned sequence, and scores it on the same
// sequence. Returns the loss and the fitted table.
struct FittedScandict {
    double loss = 0.0;
    ScanTrajectory trajectory;
    MarkovTable table;
};
FittedScandict scandict_fitted(const DataArray& array, Scanner& scanner, int k, const LossFn& loss);

// Convenience factories.
PredictorFactory adaptive_markov_factory(int order, Alphabet alphabet, LossFn loss);
PredictorFactory constant_factory(double value);

} // namespace scandict
