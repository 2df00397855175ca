#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scandict/loss.hpp"

namespace scandict {

// Sliding-window counts of all strings of length k+1 in a finite-alphabet sequence.
// Lower-order probabilities marginalize the trailing symbols of these counts.
class EmpiricalModel {
public:
    // Throws InvalidArgument if length <= k or a value is not a symbol.
    EmpiricalModel(std::span<const double> sequence, int k, int symbols = 2);

    int order() const { return k_; } // strings have length order() + 1
    int symbols() const { return q_; }
    std::size_t sequence_length() const { return length_; }
    std::uint64_t windows() const { return windows_; } // length - k
    std::uint64_t source_hash() const { return hash_; }

    // Number of windows whose first |prefix| symbols equal prefix (|prefix| <= k+1).
    std::uint64_t count(std::span<const int> prefix) const;
    double prob(std::span<const int> prefix) const;
    // P(x | context), context of length k; an unseen context gives 1/q.
    double conditional(std::span<const int> context, int x) const;

    // Raw counts indexed by the base-q value of the string, first symbol most significant.
    std::span<const std::uint64_t> counts() const { return counts_; }

private:
    int k_;
    int q_;
    std::size_t length_;
    std::uint64_t windows_;
    std::uint64_t hash_;
    std::vector<std::uint64_t> counts_;
};

EmpiricalModel empirical_dist(std::span<const double> sequence, int k, int symbols = 2);

// Empirical conditional entropy of order k, in nats (0 log 0 = 0).
double cond_entropy(const EmpiricalModel& model);
double cond_entropy_bits(const EmpiricalModel& model);

struct ConsistencyGap {
    double max_gap = 0.0; // over all strings of lengths 1..j
    double bound = 0.0;   // (k+1-j)/(N-k)
    bool holds = true;    // exact integer comparison, no rounding
};

// Compares the order-(k+1) model `high` with the model `low` of string length j = low.order()+1,
// j <= k+1. Throws DomainMismatch if the two were built from different sequences.
ConsistencyGap consistency_gap(const EmpiricalModel& high, const EmpiricalModel& low);

struct Lz78Parse {
    std::size_t phrases = 0;
    double rho = 0.0; // c (log2 c + 1) / N bits per symbol
};

// Incremental parsing of a finite-alphabet sequence; an unfinished last phrase counts as a phrase.
Lz78Parse lz78_parse(std::span<const double> sequence, int symbols = 2);
double lz78_compressibility(std::span<const double> sequence, int symbols = 2);

struct SandwichResult {
    double entropy = 0.0;  // empirical conditional entropy in the approximation's unit
    double per_site_loss = 0.0;
    double residual = 0.0; // |alpha H + beta - L|
    double bound = 0.0;    // epsilon + k l_max / N
    bool holds = false;
};

// Empirical-entropy sandwich for a scanned binary sequence and the per-site loss of the
// batch-optimal order-k table on it.
SandwichResult sandwich_check(std::span<const double> sequence, int k, const LossFn& loss,
                              const AffineApprox& approx, double per_site_loss);

// Same check against a known entropy per site (in the approximation's unit); bound = epsilon.
SandwichResult sandwich_check_known(double entropy_per_site, const AffineApprox& approx, double per_site_loss);

} // namespace scandict
