#pragma once

#include <span>
#include <string>
#include <vector>

#include "scandict/grid.hpp"

namespace scandict {

enum class LossKind { hamming, squared, absolute, log };

// Log loss is clamped at this probability floor so that l_max stays finite.
inline constexpr double kLogLossFloor = 1e-9;

class LossFn {
public:
    explicit LossFn(LossKind kind = LossKind::hamming) : kind_(kind) {}
    static LossFn from_name(const std::string& name);

    LossKind kind() const { return kind_; }
    std::string name() const;

    // l(x, q). For log loss x must be 0 or 1 and q is the predicted P(x = 1).
    double operator()(double x, double q) const;

    // Bound on l over {0,1} x [0,1] (or the given alphabet).
    double l_max() const;
    double l_max(const Alphabet& alphabet) const;

    // Neutral prediction for a binary symbol with no information.
    double neutral() const { return kind_ == LossKind::hamming || kind_ == LossKind::absolute ? 0.0 : 0.5; }

private:
    LossKind kind_;
};

double binary_entropy_bits(double p);
double binary_entropy_nats(double p);

// phi_l(p) = min_q (1-p) l(0,q) + p l(1,q), closed form per loss.
double bayes_envelope(const LossFn& loss, double p);

// Minimizer of the expected loss for a Bernoulli(p) symbol. Hamming/absolute ties go to 0.
double bayes_predict(const LossFn& loss, double p);

// Finite-alphabet version; dist[x] is the probability of symbol x (sums to 1).
// Hamming -> most probable symbol (lowest index on ties); squared -> mean;
// absolute -> lower median; log -> dist[1] (binary only).
double bayes_predict(const LossFn& loss, std::span<const double> dist);

enum class EntropyUnit { bits, nats };

struct AffineApprox {
    double alpha = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;
    EntropyUnit unit = EntropyUnit::bits;
    // Local extrema of alpha*h + beta - phi whose magnitude is within tolerance of epsilon,
    // ascending in p, with the sign of the error at each.
    std::vector<double> extremal_points;
    std::vector<int> extremal_signs;
};

// Best affine approximation of the Bayes envelope by a function of binary entropy:
// min over (alpha, beta) of max over p of |alpha*h(p) + beta - phi(p)|.
// Grid of the given mesh, convex line search over alpha, then continuous refinement of the
// error extrema; the returned epsilon is the refined maximum.
AffineApprox minimax_affine(const LossFn& loss, EntropyUnit unit = EntropyUnit::bits, double mesh = 1e-4);

// Signed approximation error alpha*h(p) + beta - phi(p) at a point.
double affine_error(const AffineApprox& approx, const LossFn& loss, double p);

// Number of sign alternations among the extremal points (Chebyshev criterion needs >= 3 points).
int alternation_count(const AffineApprox& approx);

// Unique p in [0, 1/2] with h_b(p) = y (bits), by bisection.
double inv_binary_entropy(double y_bits);

// rho/2 - h_b^{-1}(rho); rho is clamped to [0, 1].
double fmg_gap(double rho);

} // namespace scandict
