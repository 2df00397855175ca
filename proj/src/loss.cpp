#include "scandict/loss.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace scandict {

LossFn LossFn::from_name(const std::string& name)
{
    if (name == "hamming") {
        return LossFn(LossKind::hamming);
    }
    if (name == "squared") {
        return LossFn(LossKind::squared);
    }
    if (name == "absolute") {
        return LossFn(LossKind::absolute);
    }
    if (name == "log") {
        return LossFn(LossKind::log);
    }
    throw InvalidArgument("unknown loss '" + name + "'");
}

std::string LossFn::name() const
{
    switch (kind_) {
    case LossKind::hamming:
        return "hamming";
    case LossKind::squared:
        return "squared";
    case LossKind::absolute:
        return "absolute";
    case LossKind::log:
        return "log";
    }
    return "hamming";
}

double LossFn::operator()(double x, double q) const
{
    switch (kind_) {
    case LossKind::hamming:
        return x == q ? 0.0 : 1.0;
    case LossKind::squared:
        return (x - q) * (x - q);
    case LossKind::absolute:
        return std::abs(x - q);
    case LossKind::log:
        if (x == 1.0) {
            return -std::log(std::max(q, kLogLossFloor));
        }
        if (x == 0.0) {
            return -std::log(std::max(1.0 - q, kLogLossFloor));
        }
        throw InvalidArgument("log loss is defined for binary symbols only");
    }
    return 0.0;
}

double LossFn::l_max() const { return l_max(Alphabet::binary()); }

double LossFn::l_max(const Alphabet& alphabet) const
{
    const double span = alphabet.kind == AlphabetKind::finite ? static_cast<double>(alphabet.size - 1) : 1.0;
    switch (kind_) {
    case LossKind::hamming:
        return 1.0;
    case LossKind::squared:
        return span * span;
    case LossKind::absolute:
        return span;
    case LossKind::log:
        return -std::log(kLogLossFloor);
    }
    return 1.0;
}

double binary_entropy_bits(double p) { return binary_entropy_nats(p) / std::log(2.0); }

double binary_entropy_nats(double p)
{
    if (p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

namespace {

void require_probability(double p)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("Bernoulli parameter outside [0, 1]");
    }
}

// Clamped log loss: q below the floor is dominated by q = 0 (and symmetrically at 1),
// otherwise the cross-entropy minimizer is q = p clipped to the unclamped range.
struct LogEnvelope {
    double value;
    double argmin;
};

LogEnvelope log_envelope(double p)
{
    const double f = kLogLossFloor;
    const LossFn loss(LossKind::log);
    const double q_mid = std::clamp(p, f, 1.0 - f);
    LogEnvelope best{(1.0 - p) * loss(0.0, q_mid) + p * loss(1.0, q_mid), q_mid};
    const double at_zero = (1.0 - p) * loss(0.0, 0.0) + p * loss(1.0, 0.0);
    if (at_zero < best.value) {
        best = {at_zero, 0.0};
    }
    const double at_one = (1.0 - p) * loss(0.0, 1.0) + p * loss(1.0, 1.0);
    if (at_one < best.value) {
        best = {at_one, 1.0};
    }
    return best;
}

} // namespace

double bayes_envelope(const LossFn& loss, double p)
{
    require_probability(p);
    switch (loss.kind()) {
    case LossKind::hamming:
    case LossKind::absolute:
        return std::min(p, 1.0 - p);
    case LossKind::squared:
        return p * (1.0 - p);
    case LossKind::log:
        return log_envelope(p).value;
    }
    return 0.0;
}

double bayes_predict(const LossFn& loss, double p)
{
    require_probability(p);
    switch (loss.kind()) {
    case LossKind::hamming:
    case LossKind::absolute:
        return p > 0.5 ? 1.0 : 0.0;
    case LossKind::squared:
        return p;
    case LossKind::log:
        return log_envelope(p).argmin;
    }
    return 0.0;
}

double bayes_predict(const LossFn& loss, std::span<const double> dist)
{
    if (dist.empty()) {
        throw InvalidArgument("empty distribution");
    }
    double total = 0.0;
    for (double v : dist) {
        if (!(v >= 0.0)) {
            throw InvalidArgument("negative or NaN probability");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("distribution does not sum to 1");
    }
    switch (loss.kind()) {
    case LossKind::hamming: {
        std::size_t best = 0;
        for (std::size_t x = 1; x < dist.size(); ++x) {
            if (dist[x] > dist[best]) {
                best = x;
            }
        }
        return static_cast<double>(best);
    }
    case LossKind::squared: {
        double mean = 0.0;
        for (std::size_t x = 0; x < dist.size(); ++x) {
            mean += static_cast<double>(x) * dist[x];
        }
        return mean;
    }
    case LossKind::absolute: {
        double acc = 0.0;
        for (std::size_t x = 0; x < dist.size(); ++x) {
            acc += dist[x];
            if (acc >= 0.5) {
                return static_cast<double>(x);
            }
        }
        return static_cast<double>(dist.size() - 1);
    }
    case LossKind::log:
        if (dist.size() != 2) {
            throw InvalidArgument("log loss prediction needs a binary distribution");
        }
        return bayes_predict(loss, dist[1]);
    }
    return 0.0;
}

namespace {

double entropy_in(EntropyUnit unit, double p)
{
    return unit == EntropyUnit::bits ? binary_entropy_bits(p) : binary_entropy_nats(p);
}

struct GridFit {
    double alpha;
    double beta;
    double error;
};

// For fixed alpha the best beta centres the residual range; the resulting error is
// convex in alpha (max of affine minus min of affine), so a ternary search is exact.
GridFit fit_on_grid(const std::vector<double>& h, const std::vector<double>& phi)
{
    auto spread = [&](double alpha) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double r = alpha * h[i] - phi[i];
            hi = std::max(hi, r);
            lo = std::min(lo, r);
        }
        return std::pair{hi, lo};
    };
    const double h_max = *std::max_element(h.begin(), h.end());
    const double phi_max = *std::max_element(phi.begin(), phi.end());
    double a = -(2.0 * phi_max / h_max + 1.0);
    double b = -a;
    for (int iter = 0; iter < 300 && b - a > 1e-15; ++iter) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        auto [h1, l1] = spread(m1);
        auto [h2, l2] = spread(m2);
        if (h1 - l1 <= h2 - l2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    const double alpha = 0.5 * (a + b);
    auto [hi, lo] = spread(alpha);
    return {alpha, -0.5 * (hi + lo), 0.5 * (hi - lo)};
}

// Golden-section maximization of |err| on [lo, hi].
double refine_extremum(const std::function<double(double)>& abs_err, double lo, double hi)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = abs_err(x1), f2 = abs_err(x2);
    for (int iter = 0; iter < 100 && hi - lo > 1e-14; ++iter) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = abs_err(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = abs_err(x2);
        }
    }
    double best = lo;
    for (double x : {lo, x1, x2, hi}) {
        if (abs_err(x) > abs_err(best)) {
            best = x;
        }
    }
    return best;
}

} // namespace

double affine_error(const AffineApprox& approx, const LossFn& loss, double p)
{
    return approx.alpha * entropy_in(approx.unit, p) + approx.beta - bayes_envelope(loss, p);
}

AffineApprox minimax_affine(const LossFn& loss, EntropyUnit unit, double mesh)
{
    if (!(mesh > 0.0 && mesh <= 0.1)) {
        throw InvalidArgument("minimax mesh must be in (0, 0.1]");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(1.0 / mesh));
    std::vector<double> ps(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        ps[i] = std::min(1.0, static_cast<double>(i) / static_cast<double>(steps));
    }

    AffineApprox out;
    out.unit = unit;
    std::vector<double> refined;
    // Round 1 on the uniform grid; round 2 adds the refined extremal points to the grid.
    for (int round = 0; round < 2; ++round) {
        std::vector<double> grid = ps;
        grid.insert(grid.end(), refined.begin(), refined.end());
        std::vector<double> h(grid.size()), phi(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            h[i] = entropy_in(unit, grid[i]);
            phi[i] = bayes_envelope(loss, grid[i]);
        }
        const GridFit fit = fit_on_grid(h, phi);
        out.alpha = fit.alpha;
        out.beta = fit.beta;

        auto err = [&](double p) { return affine_error(out, loss, p); };
        auto abs_err = [&](double p) { return std::abs(err(p)); };
        refined.clear();
        for (std::size_t i = 0; i <= steps; ++i) {
            const double here = abs_err(ps[i]);
            const double left = i > 0 ? abs_err(ps[i - 1]) : -1.0;
            const double right = i < steps ? abs_err(ps[i + 1]) : -1.0;
            if (here >= left && here >= right) {
                const double lo = i > 0 ? ps[i - 1] : ps[i];
                const double hi = i < steps ? ps[i + 1] : ps[i];
                refined.push_back(refine_extremum(abs_err, lo, hi));
            }
        }
    }

    auto err = [&](double p) { return affine_error(out, loss, p); };
    double eps = 0.0;
    for (double p : refined) {
        eps = std::max(eps, std::abs(err(p)));
    }
    for (double p : ps) {
        eps = std::max(eps, std::abs(err(p)));
    }
    out.epsilon = eps;

    std::sort(refined.begin(), refined.end());
    refined.erase(std::unique(refined.begin(), refined.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                  refined.end());
    const double tol = std::max(1e-7, 1e-4 * eps);
    for (double p : refined) {
        const double e = err(p);
        if (eps > 0.0 && std::abs(e) >= eps - tol) {
            out.extremal_points.push_back(p);
            out.extremal_signs.push_back(e > 0 ? 1 : -1);
        }
    }
    return out;
}

int alternation_count(const AffineApprox& approx)
{
    if (approx.extremal_signs.empty()) {
        return 0;
    }
    int points = 1;
    for (std::size_t i = 1; i < approx.extremal_signs.size(); ++i) {
        if (approx.extremal_signs[i] != approx.extremal_signs[i - 1]) {
            ++points;
        }
    }
    return points;
}

double inv_binary_entropy(double y_bits)
{
    if (!(y_bits >= 0.0 && y_bits <= 1.0)) {
        throw InvalidArgument("entropy value outside [0, 1] bits");
    }
    if (y_bits == 0.0) {
        return 0.0;
    }
    if (y_bits == 1.0) {
        return 0.5;
    }
    double lo = 0.0, hi = 0.5;
    for (int iter = 0; iter < 200 && hi - lo > 1e-17; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (binary_entropy_bits(mid) < y_bits) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double fmg_gap(double rho)
{
    const double r = std::clamp(rho, 0.0, 1.0);
    return 0.5 * r - inv_binary_entropy(r);
}

} // namespace scandict
