#include <cmath>
#include <limits>

#include "doctest.h"
#include "scandict/loss.hpp"
#include "scandict/rng.hpp"

using namespace scandict;

namespace {

// Crude minimax search: alpha on a grid, optimal beta in closed form.
double brute_force_epsilon(const LossFn& loss)
{
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= 1000; ++a) {
        const double alpha = a / 1000.0;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i <= 2000; ++i) {
            const double p = i / 2000.0;
            const double r = alpha * binary_entropy_bits(p) - bayes_envelope(loss, p);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        best = std::min(best, (hi - lo) / 2.0);
    }
    return best;
}

double expected_loss(const LossFn& loss, double p, double q) { return (1.0 - p) * loss(0.0, q) + p * loss(1.0, q); }

} // namespace

TEST_SUITE("loss") {

TEST_CASE("loss values and bounds")
{
    const LossFn h(LossKind::hamming), s(LossKind::squared), a(LossKind::absolute), l(LossKind::log);
    CHECK(h(1.0, 0.0) == 1.0);
    CHECK(h(1.0, 1.0) == 0.0);
    CHECK(s(1.0, 0.25) == doctest::Approx(0.5625));
    CHECK(a(0.0, 0.3) == doctest::Approx(0.3));
    CHECK(l(1.0, 0.5) == doctest::Approx(std::log(2.0)));
    CHECK(l(1.0, 0.0) == doctest::Approx(-std::log(kLogLossFloor)));
    CHECK_THROWS(l(0.5, 0.5));
    CHECK(h.l_max() == 1.0);
    CHECK(s.l_max(Alphabet::finite(4)) == 9.0);
    CHECK(LossFn::from_name("squared").kind() == LossKind::squared);
    CHECK_THROWS(LossFn::from_name("huber"));
}

TEST_CASE("Bayes envelope closed forms agree with a mesh minimum")
{
    for (LossKind kind : {LossKind::hamming, LossKind::squared, LossKind::absolute, LossKind::log}) {
        const LossFn loss(kind);
        for (int i = 0; i <= 20; ++i) {
            const double p = i / 20.0;
            double mesh_min = std::numeric_limits<double>::infinity();
            for (int j = 0; j <= 10000; ++j) {
                mesh_min = std::min(mesh_min, expected_loss(loss, p, j / 10000.0));
            }
            CHECK(bayes_envelope(loss, p) <= mesh_min + 1e-12);
            CHECK(bayes_envelope(loss, p) >= mesh_min - 1e-4);
        }
    }
}

TEST_CASE("bayes_predict is optimal over a prediction mesh")
{
    for (LossKind kind : {LossKind::hamming, LossKind::squared, LossKind::absolute, LossKind::log}) {
        const LossFn loss(kind);
        for (int i = 0; i <= 100; ++i) {
            const double p = i / 100.0;
            const double best = expected_loss(loss, p, bayes_predict(loss, p));
            for (int j = 0; j <= 1000; ++j) {
                REQUIRE(best <= expected_loss(loss, p, j / 1000.0) + 1e-12);
            }
        }
    }
}

TEST_CASE("finite-alphabet bayes_predict is optimal over a prediction mesh")
{
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> dist(4);
        double total = 0.0;
        for (double& d : dist) {
            d = rng.uniform();
            total += d;
        }
        for (double& d : dist) {
            d /= total;
        }
        for (LossKind kind : {LossKind::hamming, LossKind::squared, LossKind::absolute}) {
            const LossFn loss(kind);
            auto risk = [&](double q) {
                double r = 0.0;
                for (std::size_t x = 0; x < dist.size(); ++x) {
                    r += dist[x] * loss(static_cast<double>(x), q);
                }
                return r;
            };
            const double best = risk(bayes_predict(loss, dist));
            const int steps = kind == LossKind::hamming ? 3 : 300;
            for (int j = 0; j <= steps; ++j) {
                REQUIRE(best <= risk(3.0 * j / steps) + 1e-12);
            }
        }
    }
    const std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS(bayes_predict(LossFn(LossKind::squared), bad));
}

TEST_CASE("Hamming ties go to zero")
{
    CHECK(bayes_predict(LossFn(LossKind::hamming), 0.5) == 0.0);
}

TEST_CASE("minimax affine approximation for Hamming loss")
{
    const LossFn h(LossKind::hamming);
    const AffineApprox a = minimax_affine(h);
    CHECK(a.epsilon == doctest::Approx(0.0805).epsilon(0.01));
    CHECK(a.alpha == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(alternation_count(a) >= 2);
    CHECK(a.extremal_points.size() >= 3);
    CHECK(a.epsilon <= brute_force_epsilon(h) + 1e-6);
    CHECK(a.epsilon >= brute_force_epsilon(h) - 1e-3);
    for (std::size_t i = 0; i < a.extremal_points.size(); ++i) {
        CHECK(std::abs(affine_error(a, h, a.extremal_points[i])) == doctest::Approx(a.epsilon).epsilon(1e-3));
    }
}

TEST_CASE("minimax affine approximation for squared and log loss")
{
    const LossFn s(LossKind::squared);
    const AffineApprox a = minimax_affine(s);
    CHECK(a.epsilon == doctest::Approx(0.0137).epsilon(0.02));
    CHECK(alternation_count(a) >= 2);
    CHECK(a.epsilon <= brute_force_epsilon(s) + 1e-6);
    const AffineApprox l = minimax_affine(LossFn(LossKind::log));
    CHECK(l.epsilon < 1e-6);
    CHECK(l.alpha == doctest::Approx(std::log(2.0)).epsilon(1e-4));
    const AffineApprox ln = minimax_affine(LossFn(LossKind::log), EntropyUnit::nats);
    CHECK(ln.alpha == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("inverse binary entropy")
{
    CHECK(inv_binary_entropy(0.5) == doctest::Approx(0.1100).epsilon(1e-3));
    CHECK(inv_binary_entropy(0.0) == 0.0);
    CHECK(inv_binary_entropy(1.0) == doctest::Approx(0.5));
    for (int i = 0; i <= 1000; ++i) {
        const double y = i / 1000.0;
        REQUIRE(std::abs(binary_entropy_bits(inv_binary_entropy(y)) - y) <= 1e-10);
    }
    CHECK_THROWS(inv_binary_entropy(1.5));
    CHECK_THROWS(inv_binary_entropy(-0.1));
}

TEST_CASE("FMG gap shape")
{
    CHECK(fmg_gap(0.0) == 0.0);
    CHECK(fmg_gap(1.0) == doctest::Approx(0.0));
    CHECK(fmg_gap(0.1) < 0.04);
    double best = 0.0, at = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        if (fmg_gap(i / 1000.0) > best) {
            best = fmg_gap(i / 1000.0);
            at = i / 1000.0;
        }
    }
    CHECK(best == doctest::Approx(0.161).epsilon(0.01));
    CHECK(at == doctest::Approx(0.72).epsilon(0.03));
}

}
