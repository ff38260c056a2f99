#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "cbl/modes.hpp"
#include "cbl/rayleigh.hpp"
#include "cbl/special_functions.hpp"
#include "test_util.hpp"

using namespace cbl;
using testutil::sample;

namespace {

double grad_norm(const Grid& g, double a, const Vec& f) {
    double x = l2_norm(g, g.d1() * f), y = a * l2_norm(g, f);
    return std::sqrt(x * x + y * y);
}

Vec smooth_data(const Grid& g) {
    return sample(g, [](double y) { return cplx(1, 0.5) * y * std::exp(-y) + 0.3 * y * y * std::exp(-2 * y); });
}

}  // namespace

TEST_CASE("regime parse round trip") {
    for (Regime r : {Regime::low, Regime::middle, Regime::high}) CHECK(parse_regime(to_string(r)) == r);
    CHECK_THROWS_AS(parse_regime("mid"), std::invalid_argument);
    CHECK(classify_regime(1e-3, 1.0) == Regime::low);
    CHECK(classify_regime(1e-3, 10.0) == Regime::middle);
    CHECK(classify_regime(1e-3, 30.0) == Regime::high);
}

TEST_CASE("lambda and laplacian conversions are inverse") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(120, 30.0);
    auto bg = make_background(p, g);
    Vec phi = testutil::RandomSmooth(3)(*g);
    Vec z = apply_laplace(*g, 1.3, phi);
    Vec w = lambda_from_laplacian(*bg, 1.3, phi, z);
    CHECK((w - apply_lambda(*bg, 1.3, phi)).cwiseAbs().maxCoeff() < 1e-8 * w.cwiseAbs().maxCoeff());
    CHECK((laplacian_from_lambda(*bg, 1.3, phi, w) - z).cwiseAbs().maxCoeff() < 1e-12 * z.cwiseAbs().maxCoeff());
}

TEST_CASE("symmetrized: zero data") {
    auto g = build_grid(80, 30.0);
    ModeOperators ops(make_background(make_default_profile(0.5), g), 1e-3, 1.0);
    auto s = solve_os_symmetrized(ComplexField::zeros(g), ops);
    CHECK(s.iterations == 0);
    CHECK(s.phi.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetrized: wall-nonzero data rejected by the iteration") {
    auto g = build_grid(200, 30.0);
    ModeOperators ops(make_background(make_default_profile(0.5), g), 1e-3, 1.0);
    Vec f = sample(*g, [](double y) { return cplx(std::exp(-y), 0); });
    CHECK_THROWS_AS(solve_os_symmetrized(ComplexField(g, f), ops), std::domain_error);
    auto s = solve_os_symmetrized_general(ComplexField(g, f), ops);
    CHECK(s.residual < 1e-8);
    CHECK(s.bc_error < 1e-10);
}

TEST_CASE("symmetrized: Rayleigh-Airy iteration matches dense direct solve") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    testutil::RandomSmooth rnd(11);
    for (double eps : {1e-2, 1e-3, 1e-4})
        for (double alpha : {0.3, 1.0, 3.0}) {
            ModeOperators ops(make_background(p, g), eps, alpha);
            ComplexField f(g, rnd(*g));
            auto it = solve_os_symmetrized(f, ops);
            auto dd = solve_os_symmetrized_direct(f, ops);
            double diff = l2_norm(*g, it.phi.values - dd.phi.values) / l2_norm(*g, dd.phi.values);
            CAPTURE(eps);
            CAPTURE(alpha);
            CHECK(diff < 1e-6);
            CHECK(it.residual < 1e-6);
            CHECK(it.bc_error < 1e-8);
            CHECK(it.extra_bc < 1e-8);
            // contraction after the first step
            for (size_t k = 1; k < it.history.size(); ++k) CHECK(it.history[k] < it.history[k - 1]);
            CHECK(it.ratio < 1.0);
        }
}

TEST_CASE("symmetrized: contraction factor shrinks with epsilon") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    Vec f = smooth_data(*g);
    double prev = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        ModeOperators ops(make_background(p, g), eps, 1.0);
        auto s = solve_os_symmetrized(ComplexField(g, f), ops);
        double r0 = s.history[1] / s.history[0];
        CHECK(r0 < prev);
        prev = r0;
    }
}

TEST_CASE("symmetrized: laplacian growth in epsilon is at most -1/3") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    Vec f = smooth_data(*g);
    std::vector<double> le, ln;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        ModeOperators ops(make_background(p, g), eps, 1.0);
        auto s = solve_os_symmetrized(ComplexField(g, f), ops);
        le.push_back(std::log(eps));
        ln.push_back(std::log(l2_norm(*g, s.lap)));
    }
    double slope = (ln.back() - ln.front()) / (le.back() - le.front());
    CHECK(slope >= -1.0 / 3.0 - 0.15);
}

TEST_CASE("commutator series vanishes for constant weight") {
    auto g = build_grid(200, 30.0);
    ModeOperators ops(make_background(make_default_profile(1e-8), g), 1e-3, 1.0);
    Vec f = smooth_data(*g);
    auto t = solve_os_symmetrized(ComplexField(g, f), ops);
    auto r = os_remainder_series(t, ops);
    CHECK(grad_norm(*g, 1.0, r.phi.values) < 1e-12 * grad_norm(*g, 1.0, t.phi.values));
}

TEST_CASE("commutator series: remainder scales like eps^{2/3}") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    Vec f = smooth_data(*g);
    std::vector<double> n;
    for (double eps : {1e-3, 5e-4, 2.5e-4}) {
        ModeOperators ops(make_background(p, g), eps, 1.0);
        auto t = solve_os_symmetrized(ComplexField(g, f), ops);
        auto r = os_remainder_series(t, ops);
        n.push_back(grad_norm(*g, 1.0, r.phi.values));
        // bound relative to ε^{2/3}‖∂φ̃‖_{H¹}
        Vec d = g->d1() * t.phi.values;
        double h1 = std::sqrt(std::pow(l2_norm(*g, d), 2) + std::pow(l2_norm(*g, g->d1() * d), 2));
        CHECK(n.back() <= std::pow(eps, 2.0 / 3.0) * h1);
    }
    const double expect = std::pow(2.0, -2.0 / 3.0);
    CHECK(n[1] / n[0] == doctest::Approx(expect).epsilon(0.1));
    CHECK(n[2] / n[1] == doctest::Approx(expect).epsilon(0.1));
}

TEST_CASE("OS_CNS solve: residual and traces on random data") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    testutil::RandomSmooth rnd(5);
    for (double eps : {1e-3, 1e-4})
        for (double alpha : {0.5, 2.0, 8.0}) {
            ModeOperators ops(make_background(p, g), eps, alpha);
            ComplexField f(g, rnd(*g, false));
            auto s = solve_os_cns(f, ops);
            CAPTURE(eps);
            CAPTURE(alpha);
            CHECK(s.residual < 1e-6);
            CHECK(s.bc_error < 1e-8);
        }
}

TEST_CASE("high frequency: zero data and rejection below threshold") {
    auto g = build_grid(80, 30.0);
    ModeOperators ops(make_background(make_default_profile(0.5), g), 1e-3, 40.0);
    CHECK(solve_os_high_freq(ComplexField::zeros(g), ops).phi.values.cwiseAbs().maxCoeff() == 0.0);
    ModeOperators low(make_background(make_default_profile(0.5), g), 1e-3, 1.0);
    CHECK_THROWS_AS(solve_os_high_freq(ComplexField::zeros(g), low, 2.0), std::domain_error);
}

TEST_CASE("high frequency: doubling alpha shrinks the gradient norm by ~8") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    Vec f = smooth_data(*g);
    double prev = 0;
    for (double alpha : {80.0, 160.0}) {
        ModeOperators ops(make_background(p, g), 1e-3, alpha);
        auto s = solve_os_high_freq(ComplexField(g, f), ops);
        CHECK(s.residual < 1e-6);
        CHECK(s.bc_error < 1e-8);
        double n = grad_norm(*g, alpha, s.phi.values);
        CHECK(n * 1e-3 * alpha * alpha * alpha <= 2.0 * l2_norm(*g, f));
        if (prev > 0) CHECK(std::log2(prev / n) == doctest::Approx(3.0).epsilon(0.1));
        prev = n;
    }
}

TEST_CASE("high frequency: agrees with a 2N discretization") {
    auto p = make_default_profile(0.5);
    auto g1 = build_grid(200, 30.0), g2 = build_grid(400, 30.0);
    ModeOperators o1(make_background(p, g1), 1e-3, 40.0), o2(make_background(p, g2), 1e-3, 40.0);
    auto s1 = solve_os_high_freq(ComplexField(g1, smooth_data(*g1)), o1);
    auto s2 = solve_os_high_freq(ComplexField(g2, smooth_data(*g2)), o2);
    Vec fine = g1->interpolate_to(s1.phi.values, *g2);
    CHECK(l2_norm(*g2, fine - s2.phi.values) <= 1e-8 * l2_norm(*g2, s2.phi.values));
}

TEST_CASE("regime consistency near the high threshold") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    Vec f = smooth_data(*g);
    const double eps = 1e-3;
    for (double beta : {2.0, 3.0}) {
        ModeOperators ops(make_background(p, g), eps, beta / std::cbrt(eps));
        auto a = solve_os_cns(ComplexField(g, f), ops);
        auto b = solve_os_high_freq(ComplexField(g, f), ops);
        CHECK(l2_norm(*g, a.phi.values - b.phi.values) <= 0.05 * l2_norm(*g, b.phi.values));
    }
}

TEST_CASE("slow mode: large alpha trace near -alpha") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    for (double alpha : {4.0, 10.0}) {
        ModeOperators ops(make_background(p, g), 1e-4, alpha);
        auto s = slow_mode(ops);
        CHECK(s.residual < 1e-6);
        CHECK(s.bc_error < 1e-8);
        CHECK(s.trace_prediction == cplx(-alpha, 0));
        // O(1) correction, relative size shrinks with α
        CHECK(std::abs(s.dphi0 + alpha) / alpha < 1.0 / alpha);
    }
}

TEST_CASE("slow mode: small alpha trace c_E/alpha + O(1)") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(300, 200.0);
    double prev = 1e300;
    for (double alpha : {0.4, 0.2, 0.1}) {
        ModeOperators ops(make_background(p, g), 1e-5, alpha);
        auto s = slow_mode(ops);
        CHECK(s.residual < 1e-6);
        double off = std::abs(s.dphi0 - s.trace_prediction);
        CHECK(off < 1.5);
        // α·∂φ(0) → c_E
        double rel = off / std::abs(s.trace_prediction);
        CHECK(rel < prev);
        prev = rel;
    }
}

TEST_CASE("fast profile, high regime: leading trace 1/(2 alpha) exactly") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    for (double alpha : {30.0, 100.0}) {
        ModeOperators ops(make_background(p, g), 1e-3, alpha);
        auto fp = fast_profile(ops, Regime::high);
        CHECK(std::abs(fp.dphi0 - 1.0 / (2.0 * alpha)) < 1e-15);
        CHECK(std::abs((g->d1() * fp.phi)(0) - 1.0 / (2.0 * alpha)) < 1e-8 / alpha);
        auto s = fast_mode(ops, Regime::high);
        CHECK(s.residual < 1e-6);
        CHECK(s.bc_error < 1e-8);
        CHECK(std::abs(s.dphi0) >= 1.0 / (4.0 * alpha));
    }
}

TEST_CASE("fast profile error matches OS_CNS applied on the grid") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    for (auto [eps, alpha, r] : {std::tuple{1e-3, 1.0, Regime::low}, std::tuple{1e-3, 10.0, Regime::middle},
                                 std::tuple{1e-3, 40.0, Regime::high}}) {
        ModeOperators ops(make_background(p, g), eps, alpha);
        auto fp = fast_profile(ops, r);
        Vec z = apply_laplace(*g, alpha, fp.phi);
        Vec num = cplx(0, eps) * apply_lambda(ops.bg(), alpha, z) +
                  mul(ops.bg().u, apply_lambda(ops.bg(), alpha, fp.phi)) - mul(ops.bg().q, fp.phi);
        double scale = std::max(fp.error.cwiseAbs().maxCoeff(), 1e-3 * num.cwiseAbs().maxCoeff());
        Vec d = num - fp.error;
        d(0) = d(g->size() - 1) = 0;
        CAPTURE(to_string(r));
        // fourth derivatives of the sublayer profile on the grid limit this to ~1e-4
        CHECK(d.cwiseAbs().maxCoeff() < 1e-3 * scale);
    }
}

TEST_CASE("fast mode, low regime: trace constant 3^{-2/3} Gamma(1/3)") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    const double c = fast_trace_constant();
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        ModeOperators ops(make_background(p, g), eps, 0.3);
        auto s = fast_mode(ops, Regime::low);
        CHECK(s.residual < 1e-6);
        CHECK(std::abs(s.phi0 - 1.0) < 1e-8);
        double t = std::cbrt(eps) * std::abs(s.dphi0);
        CHECK(t == doctest::Approx(c).epsilon(0.1));
        CHECK(std::abs(s.dphi0 - s.trace_prediction) < 0.05 * std::abs(s.trace_prediction));
    }
}

TEST_CASE("fast mode, middle regime: Dirichlet wall and Ai_0 trace") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(200, 30.0);
    for (auto [eps, alpha] : {std::pair{1e-3, 10.0}, std::pair{1e-4, 30.0}}) {
        ModeOperators ops(make_background(p, g), eps, alpha);
        auto s = fast_mode(ops, Regime::middle);
        CHECK(s.residual < 1e-6);
        CHECK(std::abs(s.phi0) < 1e-8);
        cplx ref = middle_trace_from_antiderivative(eps, alpha);
        CHECK(std::abs(s.trace_prediction - ref) < 1e-6 * std::abs(ref));
        CHECK(std::abs(s.dphi0 - ref) < 0.05 * std::abs(ref));
        CHECK(std::abs(s.dphi0) >= 0.1 * std::cbrt(eps));
    }
}

TEST_CASE("fast mode, middle regime: zero error gives zero remainder") {
    auto p = make_default_profile(0.5);
    auto g = build_grid(120, 30.0);
    ModeOperators ops(make_background(p, g), 1e-3, 10.0);
    auto r = solve_os_cns(ComplexField::zeros(g), ops);
    CHECK(r.phi.values.cwiseAbs().maxCoeff() == 0.0);
}
