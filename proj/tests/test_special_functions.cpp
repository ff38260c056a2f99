#include "doctest.h"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "cbl/special_functions.hpp"

using namespace cbl;

TEST_CASE("Ai at origin matches gamma closed forms") {
    auto v = airy_ai(0.0);
    double ai0 = std::pow(3.0, -2.0 / 3.0) / boost::math::tgamma(2.0 / 3.0);
    double aip0 = -std::pow(3.0, -1.0 / 3.0) / boost::math::tgamma(1.0 / 3.0);
    CHECK(std::abs(v.ai - ai0) < 1e-15);
    CHECK(std::abs(v.aip - aip0) < 1e-15);
}

TEST_CASE("real axis against boost") {
    for (double x = -20.0; x <= 20.0; x += 0.37) {
        auto v = airy_ai(x);
        double ai = boost::math::airy_ai(x), aip = boost::math::airy_ai_prime(x);
        double scale = std::max(std::abs(ai), 1e-300);
        CHECK_MESSAGE(std::abs(v.ai - ai) <= 1e-10 * std::max(scale, 1e-3 * (x < 0)), "x=" << x);
        CHECK_MESSAGE(std::abs(v.aip - aip) <= 1e-10 * std::max(std::abs(aip), 1e-3 * (x < 0) + 1e-300), "x=" << x);
    }
}

TEST_CASE("ODE residual by finite differences at 1+i") {
    cplx z(1.0, 1.0);
    double h = 1e-3;
    cplx d2 = (airy_ai(z + h).ai - 2.0 * airy_ai(z).ai + airy_ai(z - h).ai) / (h * h);
    CHECK(std::abs(d2 - z * airy_ai(z).ai) < 1e-6);
    cplx d1 = (airy_ai(z + h).ai - airy_ai(z - h).ai) / (2 * h);
    CHECK(std::abs(d1 - airy_ai(z).aip) < 1e-6);
}

TEST_CASE("ODE residual at random points, |z| <= 20") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> r(0.0, 20.0), th(-std::numbers::pi, std::numbers::pi);
    const double h = 1e-2;
    for (int k = 0; k < 100; ++k) {
        cplx z = std::polar(r(rng), th(rng));
        auto v = airy_ai(z);
        if (v.overflow) continue;
        // fourth-order centered second difference
        cplx f[5];
        for (int j = -2; j <= 2; ++j) f[j + 2] = airy_ai(z + double(j) * h).ai;
        cplx d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
        double scale = std::abs(v.ai) * std::max(1.0, std::abs(z)) + std::abs(v.aip);
        CHECK_MESSAGE(std::abs(d2 - z * v.ai) <= 1e-7 * scale, "z=" << z);
    }
}

TEST_CASE("connection formula consistency across the negative axis") {
    // continuity across arg = ±2π/3 where the evaluation switches branch
    for (double r : {3.0, 7.0, 12.0}) {
        for (double s : {1.0, -1.0}) {
            double t = s * 2.0 * std::numbers::pi / 3.0;
            auto a = airy_ai(std::polar(r, t - s * 1e-13));
            auto b = airy_ai(std::polar(r, t + s * 1e-13));
            CHECK(std::abs(a.ai - b.ai) <= 1e-9 * std::abs(a.ai));
        }
        // switch between stepping directions at arg = π/3
        double t = std::numbers::pi / 3.0;
        auto a = airy_ai(std::polar(r, t - 1e-13));
        auto b = airy_ai(std::polar(r, t + 1e-13));
        CHECK(std::abs(a.ai - b.ai) <= 1e-9 * std::abs(a.ai));
    }
}

TEST_CASE("series and asymptotic overlap") {
    // radius 9 is the asymptotic boundary; inside values come from stepping
    for (double t : {0.0, 0.5, 1.0, -0.9}) {
        auto a = airy_ai(std::polar(9.0 - 1e-13, t));
        auto b = airy_ai(std::polar(9.0 + 1e-13, t));
        CHECK(std::abs(a.ai - b.ai) <= 1e-10 * std::abs(a.ai));
        CHECK(std::abs(a.aip - b.aip) <= 1e-10 * std::abs(a.aip));
    }
}

TEST_CASE("backward Taylor step consistency") {
    cplx z(2.5, -1.5);
    auto v = airy_ai(z);
    for (double h : {1e-2, 5e-3}) {
        cplx approx = v.ai + h * v.aip + h * h * z * v.ai / 2.0;
        double err = std::abs(airy_ai(z + h).ai - approx);
        CHECK(err <= 2.0 * h * h * h * (std::abs(v.ai) + std::abs(v.aip) + std::abs(z) * (std::abs(v.ai) + std::abs(v.aip))));
    }
}

TEST_CASE("overflow flag far along the growing direction") {
    auto w = airy_ai(std::polar(300.0, 2.0 * std::numbers::pi / 3.0 + 0.2));
    CHECK(w.overflow);
}

TEST_CASE("antiderivative: value at 0 and derivative") {
    const cplx rot = std::polar(1.0, std::numbers::pi / 6.0);
    // Ai_0(0) = ∫_0^∞ Ai = 1/3 (integral independent of ray in the decay sector)
    CHECK(std::abs(airy_antiderivative(0.0) - 1.0 / 3.0) < 1e-10);
    for (cplx z : {cplx(0.5, -0.3), cplx(2.0, 1.0), cplx(-1.0, -2.0)}) {
        double h = 1e-4;
        cplx d = (airy_antiderivative(z + h) - airy_antiderivative(z - h)) / (2 * h);
        CHECK(std::abs(d + rot * airy_ai(rot * z).ai) < 1e-7);
    }
    CHECK(std::abs(airy_antiderivative(30.0)) < 1e-20);
}

TEST_CASE("sublayer profile W") {
    double eps = 1e-3, alpha = std::pow(eps, -1.0 / 3.0);
    CHECK(std::abs(sublayer_profile_W(0.0, eps, alpha) - 1.0) < 1e-14);
    double d = std::cbrt(eps);
    CHECK(std::abs(sublayer_profile_W(5.0 * d, eps, alpha)) < std::exp(-1.0));
    // log|W| decreases along Y at a rate of order ε^{-1/3}
    double y1 = 2.0 * d, y2 = 6.0 * d;
    double slope = (std::log(std::abs(sublayer_profile_W(y2, eps, alpha))) -
                    std::log(std::abs(sublayer_profile_W(y1, eps, alpha)))) / (y2 - y1);
    double lambda0 = -slope * d;
    CHECK(lambda0 > 0.0);
}

TEST_CASE("trace constant") { CHECK(fast_trace_constant() == doctest::Approx(1.2879).epsilon(1e-4)); }
