#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "cbl/grid.hpp"
#include "cbl/profiles.hpp"

using namespace cbl;

TEST_CASE("default profile wall values") {
    auto p = make_default_profile(0.5);
    CHECK(p.u(0.0) == 0.0);
    CHECK(p.du(0.0) == 1.0);
    CHECK(p.a(0.0) == 1.0);
}

TEST_CASE("far-field weight tends to 1-m^2") {
    auto p = make_default_profile(0.5);
    CHECK(p.a(40.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p.a_inf() == 0.75);
}

TEST_CASE("closed form at Y=1, m=0.9") {
    auto p = make_default_profile(0.9);
    double t = std::tanh(1.0);
    CHECK(p.u(1.0) == doctest::Approx(t).epsilon(1e-15));
    CHECK(p.a(1.0) == doctest::Approx(1.0 - 0.81 * t * t).epsilon(1e-15));
}

TEST_CASE("derivatives against finite differences") {
    auto p = make_default_profile(0.3);
    const double h = 1e-4;
    for (double y : {0.1, 0.7, 1.5, 3.0}) {
        for (int k = 0; k < 3; ++k) {
            double fd = (p.eval(y + h)[k] - p.eval(y - h)[k]) / (2 * h);
            CHECK(fd == doctest::Approx(p.eval(y)[k + 1]).epsilon(1e-6));
        }
        double fda = (p.a(y + h) - p.a(y - h)) / (2 * h);
        CHECK(fda == doctest::Approx(p.da(y)).epsilon(1e-6));
        double fd2a = (p.da(y + h) - p.da(y - h)) / (2 * h);
        CHECK(fd2a == doctest::Approx(p.d2a(y)).epsilon(1e-6));
    }
}

TEST_CASE("mach number validation") {
    CHECK_THROWS_WITH_AS(make_default_profile(0.0), doctest::Contains("mach"), std::invalid_argument);
    CHECK_THROWS_AS(make_default_profile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_default_profile(1.2), std::invalid_argument);
    CHECK_THROWS_AS(make_default_profile(0.5, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(make_profile("blasius", 0.5), std::invalid_argument);
}

TEST_CASE("structural conditions for tanh") {
    auto g = build_grid(128, 30.0);
    auto r = check_structural_conditions(make_default_profile(0.5, 4.0), *g);
    CHECK(r.pass);
    CHECK(r.violations.empty());
    CHECK(std::isfinite(r.weighted_sup));
    CHECK(r.weighted_sup < 1e3);
}

TEST_CASE("wrong wall slope is reported") {
    ShearProfile bad("steep", [](double y) {
        double t = std::tanh(2 * y), s = 1 / std::cosh(2 * y);
        return std::array<double, 4>{t, 2 * s * s, -8 * t * s * s, 8 * s * s * (6 * t * t - 2)};
    }, 0.5, 4.0);
    auto g = build_grid(64, 20.0);
    auto r = check_structural_conditions(bad, *g);
    CHECK_FALSE(r.pass);
    bool found = false;
    for (auto& v : r.violations) found = found || v == "∂_YU_s(0)≠1";
    CHECK(found);
}

TEST_CASE("min A near 1-m^2 at m=0.99") {
    auto p = make_default_profile(0.99);
    auto g = build_grid(128, 30.0);
    auto r = check_structural_conditions(p, *g);
    CHECK(r.min_a >= 1.0 - 0.9801 - 1e-14);
    CHECK(r.min_a == doctest::Approx(1.0 - 0.9801).epsilon(1e-8));
    CHECK(r.max_a <= 1.0);
}

TEST_CASE("pointwise bounds on A over m") {
    auto g = build_grid(200, 30.0);
    for (double m : {0.1, 0.5, 0.9, 0.99}) {
        auto p = make_default_profile(m);
        double c = m * m / (1 - m * m);
        for (int j = 0; j < g->size(); ++j) {
            double y = g->y(j), u = p.u(y);
            CHECK(p.a(y) >= 1 - m * m);
            CHECK(p.a(y) <= 1.0);
            CHECK(std::abs(p.da(y)) <= 2 * m * m * std::abs(u * p.du(y)) * (1 + 1e-14));
            CHECK(std::abs(1 - 1 / p.a(y)) <= c * u * u * (1 + 1e-12) + 1e-300);
        }
    }
}

TEST_CASE("with_mach keeps shape") {
    auto p = make_default_profile(0.5).with_mach(0.2);
    CHECK(p.mach() == 0.2);
    CHECK(p.u(2.0) == std::tanh(2.0));
}
