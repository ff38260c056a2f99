#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "cbl/grid.hpp"
#include "cbl/profiles.hpp"

using namespace cbl;

namespace {
Vec sample(const Grid& g, auto f) {
    Vec v(g.size());
    for (int j = 0; j < g.size(); ++j) v(j) = f(g.y(j));
    return v;
}
}  // namespace

TEST_CASE("grid construction and validation") {
    CHECK_THROWS_AS(build_grid(15, 30.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(64, 9.0), std::invalid_argument);
    for (auto map : {Mapping::uniform, Mapping::stretched}) {
        for (int n : {64, 128, 200}) {
            auto g = build_grid(n, 30.0, map);
            CHECK(g->size() == n);
            CHECK(g->y(0) == 0.0);
            CHECK(g->y(n - 1) == 30.0);
            auto r = check_grid(*g);
            CHECK(r.pass);
            CHECK((g->weights().array() > 0).all());
        }
    }
}

TEST_CASE("derivative of constant, uniform N=64") {
    auto g = build_grid(64, 20.0, Mapping::uniform);
    CHECK((g->d1() * RVec::Ones(64)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stretched grid clusters near the wall") {
    auto g = build_grid(128, 30.0, Mapping::stretched);
    auto u = build_grid(128, 30.0, Mapping::uniform);
    CHECK(g->y(1) - g->y(0) < g->y(127) - g->y(126));
    CHECK(g->y(1) < u->y(1));
    for (int j = 1; j < 128; ++j) CHECK(g->y(j) > g->y(j - 1));
    // map inverse round trip
    for (double y : {0.0, 0.3, 4.0, 17.0, 30.0}) CHECK(g->map(g->map_inverse(y)) == doctest::Approx(y).epsilon(1e-13));
}

TEST_CASE("quadrature of exp(-Y)") {
    auto g = build_grid(128, 30.0);
    RVec e = (-g->nodes().array()).exp();
    CHECK(g->integrate(e) == doctest::Approx(1.0).epsilon(1e-8));
    // cumulative integral
    Vec c = g->integral_from_zero(e.cast<cplx>());
    Vec t = g->integral_to_end(e.cast<cplx>());
    for (int j = 0; j < g->size(); ++j) {
        CHECK(std::abs(c(j) - (1 - std::exp(-g->y(j)))) < 1e-10);
        CHECK(std::abs(t(j) - (std::exp(-g->y(j)) - std::exp(-30.0))) < 1e-10);
    }
}

TEST_CASE("operators on exponentials") {
    auto g = build_grid(128, 30.0);
    auto gp = g;
    ComplexField f(gp, sample(*g, [](double y) { return std::exp(-y); }));
    auto d = apply_operator(Op::d1, f);
    for (int j = 0; j < g->size(); ++j) CHECK(std::abs(d.values(j) + std::exp(-g->y(j))) < 1e-8 * 128);
    double alpha = 0.7;
    ComplexField k(gp, sample(*g, [&](double y) { return std::exp(-alpha * y); }));
    auto l = apply_operator(Op::laplace, k, alpha);
    CHECK(l.values.cwiseAbs().maxCoeff() < 1e-8 * 128);
    auto z = apply_operator(Op::d2, ComplexField::zeros(gp));
    CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("field validation") {
    auto g = build_grid(32, 20.0);
    CHECK_THROWS_AS(ComplexField(g, Vec::Zero(31)), std::invalid_argument);
    auto h = build_grid(32, 20.0);
    CHECK_THROWS_AS(div_alpha(ComplexField::zeros(g), ComplexField::zeros(h), 1.0), std::invalid_argument);
    Vec v = Vec::Zero(32);
    v(3) = cplx(NAN, 0);
    CHECK_FALSE(ComplexField(g, v).finite());
}

TEST_CASE("norms of exp(-Y)") {
    auto g = build_grid(200, 30.0);
    ComplexField zero = ComplexField::zeros(g);
    auto z = compute_norms(zero, 1.0);
    CHECK(z.l2 == 0.0);
    CHECK(z.h2 == 0.0);
    ComplexField f(g, sample(*g, [](double y) { return std::exp(-y); }));
    auto r = compute_norms(f, 2.0);
    CHECK(r.l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(r.weighted[0][1] == doctest::Approx(0.5).epsilon(1e-6));  // sqrt(1/4)
    CHECK(r.weighted[0][0] == doctest::Approx(r.l2));
    CHECK(r.h1 >= r.l2);
    CHECK(r.h2 >= r.h1);
    CHECK(r.h1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.grad_alpha == doctest::Approx(std::sqrt(0.5 + 4 * 0.5)).epsilon(1e-6));
    auto p = make_default_profile(0.5);
    auto ru = compute_norms(f, 2.0, &p);
    CHECK(ru.u >= 0);
    CHECK(ru.u <= ru.l2);
    CHECK(ru.sqrt_u <= ru.l2);
}

TEST_CASE("discrete integration by parts") {
    auto g = build_grid(160, 30.0);
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        double a = 0.5 + std::abs(nd(rng)), b = nd(rng), c = 0.3 + std::abs(nd(rng));
        Vec f = sample(*g, [&](double y) { return cplx(std::cos(b * y), std::sin(y)) * std::exp(-a * y); });
        Vec h = sample(*g, [&](double y) { return cplx(1.0 + y, b) * std::exp(-c * y); });
        Vec df = g->d1() * f, dh = g->d1() * h;
        cplx lhs = g->integrate(Vec(df.cwiseProduct(h))) + g->integrate(Vec(f.cwiseProduct(dh)));
        cplx bdry = f(159) * h(159) - f(0) * h(0);
        CHECK(std::abs(lhs - bdry) <= 1e-7);
    }
}

TEST_CASE("L-infinity bound by Sobolev type inequality in Y") {
    // ‖f‖²_∞ ≤ 2‖f‖‖f'‖ for fields vanishing at Y_max: constant measured at most 1 on random data
    auto g = build_grid(160, 30.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ud(0.2, 3.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        double a = ud(rng), k = ud(rng), s = ud(rng);
        Vec f = sample(*g, [&](double y) { return std::exp(-a * (y - s) * (y - s)) * cplx(std::cos(k * y), 0.3); });
        double n0 = l2_norm(*g, f), n1 = l2_norm(*g, g->d1() * f);
        double sup = f.cwiseAbs().maxCoeff();
        worst = std::max(worst, sup * sup / (2 * n0 * n1));
    }
    CHECK(worst <= 1.0 + 1e-8);
}

TEST_CASE("product estimate ‖fg‖ ≤ ‖f‖_∞‖g‖ holds discretely") {
    auto g = build_grid(128, 30.0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ud(0.2, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        double a = ud(rng), b = ud(rng);
        Vec f = sample(*g, [&](double y) { return std::sin(b * y) * std::exp(-a * y) + 0.1; });
        Vec h = sample(*g, [&](double y) { return cplx(y, 1.0) * std::exp(-b * y); });
        CHECK(l2_norm(*g, f.cwiseProduct(h)) <= f.cwiseAbs().maxCoeff() * l2_norm(*g, h) * (1 + 1e-12));
    }
}

TEST_CASE("interpolation between grids") {
    auto g = build_grid(100, 30.0);
    auto h = build_grid(200, 30.0, Mapping::uniform);
    Vec f = sample(*g, [](double y) { return std::exp(-y) * std::sin(y); });
    Vec fi = g->interpolate_to(f, *h);
    for (int j = 0; j < h->size(); ++j) CHECK(std::abs(fi(j) - std::exp(-h->y(j)) * std::sin(h->y(j))) < 1e-9);
}
