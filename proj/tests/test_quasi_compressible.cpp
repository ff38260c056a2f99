#include "doctest.h"

#include <cmath>
#include <vector>

#include "cbl/quasi_compressible.hpp"
#include "cbl/sweep.hpp"
#include "test_util.hpp"

using namespace cbl;
using testutil::sample;

namespace {

struct Setup {
    GridPtr g;
    BackgroundPtr bg;
    ModeSystem s;
    ModeOperators ops;
    Setup(double mach, double nu, double alpha, double lambda = 0.5, int n = 200)
        : g(build_grid(n, 30.0)),
          bg(make_background(make_default_profile(mach), g)),
          s{bg, nu, lambda, alpha},
          ops(bg, s.eps(), alpha) {}
};

// divergence-compatible triple from φ and ϱ: 𝔳 = -iαφ, 𝔲 = ∂_Yφ - U_sϱ
Triple from_stream(const Setup& st, const Vec& phi, const Vec& rho) {
    const Grid& g = *st.g;
    Vec u = g.d1() * phi - mul(st.bg->u, rho);
    return {rho, u, cplx(0, -st.s.alpha) * phi};
}

}  // namespace

TEST_CASE("zero forcing gives the zero triple") {
    Setup st(0.5, 1e-3, 2.0);
    Vec z = Vec::Zero(st.g->size());
    auto q = solve_qc_inhomogeneous(st.s, st.ops, z, z);
    CHECK(q.t.rho.cwiseAbs().maxCoeff() == 0.0);
    CHECK(q.t.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(q.t.v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lift: wall normal velocity is -i alpha phi(0)") {
    Setup st(0.5, 1e-3, 2.0);
    const Grid& g = *st.g;
    Vec phi = sample(g, [](double y) { return cplx(1.0, 0.3) * std::exp(-2 * y) + y * std::exp(-y); });
    Vec lap = apply_laplace(g, 2.0, phi);
    Vec z = Vec::Zero(g.size());
    auto f = lift_to_fluid(st.s, phi, lap, z, z);
    CHECK(std::abs(f.t.v(0) - cplx(0, -2.0) * phi(0)) < 1e-14);
    CHECK(std::abs(f.t.u(0) - (g.d1() * phi)(0)) < 1e-12);  // U_s(0) = 0
}

TEST_CASE("lift rejects an inconsistent Laplacian") {
    Setup st(0.5, 1e-3, 2.0);
    const Grid& g = *st.g;
    Vec phi = sample(g, [](double y) { return cplx(y * std::exp(-y), 0); });
    Vec lap = 2.0 * apply_laplace(g, 2.0, phi);
    Vec z = Vec::Zero(g.size());
    CHECK_THROWS_AS(lift_to_fluid(st.s, phi, lap, z, z), std::domain_error);
}

TEST_CASE("manufactured triple recovered up to the homogeneous solution") {
    for (auto [nu, alpha] : {std::pair{1e-3, 1.58}, {1e-3, 6.3}, {1e-3, 30.0}}) {
        Setup st(0.5, nu, alpha);
        const Grid& g = *st.g;
        Vec phi = sample(g, [](double y) { return cplx(y * y * std::exp(-y), 0.5 * y * std::exp(-2 * y)); });
        Vec rho = sample(g, [](double y) { return cplx(std::exp(-y * y), 0); });
        Triple t = from_stream(st, phi, rho);
        Applied a = apply_system(st.s, Variant::qc, t);
        auto q = solve_qc_inhomogeneous(st.s, st.ops, a.value.u, a.value.v);
        CAPTURE(alpha);
        CHECK(q.residual < 1e-6);
        CHECK(std::abs(q.t.v(0)) < 1e-8);
        // t and q differ by a multiple of the homogeneous solution
        auto h = homogeneous_qc(st.s, st.ops, q.regime);
        Triple d = q.t - t;
        cplx c = d.u(0) / h.t.u(0);
        Triple rest = d - Triple{c * h.t.rho, c * h.t.u, c * h.t.v};
        CHECK(l2_norm(g, rest) < 1e-6 * l2_norm(g, t));
    }
}

TEST_CASE("density scales like m^2") {
    // m^{-2}ϱ is O(1) as m → 0, so halving m quarters ϱ
    testutil::RandomSmooth rs(4);
    auto g0 = build_grid(200, 30.0);
    Vec fu = rs(*g0), fv = rs(*g0);
    std::vector<double> norms;
    for (double m : {0.2, 0.1}) {
        Setup st(m, 1e-3, 3.0);
        norms.push_back(solve_qc_inhomogeneous(st.s, st.ops, fu, fv).t.rho.norm());
    }
    double r = norms[0] / norms[1];
    CHECK(r >= 3.6);
    CHECK(r <= 4.4);
}

TEST_CASE("velocity bound over an eps-sweep") {
    // α‖(𝔲,𝔳)‖/‖(f_u,f_v)‖ grows no faster than ε^{-1/3}; ε = √ν/α at α = 1
    testutil::RandomSmooth rs(9);
    auto g0 = build_grid(200, 30.0);
    Vec fu = rs(*g0), fv = rs(*g0);
    std::vector<double> inv_eps, ratio;
    for (double nu : {1e-4, 1e-6, 1e-8}) {
        Setup st(0.5, nu, 1.0);
        auto q = solve_qc_inhomogeneous(st.s, st.ops, fu, fv);
        CHECK(q.residual < 1e-6);
        double uv = std::hypot(l2_norm(*st.g, q.t.u), l2_norm(*st.g, q.t.v));
        inv_eps.push_back(1.0 / st.s.eps());
        ratio.push_back(uv / std::hypot(l2_norm(*st.g, fu), l2_norm(*st.g, fv)));
    }
    SlopeFit f = fit_loglog(inv_eps, ratio);
    MESSAGE("slope " << f.slope);
    CHECK(f.slope <= 1.0 / 3.0 + 0.15);
}

TEST_CASE("homogeneous solution, high regime: wall slip bounded below") {
    for (double alpha : {20.0, 40.0}) {
        Setup st(0.5, 1e-3, alpha);
        auto h = homogeneous_qc(st.s, st.ops, Regime::high);
        CHECK(std::abs(h.t.v(0)) < 1e-12);
        CHECK(alpha * std::abs(h.t.u(0)) >= 0.25);
        CHECK(h.residual < 1e-6);
    }
}

TEST_CASE("error terms against closed forms") {
    const double nu = 1e-3, alpha = 2.0;
    for (double lambda : {0.0, 0.7}) {
        Setup st(0.5, nu, alpha, lambda);
        const Grid& g = *st.g;
        auto p = make_default_profile(0.5);
        const double sn = std::sqrt(nu);
        const cplx ia(0, alpha);
        Triple t{sample(g, [](double y) { return cplx(std::exp(-y), 0); }),
                 sample(g, [](double y) { return cplx(y * std::exp(-y), 0); }),
                 sample(g, [](double y) { return cplx(0, y * y * std::exp(-y)); })};
        // e_u = √ν(U''ρ + Δ_α(Uρ) + λα²u - λiα∂v), e_v = -λ√ν(iα∂u + ∂²v)
        Vec eu = sample(g, [&](double y) {
            auto c = testutil::coef(p, y);
            double e = std::exp(-y);
            double r = e, r1 = -e, r2 = e;
            double urr = c.d2u * r + 2 * c.du * r1 + c.u * r2 - alpha * alpha * c.u * r;
            double u = y * e;
            cplx v1(0, (2 * y - y * y) * e);
            return sn * (c.d2u * r + urr + lambda * alpha * alpha * u - lambda * ia * v1);
        });
        Vec ev = sample(g, [&](double y) {
            double e = std::exp(-y);
            double u1 = (1 - y) * e;
            cplx v2(0, (2 - 4 * y + y * y) * e);
            return -lambda * sn * (ia * u1 + v2);
        });
        auto [nu_u, nu_v] = qc_error_fields(st.s, t);
        auto interior = [&](Vec d) {
            d(0) = d(g.size() - 1) = 0;
            return d.cwiseAbs().maxCoeff();
        };
        CAPTURE(lambda);
        CHECK(interior(nu_u - eu) < 1e-9);
        CHECK(interior(nu_v - ev) < 1e-9);
        if (lambda == 0.0) CHECK(nu_v.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("continuity holds for solved triples") {
    testutil::RandomSmooth rs(21);
    for (double alpha : {1.58, 8.0, 40.0}) {
        Setup st(0.3, 1e-3, alpha);
        auto q = solve_qc_inhomogeneous(st.s, st.ops, rs(*st.g), rs(*st.g));
        CAPTURE(alpha);
        CHECK(q.continuity < 1e-10);
        CHECK(q.bc_error < 1e-8);
    }
}
