#include "cbl/rayleigh.hpp"

#include <cmath>
#include <stdexcept>

namespace cbl {

Vec apply_rayleigh(const Background& bg, double alpha, const Vec& phi) {
    return mul(bg.u, apply_lambda(bg, alpha, phi)) - mul(bg.q, phi);
}

namespace {

Vec over_u(const Background& bg, const Vec& h) {
    Vec r(h.size());
    r(0) = 0.0;
    for (int j = 1; j < h.size(); ++j) r(j) = h(j) / bg.u(j);
    return r;
}

RayleighSolution finish(ModeOperators& ops, Vec phi, const Vec& h, cplx wall) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    RayleighSolution s;
    s.alpha = ops.alpha();
    s.trace = (g.d1() * phi)(0);
    s.bc_error = std::max(std::abs(phi(0) - wall), std::abs(phi(phi.size() - 1)));
    Vec res = apply_rayleigh(bg, ops.alpha(), phi) - h;
    double scale = l2_norm(g, over_u(bg, h));
    if (scale == 0.0) scale = l2_norm(g, mul(bg.u, apply_lambda(bg, ops.alpha(), phi))) + 1e-300;
    s.residual = interior_l2(g, res) / scale;
    s.phi = ComplexField(ops.grid_ptr(), std::move(phi));
    s.norms = compute_norms(s.phi, ops.alpha(), &bg.profile);
    return s;
}

}  // namespace

RayleighSolution solve_rayleigh_inhomogeneous(const ComplexField& h, ModeOperators& ops) {
    if (h.grid.get() != &ops.grid()) throw std::invalid_argument("grid mismatch in Rayleigh solve");
    if (!h.finite()) throw std::invalid_argument("Rayleigh data not finite");
    const double hmax = h.values.cwiseAbs().maxCoeff();
    if (std::abs(h.values(0)) > 1e-8 * hmax)
        throw std::domain_error("h/U_s is singular at the wall: h(0) ≠ 0");
    Vec r = over_u(ops.bg(), h.values);
    if (!r.allFinite()) throw std::domain_error("h/U_s not finite at interior nodes");
    if (hmax == 0.0) return finish(ops, Vec::Zero(h.values.size()), h.values, 0.0);
    return finish(ops, ops.rayleigh(r), h.values, 0.0);
}

RayleighSolution solve_rayleigh_inhomogeneous(const ComplexField& h, double alpha, const ShearProfile& p) {
    ModeOperators ops(make_background(p, h.grid), 1.0, alpha);
    return solve_rayleigh_inhomogeneous(h, ops);
}

RayleighSolution solve_rayleigh_homogeneous(ModeOperators& ops) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const int n = g.size();
    if (!(bg.m > 0.0 && bg.m < 1.0)) throw std::invalid_argument("homogeneous Rayleigh needs mach in (0,1)");
    Vec phi = ops.rayleigh(Vec::Zero(n), 1.0);
    RayleighSolution s = finish(ops, phi, Vec::Zero(n), 1.0);
    const double alpha = ops.alpha();
    if (alpha < 1.0) {
        // least squares for c in φ ≈ c·(U/α)e^{-α√A_∞ Y} away from the wall layer
        const double k = alpha * std::sqrt(bg.profile.a_inf());
        RVec w(n), mask(n);
        for (int j = 0; j < n; ++j) {
            w(j) = bg.u(j) / alpha * std::exp(-k * g.y(j));
            mask(j) = g.y(j) >= 3.0 ? g.weights()(j) : 0.0;
        }
        cplx num = 0.0;
        double den = 0.0;
        for (int j = 0; j < n; ++j) {
            num += mask(j) * w(j) * phi(j);
            den += mask(j) * w(j) * w(j);
        }
        cplx c = num / den;
        s.c_e = c.real();
        double err = 0, ref = 0;
        for (int j = 0; j < n; ++j) {
            err += mask(j) * std::norm(phi(j) - c * w(j));
            ref += mask(j) * std::norm(phi(j));
        }
        s.c_e_fit_error = std::sqrt(err / std::max(ref, 1e-300));
    }
    return s;
}

RayleighSolution solve_rayleigh_homogeneous(double alpha, const ShearProfile& p, GridPtr g) {
    ModeOperators ops(make_background(p, std::move(g)), 1.0, alpha);
    return solve_rayleigh_homogeneous(ops);
}

}  // namespace cbl
