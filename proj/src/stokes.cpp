#include "cbl/stokes.hpp"

#include <cmath>
#include <stdexcept>

namespace cbl {

StokesSolver::StokesSolver(const ModeSystem& s) : dense_(s, Variant::stokes, WallBC::slip) {
    if (!(s.bg->m > 0.0 && s.bg->m < 1.0)) throw std::domain_error("Stokes solve needs a subsonic profile, 0 < m < 1");
}

StokesSolution StokesSolver::solve(const Triple& q) const {
    const ModeSystem& s = system();
    StokesSolution out;
    out.t = dense_.solve(q);
    out.residual = system_residual(s, Variant::stokes, out.t, q);
    out.bc_error = wall_error(out.t, WallBC::slip, s.grid());
    return out;
}

StokesSolution solve_stokes(const Triple& q, const ModeSystem& s) { return StokesSolver(s).solve(q); }

StokesEstimate stokes_estimate(const ModeSystem& s, const Triple& sol, const Triple& q) {
    const Grid& g = s.grid();
    const double a = s.alpha;
    auto grad = [&](const Vec& f) {
        double x = l2_norm(g, g.d1() * f), y = a * l2_norm(g, f);
        return std::sqrt(x * x + y * y);
    };
    RVec su = s.bg->u.cwiseSqrt();
    StokesEstimate e;
    e.density = s.minv2() * grad(sol.rho);
    double vu = l2_norm(g, mul(su, sol.u)), vv = l2_norm(g, mul(su, sol.v));
    e.velocity = a * std::sqrt(vu * vu + vv * vv);
    e.data = l2_norm(g, q) + s.sqrt_nu() * grad(q.rho);
    double nhat = a / s.sqrt_nu();
    double un = l2_norm(g, sol.u), vn = l2_norm(g, sol.v);
    e.vel_bound = std::sqrt(un * un + vn * vn) * a / std::cbrt(nhat);
    return e;
}

}  // namespace cbl
