#include "cbl/quasi_compressible.hpp"

#include <cmath>
#include <stdexcept>

namespace cbl {

namespace {

void check_pair(const ModeSystem& s, const ModeOperators& ops) {
    if (std::abs(ops.alpha() - s.alpha) > 1e-12 * s.alpha || std::abs(ops.eps() - s.eps()) > 1e-12 * s.eps())
        throw std::invalid_argument("mode operators built for a different (ε, α)");
}

}  // namespace

FluidTriple lift_to_fluid(const ModeSystem& s, const Vec& phi, const Vec& lap, const Vec& fu, const Vec& fv) {
    const Background& bg = *s.bg;
    const Grid& g = *bg.grid;
    const int n = g.size();
    const double a = s.alpha, eps = s.eps();
    const cplx ie(0, eps);

    Vec lap_grid = apply_laplace(g, a, phi);
    double ln = interior_l2(g, lap);
    double dn = interior_l2(g, lap - lap_grid);
    if (ln > 0 && dn > 1e-3 * ln) throw std::domain_error("stream function under-resolved: Δ_αφ does not match the grid");

    Vec dphi = g.d1() * phi;
    const int e = n - 1;
    cplx dz_end = g.d1().row(e).cast<cplx>() * lap;
    cplx anchor = -bg.ainv(e) * (ie * dz_end + bg.u(e) * dphi(e) - bg.du(e) * phi(e) + cplx(0, 1.0 / a) * fu(e));
    Vec rhs = fv - ie * a * a * lap - a * a * mul(bg.u, phi);
    Vec prho = Vec::Constant(n, anchor) - g.integral_to_end(rhs);  // m^{-2}ϱ

    FluidTriple f;
    f.eps = eps;
    f.alpha = a;
    f.phi = phi;
    f.lap = lap;
    f.t.rho = prho / s.minv2();
    f.t.u = dphi - mul(bg.u, f.t.rho);
    f.t.v = cplx(0, -a) * phi;
    f.div = div_alpha(s, f.t.u, f.t.v);
    Triple data{Vec::Zero(n), fu, fv};
    f.residual = system_residual(s, Variant::qc, f.t, data);
    f.far_field = std::max(std::abs(f.t.u(e)), std::abs(f.t.v(e)));
    f.bc_error = std::abs(f.t.v(0) + cplx(0, a) * phi(0));
    double dnorm = l2_norm(g, f.div);
    Vec cont = cplx(0, a) * mul(bg.u, f.t.rho) + f.div;
    f.continuity = dnorm > 0 ? l2_norm(g, cont) / dnorm : l2_norm(g, cont);
    return f;
}

Vec qc_os_forcing(const ModeSystem& s, const Vec& fu, const Vec& fv) {
    const Background& bg = *s.bg;
    return -fv - cplx(0, 1.0 / s.alpha) * (bg.grid->d1() * mul(bg.ainv, fu));
}

FluidTriple solve_qc_inhomogeneous(const ModeSystem& s, ModeOperators& ops, const Vec& fu, const Vec& fv,
                                   const RegimeThresholds& thr, const IterationControl& ctl) {
    check_pair(s, ops);
    const Regime r = classify_regime(s.eps(), s.alpha, thr);
    ComplexField rhs(ops.grid_ptr(), qc_os_forcing(s, fu, fv));
    OSSolution os = r == Regime::high ? solve_os_high_freq(rhs, ops) : solve_os_cns(rhs, ops, ctl);
    FluidTriple f = lift_to_fluid(s, os.phi.values, os.lap, fu, fv);
    f.regime = r;
    f.iterations = os.iterations;
    f.bc_error = std::abs(f.t.v(0));
    return f;
}

FluidTriple homogeneous_qc(const ModeSystem& s, ModeOperators& ops, Regime regime, const IterationControl& ctl) {
    check_pair(s, ops);
    OSSolution fast = fast_mode(ops, regime, ctl);
    Vec phi = fast.phi.values, lap = fast.lap;
    int iters = fast.iterations;
    if (regime == Regime::low) {
        OSSolution slow = slow_mode(ops, ctl);
        phi -= slow.phi.values;
        lap -= slow.lap;
        iters += slow.iterations;
    }
    const int n = s.size();
    FluidTriple f = lift_to_fluid(s, phi, lap, Vec::Zero(n), Vec::Zero(n));
    f.regime = regime;
    f.iterations = iters;
    f.bc_error = std::abs(f.t.v(0));
    return f;
}

std::pair<Vec, Vec> qc_error_fields(const ModeSystem& s, const Triple& t) {
    Triple e = qc_error(s, t);
    return {std::move(e.u), std::move(e.v)};
}

}  // namespace cbl
