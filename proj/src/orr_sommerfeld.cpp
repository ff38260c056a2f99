#include "cbl/orr_sommerfeld.hpp"

#include <cmath>
#include <stdexcept>

namespace cbl {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::low: return "low";
        case Regime::middle: return "middle";
        case Regime::high: return "high";
    }
    return "?";
}

Regime parse_regime(const std::string& s) {
    if (s == "low") return Regime::low;
    if (s == "middle") return Regime::middle;
    if (s == "high") return Regime::high;
    throw std::invalid_argument("unknown regime '" + s + "'");
}

Vec laplacian_from_lambda(const Background& bg, double alpha, const Vec& phi, const Vec& w) {
    return second_derivative_from_lambda(bg, alpha, phi, w) - alpha * alpha * phi;
}

Vec lambda_from_laplacian(const Background& bg, double alpha, const Vec& phi, const Vec& z) {
    const double a2 = alpha * alpha;
    return mul(bg.ainv, z + a2 * phi) + mul(bg.dainv, bg.grid->d1() * phi) - a2 * phi;
}

namespace {

double grad_norm(const Grid& g, double alpha, const Vec& f) {
    double a = l2_norm(g, g.d1() * f), b = alpha * l2_norm(g, f);
    return std::sqrt(a * a + b * b);
}

Vec over_u(const Background& bg, const Vec& h) {
    Vec r(h.size());
    r(0) = 0.0;
    for (int j = 1; j < h.size(); ++j) r(j) = h(j) / bg.u(j);
    return r;
}

// accept the truncated series once the tail estimate is below tol
bool settled(const std::vector<double>& h, double total, double tol, double& ratio) {
    const size_t k = h.size();
    if (k < 2) return h.empty() || h.back() <= tol * std::max(total, 1e-300) * 1e-3;
    ratio = h[k - 1] / std::max(h[k - 2], 1e-300);
    if (ratio >= 1.0) return false;
    return h[k - 1] / (1.0 - ratio) <= tol * std::max(total, 1e-300);
}

void check_divergence(const std::vector<double>& h, const char* what) {
    const size_t k = h.size();
    if (k >= 4 && h[k - 1] >= h[k - 2] && h[k - 2] >= h[k - 3] && h[k - 3] >= h[k - 4])
        throw std::runtime_error(std::string(what) + " diverges: increments non-decreasing for 3 steps");
}

}  // namespace

Residual os_tilde_residual(ModeOperators& ops, const Vec& phi, const Vec& w, const Vec& f) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const double alpha = ops.alpha();
    const cplx ie(0, ops.eps());
    Vec r1 = ops.lambda().cast<cplx>() * phi - w;
    Vec lapw = apply_laplace(g, alpha, w);
    Vec uw = mul(bg.u, w), qp = mul(bg.q, phi);
    Vec r2 = ie * lapw + uw - qp - f;
    Residual r;
    double a = interior_l2(g, r2), b = interior_l2(g, mul(bg.u, r1));
    r.abs = std::sqrt(a * a + b * b);
    r.scale = std::max({l2_norm(g, f), interior_l2(g, Vec(ie * lapw)), l2_norm(g, uw), l2_norm(g, qp)});
    return r;
}

Residual os_cns_residual(ModeOperators& ops, const Vec& phi, const Vec& z, const Vec& f) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const double alpha = ops.alpha();
    const cplx ie(0, ops.eps());
    Vec r1 = apply_laplace(g, alpha, phi) - z;
    Vec lz = ie * apply_lambda(bg, alpha, z);
    Vec ul = mul(bg.u, lambda_from_laplacian(bg, alpha, phi, z));
    Vec qp = mul(bg.q, phi);
    Vec r2 = lz + ul - qp - f;
    Residual r;
    double a = interior_l2(g, r2), b = interior_l2(g, mul(bg.u, r1));
    r.abs = std::sqrt(a * a + b * b);
    r.scale = std::max({l2_norm(g, f), interior_l2(g, lz), l2_norm(g, ul), l2_norm(g, qp)});
    return r;
}

void finalize_os(OSSolution& s, ModeOperators& ops, const Vec& f, bool symmetrized) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const Vec& phi = s.phi.values;
    s.eps = ops.eps();
    s.alpha = ops.alpha();
    if (s.lap.size() == 0) s.lap = laplacian_from_lambda(bg, ops.alpha(), phi, s.lam);
    if (s.lam.size() == 0) s.lam = lambda_from_laplacian(bg, ops.alpha(), phi, s.lap);
    s.phi0 = phi(0);
    s.dphi0 = (g.d1() * phi)(0);
    Residual r = symmetrized ? os_tilde_residual(ops, phi, s.lam, f) : os_cns_residual(ops, phi, s.lap, f);
    s.residual = r.rel();
    Vec dw = g.d1() * s.lam;
    double wmax = dw.cwiseAbs().maxCoeff();
    cplx w0 = std::isnan(s.dlam0.real()) ? dw(0) : s.dlam0;
    s.extra_bc = wmax > 0 ? std::abs(w0) / wmax : 0.0;
}

OSSolution rayleigh_airy(ModeOperators& ops, Vec phi1, const Vec& r1, const IterationControl& ctl) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const double alpha = ops.alpha();
    const cplx ie(0, ops.eps());
    const RVec one_p = RVec::Ones(g.size()) + bg.ainv, one_m = RVec::Ones(g.size()) - bg.ainv;

    OSSolution s;
    // Λφ¹ at interior nodes from the Rayleigh equation itself
    Vec lam1 = mul(bg.q_over_u, phi1) + r1;
    Vec psi = ops.tilde_airy(-ie * lam1);
    s.phi_seed = phi1;
    s.psi_seed = psi;
    Vec phi_sum = phi1 + psi;
    Vec psi_sum = psi;
    Vec xi_sum = Vec::Zero(g.size());
    double total = grad_norm(g, alpha, phi_sum);
    for (int k = 0; k < ctl.max_iter; ++k) {
        Vec gpsi = mul(bg.du.cwiseProduct(one_p), psi) + mul(bg.u.cwiseProduct(one_m), g.d1() * psi);
        Vec xi = ops.airy_neumann(g.d1() * gpsi);
        Vec phi = ops.rayleigh(xi);
        psi = ops.tilde_airy(-ie * mul(bg.q_over_u, phi));
        xi_sum += xi;
        psi_sum += psi;
        Vec inc = phi + psi;
        phi_sum += inc;
        s.history.push_back(grad_norm(g, alpha, inc));
        total = grad_norm(g, alpha, phi_sum);
        s.iterations = k + 1;
        if (total == 0.0 || settled(s.history, total, ctl.tol, s.ratio)) break;
        check_divergence(s.history, "Rayleigh-Airy iteration");
        if (k + 1 == ctl.max_iter) s.converged = false;
    }
    if (s.history.size() >= 2) s.ratio = s.history.back() / std::max(s.history[s.history.size() - 2], 1e-300);
    s.lam = xi_sum - mul(bg.u, psi_sum) / ie;
    s.dlam0 = (g.d1() * xi_sum)(0) - (bg.du(0) * psi_sum(0) + bg.u(0) * (g.d1() * psi_sum)(0)) / ie;
    s.phi = ComplexField(ops.grid_ptr(), std::move(phi_sum));
    return s;
}

OSSolution solve_os_symmetrized(const ComplexField& f, ModeOperators& ops, const IterationControl& ctl) {
    if (f.grid.get() != &ops.grid()) throw std::invalid_argument("grid mismatch in OS solve");
    const Background& bg = ops.bg();
    const double fmax = f.values.cwiseAbs().maxCoeff();
    const int n = ops.size();
    if (fmax == 0.0) {
        OSSolution s;
        s.phi = ComplexField::zeros(ops.grid_ptr());
        s.lam = Vec::Zero(n);
        s.iterations = 0;
        finalize_os(s, ops, f.values, true);
        return s;
    }
    if (std::abs(f.values(0)) > 1e-8 * fmax) throw std::domain_error("f/U_s singular at the wall: f(0) ≠ 0");
    Vec r1 = over_u(bg, f.values);
    Vec phi1 = ops.rayleigh(r1);
    OSSolution s = rayleigh_airy(ops, phi1, r1, ctl);
    if (!s.converged) throw std::runtime_error("Rayleigh-Airy iteration: max_iter exceeded");
    finalize_os(s, ops, f.values, true);
    s.bc_error = std::max(std::abs(s.phi.values(0)), std::abs(s.phi.values(n - 1)));
    return s;
}

OSSolution solve_os_symmetrized_direct(const ComplexField& f, ModeOperators& ops) {
    auto [phi, w] = ops.os_tilde_direct(f.values);
    OSSolution s;
    s.phi = ComplexField(ops.grid_ptr(), std::move(phi));
    s.lam = std::move(w);
    finalize_os(s, ops, f.values, true);
    s.bc_error = std::max(std::abs(s.phi.values(0)), std::abs(s.phi.values(ops.size() - 1)));
    return s;
}

OSSolution solve_os_symmetrized_general(const ComplexField& f, ModeOperators& ops, const IterationControl& ctl) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const int n = ops.size();
    if (f.values.cwiseAbs().maxCoeff() == 0.0) return solve_os_symmetrized(f, ops, ctl);
    // φ₀ carries the wall value of f; its leftover ∂(A^{-1}U'φ₀) vanishes at the wall
    auto [phi0, w0] = ops.os_energy_block(f.values);
    Vec f1 = g.d1() * mul(bg.ainv.cwiseProduct(bg.du), phi0);
    Vec r1 = over_u(bg, f1);
    OSSolution s = rayleigh_airy(ops, ops.rayleigh(r1), r1, ctl);
    if (!s.converged) throw std::runtime_error("Rayleigh-Airy iteration: max_iter exceeded");
    s.phi.values += phi0;
    s.lam += w0;
    s.dlam0 += (g.d1() * w0)(0);
    finalize_os(s, ops, f.values, true);
    s.bc_error = std::max(std::abs(s.phi.values(0)), std::abs(s.phi.values(n - 1)));
    return s;
}

OSSolution os_remainder_series(const OSSolution& tilde, ModeOperators& ops, const IterationControl& ctl) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const double alpha = ops.alpha();
    const int n = ops.size();
    const cplx ie(0, ops.eps());
    OSSolution r;
    Vec phi_r = Vec::Zero(n), lam_r = Vec::Zero(n);
    Vec prev_phi = tilde.phi.values, prev_lam = tilde.lam;
    const double base = grad_norm(g, alpha, tilde.phi.values);
    for (int k = 0; k < ctl.max_iter; ++k) {
        Vec d2 = second_derivative_from_lambda(bg, alpha, prev_phi, prev_lam);
        Vec gk = 2.0 * mul(bg.dainv, d2) + mul(bg.d2ainv, g.d1() * prev_phi);
        Vec src = ie * (g.d1() * gk);
        if (src.cwiseAbs().maxCoeff() == 0.0) break;
        OSSolution step = solve_os_symmetrized_general(ComplexField(ops.grid_ptr(), src), ops, ctl);
        phi_r += step.phi.values;
        lam_r += step.lam;
        r.history.push_back(grad_norm(g, alpha, step.phi.values));
        r.iterations = k + 1;
        if (settled(r.history, base + grad_norm(g, alpha, phi_r), ctl.tol, r.ratio)) break;
        check_divergence(r.history, "commutator series");
        if (k + 1 == ctl.max_iter) r.converged = false;
        prev_phi = std::move(step.phi.values);
        prev_lam = std::move(step.lam);
    }
    r.phi = ComplexField(ops.grid_ptr(), std::move(phi_r));
    r.lam = std::move(lam_r);
    r.eps = ops.eps();
    r.alpha = alpha;
    return r;
}

OSSolution solve_os_cns(const ComplexField& f, ModeOperators& ops, const IterationControl& ctl) {
    OSSolution t = solve_os_symmetrized_general(f, ops, ctl);
    OSSolution r = os_remainder_series(t, ops, ctl);
    if (!r.converged) throw std::runtime_error("commutator series: max_iter exceeded");
    OSSolution s;
    s.phi_tilde = t.phi.values;
    s.phi_r = r.phi.values;
    s.history = t.history;
    s.history.insert(s.history.end(), r.history.begin(), r.history.end());
    s.iterations = t.iterations + r.iterations;
    s.ratio = std::max(t.ratio, r.ratio);
    s.phi = ComplexField(ops.grid_ptr(), t.phi.values + r.phi.values);
    s.lam = t.lam + r.lam;
    finalize_os(s, ops, f.values, false);
    s.bc_error = std::max(std::abs(s.phi.values(0)), std::abs(s.phi.values(ops.size() - 1)));
    return s;
}

OSSolution solve_os_high_freq(const ComplexField& f, ModeOperators& ops, double threshold) {
    if (ops.alpha() * std::cbrt(ops.eps()) < threshold)
        throw std::domain_error("αε^{1/3} below the high-frequency threshold");
    auto [phi, z] = ops.os_cns_direct(f.values);
    OSSolution s;
    s.regime = Regime::high;
    s.lap = std::move(z);
    s.phi = ComplexField(ops.grid_ptr(), std::move(phi));
    finalize_os(s, ops, f.values, false);
    const int n = ops.size();
    s.bc_error = std::max({std::abs(s.phi.values(0)), std::abs(s.lap(0)), std::abs(s.phi.values(n - 1))});
    return s;
}

}  // namespace cbl
