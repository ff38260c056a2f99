#include "cbl/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbl/sweep.hpp"

namespace cbl {

double PressureLaw::dp(double rho) const { return std::pow(rho, gamma - 1.0) / (m * m); }

double force_profile(const std::string& name, double Y) {
    if (name == "gaussian-bump") return std::exp(-(Y - 2.0) * (Y - 2.0));
    if (name == "exp-decay") return Y * std::exp(-Y);
    throw std::invalid_argument("unknown force profile '" + name + "'");
}

ExternalForce make_force(const Domain& d, const std::string& profile, const std::vector<int>& modes, double amplitude) {
    const Grid& g = *d.grid;
    ExternalForce f{ModeCoeffs::zeros(d.n_max, g.size()), ModeCoeffs::zeros(d.n_max, g.size())};
    for (int n : modes) {
        if (n <= 0 || n > d.n_max) throw std::invalid_argument("force modes must lie in 1..n_max");
        for (int k = 0; k < g.size(); ++k) {
            double p = amplitude * force_profile(profile, g.y(k));
            // cos(n̂x) = (e^{in̂x} + e^{-in̂x})/2, sin(n̂x) = (e^{in̂x} - e^{-in̂x})/(2i)
            f.f1[n](k) += 0.5 * p;
            f.f1[-n](k) += 0.5 * p;
            f.f2[n](k) += cplx(0, -0.5) * p;
            f.f2[-n](k) += cplx(0, 0.5) * p;
        }
    }
    return f;
}

double force_norm(const ExternalForce& f, const Domain& d, double s) { return force_norm(f.f1, f.f2, d, s); }

NonlinearTerms nonlinear_terms(const FlowFields& state, const ExternalForce& force, const Background& bg,
                               const Domain& d, const PressureLaw& p) {
    const int nx = d.samples(), n_max = d.n_max;
    const int ny = d.grid->size();
    const double sn = std::sqrt(d.nu);
    PhysicalField R = to_physical(state.rho, nx), U = to_physical(state.u, nx), V = to_physical(state.v, nx);
    PhysicalField Rx = to_physical(dx(state.rho, d), nx), Ry = to_physical(dy(state.rho, d), nx);
    PhysicalField F1 = to_physical(force.f1, nx), F2 = to_physical(force.f2, nx);

    NonlinearTerms out;
    out.rho_sup = R.cwiseAbs().maxCoeff();
    if (!(out.rho_sup < 1.0)) throw std::domain_error("density excursion: sup |ρ| ≥ 1");

    PhysicalField one_r = (R.array() + 1.0).matrix();
    PhysicalField dP = one_r.unaryExpr([&](double r) { return p.dp(r); });
    dP.array() -= p.dp(1.0);
    auto modes = [&](const PhysicalField& f) { return to_modes(f, n_max); };
    auto times_profile = [&](ModeCoeffs c, const RVec& w) {
        for (auto& v : c.c) v = mul(w, v);
        return c;
    };
    auto neg = [](ModeCoeffs c) {
        c *= -1.0;
        return c;
    };

    ModeCoeffs ru = modes(R.cwiseProduct(U)), rv = modes(R.cwiseProduct(V));
    ModeCoeffs a = modes(one_r.cwiseProduct(U).cwiseProduct(U));
    ModeCoeffs b = modes(one_r.cwiseProduct(U).cwiseProduct(V));
    ModeCoeffs c = modes(one_r.cwiseProduct(V).cwiseProduct(V));
    PhysicalField rvdu(ny, nx);
    for (int k = 0; k < ny; ++k) rvdu.row(k) = R.row(k).cwiseProduct(V.row(k)) * (bg.du(k) / sn);

    FlowFields& g = out.g;
    g.rho = neg(dx(ru, d));
    g.rho -= dy(rv, d);

    g.u = neg(dx(a, d));
    g.u -= times_profile(dx(ru, d), bg.u);
    g.u -= dy(b, d);
    g.u -= modes(rvdu);
    g.u -= modes(dP.cwiseProduct(Rx));
    g.u += modes(one_r.cwiseProduct(F1));

    g.v = neg(dx(b, d));
    g.v -= times_profile(dx(rv, d), bg.u);
    g.v -= dy(c, d);
    g.v -= modes(dP.cwiseProduct(Ry));
    g.v += modes(one_r.cwiseProduct(F2));
    return out;
}

double nonlinear_residual(LinearNS& lin, const FlowFields& state, const ExternalForce& force, const PressureLaw& p) {
    const Domain& d = lin.domain();
    const Background& bg = lin.bg();
    NonlinearTerms nt = nonlinear_terms(state, force, bg, d, p);
    const double sn = std::sqrt(d.nu);
    double worst = zero_mode_residual(bg, d.nu, lin.lambda(), state.rho[0], state.u[0], state.v[0], nt.g.rho[0],
                                      nt.g.u[0], nt.g.v[0]);
    // nonzero modes pooled: modes far below the leading ones carry only round-off
    double abs2 = 0, scale = 0;
    for (int n = 1; n <= d.n_max; ++n) {
        const ModeSystem& s = lin.mode_solver(n).system();
        Triple t{state.rho[n], state.u[n], state.v[n]};
        Triple f{sn * nt.g.rho[n], sn * nt.g.u[n], sn * nt.g.v[n]};
        ResidualParts r = residual_parts(s, Variant::full, t, f);
        abs2 += r.abs * r.abs;
        scale += r.scale;
    }
    double pooled = std::sqrt(abs2);
    return std::max(worst, scale > 0 ? pooled / scale : pooled);
}

PicardState picard_solve(LinearNS& lin, const ExternalForce& force, const PicardSettings& cfg) {
    const Domain& d = lin.domain();
    const Background& bg = lin.bg();
    const PressureLaw law{cfg.gamma, bg.m};
    const double minv2 = 1.0 / (bg.m * bg.m);
    PicardState ps;
    ps.force_norm = force_norm(force, d, cfg.weight_s);
    FlowFields cur = FlowFields::zeros(d.n_max, d.grid->size());
    int up = 0;
    for (int i = 0; i < cfg.max_iter; ++i) {
        NonlinearTerms nt = nonlinear_terms(cur, force, bg, d, law);
        FlowState st = lin.solve(nt.g);
        FlowFields diff = st.fields;
        diff -= cur;
        FlowNorms dn = flow_norms(diff, d, minv2);
        double inc = dn.norm2;
        ps.increments.push_back(inc);
        ps.masses.push_back(st.mass);
        ps.wall_divs.push_back(st.wall_div);
        ps.iterations = i + 1;
        // ratios near the round-off floor of the norm say nothing about contraction
        double floor = 100.0 * cfg.tol * st.norms.norm2;
        if (i > 0 && ps.increments[i - 1] > floor) {
            double r = inc / ps.increments[i - 1];
            ps.max_ratio = std::max(ps.max_ratio, r);
            up = r >= 1.0 ? up + 1 : 0;
            if (up >= 3) throw std::runtime_error("Picard iteration diverges; force above the contraction threshold");
        }
        cur = st.fields;
        ps.state = std::move(st);
        double size = ps.state.norms.norm2;
        // the third-derivative part of ‖·‖₂ hits round-off near 1e-7 on fine grids; ‖·‖₁ settles lower
        if (size == 0.0 || inc <= cfg.tol * size || dn.norm1 <= cfg.tol * ps.state.norms.norm1) {
            ps.converged = true;
            break;
        }
    }
    ps.residual = nonlinear_residual(lin, cur, force, law);
    return ps;
}

LowMachReport low_mach_compare(const std::vector<double>& m_values, const ExternalForce& force, const LowMachSetup& setup) {
    if (m_values.empty()) throw std::invalid_argument("no Mach numbers given");
    for (size_t i = 1; i < m_values.size(); ++i)
        if (!(m_values[i] < m_values[i - 1])) throw std::invalid_argument("m_values must be descending");
    LowMachReport rep;
    rep.m_values = m_values;
    rep.m_ref = setup.reference_factor * m_values.back();
    const Domain& d = setup.domain;

    auto run = [&](double m, double& norm) {
        auto bg = make_background(setup.profile.with_mach(m), d.grid);
        LinearNS lin(bg, d, setup.lambda, setup.linear);
        PicardState ps = picard_solve(lin, force, setup.picard);
        if (!ps.converged) throw std::runtime_error("Picard iteration did not converge at m = " + std::to_string(m));
        norm = ps.state.norms.norm2;
        FlowFields f = ps.state.fields;
        f.rho *= 1.0 / (m * m);  // pressure m^{-2}ρ
        return f;
    };
    double ref_norm = 0;
    FlowFields ref = run(rep.m_ref, ref_norm);
    for (double m : m_values) {
        double nrm = 0;
        FlowFields f = run(m, nrm);
        f -= ref;
        FlowNorms fn = flow_norms(f, d, 1.0);
        rep.diff_norm.push_back(fn.norm2);
        rep.diff_linf.push_back(fn.linf);
        rep.solution_norm.push_back(nrm);
    }
    rep.monotone = std::is_sorted(rep.diff_norm.rbegin(), rep.diff_norm.rend());
    if (m_values.size() >= 3) {
        SlopeFit fit = fit_loglog(m_values, rep.diff_norm);
        rep.slope = fit.slope;
        rep.slope_lo = fit.lo;
        rep.slope_hi = fit.hi;
        rep.linf_slope = fit_loglog(m_values, rep.diff_linf).slope;
    } else if (m_values.size() == 2) {
        rep.slope = std::log(rep.diff_norm[0] / rep.diff_norm[1]) / std::log(m_values[0] / m_values[1]);
        rep.slope_lo = rep.slope_hi = rep.slope;
        rep.linf_slope = std::log(rep.diff_linf[0] / rep.diff_linf[1]) / std::log(m_values[0] / m_values[1]);
    }
    return rep;
}

}  // namespace cbl
