#include "cbl/modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "cbl/rayleigh.hpp"
#include "cbl/special_functions.hpp"

namespace cbl {

Regime classify_regime(double eps, double alpha, const RegimeThresholds& t) {
    double beta = alpha * std::cbrt(eps);
    if (beta < t.kappa0) return Regime::low;
    if (beta > 1.0 / t.kappa_hat0) return Regime::high;
    return Regime::middle;
}

namespace {

// decaying solution of φ'' - α²φ = s, φ(Y) = ∫_Y^∞ sinh(α(t-Y))/α s(t) dt,
// as a Dirichlet solve plus c h(Y), c = φ(0); h = sinh(α(Y_max-Y))/sinh(αY_max) keeps φ(Y_max) = 0
void decaying_particular(const Grid& g, double alpha, const Vec& s, Vec& phi, Vec& dphi) {
    const int n = g.size();
    RMat l = g.d2();
    l.diagonal().array() -= alpha * alpha;
    l.row(0).setZero();
    l(0, 0) = 1.0;
    l.row(n - 1).setZero();
    l(n - 1, n - 1) = 1.0;
    Vec rhs = s;
    rhs(0) = 0.0;
    rhs(n - 1) = 0.0;
    Eigen::PartialPivLU<RMat> lu(l);
    phi = lu.solve(rhs.real()).cast<cplx>() + cplx(0, 1) * lu.solve(rhs.imag()).cast<cplx>();
    dphi = g.d1() * phi;
    cplx c = 0.0;
    const RVec& w = g.weights();
    for (int k = 0; k < n; ++k) {
        if (s(k) == 0.0) continue;
        double x = alpha * g.y(k);
        if (x > 700.0) continue;
        c += w(k) * std::sinh(x) / alpha * s(k);
    }
    const double ym = g.y_max(), den = 1.0 - std::exp(-2.0 * alpha * ym);
    for (int j = 0; j < n; ++j) {
        double e = std::exp(-alpha * g.y(j)), f = std::exp(-alpha * (2.0 * ym - g.y(j)));
        phi(j) += c * (e - f) / den;
        dphi(j) -= alpha * c * (e + f) / den;
    }
}

}  // namespace

FastProfile fast_profile(const ModeOperators& ops, Regime regime) {
    const Background& bg = ops.bg();
    const Grid& g = ops.grid();
    const int n = g.size();
    const double eps = ops.eps(), alpha = ops.alpha(), a2 = alpha * alpha;
    const cplx ie(0, eps);
    FastProfile p;
    p.phi.resize(n);
    p.dphi.resize(n);
    p.lap.resize(n);
    p.error.resize(n);
    if (regime == Regime::high) {
        for (int j = 0; j < n; ++j) {
            double y = g.y(j), e = std::exp(-alpha * y);
            p.phi(j) = y * e / (2 * alpha);
            p.dphi(j) = (1 - alpha * y) * e / (2 * alpha);
            p.lap(j) = -e;
            cplx lz = a2 * (1 - bg.ainv(j)) * e + alpha * bg.dainv(j) * e;
            cplx lp = bg.ainv(j) * (p.lap(j) + a2 * p.phi(j)) + bg.dainv(j) * p.dphi(j) - a2 * p.phi(j);
            p.error(j) = ie * lz + bg.u(j) * lp - bg.q(j) * p.phi(j);
        }
        p.dphi0 = p.dphi(0);
        return p;
    }
    const cplx dinv = 1.0 / sublayer_delta(eps);
    Vec s(n), ds(n);
    if (regime == Regime::low) {
        for (int j = 0; j < n; ++j) {
            AiryValue v = airy_ai(dinv * g.y(j));
            s(j) = v.overflow ? 0.0 : v.ai;
            ds(j) = v.overflow ? 0.0 : dinv * v.aip;
        }
    } else {
        for (int j = 0; j < n; ++j) {
            cplx d;
            s(j) = sublayer_profile_W(g.y(j), eps, alpha, &d);
            ds(j) = d;
        }
    }
    decaying_particular(g, alpha, s, p.phi, p.dphi);
    if (regime == Regime::low) {
        cplx c = p.phi(0);
        p.phi /= c;
        p.dphi /= c;
        s /= c;
        ds /= c;
    } else {
        cplx c = p.phi(0);
        const double ym = g.y_max(), den = 1.0 - std::exp(-2.0 * alpha * ym);
        for (int j = 0; j < n; ++j) {
            double e = std::exp(-alpha * g.y(j)), f = std::exp(-alpha * (2.0 * ym - g.y(j)));
            p.phi(j) -= c * (e - f) / den;
            p.dphi(j) += alpha * c * (e + f) / den;
        }
        p.phi(0) = 0.0;
    }
    p.lap = s;
    // Ai'' = zAi removes the fourth derivative: iεδ^{-3} = -1
    const cplx y0 = regime == Regime::middle ? cplx(0, -eps * a2) : cplx(0);
    for (int j = 0; j < n; ++j) {
        double y = g.y(j);
        cplx lz = bg.ainv(j) * (-(y + y0) * s(j) / ie) + bg.dainv(j) * ds(j) - a2 * s(j);
        cplx lp = bg.ainv(j) * (s(j) + a2 * p.phi(j)) + bg.dainv(j) * p.dphi(j) - a2 * p.phi(j);
        p.error(j) = ie * lz + bg.u(j) * lp - bg.q(j) * p.phi(j);
    }
    p.dphi0 = p.dphi(0);
    return p;
}

OSSolution slow_mode(ModeOperators& ops, const IterationControl& ctl) {
    const int n = ops.size();
    Vec phi1 = ops.rayleigh(Vec::Zero(n), 1.0);
    OSSolution t = rayleigh_airy(ops, phi1, Vec::Zero(n), ctl);
    if (!t.converged) throw std::runtime_error("slow mode: Rayleigh-Airy iteration did not settle");
    finalize_os(t, ops, Vec::Zero(n), true);
    OSSolution r = os_remainder_series(t, ops, ctl);
    if (!r.converged) throw std::runtime_error("slow mode: commutator series did not settle");
    OSSolution s;
    s.phi_seed = t.phi_seed;
    s.psi_seed = t.psi_seed;
    s.phi_tilde = t.phi.values;
    s.phi_r = r.phi.values;
    s.history = t.history;
    s.history.insert(s.history.end(), r.history.begin(), r.history.end());
    s.iterations = t.iterations + r.iterations;
    s.ratio = std::max(t.ratio, r.ratio);
    s.phi = ComplexField(ops.grid_ptr(), t.phi.values + r.phi.values);
    s.lam = t.lam + r.lam;
    finalize_os(s, ops, Vec::Zero(n), false);
    s.bc_error = std::max(std::abs(s.phi.values(0) - 1.0), std::abs(s.phi.values(n - 1)));
    if (ops.alpha() < 1.0) {
        s.trace_prediction = solve_rayleigh_homogeneous(ops).c_e / ops.alpha();
    } else {
        s.trace_prediction = -ops.alpha();
    }
    return s;
}

OSSolution fast_mode(ModeOperators& ops, Regime regime, const IterationControl& ctl) {
    const int n = ops.size();
    FastProfile p = fast_profile(ops, regime);
    if (!p.phi.allFinite() || !p.error.allFinite()) throw std::runtime_error("fast mode: Airy evaluation overflow");
    ComplexField rhs(ops.grid_ptr(), -p.error);
    OSSolution r = regime == Regime::high ? solve_os_high_freq(rhs, ops) : solve_os_cns(rhs, ops, ctl);
    OSSolution s;
    s.regime = regime;
    s.phi_tilde = p.phi;
    s.phi_r = r.phi.values;
    s.history = r.history;
    s.iterations = r.iterations;
    s.ratio = r.ratio;
    s.phi = ComplexField(ops.grid_ptr(), p.phi + r.phi.values);
    s.lap = p.lap + r.lap;
    finalize_os(s, ops, Vec::Zero(n), false);
    cplx wall = regime == Regime::low ? cplx(1.0) : cplx(0.0);
    s.bc_error = std::max(std::abs(s.phi.values(0) - wall), std::abs(s.phi.values(n - 1)));
    switch (regime) {
        case Regime::low:
            s.trace_prediction = -fast_trace_constant() * std::polar(std::pow(ops.eps(), -1.0 / 3.0), std::numbers::pi / 6);
            break;
        case Regime::middle: s.trace_prediction = p.dphi0; break;
        case Regime::high: s.trace_prediction = 1.0 / (2.0 * ops.alpha()); break;
    }
    return s;
}

cplx middle_trace_from_antiderivative(double eps, double alpha) {
    using boost::math::quadrature::gauss;
    const double e3 = std::cbrt(eps);
    const cplx y0(0, -eps * alpha * alpha);
    const cplx rot = std::polar(1.0, std::numbers::pi / 6.0);
    const cplx z0 = y0 / e3;
    const cplx a0 = airy_antiderivative(z0);
    const cplx a0p = -rot * airy_ai(rot * z0).ai;
    auto f = [&](double y) { return std::exp(-alpha * y) * airy_antiderivative((y + y0) / e3); };
    // Ai₀ decays like exp(-(2/3)ζ^{3/2}cos(π/4)); 20 panels of width ε^{1/3} reach ~1e-40
    cplx integral = 0.0;
    for (int k = 0; k < 20; ++k) integral += gauss<double, 30>::integrate(f, k * e3, (k + 1) * e3);
    return e3 * a0 / a0p * (1.0 - alpha * integral / a0);
}

}  // namespace cbl
