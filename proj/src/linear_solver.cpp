#include "cbl/linear_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbl {

namespace {

Triple stretching_data(const ModeSystem& s, const Vec& v) {
    const int n = s.size();
    return {Vec::Zero(n), -mul(s.bg->du, v), Vec::Zero(n)};
}

}  // namespace

cplx mixing_coefficient(cplx u_slip0, cplx u_b0) {
    using ld = std::complex<long double>;
    ld a(u_slip0.real(), u_slip0.imag()), b(u_b0.real(), u_b0.imag());
    ld c = a / b;
    return {double(c.real()), double(c.imag())};
}

double corrector_floor(Regime r, double eps, double alpha) {
    switch (r) {
        case Regime::low: return 0.25 * (1.0 / alpha + 1.0 / std::cbrt(eps));
        case Regime::middle: return 0.1 * std::cbrt(eps);
        case Regime::high: return 0.9 / (4.0 * alpha);
    }
    return 0.0;
}

ModeSolver::ModeSolver(ModeSystem s, LinearSettings cfg)
    : s_(std::move(s)),
      cfg_(cfg),
      regime_(classify_regime(s_.eps(), s_.alpha, cfg_.thresholds)),
      ops_(s_.bg, s_.eps(), s_.alpha),
      stokes_(s_) {}

SlipSolution ModeSolver::qc_stokes(const Triple& f) {
    const Grid& g = s_.grid();
    SlipSolution out;
    out.regime = regime_;
    StokesSolution st = stokes_.solve(f);
    Triple sum = Triple::zeros(s_.size());
    int up = 0;
    for (int k = 0; k < cfg_.max_iter; ++k) {
        Triple d = st.t;
        FluidTriple q;
        Triple qd = stretching_data(s_, st.t.v);
        bool zero_q = l2_norm(g, qd) == 0.0;
        if (!zero_q) {
            q = solve_qc_inhomogeneous(s_, ops_, qd.u, qd.v, cfg_.thresholds, cfg_.os);
            d += q.t;
        }
        sum += d;
        double inc = l2_norm(g, d);
        out.history.push_back(inc);
        out.iterations = k + 1;
        if (k > 0) {
            double r = inc / out.history[k - 1];
            out.ratio = std::max(out.ratio, r);
            up = r >= 1.0 ? up + 1 : 0;
            if (up >= 3) throw std::runtime_error("QC-Stokes iteration diverges (α = " + std::to_string(s_.alpha) + ")");
        }
        double total = l2_norm(g, sum);
        if (zero_q || inc <= cfg_.tol_iter * total) break;
        if (k + 1 == cfg_.max_iter) throw std::runtime_error("QC-Stokes iteration: max_iter exceeded");
        Triple e = qc_error(s_, q.t);
        st = stokes_.solve(-1.0 * e);
    }
    out.t = std::move(sum);
    out.residual = system_residual(s_, Variant::full, out.t, f);
    out.bc_error = std::abs(out.t.v(0));
    return out;
}

SlipSolution ModeSolver::slip_high_freq(const Triple& f) {
    if (!slip_hf_) slip_hf_ = std::make_unique<DenseModeSolver>(s_, Variant::full, WallBC::slip);
    SlipSolution out;
    out.regime = Regime::high;
    out.t = slip_hf_->solve(f);
    out.iterations = 1;
    out.residual = system_residual(s_, Variant::full, out.t, f);
    out.bc_error = std::max(std::abs(out.t.v(0)), std::abs((s_.grid().d1() * out.t.u)(0)));
    return out;
}

SlipSolution ModeSolver::solve_slip(const Triple& f) {
    return regime_ == Regime::high ? slip_high_freq(f) : qc_stokes(f);
}

const Corrector& ModeSolver::corrector() {
    if (corr_) return *corr_;
    Corrector c;
    c.regime = regime_;
    c.h = homogeneous_qc(s_, ops_, regime_, cfg_.os);
    Triple e = qc_error(s_, c.h.t);
    SlipSolution r = solve_slip(-1.0 * e);
    c.r = r.t;
    c.b = c.h.t + c.r;
    c.u0 = c.b.u(0);
    c.residual = system_residual(s_, Variant::full, c.b, Triple::zeros(s_.size()));
    c.bc_error = std::abs(c.b.v(0));
    double floor = corrector_floor(regime_, s_.eps(), s_.alpha);
    if (!(std::abs(c.u0) >= floor))
        throw std::runtime_error("boundary corrector trace |u_b(0)| = " + std::to_string(std::abs(c.u0)) +
                                 " below the regime floor " + std::to_string(floor));
    corr_ = std::move(c);
    return *corr_;
}

ModeSolution ModeSolver::solve(const Triple& f, int n) {
    ModeSolution m;
    m.n = n;
    m.alpha = s_.alpha;
    m.eps = s_.eps();
    m.regime = regime_;
    SlipSolution sl = solve_slip(f);
    m.slip = sl.t;
    m.slip_iterations = sl.iterations;
    m.slip_ratio = sl.ratio;
    m.u_slip0 = sl.t.u(0);
    if (m.u_slip0 == cplx(0.0)) {
        m.t = sl.t;
    } else {
        const Corrector& c = corrector();
        m.u_b0 = c.u0;
        m.mix = mixing_coefficient(m.u_slip0, c.u0);
        m.t = sl.t - m.mix * c.b;
    }
    m.residual = system_residual(s_, Variant::full, m.t, f);
    m.bc_error = std::max(std::abs(m.t.u(0)), std::abs(m.t.v(0)));
    return m;
}

}  // namespace cbl
