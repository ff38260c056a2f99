#include "cbl/flow_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "cbl/parallel.hpp"

namespace cbl {

int Domain::samples() const {
    if (nx > 0) return nx;
    int k = 3 * n_max + 3;
    return k + (k % 2);
}

double Domain::y(int k) const { return std::sqrt(nu) * grid->y(k); }
double Domain::x(int j) const { return 2.0 * std::numbers::pi * L * j / samples(); }

ModeCoeffs ModeCoeffs::zeros(int n_max, int ny) {
    ModeCoeffs m;
    m.n_max = n_max;
    m.c.assign(2 * n_max + 1, Vec::Zero(ny));
    return m;
}

ModeCoeffs& ModeCoeffs::operator+=(const ModeCoeffs& o) {
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}

ModeCoeffs& ModeCoeffs::operator-=(const ModeCoeffs& o) {
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
}

ModeCoeffs& ModeCoeffs::operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
}

ModeCoeffs to_modes(const PhysicalField& f, int n_max) {
    const int ny = int(f.rows()), nx = int(f.cols());
    if (nx < 2 * n_max + 1) throw std::invalid_argument("too few x samples for n_max");
    Eigen::FFT<double> fft;
    ModeCoeffs m = ModeCoeffs::zeros(n_max, ny);
    std::vector<double> row(nx);
    std::vector<cplx> out;
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) row[j] = f(k, j);
        fft.fwd(out, row);
        for (int n = -n_max; n <= n_max; ++n) m[n](k) = out[(n + nx) % nx] / double(nx);
    }
    return m;
}

PhysicalField to_physical(const ModeCoeffs& c, int nx) {
    const int ny = int(c.c[0].size());
    Eigen::FFT<double> fft;
    PhysicalField f(ny, nx);
    std::vector<cplx> spec(nx), out;
    for (int k = 0; k < ny; ++k) {
        std::fill(spec.begin(), spec.end(), cplx(0.0));
        for (int n = -c.n_max; n <= c.n_max; ++n) spec[(n + nx) % nx] += c[n](k);
        fft.inv(out, spec);
        for (int j = 0; j < nx; ++j) f(k, j) = out[j].real() * nx;
    }
    return f;
}

ModeCoeffs dx(const ModeCoeffs& c, const Domain& d) {
    ModeCoeffs r = c;
    for (int n = -c.n_max; n <= c.n_max; ++n) r[n] *= cplx(0, d.nhat(n));
    return r;
}

ModeCoeffs dy(const ModeCoeffs& c, const Domain& d) {
    ModeCoeffs r = c;
    const double s = 1.0 / std::sqrt(d.nu);
    for (auto& v : r.c) v = s * (d.grid->d1() * v);
    return r;
}

FlowFields FlowFields::zeros(int n_max, int ny) {
    return {ModeCoeffs::zeros(n_max, ny), ModeCoeffs::zeros(n_max, ny), ModeCoeffs::zeros(n_max, ny)};
}

FlowFields& FlowFields::operator+=(const FlowFields& o) {
    rho += o.rho;
    u += o.u;
    v += o.v;
    return *this;
}

FlowFields& FlowFields::operator-=(const FlowFields& o) {
    rho -= o.rho;
    u -= o.u;
    v -= o.v;
    return *this;
}

namespace {

// ∫|f|² dy
double y_sq(const Domain& d, const Vec& f) {
    double a = l2_norm(*d.grid, f);
    return std::sqrt(d.nu) * a * a;
}

struct Derivs {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;  // squared L²(Ω) norms of ∇^k
};

// one field; derivatives up to order `order`
Derivs derivs(const ModeCoeffs& c, const Domain& d, double scale, int order) {
    const Grid& g = *d.grid;
    const double inv = 1.0 / std::sqrt(d.nu), area = 2.0 * std::numbers::pi * d.L;
    Derivs r;
    for (int n = -c.n_max; n <= c.n_max; ++n) {
        const double k2 = d.nhat(n) * d.nhat(n);
        Vec f = scale * c[n];
        Vec f1 = inv * (g.d1() * f);
        double a0 = y_sq(d, f), a1 = y_sq(d, f1), a2 = 0, a3 = 0;
        if (n != 0) r.s0 += area * a0;
        r.s1 += area * (k2 * a0 + a1);
        if (order >= 2) {
            Vec f2 = inv * (g.d1() * f1);
            a2 = y_sq(d, f2);
            r.s2 += area * (k2 * k2 * a0 + 2 * k2 * a1 + a2);
            if (order >= 3) {
                a3 = y_sq(d, inv * (g.d1() * f2));
                r.s3 += area * (k2 * k2 * k2 * a0 + 3 * k2 * k2 * a1 + 3 * k2 * a2 + a3);
            }
        }
    }
    return r;
}

}  // namespace

double omega_l2(const ModeCoeffs& c, const Domain& d) {
    double s = 0;
    for (int n = -c.n_max; n <= c.n_max; ++n) s += y_sq(d, c[n]);
    return std::sqrt(2.0 * std::numbers::pi * d.L * s);
}

FlowNorms flow_norms(const FlowFields& f, const Domain& d, double rho_scale) {
    const Grid& g = *d.grid;
    const double sn = std::sqrt(d.nu);
    FlowNorms r;
    Vec r0 = rho_scale * f.rho[0];
    r.v0_l1 = sn * g.weights().dot(f.v[0].cwiseAbs());
    r.zero_linf = std::max({r0.cwiseAbs().maxCoeff(), f.u[0].cwiseAbs().maxCoeff(), f.v[0].cwiseAbs().maxCoeff()});
    r.zero_l2 = std::sqrt(y_sq(d, r0) + y_sq(d, f.v[0]));
    Derivs dr = derivs(f.rho, d, rho_scale, 2), du = derivs(f.u, d, 1.0, 3), dv = derivs(f.v, d, 1.0, 3);
    r.nonzero_l2 = std::sqrt(dr.s0 + du.s0 + dv.s0);
    r.grad = std::sqrt(dr.s1 + du.s1 + dv.s1);
    r.hess_uv = std::sqrt(du.s2 + dv.s2);
    r.hess_rho = std::sqrt(dr.s2);
    r.third_uv = std::sqrt(du.s3 + dv.s3);
    const int nx = d.samples();
    ModeCoeffs rs = f.rho;
    rs *= rho_scale;
    r.linf = std::max({to_physical(rs, nx).cwiseAbs().maxCoeff(), to_physical(f.u, nx).cwiseAbs().maxCoeff(),
                       to_physical(f.v, nx).cwiseAbs().maxCoeff()});
    r.norm1 = r.v0_l1 + r.zero_linf + r.zero_l2 + r.nonzero_l2 + std::sqrt(sn) * r.grad +
              std::pow(d.nu, 13.0 / 8.0) * r.hess_uv;
    r.norm2 = r.norm1 + std::pow(d.nu, 13.0 / 8.0) * r.hess_rho + std::pow(d.nu, 21.0 / 8.0) * r.third_uv;
    return r;
}

double force_norm(const ModeCoeffs& f1, const ModeCoeffs& f2, const Domain& d, double s) {
    const Grid& g = *d.grid;
    RVec w(g.size());
    for (int k = 0; k < g.size(); ++k) w(k) = std::pow(1.0 + d.y(k), s);
    double weighted = 0;
    for (const ModeCoeffs* f : {&f1, &f2}) {
        ModeCoeffs c = *f;
        for (auto& v : c.c) v = mul(w, v);
        double a = omega_l2(c, d);
        weighted += a * a;
    }
    Derivs a = derivs(f1, d, 1.0, 2), b = derivs(f2, d, 1.0, 2);
    return std::sqrt(weighted) + std::pow(d.nu, 13.0 / 8.0) * std::sqrt(a.s1 + b.s1) +
           std::pow(d.nu, 21.0 / 8.0) * std::sqrt(a.s2 + b.s2);
}

double wall_divergence(const FlowFields& f, const Domain& d) {
    const int n_max = f.u.n_max;
    ModeCoeffs w = ModeCoeffs::zeros(n_max, 1);
    const double inv = 1.0 / std::sqrt(d.nu);
    for (int n = -n_max; n <= n_max; ++n) {
        cplx dv0 = inv * (d.grid->d1().row(0).cast<cplx>() * f.v[n])(0);
        w[n](0) = cplx(0, d.nhat(n)) * f.u[n](0) + dv0;
    }
    return to_physical(w, d.samples()).cwiseAbs().maxCoeff();
}

LinearNS::LinearNS(BackgroundPtr bg, Domain d, double lambda, LinearSettings cfg)
    : bg_(std::move(bg)), d_(std::move(d)), lambda_(lambda), cfg_(cfg) {
    if (!d_.grid) d_.grid = bg_->grid;
    if (d_.grid != bg_->grid) throw std::invalid_argument("domain and background grids differ");
    if (!(d_.L > 0.0)) throw std::invalid_argument("L must be positive");
    if (d_.n_max < 0) throw std::invalid_argument("n_max must be non-negative");
}

ModeSolver& LinearNS::mode_solver(int n) {
    if (n <= 0) throw std::invalid_argument("mode solvers exist for n ≥ 1");
    auto it = solvers_.find(n);
    if (it == solvers_.end()) {
        ModeSystem s{bg_, d_.nu, lambda_, d_.nhat(n) * std::sqrt(d_.nu)};
        it = solvers_.emplace(n, std::make_unique<ModeSolver>(s, cfg_)).first;
    }
    return *it->second;
}

FlowState LinearNS::solve(const FlowFields& g) {
    const Grid& grid = *d_.grid;
    const int ny = grid.size(), n_max = d_.n_max;
    if (g.rho.n_max != n_max || g.u.n_max != n_max || g.v.n_max != n_max)
        throw std::invalid_argument("data mode count differs from the domain's n_max");
    const double sn = std::sqrt(d_.nu);
    FlowState st;
    st.fields = FlowFields::zeros(n_max, ny);
    st.zero = solve_zero_mode(*bg_, d_.nu, lambda_, g.rho[0], g.u[0], g.v[0]);
    st.fields.rho[0] = st.zero.rho;
    st.fields.u[0] = st.zero.u;
    st.fields.v[0] = st.zero.v;
    st.max_residual = st.zero.residual;
    st.max_bc = st.zero.bc_error;

    // solvers are created up front so the workers only touch their own mode
    std::vector<Triple> data(n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        data[n] = Triple{sn * g.rho[n], sn * g.u[n], sn * g.v[n]};
        if (!(data[n].rho.isZero(0.0) && data[n].u.isZero(0.0) && data[n].v.isZero(0.0))) mode_solver(n);
    }
    std::vector<ModeSolution> sols(n_max + 1);
    std::vector<std::string> errors(n_max + 1);
    parallel_for(n_max, cfg_.jobs, [&](int i) {
        const int n = i + 1;
        ModeSolution& m = sols[n];
        const Triple& f = data[n];
        try {
            if (f.rho.isZero(0.0) && f.u.isZero(0.0) && f.v.isZero(0.0)) {
                m.n = n;
                m.alpha = d_.nhat(n) * sn;
                m.eps = 1.0 / d_.nhat(n);
                m.regime = classify_regime(m.eps, m.alpha, cfg_.thresholds);
                m.t = Triple::zeros(ny);
                m.slip = m.t;
            } else {
                m = solvers_.at(n)->solve(f, n);
            }
        } catch (const std::exception& e) {
            errors[n] = e.what();
        }
    });
    for (int n = 1; n <= n_max; ++n) {
        if (!errors[n].empty()) throw std::runtime_error("mode n = " + std::to_string(n) + ": " + errors[n]);
        ModeSolution& m = sols[n];
        st.fields.rho[n] = m.t.rho;
        st.fields.u[n] = m.t.u;
        st.fields.v[n] = m.t.v;
        st.fields.rho[-n] = m.t.rho.conjugate();
        st.fields.u[-n] = m.t.u.conjugate();
        st.fields.v[-n] = m.t.v.conjugate();
        st.max_residual = std::max(st.max_residual, m.residual);
        st.max_bc = std::max(st.max_bc, m.bc_error);
        st.modes.push_back(std::move(m));
    }
    st.norms = flow_norms(st.fields, d_, 1.0 / (bg_->m * bg_->m));
    st.mass = 2.0 * std::numbers::pi * d_.L * std::abs(st.zero.mass);
    double div0 = wall_divergence(st.fields, d_);
    double dvmax = to_physical(dy(st.fields.v, d_), d_.samples()).cwiseAbs().maxCoeff();
    st.wall_div = dvmax > 0 ? div0 / dvmax : div0;
    // continuity at the wall reduces to div(u,v) = g_ρ there
    PhysicalField grho = to_physical(g.rho, d_.samples());
    PhysicalField div = to_physical(dx(st.fields.u, d_), d_.samples()) + to_physical(dy(st.fields.v, d_), d_.samples());
    double gap = (div.row(0) - grho.row(0)).cwiseAbs().maxCoeff();
    double ref = std::max(dvmax, grho.row(0).cwiseAbs().maxCoeff());
    st.wall_identity = ref > 0 ? gap / ref : gap;
    return st;
}

FlowState LinearNS::solve_physical(const PhysicalField& g_rho, const PhysicalField& g_u, const PhysicalField& g_v) {
    FlowFields g{to_modes(g_rho, d_.n_max), to_modes(g_u, d_.n_max), to_modes(g_v, d_.n_max)};
    return solve(g);
}

}  // namespace cbl
