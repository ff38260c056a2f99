#include "cbl/sweep.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cbl/airy_solvers.hpp"
#include "cbl/config.hpp"
#include "cbl/orr_sommerfeld.hpp"
#include "cbl/parallel.hpp"
#include "cbl/stokes.hpp"

namespace cbl {

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 3) throw std::invalid_argument("insufficient points");
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit: log of non-positive value");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) mx += lx[i], my += ly[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (ly[i] - my);
    if (sxx == 0.0) throw std::invalid_argument("fit: all abscissae equal");
    SlopeFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (int i = 0; i < n; ++i) {
        double r = ly[i] - f.intercept - f.slope * lx[i];
        ss += r * r;
    }
    f.std_err = std::sqrt(ss / (n - 2) / sxx);
    boost::math::students_t t(n - 2);
    double q = boost::math::quantile(boost::math::complement(t, 0.025));
    f.lo = f.slope - q * f.std_err;
    f.hi = f.slope + q * f.std_err;
    return f;
}

double SweepRecord::get(const std::string& name) const {
    for (auto& [k, v] : columns)
        if (k == name) return v;
    throw std::out_of_range("no column '" + name + "'");
}

bool SweepResult::pass() const {
    return std::all_of(fits.begin(), fits.end(), [](const TrackedFit& f) { return f.pass; });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double data_norm(const FlowFields& g, const Domain& d) {
    double sn = std::sqrt(d.nu);
    return omega_l2(g.rho, d) + omega_l2(g.u, d) + omega_l2(g.v, d) +
           sn * (omega_l2(dx(g.rho, d), d) + omega_l2(dy(g.rho, d), d));
}

SweepRecord nu_point(const RunConfig& base, double nu) {
    RunConfig c = base;
    c.nu = nu;
    if (c.data == "zero") c.data = "gaussian";
    auto t0 = Clock::now();
    Domain d = make_domain(c, make_grid(c));
    LinearNS lin(make_background(make_profile(c), d.grid), d, c.lambda, linear_settings(c));
    FlowFields g = make_data(c, d, c.seed);
    FlowState st = lin.solve(g);
    double dn = data_norm(g, d);
    int iters = 0;
    for (auto& m : st.modes) iters = std::max(iters, m.slip_iterations);
    SweepRecord r;
    r.columns = {{"nu", nu},
                 {"inv_nu", 1.0 / nu},
                 {"data_norm", dn},
                 {"grad_ratio", st.norms.grad / dn},
                 {"hess_ratio", st.norms.hess_uv / dn},
                 {"norm1", st.norms.norm1},
                 {"residual", st.max_residual},
                 {"bc_error", st.max_bc},
                 {"wall_identity", st.wall_identity},
                 {"iterations", double(iters)},
                 {"wall_time", seconds_since(t0)}};
    r.ok = st.max_residual <= c.tol_res && st.max_bc <= c.tol_bc;
    return r;
}

SweepRecord eps_point(const RunConfig& c, double eps) {
    auto t0 = Clock::now();
    auto g = make_grid(c);
    ModeOperators ops(make_background(make_profile(c), g), eps, c.alpha);
    Vec h(g->size());
    for (int k = 0; k < g->size(); ++k) h(k) = cplx(std::exp(-g->y(k)), 0.3 * g->y(k) * std::exp(-g->y(k)));
    AirySolution a = solve_tilde_airy(ComplexField(g, h), ops);
    Vec lap = apply_laplace(*g, c.alpha, a.psi.values);
    lap(0) = lap(g->size() - 1) = 0;  // boundary rows carry the conditions
    double hn = l2_norm(*g, h);
    SweepRecord r;
    r.columns = {{"eps", eps},
                 {"inv_eps", 1.0 / eps},
                 {"alpha", c.alpha},
                 {"psi_ratio", a.norms.l2 / hn},
                 {"lap_ratio", l2_norm(*g, lap) / hn},
                 {"residual", a.residual},
                 {"bc_error", a.bc_error},
                 {"wall_time", seconds_since(t0)}};
    r.ok = a.residual <= c.tol_res && a.bc_error <= c.tol_bc;
    return r;
}

SweepRecord alpha_point(const RunConfig& c, double alpha) {
    auto t0 = Clock::now();
    auto g = make_grid(c);
    ModeOperators ops(make_background(make_profile(c), g), c.eps, alpha);
    Vec f(g->size());
    for (int k = 0; k < g->size(); ++k) {
        double y = g->y(k);
        f(k) = cplx(1, 0.5) * y * std::exp(-y) + 0.3 * y * y * std::exp(-2 * y);
    }
    OSSolution s = solve_os_high_freq(ComplexField(g, f), ops, 1.0 / c.kappa_hat0);
    const Vec& phi = s.phi.values;
    double gx = l2_norm(*g, Vec(g->d1() * phi)), gy = alpha * l2_norm(*g, phi);
    SweepRecord r;
    r.columns = {{"alpha", alpha},
                 {"eps", c.eps},
                 {"grad_ratio", std::hypot(gx, gy) / l2_norm(*g, f)},
                 {"residual", s.residual},
                 {"bc_error", s.bc_error},
                 {"wall_time", seconds_since(t0)}};
    r.ok = s.residual <= c.tol_res && s.bc_error <= c.tol_bc;
    return r;
}

SweepRecord l_point(const RunConfig& c, double L) {
    auto t0 = Clock::now();
    auto g = make_grid(c);
    const double nhat = c.mode / L;
    ModeSystem s{make_background(make_profile(c), g), c.nu, c.lambda, nhat * std::sqrt(c.nu)};
    Triple q{Vec(g->size()), Vec(g->size()), Vec(g->size())};
    for (int k = 0; k < g->size(); ++k) {
        double y = g->y(k);
        q.rho(k) = std::exp(-y * y);
        q.u(k) = y * std::exp(-y);
        q.v(k) = cplx(0, 0.5) * y * y * std::exp(-y);
    }
    StokesSolution sol = solve_stokes(q, s);
    StokesEstimate e = stokes_estimate(s, sol.t, q);
    double uv = std::hypot(l2_norm(*g, sol.t.u), l2_norm(*g, sol.t.v));
    SweepRecord r;
    r.columns = {{"L", L},
                 {"nhat", nhat},
                 {"alpha", s.alpha},
                 {"velocity_ratio", uv / e.data},
                 {"density_ratio", e.density / e.data},
                 {"residual", sol.residual},
                 {"bc_error", sol.bc_error},
                 {"wall_time", seconds_since(t0)}};
    r.ok = sol.residual <= c.tol_res;
    return r;
}

std::vector<SweepRecord> mach_points(const RunConfig& c) {
    std::vector<double> m = c.sweep_values;
    std::sort(m.rbegin(), m.rend());
    auto t0 = Clock::now();
    auto g = make_grid(c);
    LowMachSetup setup{make_profile(c), make_domain(c, g), c.lambda, linear_settings(c), picard_settings(c),
                       c.mach_reference};
    LowMachReport rep = low_mach_compare(m, make_force(c, setup.domain), setup);
    double t = seconds_since(t0);
    std::vector<SweepRecord> rows;
    for (size_t i = 0; i < m.size(); ++i) {
        SweepRecord r;
        r.columns = {{"m", m[i]},
                     {"m_ref", rep.m_ref},
                     {"diff_norm", rep.diff_norm[i]},
                     {"diff_linf", rep.diff_linf[i]},
                     {"solution_norm", rep.solution_norm[i]},
                     {"wall_time", t / m.size()}};
        rows.push_back(r);
    }
    return rows;
}

TrackedFit track(const std::vector<SweepRecord>& rows, const std::string& q, const std::string& x, double p,
                 bool two_sided = false) {
    std::vector<double> xs, ys;
    for (auto& r : rows)
        if (r.ok) xs.push_back(r.get(x)), ys.push_back(r.get(q));
    TrackedFit t;
    t.quantity = q;
    t.against = x;
    t.exponent = p;
    t.two_sided = two_sided;
    t.fit = fit_loglog(xs, ys);
    t.pass = two_sided ? std::abs(t.fit.slope - p) <= 0.3 : t.fit.slope <= p + 0.15;
    return t;
}

}  // namespace

SweepResult run_sweep(const RunConfig& c, int jobs) {
    validate(c);
    if (c.sweep_values.size() < 3) throw std::invalid_argument("insufficient points");
    SweepResult res;
    res.axis = c.sweep_axis;
    const auto& v = c.sweep_values;
    if (c.sweep_axis == "m") {
        res.records = mach_points(c);
        res.fits.push_back(track(res.records, "diff_norm", "m", 2.0, true));
        return res;
    }
    std::function<SweepRecord(double)> point;
    if (c.sweep_axis == "nu") point = [&](double x) { return nu_point(c, x); };
    if (c.sweep_axis == "eps") point = [&](double x) { return eps_point(c, x); };
    if (c.sweep_axis == "alpha") point = [&](double x) { return alpha_point(c, x); };
    if (c.sweep_axis == "L") point = [&](double x) { return l_point(c, x); };
    res.records.resize(v.size());
    parallel_for(int(v.size()), jobs, [&](int i) {
        try {
            res.records[i] = point(v[i]);
        } catch (const std::exception& e) {
            res.records[i].columns = {{c.sweep_axis, v[i]}};
            res.records[i].ok = false;
            res.records[i].error = e.what();
        }
    });
    // growth bounds as the small parameter decreases are fitted against its inverse
    if (c.sweep_axis == "nu") {
        res.fits.push_back(track(res.records, "grad_ratio", "inv_nu", 0.5));
        res.fits.push_back(track(res.records, "hess_ratio", "inv_nu", 13.0 / 8.0));
    } else if (c.sweep_axis == "eps") {
        res.fits.push_back(track(res.records, "psi_ratio", "inv_eps", 1.0 / 3.0));
        res.fits.push_back(track(res.records, "lap_ratio", "inv_eps", 1.0));
    } else if (c.sweep_axis == "alpha") {
        res.fits.push_back(track(res.records, "grad_ratio", "alpha", -3.0));
    } else {
        res.fits.push_back(track(res.records, "velocity_ratio", "nhat", -2.0 / 3.0));
    }
    return res;
}

void write_records_csv(const std::vector<SweepRecord>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f.precision(10);
    // header from the widest row, failed points keep only the parameter
    const SweepRecord* head = nullptr;
    for (auto& r : rows)
        if (!head || r.columns.size() > head->columns.size()) head = &r;
    if (!head) return;
    for (auto& [k, v] : head->columns) f << k << ",";
    f << "ok,error\n";
    for (auto& r : rows) {
        for (auto& [k, v] : head->columns) {
            auto it = std::find_if(r.columns.begin(), r.columns.end(), [&](auto& p) { return p.first == k; });
            if (it != r.columns.end()) f << it->second;
            f << ",";
        }
        f << (r.ok ? 1 : 0) << ",\"" << r.error << "\"\n";
    }
}

void write_fits_csv(const std::vector<TrackedFit>& fits, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f.precision(10);
    f << "quantity,against,bound_exponent,rule,slope,lo,hi,points,pass\n";
    for (auto& t : fits)
        f << t.quantity << "," << t.against << "," << t.exponent << "," << (t.two_sided ? "rate" : "envelope") << ","
          << t.fit.slope << "," << t.fit.lo << "," << t.fit.hi << "," << t.fit.points << "," << (t.pass ? 1 : 0)
          << "\n";
}

}  // namespace cbl
