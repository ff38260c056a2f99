#include "cbl/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>

#include "cbl/airy_solvers.hpp"
#include "cbl/modes.hpp"
#include "cbl/orr_sommerfeld.hpp"
#include "cbl/quasi_compressible.hpp"
#include "cbl/rayleigh.hpp"
#include "cbl/special_functions.hpp"
#include "cbl/stokes.hpp"
#include "cbl/sweep.hpp"
#include "json.hpp"

namespace cbl {

bool CriterionReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool VerifyReport::pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionReport& c) { return c.pass(); });
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Check at_most(const std::string& name, double v, double lim, std::string note = "") {
    return {name, v, lim, v <= lim, std::move(note)};
}
Check at_least(const std::string& name, double v, double lim, std::string note = "") {
    return {name, v, lim, v >= lim, std::move(note)};
}

// smooth decaying random profile; a factor 1 - e^{-2Y} makes it vanish at the wall
struct RandomSmooth {
    std::mt19937_64 rng;
    explicit RandomSmooth(std::uint64_t seed) : rng(seed) {}
    Vec operator()(const Grid& g, bool vanish_at_wall = true) {
        std::uniform_real_distribution<double> ud(0.3, 1.5), ph(-1.0, 1.0);
        double a = ud(rng), b = ud(rng), c = ud(rng);
        cplx k1(ph(rng), ph(rng)), k2(ph(rng), ph(rng)), k3(ph(rng), ph(rng));
        Vec v(g.size());
        for (int j = 0; j < g.size(); ++j) {
            double y = g.y(j);
            cplx s = k1 * std::exp(-a * y) + k2 * y * std::exp(-b * y) +
                     k3 * std::sin(c * y) * std::exp(-0.5 * (y - 2) * (y - 2));
            v(j) = vanish_at_wall ? s * (1 - std::exp(-2 * y)) : s;
        }
        return v;
    }
    Triple triple(const Grid& g) { return {(*this)(g), (*this)(g), (*this)(g)}; }
};

double rel(const Grid& g, const Vec& a, const Vec& b) { return l2_norm(g, Vec(a - b)) / l2_norm(g, b); }
double rel(const Grid& g, const Triple& a, const Triple& b) { return l2_norm(g, a - b) / l2_norm(g, b); }

// tracks the worst residual and trace of one solver over the samples
struct Worst {
    double res = 0, bc = 0;
    void add(double r, double b) {
        res = std::max(res, std::isfinite(r) ? r : INFINITY);
        bc = std::max(bc, std::isfinite(b) ? b : INFINITY);
    }
};

CriterionReport criterion(int id, std::string key) {
    CriterionReport r;
    r.id = id;
    r.key = std::move(key);
    return r;
}

// mode tuples (α at the configured ν) covering the three regimes
std::vector<double> mode_alphas() { return {1.0, 1.58, 4.0, 8.0, 20.0, 40.0}; }

}  // namespace

CriterionReport verify_residuals(const RunConfig& c) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(1, "residuals");
    auto g = make_grid(c);
    auto bg = make_background(make_profile(c), g);
    RandomSmooth rs(c.seed);
    const int n = c.verify_samples;
    std::map<std::string, Worst> w;
    std::vector<std::string> order;
    auto add = [&](const std::string& k, double r, double b) {
        if (!w.count(k)) order.push_back(k);
        w[k].add(r, b);
    };
    const LinearSettings ls = linear_settings(c);

    const double ray_alpha[] = {0.5, 1.0, 2.0, 4.0};
    const std::pair<double, double> os_tuples[] = {{1e-3, 0.3}, {1e-4, 1.0}, {1e-3, 10.0}, {1e-4, 30.0}, {1e-3, 40.0},
                                                   {1e-3, 100.0}};
    std::vector<std::unique_ptr<ModeSolver>> modes;
    for (double a : mode_alphas()) modes.push_back(std::make_unique<ModeSolver>(ModeSystem{bg, c.nu, c.lambda, a}, ls));

    for (int i = 0; i < n; ++i) {
        {
            ModeOperators ops(bg, 1e-3, ray_alpha[i % 4]);
            auto s = solve_rayleigh_inhomogeneous(ComplexField(g, rs(*g)), ops);
            add("rayleigh", s.residual, s.bc_error);
        }
        {
            ModeOperators ops(bg, i % 2 ? 1e-4 : 1e-3, 1.0);
            auto a = solve_tilde_airy(ComplexField(g, rs(*g)), ops);
            add("tilde_airy", a.residual, a.bc_error);
            auto b = solve_classical_airy_neumann(ComplexField(g, rs(*g)), ops);
            add("classical_airy_neumann", b.residual, b.bc_error);
        }
        {
            auto [eps, alpha] = os_tuples[i % 6];
            ModeOperators ops(bg, eps, alpha);
            Regime r = classify_regime(eps, alpha, ls.thresholds);
            ComplexField f(g, rs(*g));
            auto s = r == Regime::high ? solve_os_high_freq(f, ops, 1.0 / c.kappa_hat0) : solve_os_cns(f, ops, ls.os);
            add("orr_sommerfeld_" + to_string(r), s.residual, s.bc_error);
        }
        {
            double a = mode_alphas()[i % 6];
            ModeSystem s{bg, c.nu, c.lambda, a};
            ModeOperators ops(bg, s.eps(), a);
            auto q = solve_qc_inhomogeneous(s, ops, rs(*g), rs(*g), ls.thresholds, ls.os);
            add("quasi_compressible", q.residual, q.bc_error);
            auto st = solve_stokes(rs.triple(*g), s);
            add("stokes", st.residual, st.bc_error);
        }
        {
            auto m = modes[i % modes.size()]->solve(rs.triple(*g));
            add("linear_mode", m.residual, m.bc_error);
        }
        {
            auto z = solve_zero_mode(*bg, c.nu, c.lambda, rs(*g, false), rs(*g), rs(*g, false));
            add("zero_mode", z.residual, z.bc_error);
        }
    }
    double worst_res = 0, worst_bc = 0;
    for (auto& k : order) {
        rep.checks.push_back(at_most(k + " residual", w[k].res, c.tol_res));
        rep.checks.push_back(at_most(k + " wall trace", w[k].bc, c.tol_bc));
        worst_res = std::max(worst_res, w[k].res);
        worst_bc = std::max(worst_bc, w[k].bc);
    }
    rep.seconds = since(t0);
    rep.checks.push_back(at_most("runtime [s]", rep.seconds, 300.0));
    rep.constants = {{"worst_residual", worst_res}, {"worst_trace", worst_bc}};
    return rep;
}

CriterionReport verify_oracles(const RunConfig& c) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(2, "oracles");
    auto g = make_grid(c);
    auto bg = make_background(make_profile(c), g);
    RandomSmooth rs(c.seed + 1);
    const LinearSettings ls = linear_settings(c);
    const double tol = 1e-6;
    double worst = 0;
    int tuples = 0;
    for (auto [eps, alpha] : {std::pair{1e-3, 0.3}, {1e-4, 1.0}, {1e-5, 0.5}, {1e-3, 10.0}, {1e-4, 30.0}}) {
        ModeOperators ops(bg, eps, alpha);
        ComplexField f(g, rs(*g));
        auto it = solve_os_symmetrized(f, ops, ls.os);
        auto dn = solve_os_symmetrized_direct(f, ops);
        double d = rel(*g, it.phi.values, dn.phi.values);
        Regime r = classify_regime(eps, alpha, ls.thresholds);
        char name[96];
        std::snprintf(name, sizeof name, "Rayleigh-Airy vs dense, eps=%g alpha=%g (%s)", eps, alpha, to_string(r).c_str());
        rep.checks.push_back(at_most(name, d, tol));
        worst = std::max(worst, d);
        ++tuples;
    }
    for (double a : mode_alphas()) {
        ModeSystem s{bg, c.nu, c.lambda, a};
        ModeSolver ms(s, ls);
        Triple f = rs.triple(*g);
        SlipSolution sl = ms.solve_slip(f);
        Triple pinned = DenseModeSolver(s, Variant::full, WallBC::pinned_u).solve(f, sl.t.u(0));
        double d1 = rel(*g, sl.t, pinned);
        ModeSolution m = ms.solve(f);
        Triple ns = DenseModeSolver(s, Variant::full, WallBC::no_slip).solve(f);
        double d2 = rel(*g, m.t, ns);
        char n1[96], n2[96];
        std::snprintf(n1, sizeof n1, "slip solve vs dense, alpha=%g (%s)", a, to_string(ms.regime()).c_str());
        std::snprintf(n2, sizeof n2, "no-slip mode vs dense, alpha=%g (%s)", a, to_string(ms.regime()).c_str());
        rep.checks.push_back(at_most(n1, d1, tol));
        rep.checks.push_back(at_most(n2, d2, tol));
        worst = std::max({worst, d1, d2});
        tuples += 2;
    }
    rep.checks.push_back(at_least("parameter tuples", tuples, 10));
    rep.constants = {{"worst_oracle_gap", worst}};
    rep.seconds = since(t0);
    return rep;
}

CriterionReport verify_traces(const RunConfig& c) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(3, "traces");
    auto g = make_grid(c);
    auto bg = make_background(make_profile(c), g);
    const LinearSettings ls = linear_settings(c);
    for (double alpha : {30.0, 100.0}) {
        ModeOperators ops(bg, 1e-3, alpha);
        FastProfile fp = fast_profile(ops, Regime::high);
        double gap = std::abs(fp.dphi0 - 1.0 / (2.0 * alpha)) * 2.0 * alpha;
        OSSolution s = fast_mode(ops, Regime::high, ls.os);
        double lower = std::abs(s.dphi0) * 4.0 * alpha;
        char n1[80], n2[80];
        std::snprintf(n1, sizeof n1, "leading profile trace 2a|phi'(0)| - 1, alpha=%g", alpha);
        std::snprintf(n2, sizeof n2, "fast mode 4a|phi'(0)|, alpha=%g", alpha);
        rep.checks.push_back(at_most(n1, gap, 1e-12));
        rep.checks.push_back(at_least(n2, lower, 1.0));
        rep.constants.push_back({std::string("fast_trace_4a_") + std::to_string(int(alpha)), lower});
    }
    const double k = fast_trace_constant();
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        ModeOperators ops(bg, eps, 0.3);
        OSSolution s = fast_mode(ops, Regime::low, ls.os);
        double t = std::cbrt(eps) * std::abs(s.dphi0) / k;
        char n[80];
        std::snprintf(n, sizeof n, "low trace eps^(1/3)|phi'(0)| / constant - 1, eps=%g", eps);
        rep.checks.push_back(at_most(n, std::abs(t - 1.0), 0.1));
        char key[40];
        std::snprintf(key, sizeof key, "low_trace_ratio_%g", eps);
        rep.constants.push_back({key, t});
    }
    rep.seconds = since(t0);
    return rep;
}

CriterionReport verify_scaling(const RunConfig& c, int jobs) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(4, "scaling");
    struct Axis {
        const char* name;
        std::vector<double> values;
    };
    for (const Axis& ax : {Axis{"eps", {1e-3, 1e-4, 1e-5}}, Axis{"alpha", {40, 80, 160}}, Axis{"L", {0.04, 0.02, 0.01}},
                           Axis{"nu", {1e-3, 3e-4, 1e-4}}}) {
        RunConfig sc = c;
        sc.sweep_axis = ax.name;
        sc.sweep_values = ax.values;
        SweepResult r = run_sweep(sc, jobs);
        for (auto& f : r.fits) {
            std::string n = f.quantity + " vs " + f.against + " (" + ax.name + "-sweep) slope - bound";
            // envelope: slope ≤ bound + 0.15
            rep.checks.push_back(at_most(n, f.fit.slope - f.exponent, 0.15));
            rep.constants.push_back({std::string(ax.name) + ":" + f.quantity + "_slope", f.fit.slope});
        }
        for (auto& rec : r.records)
            if (!rec.ok) rep.checks.push_back({std::string(ax.name) + " point failed", 1, 0, false, rec.error});
    }
    rep.seconds = since(t0);
    return rep;
}

CriterionReport verify_structure(const RunConfig& c) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(5, "structure");
    auto g = make_grid(c);
    auto bg = make_background(make_profile(c), g);
    RandomSmooth rs(c.seed + 2);
    const LinearSettings ls = linear_settings(c);

    // zero mass for data with ∫g_ρ = 0 on the grid quadrature
    double mass_generic = 0, mass_gv0 = 0, mass_identity = 0;
    RVec w = (-g->nodes()).array().exp().matrix();
    for (int i = 0; i < 5; ++i) {
        Vec h = rs(*g, false);
        Vec grho = h - (g->integrate(h) / g->integrate(w)) * w.cast<cplx>();
        // extra e^{-Y} keeps the moments free of truncation at Y_max
        Vec gu = rs(*g), gv = mul(w, rs(*g, false)), zero = Vec::Zero(g->size());
        auto zg = solve_zero_mode(*bg, c.nu, c.lambda, grho, gu, gv);
        auto zg0 = solve_zero_mode(*bg, c.nu, c.lambda, grho, gu, zero);
        mass_generic = std::max(mass_generic, std::abs(zg.mass));
        mass_gv0 = std::max(mass_gv0, std::abs(zg0.mass));
        mass_identity = std::max(mass_identity, std::abs(zg.mass - zg.mass_predicted) / std::abs(zg.mass_predicted));
    }
    rep.checks.push_back(at_most("zero mass, massless g_rho and g_v = 0", mass_gv0, c.tol_mass));
    rep.checks.push_back(at_most("zero mass, massless g_rho and generic g_v", mass_generic, c.tol_mass,
                                 "closed form gives m^2 * first moment of g_v"));
    rep.checks.push_back(at_most("zero mass matches closed form", mass_identity, 1e-8));

    // no-slip traces after mixing
    double trace = 0, wall_identity = 0, conj_gap = 0;
    for (double a : mode_alphas()) {
        ModeSystem s{bg, c.nu, c.lambda, a};
        ModeSolver ms(s, ls);
        for (int i = 0; i < 3; ++i) {
            ModeSolution m = ms.solve(rs.triple(*g));
            trace = std::max(trace, std::abs(m.t.u(0)) / std::abs(m.u_slip0));
        }
        // conjugate symmetry: mode -n solves the conjugate problem
        Triple f = rs.triple(*g);
        Triple x = DenseModeSolver(s, Variant::full, WallBC::no_slip).solve(f);
        ModeSystem sm = s;
        sm.alpha = -a;
        Triple xm = DenseModeSolver(sm, Variant::full, WallBC::no_slip)
                        .solve({f.rho.conjugate(), f.u.conjugate(), f.v.conjugate()});
        Triple xc{x.rho.conjugate(), x.u.conjugate(), x.v.conjugate()};
        conj_gap = std::max(conj_gap, rel(*g, xm, xc));
    }
    rep.checks.push_back(at_most("no-slip trace |u(0)|/|u_slip(0)| after mixing", trace, 1e-10));

    // wall identity on a full linear solve with random real data
    RunConfig rc = c;
    rc.data = "random";
    rc.data_modes.clear();
    for (int n = 1; n <= c.n_max; ++n) rc.data_modes.push_back(n);
    Domain d = make_domain(rc, g);
    LinearNS lin(bg, d, c.lambda, ls);
    FlowState st = lin.solve(make_data(rc, d, c.seed + 3));
    wall_identity = st.wall_identity;
    rep.checks.push_back(at_most("wall divergence identity div(u,v) = g_rho at y = 0", wall_identity, 1e-8));
    rep.checks.push_back(at_most("conjugate mode symmetry", conj_gap, 1e-12));
    rep.constants = {{"generic_zero_mass", mass_generic}};
    rep.seconds = since(t0);
    return rep;
}

CriterionReport verify_contraction(const RunConfig& c) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(6, "contraction");
    auto g = make_grid(c);
    Domain d = make_domain(c, g);
    LinearNS lin(make_background(make_profile(c), g), d, c.lambda, linear_settings(c));
    PicardState ps = picard_solve(lin, make_force(c, d), picard_settings(c));
    rep.seconds = since(t0);
    rep.checks.push_back(at_least("converged", ps.converged ? 1 : 0, 1));
    rep.checks.push_back(at_most("largest increment ratio", ps.max_ratio, 0.5));
    rep.checks.push_back(at_most("nonlinear residual", ps.residual, c.tol_nl));
    rep.checks.push_back(at_most("wall divergence of the fixed point", ps.state.wall_div, 1e-8));
    rep.checks.push_back(at_most("runtime [s]", rep.seconds, 600.0));
    rep.constants = {{"max_ratio", ps.max_ratio}, {"iterations", double(ps.iterations)},
                     {"solution_norm", ps.state.norms.norm2}};
    return rep;
}

CriterionReport verify_low_mach(const RunConfig& c) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(7, "low_mach");
    RunConfig mc = c;
    mc.sweep_axis = "m";
    mc.sweep_values = {0.4, 0.2, 0.1};
    SweepResult r = run_sweep(mc);
    const TrackedFit& f = r.fits.front();
    rep.checks.push_back(at_least("low-Mach exponent lower", f.fit.slope, 1.7));
    rep.checks.push_back(at_most("low-Mach exponent upper", f.fit.slope, 2.3));
    rep.constants = {{"low_mach_slope", f.fit.slope}};
    rep.seconds = since(t0);
    return rep;
}

namespace {

// an exception inside one criterion fails that criterion only
template <class F>
CriterionReport guarded(int id, const std::string& key, F&& f) {
    auto t0 = Clock::now();
    try {
        return f();
    } catch (const std::exception& e) {
        CriterionReport rep = criterion(id, key);
        Check ch;
        ch.name = "completed without error";
        ch.measured = 1;
        ch.limit = 0;
        ch.pass = false;
        ch.note = e.what();
        rep.checks.push_back(ch);
        rep.seconds = since(t0);
        return rep;
    }
}

const std::vector<std::pair<int, std::string>>& criterion_keys() {
    static const std::vector<std::pair<int, std::string>> k{{1, "residuals"}, {2, "oracles"},    {3, "traces"},
                                                            {4, "scaling"},   {5, "structure"},  {6, "contraction"},
                                                            {7, "low_mach"},  {8, "grid"}};
    return k;
}

int criterion_id(const std::string& key) {
    for (auto& [id, k] : criterion_keys())
        if (k == key) return id;
    return 0;
}

}  // namespace

CriterionReport verify_grid(const RunConfig& c, const std::vector<CriterionReport>& base, int jobs) {
    auto t0 = Clock::now();
    CriterionReport rep = criterion(8, "grid");
    auto rerun = [&](const RunConfig& rc, const std::string& key) {
        return guarded(criterion_id(key), key, [&] {
            if (key == "residuals") return verify_residuals(rc);
            if (key == "oracles") return verify_oracles(rc);
            if (key == "traces") return verify_traces(rc);
            if (key == "scaling") return verify_scaling(rc, jobs);
            if (key == "structure") return verify_structure(rc);
            if (key == "contraction") return verify_contraction(rc);
            return verify_low_mach(rc);
        });
    };
    RunConfig fine = c, tall = c;
    fine.N = 2 * c.N;
    tall.y_max = 2 * c.y_max;
    for (auto [label, rc] : {std::pair{std::string("2N"), fine}, {std::string("2Ymax"), tall}}) {
        for (const CriterionReport& b : base) {
            if (b.key == "grid") continue;
            CriterionReport r = rerun(rc, b.key);
            // runtime limits belong to the nominal grid
            int changed = 0;
            for (auto& ch : b.checks) {
                if (ch.name.find("runtime") != std::string::npos) continue;
                auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const Check& o) { return o.name == ch.name; });
                if (it == r.checks.end() || it->pass != ch.pass) ++changed;
            }
            rep.checks.push_back(at_most(b.key + " pass/fail flips under " + label, changed, 0));
            for (auto& [k, v] : b.constants) {
                auto it = std::find_if(r.constants.begin(), r.constants.end(), [&](auto& p) { return p.first == k; });
                if (it == r.constants.end()) continue;
                rep.constants.push_back({label + ":" + k, it->second});
                // residual levels and counts are not constants of the estimates
                if (k.find("worst") != std::string::npos || k == "iterations" || k == "generic_zero_mass") continue;
                double move = std::abs(it->second - v) / std::max(std::abs(v), 1e-300);
                rep.checks.push_back(at_most(k + " relative move under " + label, move, 0.2));
            }
        }
    }
    rep.seconds = since(t0);
    return rep;
}

VerifyReport run_verify(const RunConfig& c, int jobs) {
    validate(c);
    auto want = [&](const std::string& k) {
        return std::find(c.verify_checks.begin(), c.verify_checks.end(), "all") != c.verify_checks.end() ||
               std::find(c.verify_checks.begin(), c.verify_checks.end(), k) != c.verify_checks.end();
    };
    VerifyReport r;
    auto add = [&](const std::string& key, auto&& f) {
        if (want(key)) r.criteria.push_back(guarded(criterion_id(key), key, f));
    };
    add("residuals", [&] { return verify_residuals(c); });
    add("oracles", [&] { return verify_oracles(c); });
    add("traces", [&] { return verify_traces(c); });
    add("scaling", [&] { return verify_scaling(c, jobs); });
    add("structure", [&] { return verify_structure(c); });
    add("contraction", [&] { return verify_contraction(c); });
    add("low_mach", [&] { return verify_low_mach(c); });
    add("grid", [&] { return verify_grid(c, r.criteria, jobs); });
    return r;
}

void write_report(const VerifyReport& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir + "/verify.csv");
    csv.precision(10);
    csv << "criterion,key,check,measured,limit,pass\n";
    nlohmann::json j;
    j["pass"] = r.pass();
    for (auto& c : r.criteria) {
        nlohmann::json jc;
        jc["id"] = c.id;
        jc["key"] = c.key;
        jc["pass"] = c.pass();
        jc["seconds"] = c.seconds;
        for (auto& ch : c.checks) {
            csv << c.id << "," << c.key << ",\"" << ch.name << "\"," << ch.measured << "," << ch.limit << ","
                << (ch.pass ? 1 : 0) << "\n";
            jc["checks"].push_back(
                {{"name", ch.name}, {"measured", ch.measured}, {"limit", ch.limit}, {"pass", ch.pass}, {"note", ch.note}});
        }
        for (auto& [k, v] : c.constants) jc["constants"][k] = v;
        j["criteria"].push_back(jc);
    }
    std::ofstream(dir + "/verify.json") << j.dump(2) << "\n";
}

}  // namespace cbl
