#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cbl/config.hpp"
#include "cbl/modes.hpp"
#include "cbl/sweep.hpp"
#include "cbl/verify.hpp"

using namespace cbl;

namespace {

struct Options {
    std::string config;
    std::string out;
    int jobs = 1;
    long long seed = -1;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig setup(const Options& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.out.empty()) c.out = o.out;
    if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
    validate(c);
    std::filesystem::create_directories(c.out);
    std::ofstream(c.out + "/config.txt") << to_text(c);
    return c;
}

std::ofstream open_csv(const RunConfig& c, const std::string& name) {
    std::ofstream f(c.out + "/" + name);
    if (!f) throw std::runtime_error("cannot write " + c.out + "/" + name);
    f.precision(12);
    return f;
}

// one row per (n, Y) for n = 0..n_max; negative modes are conjugates
void write_coefficients(const RunConfig& c, const FlowFields& f, const Domain& d) {
    auto out = open_csv(c, "modes.csv");
    out << "n,k,Y,rho_re,rho_im,u_re,u_im,v_re,v_im\n";
    for (int n = 0; n <= d.n_max; ++n)
        for (int k = 0; k < d.grid->size(); ++k)
            out << n << "," << k << "," << d.grid->y(k) << "," << f.rho[n](k).real() << "," << f.rho[n](k).imag()
                << "," << f.u[n](k).real() << "," << f.u[n](k).imag() << "," << f.v[n](k).real() << ","
                << f.v[n](k).imag() << "\n";
}

void write_norms(const RunConfig& c, const FlowNorms& n) {
    auto out = open_csv(c, "norms.csv");
    out << "v0_l1,zero_linf,zero_l2,nonzero_l2,grad,hess_uv,hess_rho,third_uv,linf,norm1,norm2\n";
    out << n.v0_l1 << "," << n.zero_linf << "," << n.zero_l2 << "," << n.nonzero_l2 << "," << n.grad << ","
        << n.hess_uv << "," << n.hess_rho << "," << n.third_uv << "," << n.linf << "," << n.norm1 << "," << n.norm2
        << "\n";
}

void write_mode_summary(const RunConfig& c, const FlowState& st, const Domain& d) {
    auto out = open_csv(c, "mode_summary.csv");
    out << "n,alpha,eps,regime,l2,residual,bc_error,slip_iterations\n";
    const Grid& g = *d.grid;
    Triple z{st.fields.rho[0], st.fields.u[0], st.fields.v[0]};
    out << 0 << ",0,0,zero," << l2_norm(g, z) << "," << st.zero.residual << "," << st.zero.bc_error << ",0\n";
    for (auto& m : st.modes)
        out << m.n << "," << m.alpha << "," << m.eps << "," << to_string(m.regime) << "," << l2_norm(g, m.t) << ","
            << m.residual << "," << m.bc_error << "," << m.slip_iterations << "\n";
}

// prints and archives pass/fail rows; returns the exit code
int summarize(const RunConfig& c, const std::vector<Check>& checks) {
    auto out = open_csv(c, "summary.csv");
    out << "check,measured,limit,pass\n";
    bool ok = true;
    for (auto& ch : checks) {
        out << "\"" << ch.name << "\"," << ch.measured << "," << ch.limit << "," << (ch.pass ? 1 : 0) << "\n";
        std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << ": " << ch.measured << " (limit " << ch.limit << ")\n";
        ok = ok && ch.pass;
    }
    return ok ? 0 : 1;
}

Check le(const std::string& n, double v, double lim) { return {n, v, lim, v <= lim, ""}; }

int solve_linear(const Options& o) {
    RunConfig c = setup(o);
    Domain d = make_domain(c, make_grid(c));
    LinearSettings ls = linear_settings(c);
    ls.jobs = o.jobs;
    LinearNS lin(make_background(make_profile(c), d.grid), d, c.lambda, ls);
    FlowFields g = make_data(c, d, c.seed);
    FlowState st = lin.solve(g);
    write_coefficients(c, st.fields, d);
    write_norms(c, st.norms);
    write_mode_summary(c, st, d);
    return summarize(c, {le("max residual", st.max_residual, c.tol_res), le("max wall trace", st.max_bc, c.tol_bc),
                         le("wall divergence identity", st.wall_identity, 1e-8),
                         le("zero mass", st.mass, c.tol_mass)});
}

int solve_nonlinear(const Options& o) {
    RunConfig c = setup(o);
    Domain d = make_domain(c, make_grid(c));
    LinearSettings ls = linear_settings(c);
    ls.jobs = o.jobs;
    LinearNS lin(make_background(make_profile(c), d.grid), d, c.lambda, ls);
    PicardState ps = picard_solve(lin, make_force(c, d), picard_settings(c));
    auto it = open_csv(c, "picard.csv");
    it << "iteration,increment,mass,wall_div\n";
    for (size_t i = 0; i < ps.increments.size(); ++i)
        it << i << "," << ps.increments[i] << "," << ps.masses[i] << "," << ps.wall_divs[i] << "\n";
    write_coefficients(c, ps.state.fields, d);
    write_norms(c, ps.state.norms);
    return summarize(c, {{"converged", double(ps.converged), 1, ps.converged, ""},
                         le("largest increment ratio", ps.max_ratio, 0.5),
                         le("nonlinear residual", ps.residual, c.tol_nl),
                         le("wall divergence", ps.state.wall_div, 1e-8)});
}

int sweep(const Options& o) {
    RunConfig c = setup(o);
    if (c.sweep_values.size() < 3) throw UsageError("insufficient points");
    SweepResult r = run_sweep(c, o.jobs);
    write_records_csv(r.records, c.out + "/sweep.csv");
    write_fits_csv(r.fits, c.out + "/fits.csv");
    for (auto& f : r.fits)
        std::cout << (f.pass ? "PASS " : "FAIL ") << f.quantity << " vs " << f.against << ": slope " << f.fit.slope
                  << " [" << f.fit.lo << ", " << f.fit.hi << "], bound " << f.exponent << "\n";
    return r.pass() ? 0 : 1;
}

int verify(const Options& o) {
    RunConfig c = setup(o);
    VerifyReport r = run_verify(c, o.jobs);
    write_report(r, c.out);
    for (auto& cr : r.criteria) {
        std::cout << (cr.pass() ? "PASS " : "FAIL ") << cr.id << " " << cr.key << " (" << cr.seconds << " s)\n";
        for (auto& ch : cr.checks)
            if (!ch.pass) std::cout << "    failed: " << ch.name << " = " << ch.measured << " (limit " << ch.limit << ")\n";
    }
    return r.pass() ? 0 : 1;
}

int modes(const Options& o) {
    RunConfig c = setup(o);
    RegimeThresholds t = linear_settings(c).thresholds;
    std::cout << "n,nhat,alpha,eps,beta,regime,slip_route,corrector\n";
    for (int n = 1; n <= c.n_max; ++n) {
        double nhat = n / c.L, alpha = nhat * std::sqrt(c.nu), eps = 1.0 / nhat;
        Regime r = classify_regime(eps, alpha, t);
        std::cout << n << "," << nhat << "," << alpha << "," << eps << "," << alpha * std::cbrt(eps) << ","
                  << to_string(r) << "," << (r == Regime::high ? "dense-slip" : "qc-stokes") << ","
                  << (r == Regime::low ? "fast-minus-slow" : "fast") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mode-by-mode solvers for compressible flow linearized about a boundary layer"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "flat key = value config file")->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "output directory (overrides `out`)");
    app.add_option("--jobs", o.jobs, "worker threads (sweep points, modes)")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "seed for random data (overrides `seed`)")->check(CLI::NonNegativeNumber);
    app.fallthrough();
    std::function<int(const Options&)> run;
    for (auto [name, help, fn] : {std::tuple{"solve-linear", "linear solve for the configured data", &solve_linear},
                                  {"solve-nonlinear", "Picard iteration for the configured force", &solve_nonlinear},
                                  {"sweep", "parameter sweep with log-log fits", &sweep},
                                  {"verify", "acceptance checks and report", &verify},
                                  {"modes", "regime routing table", &modes}}) {
        auto f = fn;
        app.add_subcommand(name, help)->callback([&run, f] { run = f; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return run(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
