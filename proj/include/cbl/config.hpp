#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbl/nonlinear.hpp"

namespace cbl {

/// Run parameters. The flat text format uses the member names below as keys, e.g. `mach = 0.3`;
/// lists are comma separated, `#` starts a comment.
struct RunConfig {
    // physics
    double nu = 1e-3;
    double mach = 0.3;
    double lambda = 0.5;
    double L = 0.02;
    double L0 = 0.05;        // largest admissible L
    double s = 4.0;          // profile decay / weight exponent
    double gamma = 1.4;
    std::string profile = "tanh";
    // grid
    int N = 200;
    double y_max = 30.0;
    std::string mapping = "stretched";
    double wall_scale = 1.5;
    int n_max = 8;
    // regime thresholds on αε^{1/3}
    double kappa0 = 0.5;
    double C1 = 0.5;
    double C2 = 2.0;
    double kappa_hat0 = 0.5;
    // tolerances
    double tol_res = 1e-6;
    double tol_bc = 1e-8;
    double tol_iter = 1e-12;
    double tol_mass = 1e-10;
    double tol_nl = 1e-7;
    int max_iter = 60;         // QC-Stokes and Orr-Sommerfeld iterations
    int picard_max_iter = 40;
    double picard_tol = 1e-8;
    // linear data: zero | gaussian | random
    std::string data = "zero";
    std::vector<int> data_modes{1};
    double data_amplitude = 1e-3;
    // force: amplitude chosen so the force norm equals force_fraction · force_threshold · ν^{9/8}
    std::string force_profile = "gaussian-bump";
    std::vector<int> force_modes{1, 2};
    double force_threshold = 1e4;
    double force_fraction = 0.1;
    double mach_reference = 0.1;  // low-Mach reference at this fraction of the smallest m
    // sweeps: axis nu | eps | alpha | m | L
    std::string sweep_axis = "nu";
    std::vector<double> sweep_values{1e-3, 3e-4, 1e-4};
    double alpha = 1.0;  // fixed α for ε-sweeps
    double eps = 1e-3;   // fixed ε for α-sweeps
    int mode = 1;        // mode index for L-sweeps
    // verification
    std::vector<std::string> verify_checks{"all"};
    int verify_samples = 50;
    // output
    std::string out = "out";
    std::uint64_t seed = 1;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// parse flat key = value text; unknown keys and malformed values throw ConfigError naming the key
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path);
/// throws ConfigError naming the offending field
void validate(const RunConfig& c);
std::string to_text(const RunConfig& c);

GridPtr make_grid(const RunConfig& c);
ShearProfile make_profile(const RunConfig& c);
LinearSettings linear_settings(const RunConfig& c);
PicardSettings picard_settings(const RunConfig& c);
Domain make_domain(const RunConfig& c, GridPtr g);

/// data family from the config; "random" draws smooth profiles from `seed`
FlowFields make_data(const RunConfig& c, const Domain& d, std::uint64_t seed);
/// force scaled to force_fraction of the threshold
ExternalForce make_force(const RunConfig& c, const Domain& d);
double force_threshold(const RunConfig& c);

}  // namespace cbl
