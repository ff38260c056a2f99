#pragma once

#include <string>
#include <vector>

#include "cbl/flow_state.hpp"

namespace cbl {

/// P(ρ) = ρ^γ/(γm²), so P'(1) = m^{-2}
struct PressureLaw {
    double gamma = 1.4;
    double m = 0.5;
    double dp(double rho) const;  // P'(rho)
};

/// Perturbation force, modes in the physical variable y, no zero mode.
struct ExternalForce {
    ModeCoeffs f1, f2;
};

/// named Y-profiles: "gaussian-bump" e^{-(Y-2)²}, "exp-decay" Y e^{-Y}
double force_profile(const std::string& name, double Y);

/// F₁ = a Σ p(Y) cos(n̂x), F₂ = a Σ p(Y) sin(n̂x) over the listed modes
ExternalForce make_force(const Domain& d, const std::string& profile, const std::vector<int>& modes, double amplitude);

/// weighted force norm with weight exponent s
double force_norm(const ExternalForce& f, const Domain& d, double s);

struct NonlinearTerms {
    FlowFields g;       // (g_ρ, N_u, N_v), g_ρ = -∂_x(ρu) - ∂_y(ρv)
    double rho_sup = 0; // sup |ρ|
};

/// Products are formed on the physical grid and projected back to |n| ≤ n_max.
/// Throws std::domain_error when sup |ρ| ≥ 1.
NonlinearTerms nonlinear_terms(const FlowFields& state, const ExternalForce& force, const Background& bg,
                               const Domain& d, const PressureLaw& p);

struct PicardSettings {
    int max_iter = 40;
    double tol = 1e-8;  // relative increment in the middle-order or the low-order norm
    double gamma = 1.4;
    double weight_s = 3.0;  // force-norm weight exponent
};

struct PicardState {
    FlowState state;
    std::vector<double> increments;  // ‖Δ^i‖₂
    std::vector<double> masses;      // |∬ρ^i|
    std::vector<double> wall_divs;   // relative wall divergence of each iterate
    int iterations = 0;
    bool converged = false;
    double max_ratio = 0;   // largest ‖Δ^{i+1}‖/‖Δ^i‖ with ‖Δ^i‖ above 100·tol·‖state‖
    double residual = 0;    // full nonlinear system, relative, worst mode
    double force_norm = 0;
};

/// relative residual of the nonlinear system at `state`: worse of the zero mode and the pooled nonzero modes
double nonlinear_residual(LinearNS& lin, const FlowFields& state, const ExternalForce& force, const PressureLaw& p);

/// Picard iteration from zero: each step solves the linear system with the nonlinear terms of the previous iterate.
PicardState picard_solve(LinearNS& lin, const ExternalForce& force, const PicardSettings& cfg = {});

struct LowMachReport {
    std::vector<double> m_values;
    std::vector<double> diff_norm;  // ‖(m^{-2}ρ^m - P_ref, u^m - u_ref, v^m - v_ref)‖₂
    std::vector<double> diff_linf;
    std::vector<double> solution_norm;  // ‖·‖₂ with m^{-2} weighting
    double m_ref = 0;
    double slope = 0, slope_lo = 0, slope_hi = 0;
    double linf_slope = 0;
    bool monotone = false;
};

struct LowMachSetup {
    ShearProfile profile;  // shape; Mach number replaced per run
    Domain domain;         // grid taken from here
    double lambda = 0.5;
    LinearSettings linear;
    PicardSettings picard;
    double reference_factor = 0.1;  // m_ref = factor · min(m_values)
};

/// Solves at each m and at m_ref, then fits log(diff) against log(m).
LowMachReport low_mach_compare(const std::vector<double>& m_values, const ExternalForce& force, const LowMachSetup& setup);

}  // namespace cbl
