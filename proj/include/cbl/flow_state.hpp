#pragma once

#include <map>
#include <memory>
#include <vector>

#include "cbl/linear_solver.hpp"
#include "cbl/zero_mode.hpp"

namespace cbl {

/// Periodic strip x ∈ [0, 2πL), y = √ν·Y with Y on the shared Chebyshev grid.
struct Domain {
    double L = 0.02;
    double nu = 1e-3;
    int n_max = 8;
    int nx = 0;  // physical samples in x; 0 picks 3 n_max + 3 rounded up to even
    GridPtr grid;

    int samples() const;
    double nhat(int n) const { return n / L; }
    double y(int k) const;
    double x(int j) const;
};

/// Fourier coefficients g_n(y_k) for |n| ≤ n_max.
struct ModeCoeffs {
    int n_max = 0;
    std::vector<Vec> c;  // c[n + n_max]

    static ModeCoeffs zeros(int n_max, int ny);
    Vec& operator[](int n) { return c[n + n_max]; }
    const Vec& operator[](int n) const { return c[n + n_max]; }
    ModeCoeffs& operator+=(const ModeCoeffs& o);
    ModeCoeffs& operator-=(const ModeCoeffs& o);
    ModeCoeffs& operator*=(double s);
};

/// real samples f(y_k, x_j), rows k, columns j
using PhysicalField = RMat;

ModeCoeffs to_modes(const PhysicalField& f, int n_max);
PhysicalField to_physical(const ModeCoeffs& c, int nx);
ModeCoeffs dx(const ModeCoeffs& c, const Domain& d);
ModeCoeffs dy(const ModeCoeffs& c, const Domain& d);

struct FlowFields {
    ModeCoeffs rho, u, v;
    static FlowFields zeros(int n_max, int ny);
    FlowFields& operator+=(const FlowFields& o);
    FlowFields& operator-=(const FlowFields& o);
};

/// entries of the solution norms; rho_scale multiplies ρ (m^{-2}, or 1 for pressure differences)
struct FlowNorms {
    double v0_l1 = 0;
    double zero_linf = 0;   // ‖(m^{-2}ρ₀, u₀, v₀)‖_∞
    double zero_l2 = 0;     // ‖(m^{-2}ρ₀, v₀)‖_{L²_y}
    double nonzero_l2 = 0;  // ‖(m^{-2}ρ_≠, u_≠, v_≠)‖_{L²(Ω)}
    double grad = 0;        // ‖∇(m^{-2}ρ, u, v)‖
    double hess_uv = 0;     // ‖∇²(u, v)‖
    double hess_rho = 0;    // ‖∇²m^{-2}ρ‖
    double third_uv = 0;    // ‖∇³(u, v)‖
    double linf = 0;        // sup over the physical grid of |(m^{-2}ρ, u, v)|
    double norm1 = 0;       // low-order norm
    double norm2 = 0;       // middle-order norm
};
FlowNorms flow_norms(const FlowFields& f, const Domain& d, double rho_scale);

/// ‖(1+y)^s F‖ + ν^{13/8}‖∇F‖ + ν^{21/8}‖∇²F‖ over both components
double force_norm(const ModeCoeffs& f1, const ModeCoeffs& f2, const Domain& d, double s);

/// L²(Ω) norm by Parseval
double omega_l2(const ModeCoeffs& c, const Domain& d);

struct FlowState {
    FlowFields fields;
    ZeroModeSolution zero;
    std::vector<ModeSolution> modes;  // n = 1..n_max; n < 0 by conjugation
    FlowNorms norms;
    double max_residual = 0;
    double max_bc = 0;
    double mass = 0;        // |∬ρ|
    double wall_div = 0;    // sup_x |div(u,v)(x,0)| relative to sup |∂_y v|
    double wall_identity = 0;  // sup_x |div(u,v) - g_ρ| at y = 0, same scaling
};

/// Linearized solve over all modes; per-mode solvers and correctors are cached.
class LinearNS {
public:
    LinearNS(BackgroundPtr bg, Domain d, double lambda, LinearSettings cfg = {});

    const Domain& domain() const { return d_; }
    const Background& bg() const { return *bg_; }
    double lambda() const { return lambda_; }
    ModeSolver& mode_solver(int n);

    /// g given as modes in the physical variable y; g_{-n} = conj(g_n) is assumed for real data
    FlowState solve(const FlowFields& g);
    FlowState solve_physical(const PhysicalField& g_rho, const PhysicalField& g_u, const PhysicalField& g_v);

private:
    BackgroundPtr bg_;
    Domain d_;
    double lambda_;
    LinearSettings cfg_;
    std::map<int, std::unique_ptr<ModeSolver>> solvers_;
};

/// sup_x |div(u,v)(x, 0)|
double wall_divergence(const FlowFields& f, const Domain& d);

}  // namespace cbl
