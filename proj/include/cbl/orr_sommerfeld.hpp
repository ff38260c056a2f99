#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cbl/mode_ops.hpp"

namespace cbl {

enum class Regime { low, middle, high };
std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

struct IterationControl {
    int max_iter = 60;
    double tol = 1e-12;  // relative increment / tail estimate
};

struct OSSolution {
    ComplexField phi;
    Vec lam;  // Λφ
    Vec lap;  // Δ_αφ
    Regime regime = Regime::low;
    double eps = 0, alpha = 0;
    std::vector<double> history;  // increment norms
    int iterations = 0;
    bool converged = true;
    double ratio = 0;  // measured contraction factor
    cplx phi0 = 0, dphi0 = 0;
    double residual = 0;  // relative equation residual, interior nodes
    double bc_error = 0;
    double extra_bc = 0;  // |∂_YΛφ(0)| relative to ‖∂_YΛφ‖_∞
    cplx dlam0 = NAN;     // ∂_YΛφ(0) by the product rule on the U_sψ part, when known
    cplx trace_prediction = 0;
    // parts: φ̃ and φ_r of the commutator series; φ¹, ψ¹ of the Rayleigh-Airy seed
    Vec phi_tilde, phi_r, phi_seed, psi_seed;
};

/// Δ_αφ from φ and W = Λφ without a second numerical derivative
Vec laplacian_from_lambda(const Background& bg, double alpha, const Vec& phi, const Vec& w);
/// Λφ from φ and z = Δ_αφ
Vec lambda_from_laplacian(const Background& bg, double alpha, const Vec& phi, const Vec& z);

struct Residual {
    double abs = 0;
    double scale = 0;
    double rel() const { return scale > 0 ? abs / scale : abs; }
};
/// symmetrized equation iεΔ_αW + U_sW - qφ = f with W = Λφ, over interior nodes
Residual os_tilde_residual(ModeOperators& ops, const Vec& phi, const Vec& w, const Vec& f);
/// OS_CNS(φ) = iεΛz + U_sΛφ - qφ = f with z = Δ_αφ, over interior nodes
Residual os_cns_residual(ModeOperators& ops, const Vec& phi, const Vec& z, const Vec& f);

/// Rayleigh-Airy iteration for the symmetrized equation; needs f(0) = 0.
OSSolution solve_os_symmetrized(const ComplexField& f, ModeOperators& ops, const IterationControl& ctl = {});
/// same BVP by one dense block solve
OSSolution solve_os_symmetrized_direct(const ComplexField& f, ModeOperators& ops);
/// symmetrized equation for general f (f(0) ≠ 0 allowed), φ(0) = 0
OSSolution solve_os_symmetrized_general(const ComplexField& f, ModeOperators& ops, const IterationControl& ctl = {});

/// commutator series: returns φ_r with OS_CNS(φ̃+φ_r) = OS~(φ̃)
OSSolution os_remainder_series(const OSSolution& tilde, ModeOperators& ops, const IterationControl& ctl = {});
/// OS_CNS(φ) = f, φ(0)=0, via the symmetrized solve plus the commutator series
OSSolution solve_os_cns(const ComplexField& f, ModeOperators& ops, const IterationControl& ctl = {});

/// direct solve with φ(0) = Δ_αφ(0) = 0; rejects αε^{1/3} below `threshold`
OSSolution solve_os_high_freq(const ComplexField& f, ModeOperators& ops, double threshold = 0.0);

// internal: Rayleigh-Airy loop from a seed with Λφ¹ - (q/U)φ¹ = r1
OSSolution rayleigh_airy(ModeOperators& ops, Vec phi1, const Vec& r1, const IterationControl& ctl);
void finalize_os(OSSolution& s, ModeOperators& ops, const Vec& f, bool symmetrized);

}  // namespace cbl
