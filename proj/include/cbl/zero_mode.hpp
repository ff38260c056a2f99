#pragma once

#include "cbl/operators.hpp"

namespace cbl {

/// x-averaged mode, fields in the physical variable y = √ν·Y on the Y-grid of `bg`.
struct ZeroModeSolution {
    Vec rho, u, v;
    cplx mass = 0;           // ∫ρ₀ dy
    cplx mass_predicted = 0; // m²[-∫y g_v dy + (1+λ)ν∫g_ρ dy]/(1+δm²(1+λ)ν)
    double v_l1 = 0;         // ‖v₀‖_{L¹_y}
    double residual = 0;
    double bc_error = 0;
    double tail = 0;         // extrapolated contribution beyond Y_max to the inner integrals
};

/// Closed forms at penalty δ (δ = 0 is the limit system):
/// m^{-2}ρ₀ = [∂_y^{-1}g_v + (1+λ)νg_ρ]/(1+δm²(1+λ)ν), v₀ = [I(g_ρ) - δm²I(∂_y^{-1}g_v)]/(...),
/// u₀ = ν^{-1}∫_0^y∫_{y'}^∞ (g_u - v₀∂_yU_s - νρ₀∂_y²U_s).
/// Throws std::domain_error on non-finite data or integrals.
ZeroModeSolution solve_zero_mode(const Background& bg, double nu, double lambda, const Vec& g_rho, const Vec& g_u,
                                 const Vec& g_v, double delta = 0.0);

/// relative residual of the zero-mode equations (penalty δ in the continuity row)
double zero_mode_residual(const Background& bg, double nu, double lambda, const Vec& rho, const Vec& u, const Vec& v,
                          const Vec& g_rho, const Vec& g_u, const Vec& g_v, double delta = 0.0);

}  // namespace cbl
