#pragma once

#include <utility>

#include "cbl/full_system.hpp"
#include "cbl/modes.hpp"

namespace cbl {

/// (ϱ, 𝔲, 𝔳) of the quasi-compressible system with the stream function it came from.
struct FluidTriple {
    Triple t;
    Vec phi, lap;  // φ and Δ_αφ
    Vec div;       // 𝒟_q = iα𝔲 + ∂_Y𝔳
    double eps = 0, alpha = 0;
    Regime regime = Regime::low;
    double residual = 0;  // L_Q relative residual
    double bc_error = 0;   // |𝔳(0) - imposed|
    double far_field = 0;  // max |𝔲|, |𝔳| at Y_max
    double continuity = 0;  // ‖iαU_sϱ + 𝒟_q‖ relative to ‖𝒟_q‖
    int iterations = 0;
};

/// 𝔳 = -iαφ, 𝔲 = ∂_Yφ - U_sϱ; ϱ from m^{-2}∂_Yϱ = f_v - iεα²Δ_αφ - α²U_sφ integrated
/// back from Y_max, where the momentum identity fixes the constant.
/// Throws std::domain_error when lap disagrees with the grid Laplacian of φ (under-resolved φ).
FluidTriple lift_to_fluid(const ModeSystem& s, const Vec& phi, const Vec& lap, const Vec& fu, const Vec& fv);

/// OS_CNS right-hand side of the quasi-compressible system: -f_v - (i/α)∂_Y(A^{-1}f_u)
Vec qc_os_forcing(const ModeSystem& s, const Vec& fu, const Vec& fv);

/// L_Q(ϱ,𝔲,𝔳) = (0, f_u, f_v) with 𝔳(0) = 0; OS route picked by regime.
FluidTriple solve_qc_inhomogeneous(const ModeSystem& s, ModeOperators& ops, const Vec& fu, const Vec& fv,
                                   const RegimeThresholds& thr = {}, const IterationControl& ctl = {});

/// L_Q H = 0 with 𝔳_H(0) = 0 and 𝔲_H(0) ≠ 0: low fast - slow, middle and high fast alone.
FluidTriple homogeneous_qc(const ModeSystem& s, ModeOperators& ops, Regime regime, const IterationControl& ctl = {});

/// (e_u, e_v) with L(t) - L_Q(t) = (0, e_u, e_v)
std::pair<Vec, Vec> qc_error_fields(const ModeSystem& s, const Triple& t);

}  // namespace cbl
