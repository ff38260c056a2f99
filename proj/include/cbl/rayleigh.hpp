#pragma once

#include "cbl/mode_ops.hpp"

namespace cbl {

struct RayleighSolution {
    ComplexField phi;
    double alpha = 0;
    NormReport norms;
    cplx trace = 0;          // ∂_Yφ(0)
    double residual = 0;     // ‖Ray(φ)-h‖ / ‖h/U_s‖ over interior nodes
    double bc_error = 0;
    double c_e = 0;          // homogeneous solve with α<1 only
    double c_e_fit_error = 0;
};

/// Ray(φ) = U_sΛφ - ∂_Y(A^{-1}∂_YU_s)φ
Vec apply_rayleigh(const Background& bg, double alpha, const Vec& phi);

/// Ray(φ) = h with φ(0) = 0; rejects h(0) ≠ 0.
RayleighSolution solve_rayleigh_inhomogeneous(const ComplexField& h, ModeOperators& ops);
RayleighSolution solve_rayleigh_inhomogeneous(const ComplexField& h, double alpha, const ShearProfile& p);

/// Ray(φ) = 0 with φ(0) = 1; for α<1 also fits c_E from φ ≈ (c_E/α) U_s e^{-α√A_∞ Y}.
RayleighSolution solve_rayleigh_homogeneous(ModeOperators& ops);
RayleighSolution solve_rayleigh_homogeneous(double alpha, const ShearProfile& p, GridPtr g);

}  // namespace cbl
