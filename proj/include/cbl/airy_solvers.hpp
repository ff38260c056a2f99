#pragma once

#include "cbl/mode_ops.hpp"

namespace cbl {

struct AirySolution {
    ComplexField psi;
    double eps = 0, alpha = 0;
    NormReport norms;
    double residual = 0;  // relative, interior nodes
    double bc_error = 0;
    double weighted_conormal = 0;  // ‖U_s Y ∂_Yψ‖
};

/// iεΛψ + U_sψ = h, ψ(0) = 0. Rejects αε^{1/3} above `regime_bound`.
AirySolution solve_tilde_airy(const ComplexField& h, ModeOperators& ops, double regime_bound = 4.0);

/// iεΔ_αξ + U_sξ = ∂_Y g, ∂_Yξ(0) = 0. The derivative of g is taken on the grid; g(0) must vanish.
AirySolution solve_classical_airy_neumann(const ComplexField& g, ModeOperators& ops);

}  // namespace cbl
