#pragma once

#include "cbl/full_system.hpp"

namespace cbl {

struct StokesSolution {
    Triple t;
    double residual = 0;
    double bc_error = 0;  // ∂_Yu(0), v(0) and the far-field values
};

/// L_S(ρ,u,v) = q with ∂_Yu(0) = v(0) = 0; one coupled dense solve, factorization kept.
class StokesSolver {
public:
    explicit StokesSolver(const ModeSystem& s);
    StokesSolution solve(const Triple& q) const;
    const ModeSystem& system() const { return dense_.system(); }

private:
    DenseModeSolver dense_;
};

StokesSolution solve_stokes(const Triple& q, const ModeSystem& s);

/// terms of the density estimate
struct StokesEstimate {
    double density = 0;     // m^{-2}‖(∂_Yρ, αρ)‖
    double velocity = 0;    // α‖√U_s(u, v)‖
    double data = 0;        // ‖q‖ + √ν‖(∂_Yq_ρ, αq_ρ)‖
    double vel_bound = 0;   // ‖(u, v)‖·α / n̂^{1/3}
};
StokesEstimate stokes_estimate(const ModeSystem& s, const Triple& sol, const Triple& q);

}  // namespace cbl
