#pragma once

#include <memory>

#include "cbl/operators.hpp"

namespace cbl {

/// (ρ, u, v) samples on the Y-grid of one Fourier mode
struct Triple {
    Vec rho, u, v;

    static Triple zeros(int n);
    int size() const { return int(rho.size()); }
    bool finite() const;
    Triple& operator+=(const Triple& o);
    Triple& operator-=(const Triple& o);
    Triple& operator*=(cplx c);
};
Triple operator+(Triple a, const Triple& b);
Triple operator-(Triple a, const Triple& b);
Triple operator*(cplx c, Triple a);

double l2_norm(const Grid& g, const Triple& t);

/// One rescaled Fourier mode: α = n̂√ν, ε = 1/n̂.
struct ModeSystem {
    BackgroundPtr bg;
    double nu = 1e-3;
    double lambda = 0.0;
    double alpha = 1.0;

    double sqrt_nu() const;
    double eps() const;
    double minv2() const;  // m^{-2}
    const Grid& grid() const { return *bg->grid; }
    int size() const { return bg->grid->size(); }
};

enum class Variant {
    full,    // L, the linearized system with the U''ρ term
    stokes,  // L_S: L without the stretching term v∂_YU_s
    qc       // L_Q: quasi-compressible artificial viscosity
};

/// iαu + ∂_Yv
Vec div_alpha(const ModeSystem& s, const Vec& u, const Vec& v);

struct Applied {
    Triple value;
    double scale = 0;  // sum of the L2 norms of the separate terms
};
/// operator applied at every node, no boundary rows
Applied apply_system(const ModeSystem& s, Variant var, const Triple& x);

/// L(x) - L_Q(x) = (0, e_u, e_v)
Triple qc_error(const ModeSystem& s, const Triple& x);

struct ResidualParts {
    double abs = 0;    // ‖L x - f‖
    double scale = 0;  // max(sum of term norms, ‖f‖)
};
ResidualParts residual_parts(const ModeSystem& s, Variant var, const Triple& x, const Triple& f);

/// relative residual: continuity at all nodes, momentum at interior nodes
double system_residual(const ModeSystem& s, Variant var, const Triple& x, const Triple& f);

enum class WallBC {
    no_slip,   // u(0) = v(0) = 0
    slip,      // ∂_Yu(0) = 0, v(0) = 0
    pinned_u   // u(0) = given, v(0) = 0
};

/// Dense collocation solve of one variant with u = v = 0 at Y_max; the LU is cached.
class DenseModeSolver {
public:
    DenseModeSolver(ModeSystem s, Variant var, WallBC bc);
    Triple solve(const Triple& f, cplx u_wall = 0.0) const;
    const ModeSystem& system() const { return s_; }

private:
    ModeSystem s_;
    Variant var_;
    WallBC bc_;
    std::unique_ptr<LU> lu_;
};

/// wall traces |v(0)| and, for no-slip, |u(0)|; also u, v at Y_max
double wall_error(const Triple& x, WallBC bc, const Grid& g);

}  // namespace cbl
