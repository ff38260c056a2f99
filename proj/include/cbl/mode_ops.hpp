#pragma once

#include <memory>
#include <utility>

#include "cbl/operators.hpp"

namespace cbl {

/// Collocation matrices for one (ε, α) pair with lazily built factorizations.
/// Not thread-safe; use one instance per worker.
class ModeOperators {
public:
    ModeOperators(BackgroundPtr bg, double eps, double alpha);

    const Background& bg() const { return *bg_; }
    BackgroundPtr background() const { return bg_; }
    const Grid& grid() const { return *bg_->grid; }
    GridPtr grid_ptr() const { return bg_->grid; }
    int size() const { return bg_->grid->size(); }
    double eps() const { return eps_; }
    double alpha() const { return alpha_; }

    /// Λ_d = A^{-1}D² + ∂(A^{-1})D - α²
    const RMat& lambda() const { return lam_; }

    /// interior: Λφ - (q/U)φ = r ; φ(0) = wall, φ(Y_max) = 0
    Vec rayleigh(const Vec& r, cplx wall = 0.0);
    /// interior: iεΛψ + Uψ = h ; ψ(0) = ψ(Y_max) = 0
    Vec tilde_airy(const Vec& h);
    /// interior: iεΔ_αξ + Uξ = r ; ∂_Yξ(0) = 0, ξ(Y_max) = 0
    Vec airy_neumann(const Vec& r);
    /// OS~ in (φ, W=Λφ): φ(0)=φ(Y_max)=0, ∂_YW(0)=0, W(Y_max)=0
    std::pair<Vec, Vec> os_tilde_direct(const Vec& f);
    /// iεΔ_αΛφ + ∂(A^{-1}U∂φ) - α²Uφ = f in (φ, W): φ(0)=∂φ(0)=0, φ(Y_max)=W(Y_max)=0
    std::pair<Vec, Vec> os_energy_block(const Vec& f);
    /// OS_CNS in (φ, z=Δ_αφ): φ = phi_wall, z = z_wall at Y=0, both zero at Y_max
    std::pair<Vec, Vec> os_cns_direct(const Vec& f, cplx phi_wall = 0.0, cplx z_wall = 0.0);

    /// factorization count, for tests of caching
    int factorizations() const { return nfact_; }

private:
    BackgroundPtr bg_;
    double eps_, alpha_;
    RMat lam_;
    std::unique_ptr<LU> ray_, ta_, an_, ost_, oseb_, cns_;
    int nfact_ = 0;

    LU& factor(std::unique_ptr<LU>& slot, Mat&& m);
};

}  // namespace cbl
