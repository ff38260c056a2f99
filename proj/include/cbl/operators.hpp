#pragma once

#include <memory>

#include "cbl/grid.hpp"
#include "cbl/profiles.hpp"

namespace cbl {

using LU = Eigen::PartialPivLU<Mat>;

/// Shear profile sampled on a grid, with the weight A^{-1} and its derivatives.
struct Background {
    GridPtr grid;
    ShearProfile profile;
    double m = 0;
    RVec u, du, d2u, d3u;
    RVec a, ainv, dainv, d2ainv;
    RVec q;         // ∂_Y(A^{-1} ∂_Y U_s)
    RVec q_over_u;  // q / U_s, wall value by l'Hopital
};
using BackgroundPtr = std::shared_ptr<const Background>;

BackgroundPtr make_background(const ShearProfile& p, GridPtr g);

/// Λ = ∂_Y(A^{-1}∂_Y) - α^2
Mat lambda_matrix(const Background& bg, double alpha);
/// Δ_α = ∂_Y^2 - α^2
Mat laplace_matrix(const Grid& g, double alpha);

Vec apply_lambda(const Background& bg, double alpha, const Vec& f);
Vec apply_laplace(const Grid& g, double alpha, const Vec& f);

/// L2 norm over interior nodes (boundary rows carry conditions, not equations)
double interior_l2(const Grid& g, const Vec& r);

inline Vec mul(const RVec& a, const Vec& b) { return a.asDiagonal() * b; }

/// φ'' from W = Λφ without a second numerical derivative
Vec second_derivative_from_lambda(const Background& bg, double alpha, const Vec& phi, const Vec& w);

}  // namespace cbl
