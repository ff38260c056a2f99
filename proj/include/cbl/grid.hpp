#pragma once

#include <complex>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace cbl {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

enum class Mapping { uniform, stretched };

Mapping parse_mapping(const std::string& s);
std::string to_string(Mapping m);

/// Chebyshev-Lobatto collocation on [0, Y_max], nodes ascending with Y_0 = 0.
/// uniform: affine map of x in [-1,1]; stretched: cubic map with slope `wall_scale` at the wall.
class Grid {
public:
    Grid(int n, double y_max, Mapping mapping, double wall_scale);

    int size() const { return n_; }
    double y_max() const { return y_max_; }
    Mapping mapping() const { return mapping_; }
    double wall_scale() const { return wall_scale_; }

    double y(int j) const { return y_(j); }
    const RVec& nodes() const { return y_; }
    const RVec& x_nodes() const { return x_; }
    const RVec& weights() const { return w_; }
    const RMat& d1() const { return d1_; }
    const RMat& d2() const { return d2_; }
    /// (cumint * f)_i = integral of f over [0, Y_i]
    const RMat& cumint() const { return cumint_; }

    double map(double x) const;
    double map_inverse(double y) const;

    Vec integral_from_zero(const Vec& f) const { return cumint_ * f; }
    Vec integral_to_end(const Vec& f) const;
    cplx integrate(const Vec& f) const { return w_.dot(f); }
    double integrate(const RVec& f) const { return w_.dot(f); }

    /// barycentric interpolation of nodal values at arbitrary Y in [0, Y_max]
    cplx interpolate(const Vec& f, double y) const;
    Vec interpolate_to(const Vec& f, const Grid& other) const;

private:
    int n_;
    double y_max_;
    Mapping mapping_;
    double wall_scale_;
    double c_ = 1.0;  // linear share of the cubic map
    RVec x_, y_, dydx_, w_, bary_;
    RMat d1_, d2_, cumint_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// rejects N < 16 or Y_max < 10
GridPtr build_grid(int n, double y_max, Mapping mapping = Mapping::stretched, double wall_scale = 1.5);

struct GridReport {
    double d_const = 0;  // max |D 1|
    double d_linear = 0; // max |D Y - 1| over interior nodes
    double quad_exp = 0; // |int e^{-Y} - (1 - e^{-Y_max})|
    bool pass = true;
};
GridReport check_grid(const Grid& g);

/// Complex samples tied to a grid.
struct ComplexField {
    GridPtr grid;
    Vec values;

    ComplexField() = default;
    ComplexField(GridPtr g, Vec v);
    static ComplexField zeros(GridPtr g);
    bool finite() const;
};

enum class Op { d1, d2, laplace };

/// ∂_Y, ∂_Y^2, or Δ_α = ∂_Y^2 - α^2
ComplexField apply_operator(Op op, const ComplexField& f, double alpha = 0.0);
/// div_α(u, v) = iα u + ∂_Y v
ComplexField div_alpha(const ComplexField& u, const ComplexField& v, double alpha);

double l2_norm(const Grid& g, const Vec& f);

struct NormReport {
    double l2 = 0, l1 = 0, linf = 0;
    double h1 = 0, h2 = 0;
    double grad_alpha = 0;      // ‖(∂_Y f, α f)‖
    double weighted[4][4] = {};  // weighted[j][k] = ‖Y^k ∂_Y^j f‖
    double sqrt_u = -1, u = -1;  // ‖√U_s f‖, ‖U_s f‖ (negative when no profile given)
};

class ShearProfile;
NormReport compute_norms(const ComplexField& f, double alpha, const ShearProfile* profile = nullptr);

}  // namespace cbl
