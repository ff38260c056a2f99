#include "cbl/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cbl/profiles.hpp"

namespace cbl {

Mapping parse_mapping(const std::string& s) {
    if (s == "uniform") return Mapping::uniform;
    if (s == "stretched") return Mapping::stretched;
    throw std::invalid_argument("unknown grid mapping '" + s + "' (uniform|stretched)");
}

std::string to_string(Mapping m) { return m == Mapping::uniform ? "uniform" : "stretched"; }

Grid::Grid(int n, double y_max, Mapping mapping, double wall_scale)
    : n_(n), y_max_(y_max), mapping_(mapping), wall_scale_(wall_scale) {
    if (mapping_ == Mapping::stretched) c_ = std::min(1.0, 2.0 * wall_scale / y_max);

    const int m = n - 1;
    const double pi = std::numbers::pi;
    RVec theta(n);
    x_.resize(n);
    y_.resize(n);
    dydx_.resize(n);
    for (int j = 0; j < n; ++j) {
        theta(j) = pi * j / m;
        x_(j) = -std::cos(theta(j));
    }
    x_(0) = -1.0;
    x_(m) = 1.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.5 * (1.0 + x_(j));
        y_(j) = y_max_ * (c_ * s + (1.0 - c_) * s * s * s);
        dydx_(j) = 0.5 * y_max_ * (c_ + 3.0 * (1.0 - c_) * s * s);
    }
    y_(0) = 0.0;
    y_(m) = y_max_;

    bary_.resize(n);
    for (int j = 0; j < n; ++j) bary_(j) = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == m) ? 0.5 : 1.0);

    // x-derivative with trig differences, diagonal by negative row sums
    RMat dx = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double diff = 2.0 * std::sin(0.5 * (theta(i) + theta(j))) * std::sin(0.5 * (theta(i) - theta(j)));
            dx(i, j) = (bary_(j) / bary_(i)) / diff;
            sum += dx(i, j);
        }
        dx(i, i) = -sum;
    }
    d1_ = dydx_.cwiseInverse().asDiagonal() * dx;
    d2_ = d1_ * d1_;

    // values -> Chebyshev coefficients
    RMat tk(n, n);  // T_k(x_j)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) tk(j, k) = ((k % 2) ? -1.0 : 1.0) * std::cos(k * theta(j));
    RMat to_coef(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            double v = 2.0 / m * tk(j, k);
            if (j == 0 || j == m) v *= 0.5;
            if (k == 0 || k == m) v *= 0.5;
            to_coef(k, j) = v;
        }
    // antiderivative coefficients C_1..C_n
    RMat integ = RMat::Zero(n + 1, n);
    for (int k = 1; k <= n; ++k) {
        if (k == 1) {
            integ(1, 0) += 1.0;
            if (n > 2) integ(1, 2) -= 0.5;
        } else {
            integ(k, k - 1) += 1.0 / (2.0 * k);
            if (k + 1 < n) integ(k, k + 1) -= 1.0 / (2.0 * k);
        }
    }
    RMat eval(n, n + 1);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= n; ++k) {
            double tkx = ((k % 2) ? -1.0 : 1.0) * std::cos(k * theta(j));
            double tkm1 = (k % 2) ? -1.0 : 1.0;
            eval(j, k) = tkx - tkm1;
        }
    cumint_ = eval * integ * to_coef * dydx_.asDiagonal();
    cumint_.row(0).setZero();
    w_ = cumint_.row(m).transpose();
}

double Grid::map(double x) const {
    double s = 0.5 * (1.0 + x);
    return y_max_ * (c_ * s + (1.0 - c_) * s * s * s);
}

double Grid::map_inverse(double y) const {
    if (y <= 0.0) return -1.0;
    if (y >= y_max_) return 1.0;
    double t = y / y_max_;
    double lo = 0.0, hi = 1.0, s = t;
    for (int it = 0; it < 100; ++it) {
        double f = c_ * s + (1.0 - c_) * s * s * s - t;
        double fp = c_ + 3.0 * (1.0 - c_) * s * s;
        if (f > 0) hi = s; else lo = s;
        double sn = s - f / fp;
        if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
        if (std::abs(sn - s) < 1e-16) { s = sn; break; }
        s = sn;
    }
    return 2.0 * s - 1.0;
}

Vec Grid::integral_to_end(const Vec& f) const {
    Vec c = cumint_ * f;
    cplx total = c(n_ - 1);
    Vec out = Vec::Constant(n_, total) - c;
    out(n_ - 1) = 0.0;
    return out;
}

cplx Grid::interpolate(const Vec& f, double y) const {
    double x = map_inverse(y);
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j < n_; ++j) {
        double d = x - x_(j);
        if (d == 0.0) return f(j);
        double w = bary_(j) / d;
        num += w * f(j);
        den += w;
    }
    return num / den;
}

Vec Grid::interpolate_to(const Vec& f, const Grid& other) const {
    Vec out(other.size());
    for (int j = 0; j < other.size(); ++j) out(j) = interpolate(f, other.y(j));
    return out;
}

GridPtr build_grid(int n, double y_max, Mapping mapping, double wall_scale) {
    if (n < 16) throw std::invalid_argument("grid needs N >= 16, got " + std::to_string(n));
    if (!(y_max >= 10.0)) throw std::invalid_argument("grid needs Y_max >= 10");
    if (!(wall_scale > 0.0)) throw std::invalid_argument("wall scale must be positive");
    return std::make_shared<const Grid>(n, y_max, mapping, wall_scale);
}

GridReport check_grid(const Grid& g) {
    GridReport r;
    const int n = g.size();
    RVec one = RVec::Ones(n);
    r.d_const = (g.d1() * one).cwiseAbs().maxCoeff();
    RVec lin = g.d1() * g.nodes();
    for (int j = 1; j < n - 1; ++j) r.d_linear = std::max(r.d_linear, std::abs(lin(j) - 1.0));
    RVec e = (-g.nodes().array()).exp();
    r.quad_exp = std::abs(g.integrate(e) - (1.0 - std::exp(-g.y_max())));
    const double tol_deriv = 1e-8 * n;
    bool inc = true;
    for (int j = 1; j < n; ++j) inc = inc && g.y(j) > g.y(j - 1);
    r.pass = inc && g.y(0) == 0.0 && r.d_const <= tol_deriv && r.d_linear <= tol_deriv && r.quad_exp <= 1e-8;
    return r;
}

ComplexField::ComplexField(GridPtr g, Vec v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw std::invalid_argument("field without grid");
    if (values.size() != grid->size()) throw std::invalid_argument("field length does not match grid");
}

ComplexField ComplexField::zeros(GridPtr g) {
    int n = g->size();
    return ComplexField(std::move(g), Vec::Zero(n));
}

bool ComplexField::finite() const { return values.allFinite(); }

ComplexField apply_operator(Op op, const ComplexField& f, double alpha) {
    const Grid& g = *f.grid;
    switch (op) {
        case Op::d1: return ComplexField(f.grid, g.d1() * f.values);
        case Op::d2: return ComplexField(f.grid, g.d2() * f.values);
        case Op::laplace: return ComplexField(f.grid, g.d2() * f.values - alpha * alpha * f.values);
    }
    return f;
}

ComplexField div_alpha(const ComplexField& u, const ComplexField& v, double alpha) {
    if (u.grid != v.grid) throw std::invalid_argument("grid mismatch in div_alpha");
    return ComplexField(u.grid, cplx(0, alpha) * u.values + u.grid->d1() * v.values);
}

double l2_norm(const Grid& g, const Vec& f) {
    return std::sqrt(std::max(0.0, g.weights().dot(f.cwiseAbs2())));
}

NormReport compute_norms(const ComplexField& f, double alpha, const ShearProfile* profile) {
    const Grid& g = *f.grid;
    NormReport r;
    Vec d[4];
    d[0] = f.values;
    for (int j = 1; j < 4; ++j) d[j] = g.d1() * d[j - 1];
    r.l2 = l2_norm(g, d[0]);
    r.l1 = g.weights().dot(d[0].cwiseAbs());
    r.linf = d[0].cwiseAbs().maxCoeff();
    double n1 = l2_norm(g, d[1]);
    double n2 = l2_norm(g, d[2]);
    r.h1 = std::sqrt(r.l2 * r.l2 + n1 * n1);
    r.h2 = std::sqrt(r.h1 * r.h1 + n2 * n2);
    r.grad_alpha = std::sqrt(n1 * n1 + alpha * alpha * r.l2 * r.l2);
    for (int j = 0; j < 4; ++j) {
        Vec w = d[j];
        for (int k = 0; k < 4; ++k) {
            r.weighted[j][k] = l2_norm(g, w);
            w = g.nodes().asDiagonal() * w;
        }
    }
    if (profile) {
        RVec u(g.size());
        for (int j = 0; j < g.size(); ++j) u(j) = profile->u(g.y(j));
        r.u = l2_norm(g, u.asDiagonal() * d[0]);
        r.sqrt_u = l2_norm(g, u.cwiseSqrt().asDiagonal() * d[0]);
    }
    return r;
}

}  // namespace cbl
