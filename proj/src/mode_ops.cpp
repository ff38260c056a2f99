#include "cbl/mode_ops.hpp"

#include <stdexcept>

namespace cbl {

namespace {

void dirichlet_row(Mat& m, int row, int col) {
    m.row(row).setZero();
    m(row, col) = 1.0;
}

}  // namespace

ModeOperators::ModeOperators(BackgroundPtr bg, double eps, double alpha)
    : bg_(std::move(bg)), eps_(eps), alpha_(alpha) {
    if (!(eps > 0.0)) throw std::invalid_argument("ε must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("α must be positive");
    const Grid& g = *bg_->grid;
    lam_ = bg_->ainv.asDiagonal() * g.d2() + RMat(bg_->dainv.asDiagonal() * g.d1());
    lam_.diagonal().array() -= alpha * alpha;
}

LU& ModeOperators::factor(std::unique_ptr<LU>& slot, Mat&& m) {
    slot = std::make_unique<LU>(m);
    ++nfact_;
    return *slot;
}

Vec ModeOperators::rayleigh(const Vec& r, cplx wall) {
    const int n = size();
    if (!ray_) {
        Mat m = lam_.cast<cplx>();
        m.diagonal() -= bg_->q_over_u.cast<cplx>();
        dirichlet_row(m, 0, 0);
        dirichlet_row(m, n - 1, n - 1);
        factor(ray_, std::move(m));
    }
    Vec b = r;
    b(0) = wall;
    b(n - 1) = 0.0;
    return ray_->solve(b);
}

Vec ModeOperators::tilde_airy(const Vec& h) {
    const int n = size();
    if (!ta_) {
        Mat m = cplx(0, eps_) * lam_.cast<cplx>();
        m.diagonal() += bg_->u.cast<cplx>();
        dirichlet_row(m, 0, 0);
        dirichlet_row(m, n - 1, n - 1);
        factor(ta_, std::move(m));
    }
    Vec b = h;
    b(0) = 0.0;
    b(n - 1) = 0.0;
    return ta_->solve(b);
}

Vec ModeOperators::airy_neumann(const Vec& r) {
    const int n = size();
    if (!an_) {
        const Grid& g = grid();
        Mat m = cplx(0, eps_) * g.d2().cast<cplx>();
        m.diagonal().array() += cplx(0, -eps_ * alpha_ * alpha_);
        m.diagonal() += bg_->u.cast<cplx>();
        m.row(0) = g.d1().row(0).cast<cplx>();
        dirichlet_row(m, n - 1, n - 1);
        factor(an_, std::move(m));
    }
    Vec b = r;
    b(0) = 0.0;
    b(n - 1) = 0.0;
    return an_->solve(b);
}

std::pair<Vec, Vec> ModeOperators::os_tilde_direct(const Vec& f) {
    const int n = size();
    const Grid& g = grid();
    const cplx ie(0, eps_);
    if (!ost_) {
        Mat m = Mat::Zero(2 * n, 2 * n);
        for (int i = 1; i < n - 1; ++i) {
            m.block(i, 0, 1, n) = lam_.row(i).cast<cplx>();
            m(i, n + i) = -1.0;
            m.block(n + i, n, 1, n) = ie * g.d2().row(i).cast<cplx>();
            m(n + i, n + i) += -ie * alpha_ * alpha_ + bg_->u(i);
            m(n + i, i) = -bg_->q(i);
        }
        m(0, 0) = 1.0;
        m(n - 1, n - 1) = 1.0;
        m.block(n, n, 1, n) = g.d1().row(0).cast<cplx>();
        m(2 * n - 1, 2 * n - 1) = 1.0;
        factor(ost_, std::move(m));
    }
    Vec b = Vec::Zero(2 * n);
    for (int i = 1; i < n - 1; ++i) b(n + i) = f(i);
    Vec x = ost_->solve(b);
    return {x.head(n), x.tail(n)};
}

std::pair<Vec, Vec> ModeOperators::os_energy_block(const Vec& f) {
    const int n = size();
    const Grid& g = grid();
    const cplx ie(0, eps_);
    if (!oseb_) {
        Mat m = Mat::Zero(2 * n, 2 * n);
        RMat conv = g.d1() * (bg_->ainv.cwiseProduct(bg_->u)).asDiagonal() * g.d1();
        for (int i = 1; i < n - 1; ++i) {
            m.block(i, 0, 1, n) = lam_.row(i).cast<cplx>();
            m(i, n + i) = -1.0;
            m.block(n + i, n, 1, n) = ie * g.d2().row(i).cast<cplx>();
            m(n + i, n + i) += -ie * alpha_ * alpha_;
            m.block(n + i, 0, 1, n) = conv.row(i).cast<cplx>();
            m(n + i, i) -= alpha_ * alpha_ * bg_->u(i);
        }
        m(0, 0) = 1.0;
        m.block(n - 1, 0, 1, n) = g.d1().row(0).cast<cplx>();  // ∂φ(0) = 0
        m(n, n - 1) = 1.0;                                       // φ(Y_max) = 0
        m(2 * n - 1, 2 * n - 1) = 1.0;                           // W(Y_max) = 0
        factor(oseb_, std::move(m));
    }
    Vec b = Vec::Zero(2 * n);
    for (int i = 1; i < n - 1; ++i) b(n + i) = f(i);
    Vec x = oseb_->solve(b);
    return {x.head(n), x.tail(n)};
}

std::pair<Vec, Vec> ModeOperators::os_cns_direct(const Vec& f, cplx phi_wall, cplx z_wall) {
    const int n = size();
    const Grid& g = grid();
    const Background& b = *bg_;
    const cplx ie(0, eps_);
    const double a2 = alpha_ * alpha_;
    if (!cns_) {
        Mat m = Mat::Zero(2 * n, 2 * n);
        for (int i = 1; i < n - 1; ++i) {
            m.block(i, 0, 1, n) = g.d2().row(i).cast<cplx>();
            m(i, i) -= a2;
            m(i, n + i) = -1.0;
            // iεΛz + U(A^{-1}(z+α²φ) + ∂A^{-1}∂φ - α²φ) - qφ
            m.block(n + i, n, 1, n) = ie * lam_.row(i).cast<cplx>();
            m(n + i, n + i) += b.u(i) * b.ainv(i);
            m.block(n + i, 0, 1, n) = (b.u(i) * b.dainv(i)) * g.d1().row(i).cast<cplx>();
            m(n + i, i) += b.u(i) * (b.ainv(i) - 1.0) * a2 - b.q(i);
        }
        m(0, 0) = 1.0;
        m(n - 1, n - 1) = 1.0;
        m(n, n) = 1.0;
        m(2 * n - 1, 2 * n - 1) = 1.0;
        factor(cns_, std::move(m));
    }
    Vec rhs = Vec::Zero(2 * n);
    for (int i = 1; i < n - 1; ++i) rhs(n + i) = f(i);
    rhs(0) = phi_wall;
    rhs(n) = z_wall;
    Vec x = cns_->solve(rhs);
    return {x.head(n), x.tail(n)};
}

}  // namespace cbl
