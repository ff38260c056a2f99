#include "cbl/full_system.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cbl {

Triple Triple::zeros(int n) { return {Vec::Zero(n), Vec::Zero(n), Vec::Zero(n)}; }

bool Triple::finite() const { return rho.allFinite() && u.allFinite() && v.allFinite(); }

Triple& Triple::operator+=(const Triple& o) {
    rho += o.rho;
    u += o.u;
    v += o.v;
    return *this;
}

Triple& Triple::operator-=(const Triple& o) {
    rho -= o.rho;
    u -= o.u;
    v -= o.v;
    return *this;
}

Triple& Triple::operator*=(cplx c) {
    rho *= c;
    u *= c;
    v *= c;
    return *this;
}

Triple operator+(Triple a, const Triple& b) { return a += b; }
Triple operator-(Triple a, const Triple& b) { return a -= b; }
Triple operator*(cplx c, Triple a) { return a *= c; }

double l2_norm(const Grid& g, const Triple& t) {
    double a = l2_norm(g, t.rho), b = l2_norm(g, t.u), c = l2_norm(g, t.v);
    return std::sqrt(a * a + b * b + c * c);
}

double ModeSystem::sqrt_nu() const { return std::sqrt(nu); }
double ModeSystem::eps() const { return std::sqrt(nu) / alpha; }
double ModeSystem::minv2() const { return 1.0 / (bg->m * bg->m); }

Vec div_alpha(const ModeSystem& s, const Vec& u, const Vec& v) {
    return cplx(0, s.alpha) * u + s.grid().d1() * v;
}

namespace {

// 3x3 blocks, rows (continuity, u-momentum, v-momentum), columns (ρ, u, v)
struct Blocks {
    Mat b[3][3];
};

Blocks build_blocks(const ModeSystem& s, Variant var) {
    const Background& bg = *s.bg;
    const Grid& g = *bg.grid;
    const int n = g.size();
    const double a = s.alpha, sn = s.sqrt_nu(), k = s.minv2(), lam = s.lambda;
    const cplx ia(0, a);
    const Mat id = Mat::Identity(n, n);
    const Mat d = g.d1().cast<cplx>();
    const Mat d2 = g.d2().cast<cplx>();
    const Mat lap = d2 - a * a * id;
    const Mat ud = bg.u.cast<cplx>().asDiagonal();
    const Mat u1 = bg.du.cast<cplx>().asDiagonal();
    const Mat u2 = bg.d2u.cast<cplx>().asDiagonal();

    Blocks B;
    B.b[0][0] = ia * ud;
    B.b[0][1] = ia * id;
    B.b[0][2] = d;
    if (var == Variant::qc) {
        B.b[1][0] = -sn * lap * ud + ia * k * id;
        B.b[1][1] = -sn * lap + ia * ud;
        B.b[1][2] = u1;
        B.b[2][0] = k * d;
        B.b[2][1] = Mat::Zero(n, n);
        B.b[2][2] = -sn * lap + ia * ud;
    } else {
        B.b[1][0] = ia * k * id + sn * u2;
        B.b[1][1] = ia * ud - sn * lap + lam * sn * a * a * id;
        B.b[1][2] = -lam * sn * ia * d;
        if (var == Variant::full) B.b[1][2] += u1;
        B.b[2][0] = k * d;
        B.b[2][1] = -lam * sn * ia * d;
        B.b[2][2] = ia * ud - sn * lap - lam * sn * d2;
    }
    return B;
}

}  // namespace

Applied apply_system(const ModeSystem& s, Variant var, const Triple& x) {
    const Background& bg = *s.bg;
    const Grid& g = *bg.grid;
    const int n = g.size();
    const double a = s.alpha, sn = s.sqrt_nu(), k = s.minv2(), lam = s.lambda;
    const cplx ia(0, a);
    const RMat& d = g.d1();
    const RMat& d2 = g.d2();
    Vec drho = d * x.rho, du = d * x.u, dv = d * x.v;
    Vec lapu = d2 * x.u - a * a * x.u, lapv = d2 * x.v - a * a * x.v;
    Vec urho = mul(bg.u, x.rho);

    std::vector<Vec> cont{ia * urho, ia * x.u, dv};
    std::vector<Vec> mu, mv;
    if (var == Variant::qc) {
        mu = {-sn * (d2 * urho - a * a * urho), ia * k * x.rho, -sn * lapu, ia * mul(bg.u, x.u), mul(bg.du, x.v)};
        mv = {k * drho, -sn * lapv, ia * mul(bg.u, x.v)};
    } else {
        mu = {ia * k * x.rho, sn * mul(bg.d2u, x.rho), ia * mul(bg.u, x.u), -sn * lapu, lam * sn * a * a * x.u,
              -lam * sn * ia * dv};
        if (var == Variant::full) mu.push_back(mul(bg.du, x.v));
        mv = {k * drho, -lam * sn * ia * du, ia * mul(bg.u, x.v), -sn * lapv, -lam * sn * (d2 * x.v)};
    }
    Applied out;
    out.value = Triple::zeros(n);
    for (const Vec& t : cont) {
        out.value.rho += t;
        out.scale += l2_norm(g, t);
    }
    for (const Vec& t : mu) {
        out.value.u += t;
        out.scale += interior_l2(g, t);
    }
    for (const Vec& t : mv) {
        out.value.v += t;
        out.scale += interior_l2(g, t);
    }
    return out;
}

Triple qc_error(const ModeSystem& s, const Triple& x) {
    Triple full = apply_system(s, Variant::full, x).value;
    Triple qc = apply_system(s, Variant::qc, x).value;
    Triple e = full - qc;
    e.rho.setZero();
    return e;
}

ResidualParts residual_parts(const ModeSystem& s, Variant var, const Triple& x, const Triple& f) {
    const Grid& g = s.grid();
    Applied a = apply_system(s, var, x);
    Triple r = a.value - f;
    double c = l2_norm(g, r.rho), mu = interior_l2(g, r.u), mv = interior_l2(g, r.v);
    double fs = l2_norm(g, f.rho) + interior_l2(g, f.u) + interior_l2(g, f.v);
    return {std::sqrt(c * c + mu * mu + mv * mv), std::max(a.scale, fs)};
}

double system_residual(const ModeSystem& s, Variant var, const Triple& x, const Triple& f) {
    ResidualParts p = residual_parts(s, var, x, f);
    return p.scale > 0 ? p.abs / p.scale : p.abs;
}

DenseModeSolver::DenseModeSolver(ModeSystem s, Variant var, WallBC bc) : s_(std::move(s)), var_(var), bc_(bc) {
    const Grid& g = s_.grid();
    const int n = g.size();
    const Blocks B = build_blocks(s_, var_);
    Mat m(3 * n, 3 * n);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.block(i * n, j * n, n, n) = B.b[i][j];
    auto set_row = [&](int row) { m.row(row).setZero(); };
    // u-momentum boundary rows
    set_row(n);
    if (bc_ == WallBC::slip) {
        for (int c = 0; c < n; ++c) m(n, n + c) = g.d1()(0, c);
    } else {
        m(n, n) = 1.0;
    }
    set_row(2 * n - 1);
    m(2 * n - 1, 2 * n - 1) = 1.0;
    // v-momentum boundary rows
    set_row(2 * n);
    m(2 * n, 2 * n) = 1.0;
    set_row(3 * n - 1);
    m(3 * n - 1, 3 * n - 1) = 1.0;
    lu_ = std::make_unique<LU>(m);
}

Triple DenseModeSolver::solve(const Triple& f, cplx u_wall) const {
    const int n = s_.size();
    Vec b(3 * n);
    b << f.rho, f.u, f.v;
    b(n) = bc_ == WallBC::pinned_u ? u_wall : cplx(0.0);
    b(2 * n - 1) = 0.0;
    b(2 * n) = 0.0;
    b(3 * n - 1) = 0.0;
    Vec x = lu_->solve(b);
    Triple t{x.segment(0, n), x.segment(n, n), x.segment(2 * n, n)};
    if (!t.finite()) throw std::runtime_error("dense mode solve produced non-finite values");
    return t;
}

double wall_error(const Triple& x, WallBC bc, const Grid& g) {
    const int n = g.size();
    double e = std::max({std::abs(x.v(0)), std::abs(x.u(n - 1)), std::abs(x.v(n - 1))});
    if (bc == WallBC::no_slip) e = std::max(e, std::abs(x.u(0)));
    if (bc == WallBC::slip) e = std::max(e, std::abs((g.d1() * x.u)(0)));
    return e;
}

}  // namespace cbl
