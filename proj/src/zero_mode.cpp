#include "cbl/zero_mode.hpp"

#include <cmath>
#include <stdexcept>

namespace cbl {

namespace {

// ∫_{Y_max}^∞ h dY assuming the exponential decay seen over the last fifth of the grid.
// Values already at round-off relative to the peak count as zero.
cplx tail_integral(const Grid& g, const Vec& h) {
    const int e = g.size() - 1;
    const double hmax = h.cwiseAbs().maxCoeff();
    if (hmax == 0.0 || std::abs(h(e)) <= 1e-10 * hmax) return 0.0;  // rounding plateau
    int a = e;
    while (a > 0 && g.y(a) > 0.8 * g.y_max()) --a;
    double k = std::log(std::abs(h(a)) / std::abs(h(e))) / (g.y(e) - g.y(a));
    if (!(k > 0.0)) throw std::domain_error("zero-mode data not integrable on the grid (no decay near Y_max)");
    return h(e) / k;
}

}  // namespace

ZeroModeSolution solve_zero_mode(const Background& bg, double nu, double lambda, const Vec& g_rho, const Vec& g_u,
                                 const Vec& g_v, double delta) {
    const Grid& g = *bg.grid;
    const int n = g.size();
    if (!(nu > 0.0)) throw std::invalid_argument("ν must be positive");
    if (!g_rho.allFinite() || !g_u.allFinite() || !g_v.allFinite()) throw std::domain_error("non-finite zero-mode data");
    const double sn = std::sqrt(nu), m2 = bg.m * bg.m;
    const double den = 1.0 + delta * m2 * (1.0 + lambda) * nu;

    ZeroModeSolution z;
    cplx tv = tail_integral(g, g_v);
    Vec inv_gv = -sn * (g.integral_to_end(g_v) + Vec::Constant(n, tv));  // ∂_y^{-1}g_v
    Vec irho = sn * g.integral_from_zero(g_rho);                         // I(g_ρ)
    z.rho = m2 / den * (inv_gv + (1.0 + lambda) * nu * g_rho);
    z.v = (irho - delta * m2 * sn * g.integral_from_zero(inv_gv)) / den;

    Vec h = g_u - mul(bg.du, z.v) / sn - mul(bg.d2u, z.rho);
    cplx th = tail_integral(g, h);
    Vec inner = g.integral_to_end(h) + Vec::Constant(n, th);
    z.u = g.integral_from_zero(inner);
    z.tail = std::max(std::abs(tv), std::abs(th)) * sn;
    if (!z.rho.allFinite() || !z.u.allFinite() || !z.v.allFinite()) throw std::domain_error("zero-mode quadrature overflow");

    z.mass = sn * g.integrate(z.rho);
    RVec y = sn * g.nodes();
    cplx first_moment = sn * g.integrate(Vec(mul(y, g_v)));
    z.mass_predicted = m2 / den * (-first_moment + (1.0 + lambda) * nu * sn * g.integrate(g_rho));
    z.v_l1 = sn * g.weights().dot(z.v.cwiseAbs());

    z.residual = zero_mode_residual(bg, nu, lambda, z.rho, z.u, z.v, g_rho, g_u, g_v, delta);
    z.bc_error = std::max(std::abs(z.u(0)), std::abs(z.v(0)));
    return z;
}

double zero_mode_residual(const Background& bg, double nu, double lambda, const Vec& rho, const Vec& u, const Vec& v,
                          const Vec& g_rho, const Vec& g_u, const Vec& g_v, double delta) {
    const Grid& g = *bg.grid;
    const double sn = std::sqrt(nu), m2 = bg.m * bg.m;
    const RMat& d = g.d1();
    const RMat& d2 = g.d2();
    // ∂_y = ν^{-1/2}∂_Y
    Vec r1a = delta * rho, r1b = d * v / sn;
    Vec r2a = mul(bg.du, v) / sn, r2b = mul(bg.d2u, rho), r2c = -(d2 * u);
    Vec r3a = d * rho / (m2 * sn), r3b = -(1.0 + lambda) * (d2 * v);
    Vec r1 = r1a + r1b - g_rho, r2 = r2a + r2b + r2c - g_u, r3 = r3a + r3b - g_v;
    double abs = std::sqrt(std::pow(l2_norm(g, r1), 2) + std::pow(l2_norm(g, r2), 2) + std::pow(l2_norm(g, r3), 2));
    double scale = l2_norm(g, r1a) + l2_norm(g, r1b) + l2_norm(g, r2a) + l2_norm(g, r2b) + l2_norm(g, r2c) +
                   l2_norm(g, r3a) + l2_norm(g, r3b) + l2_norm(g, g_rho) + l2_norm(g, g_u) + l2_norm(g, g_v);
    return scale > 0 ? abs / scale : abs;
}

}  // namespace cbl
