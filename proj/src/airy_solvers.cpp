#include "cbl/airy_solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace cbl {

namespace {

AirySolution pack(ModeOperators& ops, Vec x) {
    AirySolution s;
    s.eps = ops.eps();
    s.alpha = ops.alpha();
    const Grid& g = ops.grid();
    Vec dx = g.d1() * x;
    s.weighted_conormal = l2_norm(g, mul(ops.bg().u.cwiseProduct(g.nodes()), dx));
    s.psi = ComplexField(ops.grid_ptr(), std::move(x));
    s.norms = compute_norms(s.psi, ops.alpha(), &ops.bg().profile);
    return s;
}

}  // namespace

AirySolution solve_tilde_airy(const ComplexField& h, ModeOperators& ops, double regime_bound) {
    if (h.grid.get() != &ops.grid()) throw std::invalid_argument("grid mismatch in tilde-Airy solve");
    if (!h.finite()) throw std::invalid_argument("tilde-Airy data not finite");
    double beta = ops.alpha() * std::cbrt(ops.eps());
    if (beta > regime_bound) throw std::domain_error("αε^{1/3} too large for the tilde-Airy regime");
    const int n = ops.size();
    Vec x = ops.tilde_airy(h.values);
    AirySolution s = pack(ops, x);
    const Grid& g = ops.grid();
    Vec r = cplx(0, ops.eps()) * apply_lambda(ops.bg(), ops.alpha(), x) + mul(ops.bg().u, x) - h.values;
    double scale = l2_norm(g, h.values);
    s.residual = scale > 0 ? interior_l2(g, r) / scale : interior_l2(g, r);
    s.bc_error = std::max(std::abs(x(0)), std::abs(x(n - 1)));
    return s;
}

AirySolution solve_classical_airy_neumann(const ComplexField& gin, ModeOperators& ops) {
    if (gin.grid.get() != &ops.grid()) throw std::invalid_argument("grid mismatch in Airy-Neumann solve");
    if (!gin.finite()) throw std::invalid_argument("Airy-Neumann data not finite");
    const double gmax = gin.values.cwiseAbs().maxCoeff();
    if (std::abs(gin.values(0)) > 1e-10 * std::max(gmax, 1e-300))
        throw std::domain_error("Airy-Neumann data must vanish at the wall: g(0) ≠ 0");
    const Grid& g = ops.grid();
    const int n = ops.size();
    Vec dg = g.d1() * gin.values;
    Vec x = ops.airy_neumann(dg);
    AirySolution s = pack(ops, x);
    Vec r = cplx(0, ops.eps()) * apply_laplace(g, ops.alpha(), x) + mul(ops.bg().u, x) - dg;
    double scale = l2_norm(g, gin.values);
    s.residual = scale > 0 ? interior_l2(g, r) / scale : interior_l2(g, r);
    s.bc_error = std::max(std::abs((g.d1() * x)(0)), std::abs(x(n - 1)));
    return s;
}

}  // namespace cbl
