#include "cbl/operators.hpp"

namespace cbl {

BackgroundPtr make_background(const ShearProfile& p, GridPtr g) {
    auto bg = std::make_shared<Background>(Background{g, p});
    const int n = g->size();
    const double m2 = p.mach() * p.mach();
    bg->m = p.mach();
    for (RVec* v : {&bg->u, &bg->du, &bg->d2u, &bg->d3u, &bg->a, &bg->ainv, &bg->dainv, &bg->d2ainv,
                    &bg->q, &bg->q_over_u})
        v->resize(n);
    for (int j = 0; j < n; ++j) {
        auto e = p.eval(g->y(j));
        double a = 1.0 - m2 * e[0] * e[0];
        double da = -2.0 * m2 * e[0] * e[1];
        double d2a = -2.0 * m2 * (e[1] * e[1] + e[0] * e[2]);
        bg->u(j) = e[0];
        bg->du(j) = e[1];
        bg->d2u(j) = e[2];
        bg->d3u(j) = e[3];
        bg->a(j) = a;
        bg->ainv(j) = 1.0 / a;
        bg->dainv(j) = -da / (a * a);
        bg->d2ainv(j) = -d2a / (a * a) + 2.0 * da * da / (a * a * a);
        bg->q(j) = bg->dainv(j) * e[1] + bg->ainv(j) * e[2];
    }
    for (int j = 0; j < n; ++j) {
        if (bg->u(j) > 0) {
            bg->q_over_u(j) = bg->q(j) / bg->u(j);
        } else {
            // q'(0) / U'(0)
            double dq = bg->d2ainv(j) * bg->du(j) + 2.0 * bg->dainv(j) * bg->d2u(j) + bg->ainv(j) * bg->d3u(j);
            bg->q_over_u(j) = dq / bg->du(j);
        }
    }
    return bg;
}

Mat lambda_matrix(const Background& bg, double alpha) {
    const Grid& g = *bg.grid;
    RMat l = bg.ainv.asDiagonal() * g.d2() + RMat(bg.dainv.asDiagonal() * g.d1());
    l.diagonal().array() -= alpha * alpha;
    return l.cast<cplx>();
}

Mat laplace_matrix(const Grid& g, double alpha) {
    RMat l = g.d2();
    l.diagonal().array() -= alpha * alpha;
    return l.cast<cplx>();
}

Vec apply_lambda(const Background& bg, double alpha, const Vec& f) {
    const Grid& g = *bg.grid;
    return mul(bg.ainv, g.d2() * f) + mul(bg.dainv, g.d1() * f) - alpha * alpha * f;
}

Vec apply_laplace(const Grid& g, double alpha, const Vec& f) { return g.d2() * f - alpha * alpha * f; }

double interior_l2(const Grid& g, const Vec& r) {
    Vec t = r;
    t(0) = 0.0;
    t(t.size() - 1) = 0.0;
    return l2_norm(g, t);
}

Vec second_derivative_from_lambda(const Background& bg, double alpha, const Vec& phi, const Vec& w) {
    const Grid& g = *bg.grid;
    Vec dphi = g.d1() * phi;
    return mul(bg.a, w + alpha * alpha * phi - mul(bg.dainv, dphi));
}

}  // namespace cbl
