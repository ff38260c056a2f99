#include "cbl/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace cbl {

namespace {

constexpr double kAi0 = 0.355028053887817239260;
constexpr double kAip0 = -0.258819403792806798405;
constexpr double kAsymRadius = 9.0;
constexpr double kSeriesRadius = 2.0;
constexpr double kStep = 0.4;

// Taylor expansion of the Airy ODE about z0, evaluated at z0 + h.
void taylor_step(cplx z0, cplx& ai, cplx& aip, cplx h) {
    cplx a_prev = 0.0;  // a_{k-1}
    cplx a0 = ai, a1 = aip;
    cplx sum = a0 + a1 * h;
    cplx dsum = a1;
    cplx hk = h;  // h^{k+1}
    // a_{k+2} = (z0 a_k + a_{k-1}) / ((k+1)(k+2))
    cplx ak = a0, ak1 = a1;
    int small = 0;
    for (int k = 0; k < 400; ++k) {
        cplx ak2 = (z0 * ak + a_prev) / double((k + 1) * (k + 2));
        cplx term_d = double(k + 2) * ak2 * hk;  // (k+2) a_{k+2} h^{k+1}
        hk *= h;
        cplx term = ak2 * hk;  // a_{k+2} h^{k+2}
        sum += term;
        dsum += term_d;
        a_prev = ak;
        ak = ak1;
        ak1 = ak2;
        double mag = std::abs(term) + std::abs(term_d);
        if (mag <= 1e-18 * (std::abs(sum) + std::abs(dsum))) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
    }
    ai = sum;
    aip = dsum;
}

AiryValue asymptotic(cplx z) {
    const double pi = std::numbers::pi;
    cplx zeta = 2.0 / 3.0 * std::pow(z, 1.5);
    cplx z14 = std::pow(z, 0.25);
    cplx s = 1.0, sd = 1.0;
    double u = 1.0;
    cplx zk = 1.0;
    double best = 1e300;
    for (int k = 1; k < 60; ++k) {
        u *= double(6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (double(2 * k - 1) * 216.0 * k);
        double v = -double(6 * k + 1) / double(6 * k - 1) * u;
        zk *= -1.0 / zeta;
        cplx t = u * zk;
        if (std::abs(t) > best) break;  // optimal truncation
        best = std::abs(t);
        s += t;
        sd += v * zk;
        if (best < 1e-18) break;
    }
    AiryValue r;
    r.z = z;
    if (std::real(-zeta) > 700.0) {
        r.overflow = true;
        r.ai = r.aip = cplx(INFINITY, 0);
        return r;
    }
    cplx e = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    r.ai = e / z14 * s;
    r.aip = -e * z14 * sd;
    return r;
}

AiryValue from_series(cplx z) {
    cplx ai = kAi0, aip = kAip0;
    taylor_step(0.0, ai, aip, z);
    return {z, ai, aip};
}

}  // namespace

AiryValue airy_ai(cplx z) {
    const double pi = std::numbers::pi;
    const double r = std::abs(z);
    if (r <= kSeriesRadius) return from_series(z);
    const double th = std::arg(z);
    if (std::abs(th) > 2.0 * pi / 3.0) {
        const cplx w = std::polar(1.0, 2.0 * pi / 3.0);
        AiryValue a = airy_ai(w * z);
        AiryValue b = airy_ai(w * w * z);
        AiryValue out{z, -w * a.ai - w * w * b.ai, -w * w * a.aip - w * b.aip};
        out.overflow = a.overflow || b.overflow;
        return out;
    }
    if (r >= kAsymRadius) return asymptotic(z);

    // Taylor stepping along the ray, in the direction where Ai grows
    const cplx dir = std::polar(1.0, th);
    double r0;
    AiryValue start;
    if (std::abs(th) <= pi / 3.0) {
        r0 = kAsymRadius;
        start = asymptotic(r0 * dir);
    } else {
        r0 = kSeriesRadius;
        start = from_series(r0 * dir);
    }
    cplx ai = start.ai, aip = start.aip;
    int steps = std::max(1, int(std::ceil(std::abs(r - r0) / kStep)));
    double h = (r - r0) / steps;
    cplx zc = r0 * dir;
    for (int k = 0; k < steps; ++k) {
        taylor_step(zc, ai, aip, h * dir);
        zc = (r0 + (k + 1) * h) * dir;
    }
    return {z, ai, aip};
}

cplx airy_antiderivative(cplx z, double tol) {
    using boost::math::quadrature::gauss;
    const cplx rot = std::polar(1.0, std::numbers::pi / 6.0);
    auto f = [&](double s) { return rot * airy_ai(rot * (z + s)).ai; };
    cplx sum = 0.0;
    double a = 0.0;
    for (int k = 0; k < 800; ++k) {
        cplx part = gauss<double, 30>::integrate(f, a, a + 1.0);
        sum += part;
        a += 1.0;
        if (!std::isfinite(std::abs(part))) break;
        if (std::abs(part) <= tol * 1e-4 * std::max(std::abs(sum), 1e-300) && k > 0) return sum;
    }
    throw std::runtime_error("Ai_0 contour quadrature did not converge");
}

cplx sublayer_delta(double eps) { return std::polar(std::cbrt(eps), -std::numbers::pi / 6.0); }

cplx sublayer_profile_W(double y, double eps, double alpha, cplx* dw) {
    const cplx dinv = 1.0 / sublayer_delta(eps);
    const cplx y0(0.0, -eps * alpha * alpha);
    AiryValue den = airy_ai(dinv * y0);
    if (std::abs(den.ai) < 1e-250) throw std::runtime_error("Ai(δ^{-1}Y_0) too small");
    AiryValue num = airy_ai(dinv * (y + y0));
    if (dw) *dw = dinv * num.aip / den.ai;
    return num.ai / den.ai;
}

double fast_trace_constant() { return std::pow(3.0, -2.0 / 3.0) * boost::math::tgamma(1.0 / 3.0); }

}  // namespace cbl
