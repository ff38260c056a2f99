#pragma once

#include <complex>

namespace cbl {

using cplx = std::complex<double>;

struct AiryValue {
    cplx z;
    cplx ai;
    cplx aip;
    bool overflow = false;
};

/// Ai(z) and Ai'(z) for complex z.
AiryValue airy_ai(cplx z);

/// Ai_0(z) = ∫ Ai(t) dt from e^{iπ/6} z to ∞ along the ray direction e^{iπ/6}.
/// Throws when the quadrature does not settle.
cplx airy_antiderivative(cplx z, double tol = 1e-12);

/// δ = e^{-iπ/6} ε^{1/3}
cplx sublayer_delta(double eps);

/// W(Y) = Ai(δ^{-1}(Y+Y_0)) / Ai(δ^{-1}Y_0), Y_0 = -iεα^2.  Optional ∂_Y W.
cplx sublayer_profile_W(double y, double eps, double alpha, cplx* dw = nullptr);

/// 3^{-2/3} Γ(1/3)
double fast_trace_constant();

}  // namespace cbl
