#pragma once

#include "cbl/orr_sommerfeld.hpp"

namespace cbl {

/// Regime boundaries on β = αε^{1/3}: low for β < kappa0, high for β > 1/kappa_hat0.
struct RegimeThresholds {
    double kappa0 = 0.5;
    double kappa_hat0 = 0.5;
    double c1 = 0.5;  // middle band [c1, c2] used for sublayer checks
    double c2 = 2.0;
};

Regime classify_regime(double eps, double alpha, const RegimeThresholds& t = {});

/// homogeneous OS_CNS solution near the Rayleigh mode, φ(0) = 1
OSSolution slow_mode(ModeOperators& ops, const IterationControl& ctl = {});

/// sublayer mode: low regime φ(0) = 1; middle and high regimes φ(0) = 0 with ∂_Yφ(0) ≠ 0
OSSolution fast_mode(ModeOperators& ops, Regime regime, const IterationControl& ctl = {});

/// leading profile of a fast mode and its exact OS_CNS error, no numerical derivatives
struct FastProfile {
    Vec phi, dphi, lap;
    Vec error;  // OS_CNS(φ_app)
    cplx dphi0;
};
FastProfile fast_profile(const ModeOperators& ops, Regime regime);

/// middle-regime trace -∫e^{-αY}W dY rewritten with Ai₀ after one integration by parts,
/// ζ = ε^{-1/3}(Y+Y₀); independent of the grid quadrature
cplx middle_trace_from_antiderivative(double eps, double alpha);

}  // namespace cbl
