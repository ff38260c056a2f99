#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cbl/quasi_compressible.hpp"
#include "cbl/stokes.hpp"

namespace cbl {

struct LinearSettings {
    RegimeThresholds thresholds;
    IterationControl os;     // inner Orr-Sommerfeld iterations
    int max_iter = 60;       // QC-Stokes steps
    double tol_iter = 1e-12; // relative increment
    int jobs = 1;            // worker threads across modes
};

/// slip problem: L(ρ,u,v) = f with v(0) = 0
struct SlipSolution {
    Triple t;
    Regime regime = Regime::low;
    std::vector<double> history;  // ‖(s^k + q^k)‖ per step
    int iterations = 0;
    double ratio = 0;  // largest increment ratio after the first step
    double residual = 0;
    double bc_error = 0;
};

struct Corrector {
    Triple b;        // H + r
    FluidTriple h;   // homogeneous quasi-compressible leading part
    Triple r;        // slip-solved remainder
    Regime regime = Regime::low;
    cplx u0 = 0;     // u_b(0)
    double residual = 0;  // ‖L b‖ relative to its terms
    double bc_error = 0;
};

struct ModeSolution {
    int n = 0;
    double alpha = 0, eps = 0;
    Regime regime = Regime::low;
    Triple t;
    Triple slip;
    cplx u_slip0 = 0, u_b0 = 0, mix = 0;  // mix = u_sl(0)/u_b(0)
    double residual = 0;  // full system, rescaled variables
    double bc_error = 0;  // max |u(0)|, |v(0)|
    int slip_iterations = 0;
    double slip_ratio = 0;
};

/// Per-mode solver with cached factorizations and corrector.  Not thread-safe.
class ModeSolver {
public:
    ModeSolver(ModeSystem s, LinearSettings cfg = {});

    const ModeSystem& system() const { return s_; }
    Regime regime() const { return regime_; }
    ModeOperators& ops() { return ops_; }

    /// QC-Stokes alternation (low and middle regimes)
    SlipSolution qc_stokes(const Triple& f);
    /// dense solve with the extra slip condition ∂_Yu(0) = 0
    SlipSolution slip_high_freq(const Triple& f);
    /// routed by regime
    SlipSolution solve_slip(const Triple& f);

    const Corrector& corrector();
    /// no-slip mode: slip part minus (u_sl(0)/u_b(0)) corrector
    ModeSolution solve(const Triple& f, int n = 0);

private:
    ModeSystem s_;
    LinearSettings cfg_;
    Regime regime_;
    ModeOperators ops_;
    StokesSolver stokes_;
    std::unique_ptr<DenseModeSolver> slip_hf_;
    std::optional<Corrector> corr_;
};

/// u_sl(0)/u_b(0) with long double accumulation
cplx mixing_coefficient(cplx u_slip0, cplx u_b0);

/// thrown when |u_b(0)| falls below the regime floor
double corrector_floor(Regime r, double eps, double alpha);

}  // namespace cbl
