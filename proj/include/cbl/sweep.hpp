#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cbl {

struct RunConfig;

/// least-squares fit of log y = a + b log x
struct SlopeFit {
    double slope = 0, intercept = 0;
    double std_err = 0;
    double lo = 0, hi = 0;  // 95% band on the slope
    int points = 0;
};

/// throws std::invalid_argument("insufficient points") below 3 points, or on non-positive values
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// one row per parameter tuple
struct SweepRecord {
    std::vector<std::pair<std::string, double>> columns;
    bool ok = true;  // solve finished and residuals within tolerance
    std::string error;
    double get(const std::string& name) const;
};

struct TrackedFit {
    std::string quantity;  // column fitted
    std::string against;   // abscissa column
    double exponent = 0;   // bound exponent
    bool two_sided = false;  // rate check [exponent - 0.3, exponent + 0.3] instead of an upper envelope
    SlopeFit fit;
    bool pass = false;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepRecord> records;
    std::vector<TrackedFit> fits;
    bool pass() const;
};

/// Axis nu: linear solve over all modes; eps: tilde-Airy at fixed α; alpha: high-frequency
/// Orr-Sommerfeld at fixed ε; L: Stokes mode `mode` with n̂ = mode/L; m: low-Mach comparison.
/// Points run on `jobs` workers, rows are kept in input order.
/// Fewer than 3 values, or fewer than 3 points that solve, throws std::invalid_argument("insufficient points").
SweepResult run_sweep(const RunConfig& c, int jobs = 1);

void write_records_csv(const std::vector<SweepRecord>& rows, const std::string& path);
void write_fits_csv(const std::vector<TrackedFit>& fits, const std::string& path);

}  // namespace cbl
