#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cbl/config.hpp"

namespace cbl {

struct Check {
    std::string name;
    double measured = 0;
    double limit = 0;
    bool pass = false;
    std::string note;
};

/// one acceptance criterion: individual checks plus the measured constants archived for comparison
struct CriterionReport {
    int id = 0;
    std::string key;  // residuals, oracles, traces, scaling, structure, contraction, low_mach, grid
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> constants;
    double seconds = 0;
    bool pass() const;
};

struct VerifyReport {
    std::vector<CriterionReport> criteria;
    bool pass() const;
};

CriterionReport verify_residuals(const RunConfig& c);  // `verify_samples` random data sets per solver
CriterionReport verify_oracles(const RunConfig& c);
CriterionReport verify_traces(const RunConfig& c);
CriterionReport verify_scaling(const RunConfig& c, int jobs = 1);
CriterionReport verify_structure(const RunConfig& c);
CriterionReport verify_contraction(const RunConfig& c);
CriterionReport verify_low_mach(const RunConfig& c);
/// reruns the other criteria at N → 2N and Y_max → 2Y_max and compares against `base`
CriterionReport verify_grid(const RunConfig& c, const std::vector<CriterionReport>& base, int jobs = 1);

/// runs the criteria named in c.verify_checks ("all" for every one)
VerifyReport run_verify(const RunConfig& c, int jobs = 1);

/// verify.csv (one row per check) and verify.json (checks and constants) in `dir`
void write_report(const VerifyReport& r, const std::string& dir);

}  // namespace cbl
