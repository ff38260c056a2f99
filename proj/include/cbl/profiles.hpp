#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace cbl {

class Grid;

/// U_s and its first three derivatives at one point.
using ProfileEval = std::function<std::array<double, 4>(double)>;

class ShearProfile {
public:
    ShearProfile(std::string name, ProfileEval eval, double mach, double decay_rate);

    const std::string& name() const { return name_; }
    double mach() const { return m_; }
    double decay_rate() const { return s_; }
    double a_inf() const { return 1.0 - m_ * m_; }

    std::array<double, 4> eval(double y) const { return eval_(y); }
    double u(double y) const { return eval_(y)[0]; }
    double du(double y) const { return eval_(y)[1]; }
    double d2u(double y) const { return eval_(y)[2]; }
    double d3u(double y) const { return eval_(y)[3]; }

    // subsonic weight A = 1 - m^2 U^2 and its derivatives
    double a(double y) const;
    double da(double y) const;
    double d2a(double y) const;

    /// same shape, different Mach number
    ShearProfile with_mach(double mach) const;

private:
    std::string name_;
    ProfileEval eval_;
    double m_;
    double s_;
};

/// tanh(Y) boundary layer; rejects m outside (0,1).
ShearProfile make_default_profile(double mach, double decay_rate = 4.0);

/// Lookup by name; only "tanh" is built in.
ShearProfile make_profile(const std::string& name, double mach, double decay_rate = 4.0);

struct ConditionReport {
    double weighted_sup = 0;   // sup (1+Y)^s (|1-U| + |U'| + |U''| + |U'''|)
    double min_a = 0;
    double max_a = 0;
    double wall_value_error = 0;  // |U(0)|
    double wall_slope_error = 0;  // |U'(0) - 1|
    bool positive = true;
    bool monotone = true;
    bool pass = true;
    std::vector<std::string> violations;
};

ConditionReport check_structural_conditions(const ShearProfile& p, const Grid& g,
                                            double tol = 1e-12, double sup_bound = 1e8);

}  // namespace cbl
