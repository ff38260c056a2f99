#include "cbl/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "cbl/grid.hpp"

namespace cbl {

ShearProfile::ShearProfile(std::string name, ProfileEval eval, double mach, double decay_rate)
    : name_(std::move(name)), eval_(std::move(eval)), m_(mach), s_(decay_rate) {
    // m = 0 is kept for the incompressible comparison operator
    if (!(mach >= 0.0 && mach < 1.0))
        throw std::invalid_argument("mach number must lie in [0,1), got " + std::to_string(mach));
    if (!(decay_rate > 3.0))
        throw std::invalid_argument("profile decay rate s must exceed 3");
}

double ShearProfile::a(double y) const {
    double u = eval_(y)[0];
    return 1.0 - m_ * m_ * u * u;
}

double ShearProfile::da(double y) const {
    auto e = eval_(y);
    return -2.0 * m_ * m_ * e[0] * e[1];
}

double ShearProfile::d2a(double y) const {
    auto e = eval_(y);
    return -2.0 * m_ * m_ * (e[1] * e[1] + e[0] * e[2]);
}

ShearProfile ShearProfile::with_mach(double mach) const {
    return ShearProfile(name_, eval_, mach, s_);
}

namespace {

std::array<double, 4> tanh_eval(double y) {
    double t = std::tanh(y);
    double sc = 1.0 / std::cosh(y);
    double s2 = sc * sc;
    return {t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0)};
}

}  // namespace

ShearProfile make_default_profile(double mach, double decay_rate) {
    if (!(mach > 0.0 && mach < 1.0))
        throw std::invalid_argument("mach number must lie in (0,1), got " + std::to_string(mach));
    return ShearProfile("tanh", tanh_eval, mach, decay_rate);
}

ShearProfile make_profile(const std::string& name, double mach, double decay_rate) {
    if (name == "tanh") return make_default_profile(mach, decay_rate);
    throw std::invalid_argument("unknown profile '" + name + "'");
}

ConditionReport check_structural_conditions(const ShearProfile& p, const Grid& g, double tol,
                                            double sup_bound) {
    ConditionReport r;
    auto e0 = p.eval(0.0);
    r.wall_value_error = std::abs(e0[0]);
    r.wall_slope_error = std::abs(e0[1] - 1.0);
    if (r.wall_value_error > tol) r.violations.push_back("U_s(0)≠0");
    if (r.wall_slope_error > tol) r.violations.push_back("∂_YU_s(0)≠1");

    const double m2 = p.mach() * p.mach();
    r.min_a = 1.0;
    r.max_a = 0.0;
    double prev = -1.0;
    for (int j = 0; j < g.size(); ++j) {
        double y = g.y(j);
        auto e = p.eval(y);
        double w = std::pow(1.0 + y, p.decay_rate()) *
                   (std::abs(1.0 - e[0]) + std::abs(e[1]) + std::abs(e[2]) + std::abs(e[3]));
        r.weighted_sup = std::max(r.weighted_sup, w);
        double a = 1.0 - m2 * e[0] * e[0];
        r.min_a = std::min(r.min_a, a);
        r.max_a = std::max(r.max_a, a);
        if (y > 0 && e[0] <= 0) r.positive = false;
        if (e[0] < prev) r.monotone = false;
        prev = e[0];
    }
    if (!r.positive) r.violations.push_back("U_s not positive for Y>0");
    if (!r.monotone) r.violations.push_back("U_s not monotone");
    if (!(r.weighted_sup < sup_bound)) r.violations.push_back("weighted decay sup unbounded");
    if (r.min_a < 1.0 - m2 - tol || r.max_a > 1.0 + tol) r.violations.push_back("A outside [1-m^2,1]");
    r.pass = r.violations.empty();
    return r;
}

}  // namespace cbl
