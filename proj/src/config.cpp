#include "cbl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace cbl {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T number(const std::string& key, const std::string& v) {
    T x{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": cannot parse '" + v + "'");
    return x;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os.precision(17);
    for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    return os.str();
}

std::string show(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define CBL_REAL(name) {#name, {[](RunConfig& c, const std::string& v) { c.name = number<double>(#name, v); }, \
                                [](const RunConfig& c) { return show(c.name); }}}
#define CBL_INT(name) {#name, {[](RunConfig& c, const std::string& v) { c.name = number<int>(#name, v); }, \
                               [](const RunConfig& c) { return std::to_string(c.name); }}}
#define CBL_TEXT(name) {#name, {[](RunConfig& c, const std::string& v) { c.name = v; }, \
                                [](const RunConfig& c) { return c.name; }}}

const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> f = {
        CBL_REAL(nu), CBL_REAL(mach), CBL_REAL(lambda), CBL_REAL(L), CBL_REAL(L0), CBL_REAL(s), CBL_REAL(gamma),
        CBL_TEXT(profile), CBL_INT(N), CBL_REAL(y_max), CBL_TEXT(mapping), CBL_REAL(wall_scale), CBL_INT(n_max),
        CBL_REAL(kappa0), CBL_REAL(C1), CBL_REAL(C2), CBL_REAL(kappa_hat0),
        CBL_REAL(tol_res), CBL_REAL(tol_bc), CBL_REAL(tol_iter), CBL_REAL(tol_mass), CBL_REAL(tol_nl),
        CBL_INT(max_iter), CBL_INT(picard_max_iter), CBL_REAL(picard_tol),
        CBL_TEXT(data),
        {"data_modes", {[](RunConfig& c, const std::string& v) {
                            c.data_modes.clear();
                            for (auto& x : split(v)) c.data_modes.push_back(number<int>("data_modes", x));
                        },
                        [](const RunConfig& c) { return join(c.data_modes); }}},
        CBL_REAL(data_amplitude), CBL_TEXT(force_profile),
        {"force_modes", {[](RunConfig& c, const std::string& v) {
                             c.force_modes.clear();
                             for (auto& x : split(v)) c.force_modes.push_back(number<int>("force_modes", x));
                         },
                         [](const RunConfig& c) { return join(c.force_modes); }}},
        CBL_REAL(force_threshold), CBL_REAL(force_fraction), CBL_REAL(mach_reference),
        CBL_TEXT(sweep_axis),
        {"sweep_values", {[](RunConfig& c, const std::string& v) {
                              c.sweep_values.clear();
                              for (auto& x : split(v)) c.sweep_values.push_back(number<double>("sweep_values", x));
                          },
                          [](const RunConfig& c) { return join(c.sweep_values); }}},
        CBL_REAL(alpha), CBL_REAL(eps), CBL_INT(mode),
        {"verify_checks", {[](RunConfig& c, const std::string& v) { c.verify_checks = split(v); },
                           [](const RunConfig& c) { return join(c.verify_checks); }}},
        CBL_INT(verify_samples), CBL_TEXT(out),
        {"seed", {[](RunConfig& c, const std::string& v) { c.seed = number<std::uint64_t>("seed", v); },
                  [](const RunConfig& c) { return std::to_string(c.seed); }}},
    };
    return f;
}

#undef CBL_REAL
#undef CBL_INT
#undef CBL_TEXT

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

RunConfig parse_config(const std::string& text, RunConfig c) {
    std::map<std::string, const Field*> index;
    for (auto& [k, f] : fields()) index[k] = &f;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto it = index.find(key);
        if (it == index.end()) throw ConfigError("unknown key '" + key + "' on line " + std::to_string(no));
        if (val.empty()) throw ConfigError(key + ": empty value");
        it->second->set(c, val);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
    std::string out;
    for (auto& [k, f] : fields()) out += k + " = " + f.get(c) + "\n";
    return out;
}

void validate(const RunConfig& c) {
    require(c.mach > 0.0 && c.mach < 1.0, "mach: must lie in (0, 1), got " + show(c.mach));
    require(c.nu > 0.0, "nu: must be positive");
    require(c.lambda >= 0.0, "lambda: must be non-negative");
    require(c.L0 > 0.0, "L0: must be positive");
    require(c.L > 0.0 && c.L <= c.L0, "L: must lie in (0, L0]");
    require(c.s > 0.0, "s: must be positive");
    require(c.gamma >= 1.0, "gamma: must be at least 1");
    require(c.N >= 16, "N: at least 16 nodes");
    require(c.y_max > 0.0, "y_max: must be positive");
    require(c.wall_scale > 0.0, "wall_scale: must be positive");
    try {
        parse_mapping(c.mapping);
    } catch (const std::exception&) {
        throw ConfigError("mapping: unknown mapping '" + c.mapping + "'");
    }
    require(c.profile == "tanh", "profile: unknown profile '" + c.profile + "'");
    require(c.n_max >= 1, "n_max: must be at least 1");
    require(c.kappa0 > 0.0 && c.kappa_hat0 > 0.0, "kappa0, kappa_hat0: must be positive");
    require(c.kappa0 < 1.0 / c.kappa_hat0, "kappa0: must be below 1/kappa_hat0");
    require(c.C1 > 0.0 && c.C1 < c.C2, "C1, C2: need 0 < C1 < C2");
    for (auto [name, v] : {std::pair{"tol_res", c.tol_res}, {"tol_bc", c.tol_bc}, {"tol_iter", c.tol_iter},
                           {"tol_mass", c.tol_mass}, {"tol_nl", c.tol_nl}, {"picard_tol", c.picard_tol}})
        require(v > 0.0, std::string(name) + ": must be positive");
    require(c.max_iter >= 1 && c.picard_max_iter >= 1, "max_iter, picard_max_iter: must be at least 1");
    require(c.data == "zero" || c.data == "gaussian" || c.data == "random", "data: expected zero, gaussian or random");
    for (int n : c.data_modes) require(n >= 1 && n <= c.n_max, "data_modes: entries must lie in 1..n_max");
    for (int n : c.force_modes) require(n >= 1 && n <= c.n_max, "force_modes: entries must lie in 1..n_max");
    require(c.force_profile == "gaussian-bump" || c.force_profile == "exp-decay",
            "force_profile: expected gaussian-bump or exp-decay");
    require(c.force_threshold > 0.0 && c.force_fraction >= 0.0, "force_threshold, force_fraction: invalid");
    require(c.mach_reference > 0.0 && c.mach_reference < 1.0, "mach_reference: must lie in (0, 1)");
    require(c.sweep_axis == "nu" || c.sweep_axis == "eps" || c.sweep_axis == "alpha" || c.sweep_axis == "m" ||
                c.sweep_axis == "L",
            "sweep_axis: expected nu, eps, alpha, m or L");
    for (double v : c.sweep_values) require(v > 0.0, "sweep_values: entries must be positive");
    require(c.alpha > 0.0 && c.eps > 0.0, "alpha, eps: must be positive");
    require(c.mode >= 1, "mode: must be at least 1");
    require(c.verify_samples >= 1, "verify_samples: must be at least 1");
}

GridPtr make_grid(const RunConfig& c) { return build_grid(c.N, c.y_max, parse_mapping(c.mapping), c.wall_scale); }

ShearProfile make_profile(const RunConfig& c) { return make_profile(c.profile, c.mach, c.s); }

LinearSettings linear_settings(const RunConfig& c) {
    LinearSettings s;
    s.thresholds = {c.kappa0, c.kappa_hat0, c.C1, c.C2};
    s.os.max_iter = c.max_iter;
    s.os.tol = c.tol_iter;
    s.max_iter = c.max_iter;
    s.tol_iter = c.tol_iter;
    return s;
}

PicardSettings picard_settings(const RunConfig& c) {
    return {c.picard_max_iter, c.picard_tol, c.gamma, c.s};
}

Domain make_domain(const RunConfig& c, GridPtr g) {
    Domain d;
    d.L = c.L;
    d.nu = c.nu;
    d.n_max = c.n_max;
    d.grid = std::move(g);
    return d;
}

FlowFields make_data(const RunConfig& c, const Domain& d, std::uint64_t seed) {
    const Grid& g = *d.grid;
    const int ny = g.size();
    FlowFields f = FlowFields::zeros(d.n_max, ny);
    if (c.data == "zero") return f;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), rate(0.5, 2.0);
    auto random_profile = [&]() {
        Vec v(ny);
        cplx a[3];
        double b[3];
        for (int j = 0; j < 3; ++j) a[j] = cplx(coef(rng), coef(rng)), b[j] = rate(rng);
        for (int k = 0; k < ny; ++k) {
            double Y = g.y(k);
            v(k) = 0;
            for (int j = 0; j < 3; ++j) v(k) += a[j] * std::pow(Y, j) * std::exp(-b[j] * Y);
        }
        return v;
    };
    for (int n : c.data_modes) {
        ModeCoeffs* comp[3] = {&f.rho, &f.u, &f.v};
        for (auto* m : comp) {
            Vec v(ny);
            if (c.data == "gaussian") {
                // a e^{-(Y-2)²} cos(n̂x)
                for (int k = 0; k < ny; ++k) v(k) = 0.5 * c.data_amplitude * std::exp(-std::pow(g.y(k) - 2.0, 2));
            } else {
                v = 0.5 * c.data_amplitude * random_profile();
            }
            (*m)[n] += v;
            (*m)[-n] += v.conjugate();
        }
    }
    return f;
}

double force_threshold(const RunConfig& c) { return c.force_threshold * std::pow(c.nu, 9.0 / 8.0); }

ExternalForce make_force(const RunConfig& c, const Domain& d) {
    ExternalForce unit = make_force(d, c.force_profile, c.force_modes, 1.0);
    double n = force_norm(unit, d, c.s);
    return make_force(d, c.force_profile, c.force_modes, c.force_fraction * force_threshold(c) / n);
}

}  // namespace cbl
