#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cbl/config.hpp"
#include "cbl/sweep.hpp"

namespace fs = std::filesystem;
using namespace cbl;

namespace {

struct Run {
    int code = -1;
    std::string output;  // stdout and stderr
};

std::string binary() {
    const char* b = std::getenv("CBL_BIN");
    REQUIRE_MESSAGE(b != nullptr, "CBL_BIN not set");
    return b;
}

Run run(const std::string& args) {
    Run r;
    std::string cmd = binary() + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, p)) r.output.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("cbl_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    fs::path p = dir / "run.cfg";
    std::ofstream(p) << text;
    return p;
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream f(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(f, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');) out.push_back(t);
    return out;
}

}  // namespace

// ---- config parsing

TEST_CASE("config: keys, comments and lists") {
    RunConfig c = parse_config("nu = 1e-4   # smaller\n\n mach=0.5\nforce_modes = 1, 3\nprofile = exp\n");
    CHECK(c.nu == 1e-4);
    CHECK(c.mach == 0.5);
    CHECK(c.force_modes == std::vector<int>{1, 3});
    CHECK(c.profile == "exp");
    CHECK(c.N == RunConfig{}.N);
}

TEST_CASE("config: text round trip") {
    RunConfig c;
    c.nu = 3e-4;
    c.sweep_values = {0.4, 0.2, 0.1};
    c.verify_checks = {"residuals", "traces"};
    RunConfig back = parse_config(to_text(c));
    CHECK(back.nu == c.nu);
    CHECK(back.sweep_values == c.sweep_values);
    CHECK(back.verify_checks == c.verify_checks);
    CHECK(to_text(back) == to_text(c));
}

TEST_CASE("config: errors name the key") {
    auto message = [](const std::string& text) {
        try {
            validate(parse_config(text));
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("bogus = 1\n").find("bogus") != std::string::npos);
    CHECK(message("nu = fast\n").find("nu") != std::string::npos);
    CHECK(message("mach = 1.2\n").find("mach") != std::string::npos);
    CHECK(message("N = 4\n").find("N") != std::string::npos);
    CHECK(message("sweep_axis = time\n").find("sweep_axis") != std::string::npos);
    CHECK(message("nu = 1e-3\n").empty());
}

TEST_CASE("sweep: fits need three points") {
    CHECK_THROWS_WITH_AS(fit_loglog({1, 2}, {1, 4}), "insufficient points", std::invalid_argument);
    auto f = fit_loglog({1, 2, 4, 8}, {3, 12, 48, 192});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.points == 4);
}

// ---- binary

TEST_CASE("cli: zero data solve passes") {
    auto d = scratch("zero");
    auto cfg = write_config(d, "n_max = 4\ndata = zero\n");
    Run r = run("solve-linear --config " + cfg.string() + " --out " + (d / "out").string());
    CAPTURE(r.output);
    CHECK(r.code == 0);
    CHECK(fs::exists(d / "out" / "modes.csv"));
    CHECK(fs::exists(d / "out" / "norms.csv"));
    CHECK(fs::exists(d / "out" / "config.txt"));
    auto norms = lines(d / "out" / "norms.csv");
    REQUIRE(norms.size() == 2);
    for (auto& v : split(norms[1])) CHECK(std::stod(v) == 0.0);
}

TEST_CASE("cli: single-mode data excite only that mode") {
    auto d = scratch("single");
    auto cfg = write_config(d, "n_max = 4\ndata = gaussian\ndata_modes = 3\n");
    Run r = run("solve-linear --config " + cfg.string() + " --out " + (d / "out").string());
    CAPTURE(r.output);
    CHECK(r.code == 0);
    auto rows = lines(d / "out" / "mode_summary.csv");
    REQUIRE(rows.size() == 6);  // header + n = 0..4
    int nonzero = 0;
    for (size_t i = 1; i < rows.size(); ++i) {
        auto cols = split(rows[i]);
        if (std::stod(cols[4]) > 0.0) {
            ++nonzero;
            CHECK(cols[0] == "3");
        }
    }
    CHECK(nonzero == 1);
}

TEST_CASE("cli: invalid Mach number is a config error") {
    auto d = scratch("mach");
    auto cfg = write_config(d, "mach = 1.2\n");
    Run r = run("solve-linear --config " + cfg.string() + " --out " + (d / "out").string());
    CHECK(r.code == 2);
    CHECK(r.output.find("mach") != std::string::npos);
}

TEST_CASE("cli: unknown key is a config error") {
    auto d = scratch("unknown");
    auto cfg = write_config(d, "reynolds = 1000\n");
    Run r = run("modes --config " + cfg.string() + " --out " + (d / "out").string());
    CHECK(r.code == 2);
    CHECK(r.output.find("reynolds") != std::string::npos);
}

TEST_CASE("cli: sweep with one value") {
    auto d = scratch("sweep1");
    auto cfg = write_config(d, "sweep_axis = eps\nsweep_values = 1e-3\n");
    Run r = run("sweep --config " + cfg.string() + " --out " + (d / "out").string());
    CHECK(r.code == 2);
    CHECK(r.output.find("insufficient points") != std::string::npos);
}

TEST_CASE("cli: eps sweep writes rows and fits") {
    auto d = scratch("sweep3");
    auto cfg = write_config(d, "sweep_axis = eps\nsweep_values = 1e-3, 1e-4, 1e-5\n");
    Run r = run("sweep --config " + cfg.string() + " --out " + (d / "out").string());
    CAPTURE(r.output);
    CHECK(r.code == 0);
    CHECK(lines(d / "out" / "sweep.csv").size() == 4);
    CHECK(lines(d / "out" / "fits.csv").size() >= 2);
}

TEST_CASE("cli: modes table") {
    auto d = scratch("modes");
    Run r = run("modes --out " + (d / "out").string());
    CHECK(r.code == 0);
    CHECK(r.output.rfind("n,nhat,alpha,eps,beta,regime", 0) == 0);
    CHECK(r.output.find("\n8,") != std::string::npos);
}

TEST_CASE("cli: verify fails under an unattainable tolerance") {
    auto d = scratch("verify");
    auto cfg = write_config(d, "verify_checks = residuals\nverify_samples = 2\ntol_res = 1e-16\n");
    Run r = run("verify --config " + cfg.string() + " --out " + (d / "out").string());
    CAPTURE(r.output);
    CHECK(r.code == 1);
    CHECK(r.output.find("FAIL 1 residuals") != std::string::npos);
    CHECK(fs::exists(d / "out" / "verify.json"));
}

TEST_CASE("cli: missing subcommand and bad option") {
    CHECK(run("").code == 2);
    CHECK(run("modes --jobs 0").code == 2);
    CHECK(run("modes --config /nonexistent/file.cfg").code == 2);
}
