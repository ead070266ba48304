#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/output.hpp"
#include "cli/run_config.hpp"
#include "cli/svg_plot.hpp"

using namespace scaledyn::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "scaledyn");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("scaledyn_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& content) const {
    std::ofstream(path / name) << content;
    return path / name;
  }
};

struct EnvGuard {
  explicit EnvGuard(const std::string& value) { ::setenv(kConfigEnvVar, value.c_str(), 1); }
  ~EnvGuard() { ::unsetenv(kConfigEnvVar); }
};

int run_binary(const std::string& args) {
  const int status = std::system((std::string(SCALEDYN_CLI_PATH) + " " + args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config defaults and serialization round trip") {
  RunConfig defaults;
  RunConfig parsed;
  apply_config_text(parsed, serialize(defaults));
  CHECK(parsed == defaults);

  RunConfig custom;
  custom.gm = 0.1;
  custom.mass = 2.5;
  custom.lambda_scale = -1.25;
  custom.kconst = 1.0 / 3.0;
  custom.eta = 1;
  custom.r_min = 0.3;
  custom.r_max = 7.0;
  custom.samples = 5;
  custom.grid = GridKind::linear;
  custom.format = OutputFormat::json;
  custom.output = "out.json";
  custom.plot = "fig.svg";
  custom.energy_factor = 1.1;
  custom.c1 = 2.0;
  custom.c2 = 0.2;
  RunConfig back;
  apply_config_text(back, serialize(custom));
  CHECK(back == custom);
}

TEST_CASE("config text parsing") {
  RunConfig c;
  apply_config_text(c, "# comment\n\n  gm = 2.5  \nkconst=auto\nsamples = 3\ngrid = linear\n");
  CHECK(c.gm == 2.5);
  CHECK_FALSE(c.kconst.has_value());
  CHECK(c.samples == 3);
  CHECK(c.grid == GridKind::linear);
  CHECK_THROWS_AS(apply_config_text(c, "nonsense\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "gm", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "gm", "1.5x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "samples", "2.5"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "eta", "i"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "grid", "cubic"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "format", "xml"), ConfigError);
  CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/config.txt"), ConfigError);
}

TEST_CASE("config validation") {
  auto invalid = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  CHECK_NOTHROW(validate(RunConfig{}));
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.r_min = 0.0; })), ConfigError);
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.r_min = 300.0; })), ConfigError);
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.samples = 0; })), ConfigError);
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.gm = -1.0; })), ConfigError);
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.mass = 0.0; })), ConfigError);
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.lambda_scale = 0.0; })), ConfigError);
  CHECK_THROWS_AS(validate(invalid([](RunConfig& c) { c.kconst = 0.0; })), ConfigError);
}

TEST_CASE("radial grids") {
  RunConfig c;
  const auto g = make_grid(c);
  REQUIRE(g.size() == 256);
  CHECK(g.front() == 0.2);
  CHECK(g.back() == 200.0);
  for (std::size_t i = 2; i < g.size(); ++i)
    CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]).epsilon(1e-12));
  c.grid = GridKind::linear;
  c.r_min = 1.0;
  c.r_max = 2.0;
  c.samples = 5;
  CHECK(make_grid(c) == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  c.samples = 1;
  CHECK(make_grid(c) == std::vector<double>{1.0});
}

TEST_CASE("number formatting and CSV") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::sqrt(0.5)) == "0.70710678118654757");
  CHECK(std::stod(format_double(std::numbers::pi)) == std::numbers::pi);
  const Table t{{"a", "b"}, {{1.0, 0.1}, {2.0, -3.0}}};
  CHECK(to_csv(t) == "a,b\n1,0.10000000000000001\n2,-3\n");
}

TEST_CASE("SVG rendering is deterministic") {
  PlotSpec spec{"title", "r", "v^2", {0.2, 2.0, 20.0, 200.0}, {{"a", "#000000", {5.0, 0.5, 0.05, 0.005}}}, true};
  const auto a = render_svg(spec);
  CHECK(a == render_svg(spec));
  CHECK(a.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  CHECK(a.find("nan") == std::string::npos);
  CHECK(a.rfind("</svg>") != std::string::npos);
  spec.log_x = false;
  CHECK(render_svg(spec) != a);
}

TEST_CASE("rotation-curve command") {
  const auto r = run_cli({"rotation-curve"});
  REQUIRE(r.code == exit_ok);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 257);
  CHECK(ls[0] == "r,v_kepler,v_scale,u_over_m,uadd_over_m,vsq_total");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto cells = split(ls[i]);
    REQUIRE(cells.size() == 6);
    CHECK(cells[2] == "0.70710678118654757");
    CHECK(std::abs(std::stod(cells[5]) - 0.5) < 1e-13);
  }
  const auto single = run_cli({"rotation-curve", "--samples", "1", "--rmin", "2"});
  REQUIRE(single.code == exit_ok);
  const auto row = split(lines(single.out)[1]);
  CHECK(row[3] == row[5]);
  CHECK(std::stod(row[4]) == 0.0);
  CHECK(run_cli({"rotation-curve", "--rmin", "0"}).code == exit_usage);
  CHECK(run_cli({"rotation-curve", "--rmin", "-1"}).code == exit_usage);
  CHECK(run_cli({"rotation-curve", "--samples", "abc"}).code == exit_usage);
}

TEST_CASE("rotation-curve JSON") {
  const auto r = run_cli({"rotation-curve", "--format", "json", "--samples", "4"});
  REQUIRE(r.code == exit_ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "rotation-curve");
  CHECK(j["config"]["samples"] == 4);
  REQUIRE(j["rows"].size() == 4);
  CHECK(j["rows"][0]["v_scale"].get<double>() == std::sqrt(0.5));
}

TEST_CASE("ei command") {
  const auto r = run_cli({"ei", "1", "-1"});
  REQUIRE(r.code == exit_ok);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "x,ei");
  CHECK(std::abs(std::stod(split(ls[1])[1]) - 1.8951178164) < 1e-10);
  CHECK(std::abs(std::stod(split(ls[2])[1]) + 0.2193839344) < 1e-10);
  CHECK(run_cli({"ei", "0"}).code == exit_usage);
  CHECK(run_cli({"ei", "one"}).code == exit_usage);
}

TEST_CASE("ground-state command") {
  const auto r = run_cli({"ground-state", "--samples", "3"});
  REQUIRE(r.code == exit_ok);
  CHECK(r.out.find("# E0_paper,0.5\n") != std::string::npos);
  CHECK(r.out.find("# E0_oracle,0.5") != std::string::npos);
  CHECK(r.out.find("# r0,2\n") != std::string::npos);
  const auto j = run_cli({"ground-state", "--format", "json", "--kconst", "2", "--samples", "8", "--rmin", "0.01",
                          "--rmax", "1"});
  REQUIRE(j.code == exit_ok);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["kind"] == "nonlinear");
  CHECK(doc["domain"]["upper"].get<double>() == doctest::Approx(0.673577625534296).epsilon(1e-12));
  for (const auto& row : doc["rows"]) CHECK(row["r"].get<double>() < 0.673577625534296);
  const auto m = nlohmann::json::parse(run_cli({"ground-state", "--format", "json", "--mass", "2.5"}).out);
  CHECK(m["ratio"].get<double>() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(m["domain"]["upper"].is_null());
}

TEST_CASE("residuals command") {
  const auto r = run_cli({"residuals", "--format", "json"});
  REQUIRE(r.code == exit_ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  for (const auto& [name, value] : j["residuals"].items()) CHECK(value.get<double>() < j["tolerances"][name].get<double>());
  const auto p = run_cli({"residuals", "--format", "json", "--energy-factor", "1.1"});
  CHECK(p.code == exit_tolerance);
  CHECK(nlohmann::json::parse(p.out)["residuals"]["radial"].get<double>() > 1e-3);
  const auto csv = run_cli({"residuals"});
  CHECK(lines(csv.out)[0] == "name,max_abs_residual,tolerance,passed");
}

TEST_CASE("virial command") {
  const auto r = run_cli({"virial"});
  REQUIRE(r.code == exit_ok);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "r,two_k_real,gamma_u,lambda_m_divv_real,residual");
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(std::abs(std::stod(split(ls[i])[4])) < 1e-10);
}

TEST_CASE("config file, flags and environment precedence") {
  TempDir dir;
  const auto cfg = dir.file("a.cfg", "gm = 2\nsamples = 2\nrmin = 1\nrmax = 4\n");
  const auto other = dir.file("b.cfg", "gm = 8\nsamples = 2\nrmin = 1\nrmax = 4\n");
  auto v_scale = [](const Result& r) { return std::stod(split(lines(r.out)[1])[2]); };
  // Default gm 1 gives v = sqrt(1/2); v scales with GM.
  CHECK(v_scale(run_cli({"rotation-curve", "--config", cfg.string()})) == doctest::Approx(2.0 * std::sqrt(0.5)));
  CHECK(v_scale(run_cli({"rotation-curve", "--config", cfg.string(), "--gm", "3"})) ==
        doctest::Approx(3.0 * std::sqrt(0.5)));
  {
    EnvGuard env(other.string());
    CHECK(v_scale(run_cli({"rotation-curve"})) == doctest::Approx(8.0 * std::sqrt(0.5)));
    CHECK(v_scale(run_cli({"rotation-curve", "--config", cfg.string()})) == doctest::Approx(2.0 * std::sqrt(0.5)));
  }
  {
    EnvGuard env((dir.path / "missing.cfg").string());
    CHECK(run_cli({"rotation-curve"}).code == exit_usage);
  }
  const auto bad = dir.file("bad.cfg", "gm: 2\n");
  CHECK(run_cli({"residuals", "--config", bad.string()}).code == exit_usage);
  const auto bad_value = dir.file("bad_value.cfg", "samples = -4\n");
  CHECK(run_cli({"residuals", "--config", bad_value.string()}).code == exit_usage);
}

TEST_CASE("output files and I/O errors") {
  TempDir dir;
  const auto csv = dir.path / "curve.csv";
  const auto svg = dir.path / "curve.svg";
  const auto r = run_cli({"rotation-curve", "--output", csv.string(), "--plot", svg.string()});
  REQUIRE(r.code == exit_ok);
  CHECK(r.out.empty());
  CHECK(slurp(csv) == run_cli({"rotation-curve"}).out);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  CHECK(run_cli({"rotation-curve", "--output", (dir.path / "no/such/dir/x.csv").string()}).code == exit_io);
  CHECK(run_cli({"rotation-curve", "--plot", (dir.path / "no/such/dir/x.svg").string()}).code == exit_io);
  const auto warn = run_cli({"virial", "--plot", svg.string()});
  CHECK(warn.code == exit_ok);
  CHECK_FALSE(warn.err.empty());
}

TEST_CASE("usage errors and help") {
  CHECK(run_cli({}).code == exit_usage);
  CHECK(run_cli({"orbit"}).code == exit_usage);
  CHECK(run_cli({"rotation-curve", "--unknown", "1"}).code == exit_usage);
  const auto help = run_cli({"--help"});
  CHECK(help.code == exit_ok);
  CHECK(help.out.find("rotation-curve") != std::string::npos);
}

TEST_CASE("executable exit codes and byte-identical reruns") {
  TempDir dir;
  const auto a = dir.path / "a", b = dir.path / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  for (const auto& d : {a, b})
    REQUIRE(run_binary("rotation-curve --output " + (d / "c.csv").string() + " --plot " + (d / "c.svg").string()) == 0);
  CHECK(slurp(a / "c.csv") == slurp(b / "c.csv"));
  CHECK(slurp(a / "c.svg") == slurp(b / "c.svg"));
  CHECK(run_binary("rotation-curve --rmin 0 2>/dev/null") == 2);
  CHECK(run_binary("residuals --energy-factor 1.1 >/dev/null 2>&1") == 1);
  CHECK(run_binary("rotation-curve --output /nonexistent/dir/x.csv 2>/dev/null") == 3);
}
