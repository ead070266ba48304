#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>

#include "cli/output.hpp"
#include "cli/run_config.hpp"
#include "cli/svg_plot.hpp"
#include "scaledyn/scaledyn.h"

namespace scaledyn::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kVirialTolerance = 1e-10;

class LibraryError : public std::runtime_error {
 public:
  LibraryError(sd_status status, const std::string& message) : std::runtime_error(message), status_(status) {}
  sd_status status() const { return status_; }

 private:
  sd_status status_;
};

void check(sd_status status) {
  if (status != SD_OK) throw LibraryError(status, std::string(sd_status_string(status)) + ": " + sd_last_error());
}

struct KeplerDeleter {
  void operator()(sd_kepler* p) const { sd_kepler_destroy(p); }
};
struct GroundStateDeleter {
  void operator()(sd_ground_state* p) const { sd_ground_state_destroy(p); }
};
struct ReportDeleter {
  void operator()(sd_report* p) const { sd_residual_report_destroy(p); }
};
using KeplerHandle = std::unique_ptr<sd_kepler, KeplerDeleter>;
using GroundStateHandle = std::unique_ptr<sd_ground_state, GroundStateDeleter>;
using ReportHandle = std::unique_ptr<sd_report, ReportDeleter>;

KeplerHandle make_system(const RunConfig& c) {
  sd_kepler_params p;
  sd_kepler_params_default(&p);
  p.G = 1.0;
  p.M = c.gm;
  p.m = c.mass;
  p.lambda = c.lambda_scale;
  p.has_kconst = c.kconst ? 1 : 0;
  p.kconst = c.kconst.value_or(0.0);
  p.eta = c.eta;
  sd_kepler* raw = nullptr;
  check(sd_kepler_create(&p, &raw));
  return KeplerHandle(raw);
}

GroundStateHandle make_ground_state(const sd_kepler* sys, const RunConfig& c) {
  const sd_ground_state_options options{c.c1 ? 1 : 0, c.c1.value_or(0.0), c.c2};
  sd_ground_state* raw = nullptr;
  check(sd_ground_state_create(sys, &options, &raw));
  return GroundStateHandle(raw);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json config_json(const RunConfig& c) {
  json j;
  j["gm"] = c.gm;
  j["mass"] = c.mass;
  j["lambda"] = c.lambda_scale;
  j["kconst"] = c.kconst ? json(*c.kconst) : json("auto");
  j["eta"] = c.eta;
  j["rmin"] = c.r_min;
  j["rmax"] = c.r_max;
  j["samples"] = c.samples;
  j["grid"] = to_string(c.grid);
  return j;
}

json table_json(const std::string& command, const RunConfig& c, const Table& table) {
  json j;
  j["command"] = command;
  j["config"] = config_json(c);
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    for (std::size_t i = 0; i < table.columns.size(); ++i) r[table.columns[i]] = number_or_null(row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) { write_text(c.output, text, out); }

void emit_table(const std::string& command, const RunConfig& c, const Table& table, std::ostream& out) {
  emit(c, c.format == OutputFormat::json ? table_json(command, c, table).dump(2) + "\n" : to_csv(table), out);
}

void warn_plot_unused(const RunConfig& c, const char* command, std::ostream& err) {
  if (!c.plot.empty()) err << "scaledyn: --plot is only produced by rotation-curve; ignored for " << command << '\n';
}

int cmd_rotation_curve(const RunConfig& c, std::ostream& out) {
  const auto sys = make_system(c);
  const auto grid = make_grid(c);
  std::vector<sd_rotation_row> rows(grid.size());
  check(sd_rotation_curve(sys.get(), grid.data(), grid.size(), rows.data()));

  Table table{{"r", "v_kepler", "v_scale", "u_over_m", "uadd_over_m", "vsq_total"}, {}};
  for (const auto& r : rows) table.rows.push_back({r.r, r.v_kepler, r.v_scale, r.u_over_m, r.uadd_over_m, r.vsq_total});
  emit_table("rotation-curve", c, table, out);

  if (!c.plot.empty()) {
    PlotSpec spec;
    spec.title = "Squared orbital speed and its potential terms";
    spec.x_label = "r";
    spec.y_label = "v^2";
    spec.log_x = c.grid == GridKind::log;
    spec.x = grid;
    Curve u{"-U/m", "#1f77b4", {}}, uadd{"-U_add/m", "#d62728", {}}, total{"v^2 = -(U+U_add)/m", "#2ca02c", {}};
    for (const auto& r : rows) {
      u.y.push_back(r.u_over_m);
      uadd.y.push_back(r.uadd_over_m);
      total.y.push_back(r.vsq_total);
    }
    spec.curves = {u, uadd, total};
    write_text(c.plot, render_svg(spec), out);
  }
  return exit_ok;
}

int cmd_ground_state(const RunConfig& c, std::ostream& out, std::ostream& err) {
  warn_plot_unused(c, "ground-state", err);
  const auto sys = make_system(c);
  sd_kepler_info info;
  check(sd_kepler_info_get(sys.get(), &info));
  const auto state = make_ground_state(sys.get(), c);
  sd_ground_state_info gs;
  check(sd_ground_state_info_get(state.get(), &gs));

  Table table{{"r", "sqrt_p", "u_add_density", "u_add_closed"}, {}};
  for (double r : make_grid(c)) {
    if (!(r > gs.r_lower && r < gs.r_upper)) continue;
    sd_ground_state_row row;
    check(sd_ground_state_evaluate(state.get(), r, &row));
    table.rows.push_back({row.r, row.sqrt_p, row.u_add_density, row.u_add_closed});
  }
  const char* kind = gs.kind == SD_GROUND_STATE_LINEAR ? "linear" : "nonlinear";
  const double ratio = info.e0_oracle / info.e0_paper;

  if (c.format == OutputFormat::json) {
    json j;
    j["command"] = "ground-state";
    j["config"] = config_json(c);
    j["kind"] = kind;
    j["E0_paper"] = info.e0_paper;
    j["E0_oracle"] = info.e0_oracle;
    j["ratio"] = ratio;
    j["r0"] = info.r0;
    j["kconst"] = info.kconst;
    j["c1"] = gs.c1;
    j["c2"] = gs.c2;
    j["domain"] = {{"lower", gs.r_lower}, {"upper", number_or_null(gs.r_upper)}};
    const json rows = table_json("ground-state", c, table)["rows"];
    j["rows"] = rows;
    emit(c, j.dump(2) + "\n", out);
  } else {
    std::string text;
    text += std::string("# kind,") + kind + "\n";
    text += "# E0_paper," + format_double(info.e0_paper) + "\n";
    text += "# E0_oracle," + format_double(info.e0_oracle) + "\n";
    text += "# ratio," + format_double(ratio) + "\n";
    text += "# r0," + format_double(info.r0) + "\n";
    text += "# domain_lower," + format_double(gs.r_lower) + "\n";
    text += "# domain_upper," + format_double(gs.r_upper) + "\n";
    emit(c, text + to_csv(table), out);
  }
  return exit_ok;
}

int cmd_residuals(const RunConfig& c, std::ostream& out, std::ostream& err) {
  warn_plot_unused(c, "residuals", err);
  const auto sys = make_system(c);
  const auto grid = make_grid(c);
  sd_report* raw = nullptr;
  check(sd_residual_report_create(sys.get(), grid.data(), grid.size(), c.energy_factor, &raw));
  const ReportHandle report(raw);
  std::size_t n = 0, radii = 0;
  int passed = 0;
  check(sd_residual_report_size(report.get(), &n));
  check(sd_residual_report_radii(report.get(), &radii));
  check(sd_residual_report_passed(report.get(), &passed));
  std::vector<sd_residual_entry> entries(n);
  for (std::size_t i = 0; i < n; ++i) check(sd_residual_report_entry(report.get(), i, &entries[i]));

  if (c.format == OutputFormat::json) {
    json j;
    j["command"] = "residuals";
    j["config"] = config_json(c);
    j["energy_factor"] = c.energy_factor;
    j["radii"] = radii;
    j["passed"] = passed != 0;
    json residuals = json::object(), tolerances = json::object();
    for (const auto& e : entries) {
      residuals[e.name] = number_or_null(e.max_abs_residual);
      tolerances[e.name] = e.tolerance;
    }
    j["residuals"] = std::move(residuals);
    j["tolerances"] = std::move(tolerances);
    emit(c, j.dump(2) + "\n", out);
  } else {
    std::string text = "name,max_abs_residual,tolerance,passed\n";
    for (const auto& e : entries)
      text += std::string(e.name) + "," + format_double(e.max_abs_residual) + "," + format_double(e.tolerance) + "," +
              (e.passed ? "1" : "0") + "\n";
    emit(c, text, out);
  }
  for (const auto& e : entries)
    if (!e.passed) err << "scaledyn: residual " << e.name << " = " << format_double(e.max_abs_residual)
                       << " exceeds " << format_double(e.tolerance) << '\n';
  return passed ? exit_ok : exit_tolerance;
}

int cmd_virial(const RunConfig& c, std::ostream& out, std::ostream& err) {
  warn_plot_unused(c, "virial", err);
  const auto sys = make_system(c);
  const auto state = make_ground_state(sys.get(), c);
  sd_ground_state_info gs;
  check(sd_ground_state_info_get(state.get(), &gs));
  std::vector<double> grid;
  for (double r : make_grid(c))
    if (r > gs.r_lower && r < gs.r_upper) grid.push_back(r);
  std::vector<sd_virial_row> rows(grid.size());
  check(sd_virial_balance(state.get(), grid.data(), grid.size(), rows.data()));

  Table table{{"r", "two_k_real", "gamma_u", "lambda_m_divv_real", "residual"}, {}};
  bool ok = true;
  for (const auto& r : rows) {
    table.rows.push_back({r.r, r.two_k_real, r.gamma_u, r.lambda_m_divv_real, r.residual});
    if (!(std::abs(r.residual) < kVirialTolerance)) ok = false;
  }
  emit_table("virial", c, table, out);
  if (!ok) err << "scaledyn: virial residual exceeds " << format_double(kVirialTolerance) << '\n';
  return ok ? exit_ok : exit_tolerance;
}

double parse_x(const std::string& text) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) throw ConfigError("invalid number '" + text + "'");
  return v;
}

int cmd_ei(const RunConfig& c, const std::vector<std::string>& xs, std::ostream& out, std::ostream& err) {
  warn_plot_unused(c, "ei", err);
  if (xs.empty()) throw ConfigError("ei needs at least one argument");
  Table table{{"x", "ei"}, {}};
  for (const auto& text : xs) {
    const double x = parse_x(text);
    double v = 0.0;
    check(sd_ei(x, &v));
    table.rows.push_back({x, v});
  }
  emit_table("ei", c, table, out);
  return exit_ok;
}

// Flag values are kept as text and applied through the config-key parser so
// that flags and config files validate identically.
struct Flags {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::optional<std::string>>> settings = {
      {"gm", {}},      {"mass", {}},   {"lambda", {}}, {"kconst", {}},        {"eta", {}},
      {"rmin", {}},    {"rmax", {}},   {"samples", {}}, {"grid", {}},         {"format", {}},
      {"output", {}},  {"plot", {}},   {"energy_factor", {}}, {"c1", {}},     {"c2", {}}};
};

void add_common(CLI::App* cmd, Flags& flags) {
  static const std::vector<std::pair<std::string, std::string>> help = {
      {"gm", "G M product (default 1)"},
      {"mass", "orbiting mass m (default 1)"},
      {"lambda", "scale constant Lambda (default 1)"},
      {"kconst", "psi constant K, or auto for m*Lambda"},
      {"eta", "+1 or -1 (default -1)"},
      {"rmin", "smallest radius (default 0.2)"},
      {"rmax", "largest radius (default 200)"},
      {"samples", "number of radii (default 256)"},
      {"grid", "linear or log (default log)"},
      {"format", "csv or json (default csv)"},
      {"output", "output file (default stdout)"},
      {"plot", "SVG figure path"},
      {"energy_factor", "scale E0 in the residual checks (default 1)"},
      {"c1", "integration constant C1, or auto for m*Lambda^2"},
      {"c2", "integration constant C2 (default 0)"},
  };
  for (std::size_t i = 0; i < flags.settings.size(); ++i) {
    auto& [key, value] = flags.settings[i];
    std::string flag = key;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    cmd->add_option("--" + flag, value, help[i].second);
  }
  cmd->add_option("--config", flags.config, "flat key=value config file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scale-dynamics Kepler ground states, residual checks and rotation curves", "scaledyn"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> ei_args;
  auto* rotation = app.add_subcommand("rotation-curve", "speed table and optional SVG figure");
  auto* ground = app.add_subcommand("ground-state", "ground-state energies, domain and extra potential");
  auto* residuals = app.add_subcommand("residuals", "sup-norm residuals of every ground-state equation");
  auto* virial = app.add_subcommand("virial", "real-part virial balance per radius");
  auto* ei = app.add_subcommand("ei", "exponential integral Ei(x)");
  for (auto* cmd : {rotation, ground, residuals, virial, ei}) add_common(cmd, flags);
  ei->add_option("x", ei_args, "arguments x != 0")->allow_extra_args();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    RunConfig config;
    std::optional<std::string> path = flags.config;
    if (!path) {
      if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
    }
    if (path) apply_config_file(config, *path);
    for (const auto& [key, value] : flags.settings)
      if (value) apply_setting(config, key, *value);
    validate(config);

    if (rotation->parsed()) return cmd_rotation_curve(config, out);
    if (ground->parsed()) return cmd_ground_state(config, out, err);
    if (residuals->parsed()) return cmd_residuals(config, out, err);
    if (virial->parsed()) return cmd_virial(config, out, err);
    return cmd_ei(config, ei_args, out, err);
  } catch (const ConfigError& e) {
    err << "scaledyn: " << e.what() << '\n';
    return exit_usage;
  } catch (const IoError& e) {
    err << "scaledyn: " << e.what() << '\n';
    return exit_io;
  } catch (const LibraryError& e) {
    err << "scaledyn: " << e.what() << '\n';
    return e.status() == SD_ERR_INTERNAL ? exit_tolerance : exit_usage;
  } catch (const std::exception& e) {
    err << "scaledyn: " << e.what() << '\n';
    return exit_tolerance;
  }
}

}  // namespace scaledyn::cli
