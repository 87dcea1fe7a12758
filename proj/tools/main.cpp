// Command-line front end: runs scenarios to CSV/JSON bundles, evaluates the
// release gate, and answers point queries for metric components and cone
// geodesics.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "burescone/acceptance.hpp"
#include "burescone/cone.hpp"
#include "burescone/scenarios.hpp"

#ifndef BURESCONE_VERSION
#define BURESCONE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

const std::vector<std::string> kScenarioNames = {
    "asymptotic-purification", "finite-time-purification", "pure-to-mixed",
    "n3-shooting",             "cone-2d",                  "cone-3d",
    "cone-steady-state",
};

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string table_csv(const burescone::ScenarioTable& t) {
  std::string s;
  s += "# source: " + t.source + "\n";
  if (!t.units_note.empty()) s += "# units: " + t.units_note + "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) {
    s += t.columns[i];
    s += (i + 1 < t.columns.size()) ? "," : "\n";
  }
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      s += format_value(row[i]);
      s += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return s;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

ordered_json check_json(const burescone::ScenarioCheck& c) {
  return ordered_json{{"name", c.name},           {"measured", c.measured},
                      {"target", c.target},       {"tolerance", c.tolerance},
                      {"pass", c.pass},           {"provenance", c.provenance}};
}

/// Write <out>/<scenario>/{*.csv, checks.json, manifest.json}.
void write_scenario(const fs::path& out_root, const burescone::ScenarioResult& r) {
  const fs::path dir = out_root / r.name;
  fs::create_directories(dir);

  ordered_json tables = ordered_json::array();
  for (const auto& t : r.tables) {
    const std::string file = t.name + ".csv";
    write_text_atomic(dir / file, table_csv(t));
    tables.push_back(ordered_json{{"name", t.name},
                                  {"file", file},
                                  {"columns", t.columns},
                                  {"rows", t.rows.size()}});
  }

  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  write_text_atomic(dir / "checks.json",
                    ordered_json{{"scenario", r.name},
                                 {"all_passed", r.all_passed()},
                                 {"checks", checks}}
                        .dump(2) +
                        "\n");

  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  write_text_atomic(dir / "manifest.json",
                    ordered_json{{"tool", "burescone"},
                                 {"tool_version", BURESCONE_VERSION},
                                 {"scenario", r.name},
                                 {"parameters", params},
                                 {"tables", tables},
                                 {"checks_file", "checks.json"},
                                 {"all_passed", r.all_passed()}}
                        .dump(2) +
                        "\n");
}

// ---------------------------------------------------------------------------
// run

/// Parameter values actually supplied (command line beats config file);
/// scenarios fall back to their own defaults for missing keys.
struct ParamSet {
  std::map<std::string, double> values;

  double get(const std::string& key, double dflt) const {
    const auto it = values.find(key);
    return it == values.end() ? dflt : it->second;
  }
};

const std::vector<std::string> kParamKeys = {
    "p",     "gamma", "alpha", "T",   "gamma1", "gamma2",
    "zeta",  "eps",   "theta", "phi", "Gamma",
};

burescone::ScenarioResult run_one(const std::string& name, const ParamSet& ps) {
  using namespace burescone;
  if (name == "asymptotic-purification") {
    return run_asymptotic_purification(ps.get("p", 0.7), ps.get("gamma", 2.0));
  }
  if (name == "finite-time-purification") {
    return run_finite_time_purification(ps.get("p", 0.7), ps.get("alpha", 2.0),
                                        ps.get("T", 1.0));
  }
  if (name == "pure-to-mixed") {
    return run_pure_to_mixed(ps.get("gamma1", 1.0), ps.get("gamma2", 0.5));
  }
  if (name == "n3-shooting") return run_n3_shooting(ps.get("gamma", 1.0));
  if (name == "cone-2d") return run_cone_2d(ps.get("zeta", 0.5));
  if (name == "cone-3d") return run_cone_3d(ps.get("zeta", 0.5));
  if (name == "cone-steady-state") {
    return run_cone_steady_state(ps.get("zeta", 0.5), ps.get("eps", 0.01),
                                 ps.get("theta", 0.7), ps.get("phi", 0.4),
                                 ps.get("Gamma", 1.0));
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

/// Flat key=value file; '#' starts a comment. Unknown keys are config errors.
std::map<std::string, double> parse_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file " + path.string());
  std::map<std::string, double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string entry = strip(line);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    }
    const std::string key = strip(entry.substr(0, eq));
    const std::string value = strip(entry.substr(eq + 1));
    if (std::find(kParamKeys.begin(), kParamKeys.end(), key) == kParamKeys.end()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
    try {
      size_t used = 0;
      out[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": cannot parse value '" + value + "'");
    }
  }
  return out;
}

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("BURESCONE_OUT"); env && *env) return env;
  return "out";
}

/// 0 ok, 1 checks failed, 2 config error, 3 numerical failure.
int classify_exception(const std::exception& e) {
  if (dynamic_cast<const std::invalid_argument*>(&e) ||
      dynamic_cast<const burescone::InvalidSpectrum*>(&e) ||
      dynamic_cast<const burescone::InvalidBloch*>(&e)) {
    return kExitConfig;
  }
  return kExitNumerical;
}

struct RunOutcome {
  std::string scenario;
  std::optional<burescone::ScenarioResult> result;
  std::string error;
  int code = kExitOk;
};

int do_run(const std::string& scenario, const ParamSet& ps, const fs::path& out_root,
           int jobs) {
  std::vector<std::string> names;
  if (scenario == "all") {
    names = kScenarioNames;
  } else {
    if (std::find(kScenarioNames.begin(), kScenarioNames.end(), scenario) ==
        kScenarioNames.end()) {
      std::cerr << "error: unknown scenario '" << scenario << "'\n";
      return kExitConfig;
    }
    names = {scenario};
  }

  std::vector<RunOutcome> outcomes(names.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next.fetch_add(1); k < names.size(); k = next.fetch_add(1)) {
      RunOutcome& o = outcomes[k];
      o.scenario = names[k];
      try {
        o.result = run_one(names[k], ps);
        o.code = o.result->all_passed() ? kExitOk : kExitChecksFailed;
      } catch (const std::exception& e) {
        o.error = e.what();
        o.code = classify_exception(e);
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(names.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int exit_code = kExitOk;
  for (const RunOutcome& o : outcomes) {
    exit_code = std::max(exit_code, o.code);
    if (!o.result) {
      std::cout << "[ERROR] " << o.scenario << ": " << o.error << "\n";
      continue;
    }
    const burescone::ScenarioResult& r = *o.result;
    write_scenario(out_root, r);
    size_t n_pass = 0;
    for (const auto& c : r.checks) n_pass += c.pass ? 1 : 0;
    std::cout << (r.all_passed() ? "[PASS] " : "[FAIL] ") << r.name << ": " << n_pass
              << "/" << r.checks.size() << " checks -> "
              << (out_root / r.name).string() << "\n";
    for (const auto& c : r.checks) {
      if (c.pass) continue;
      std::cout << "       failed: " << c.name << " (measured "
                << format_value(c.measured) << ", target " << format_value(c.target)
                << ", tolerance " << format_value(c.tolerance) << ")\n";
    }
  }
  return exit_code;
}

// ---------------------------------------------------------------------------
// check-all

int do_check_all(bool as_json, double tighten) {
  using burescone::CriterionRecord;
  const std::vector<CriterionRecord> base = burescone::run_acceptance_suite(1.0);
  std::vector<CriterionRecord> probed;
  if (tighten > 1.0) probed = burescone::run_acceptance_suite(tighten);

  bool all_pass = true;
  ordered_json jout = ordered_json::array();
  for (size_t k = 0; k < base.size(); ++k) {
    const CriterionRecord& rec = base[k];
    all_pass = all_pass && rec.pass;
    const bool marginal = rec.pass && tighten > 1.0 && !probed[k].pass;
    size_t n_pass = 0;
    for (const auto& c : rec.checks) n_pass += c.pass ? 1 : 0;

    if (as_json) {
      ordered_json checks = ordered_json::array();
      for (const auto& c : rec.checks) checks.push_back(check_json(c));
      ordered_json jrec{{"id", rec.id},
                        {"name", rec.name},
                        {"pass", rec.pass},
                        {"runtime_seconds", rec.runtime_seconds},
                        {"budget_seconds", rec.budget_seconds},
                        {"checks", checks}};
      if (tighten > 1.0) jrec["marginal_at_tighten"] = marginal;
      jout.push_back(std::move(jrec));
    } else {
      const char* status = rec.pass ? (marginal ? "MARGINAL" : "PASS") : "FAIL";
      std::printf("[%s] %-3s %-55s %zu/%zu checks, %.2f s (budget %.0f s)\n", status,
                  rec.id.c_str(), rec.name.c_str(), n_pass, rec.checks.size(),
                  rec.runtime_seconds, rec.budget_seconds);
      for (const auto& c : rec.checks) {
        if (c.pass) continue;
        std::printf("       failed: %s\n         measured %.6e, target %.6e, "
                    "tolerance %.6e\n         note: %s\n",
                    c.name.c_str(), c.measured, c.target, c.tolerance,
                    c.provenance.c_str());
      }
    }
  }
  if (as_json) {
    std::cout << ordered_json{{"tool_version", BURESCONE_VERSION},
                              {"tighten", tighten},
                              {"all_passed", all_pass},
                              {"criteria", jout}}
                     .dump(2)
              << "\n";
  } else {
    std::printf("%s\n", all_pass ? "all criteria passed" : "some criteria FAILED");
  }
  return all_pass ? kExitOk : kExitChecksFailed;
}

// ---------------------------------------------------------------------------
// metric / geodesic queries

void print_component_csv(const std::string& source,
                         const std::vector<std::pair<std::string, double>>& rows) {
  std::cout << "# source: " << source << "\n";
  std::cout << "component,value\n";
  for (const auto& [name, value] : rows) {
    std::cout << name << "," << format_value(value) << "\n";
  }
}

int do_metric_bloch(double r, double theta, double phi, bool spectral) {
  const burescone::MetricSample closed =
      burescone::bloch_metric_closed_form(r, theta, phi);
  std::vector<std::pair<std::string, double>> rows;
  const char* names[3] = {"r", "theta", "phi"};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      rows.emplace_back(std::string("g_") + names[i] + "_" + names[j],
                        closed.g(i, j));
    }
  }
  if (spectral) {
    const burescone::MetricSample fd = burescone::bures_metric_spectral(
        burescone::bloch_ball_family(),
        (burescone::RealVector(3) << r, theta, phi).finished());
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        rows.emplace_back(std::string("spectral_g_") + names[i] + "_" + names[j],
                          fd.g(i, j));
      }
    }
  }
  print_component_csv(
      "Bures line element ds^2 = dr^2/(4(1-r^2)) + (r^2/4)(dtheta^2 + "
      "sin^2 theta dphi^2) on the qubit Bloch ball",
      rows);
  return kExitOk;
}

int do_metric_cone3d(double zeta, double u, double theta, bool curvature) {
  const burescone::ConeChart chart =
      burescone::cone_from_bures_limit(zeta, burescone::BaseKind::sphere);
  const burescone::MetricField field = burescone::cone_metric_field(chart);
  const burescone::RealMatrix g =
      field((burescone::RealVector(3) << u, theta, 0.0).finished());
  std::vector<std::pair<std::string, double>> rows = {
      {"kappa", chart.kappa},
      {"g_u_u", g(0, 0)},
      {"g_theta_theta", g(1, 1)},
      {"g_phi_phi", g(2, 2)},
  };
  if (curvature) {
    rows.emplace_back("ricci_scalar", burescone::cone_scalar_curvature(chart, u));
  }
  print_component_csv(
      "asymptotic cone du^2 + u^2 kappa^2 (dtheta^2 + sin^2 theta dphi^2) of "
      "the qutrit family with shrinking spectrum (eps, zeta eps), kappa = "
      "|1-zeta|/(2 sqrt(2)(1+zeta))",
      rows);
  return kExitOk;
}

int do_geodesic(double u0, double du0, double dtheta0, double kappa, int base_dim,
                double s_max, int steps) {
  using namespace burescone;
  ConeState init;
  init.u = u0;
  init.du = du0;
  ConeChart chart;
  if (base_dim == 1) {
    chart = ConeChart::circle(kappa);
    init.theta = RealVector::Zero(1);
    init.dtheta = (RealVector(1) << dtheta0).finished();
  } else {
    chart = ConeChart::sphere(kappa);
    init.theta = (RealVector(2) << std::numbers::pi / 2.0, 0.0).finished();
    init.dtheta = (RealVector(2) << 0.0, dtheta0).finished();
  }
  const GeodesicResult res =
      integrate_geodesic(chart, init, linear_grid(0.0, s_max, steps + 1));

  std::cout << "# source: cone geodesics uddot = u |thetadot|_h^2, "
               "thetaddot^a = -2 (udot/u) thetadot^a - Gamma^a_bc(h) thetadot^b "
               "thetadot^c\n";
  std::cout << "# units: kappa = " << format_value(kappa)
            << ", base dimension = " << base_dim << "\n";
  std::cout << "# tip_reached: " << (res.hit_tip ? "yes" : "no")
            << ", s_end = " << format_value(res.s_end) << "\n";
  if (base_dim == 1) {
    std::cout << "s,u,du,theta,dtheta\n";
  } else {
    std::cout << "s,u,du,theta,dtheta,phi,dphi\n";
  }
  for (const ConeState& st : res.states) {
    std::cout << format_value(st.s) << "," << format_value(st.u) << ","
              << format_value(st.du);
    for (Eigen::Index a = 0; a < st.theta.size(); ++a) {
      std::cout << "," << format_value(st.theta[a]) << ","
                << format_value(st.dtheta[a]);
    }
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures geometry of density matrices: metric, curvature, cones, "
               "and open-system trajectories"};
  app.set_version_flag("--version", BURESCONE_VERSION);
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand(
      "run", "Run a scenario (or 'all') and write CSV tables, checks.json and "
             "manifest.json");
  std::string scenario;
  run->add_option("scenario", scenario,
                  "one of: asymptotic-purification, finite-time-purification, "
                  "pure-to-mixed, n3-shooting, cone-2d, cone-3d, "
                  "cone-steady-state, all")
      ->required();
  std::string out_flag, config_path;
  int jobs = 1;
  run->add_option("--out", out_flag,
                  "output root (default: $BURESCONE_OUT, then ./out)");
  run->add_option("--config", config_path, "flat key=value parameter file");
  run->add_option("--jobs", jobs, "parallel scenarios for 'all'")
      ->check(CLI::PositiveNumber);
  std::map<std::string, double> cli_params;
  std::vector<std::pair<std::string, CLI::Option*>> param_opts;
  {
    const std::map<std::string, std::string> help = {
        {"p", "initial larger population (purification scenarios)"},
        {"gamma", "decay rate (asymptotic-purification, n3-shooting)"},
        {"alpha", "finite-time exponent"},
        {"T", "purification time"},
        {"gamma1", "lowering-channel rate (pure-to-mixed)"},
        {"gamma2", "sigma_x channel rate (pure-to-mixed)"},
        {"zeta", "eigenvalue ratio of the shrinking block (cone scenarios)"},
        {"eps", "smaller-block scale (cone-steady-state)"},
        {"theta", "rotation polar angle (cone-steady-state)"},
        {"phi", "rotation azimuth (cone-steady-state)"},
        {"Gamma", "overall relaxation rate (cone-steady-state)"},
    };
    for (const std::string& key : kParamKeys) {
      param_opts.emplace_back(
          key, run->add_option("--" + key, cli_params[key], help.at(key)));
    }
  }

  // check-all
  auto* check = app.add_subcommand("check-all", "Run the full release gate");
  bool as_json = false;
  double tighten = 1.0;
  check->add_flag("--json", as_json, "emit a JSON report on stdout");
  check->add_option("--tighten", tighten,
                    "probe margins: rerun with tolerances divided by this factor "
                    "and flag criteria that stop passing as MARGINAL")
      ->check(CLI::Range(1.0, 1e9));

  // metric
  auto* metric = app.add_subcommand("metric", "Print metric components at a point");
  metric->require_subcommand(1);
  auto* mbloch = metric->add_subcommand(
      "bloch", "closed-form Bures metric in spherical Bloch coordinates");
  double mr = 0.5, mtheta = std::numbers::pi / 2.0, mphi = 0.0;
  bool mspectral = false;
  mbloch->add_option("--r", mr, "radius in [0, 1)")->required();
  mbloch->add_option("--theta", mtheta, "polar angle");
  mbloch->add_option("--phi", mphi, "azimuth");
  mbloch->add_flag("--spectral", mspectral,
                   "also print the finite-difference spectral double sum");
  auto* mcone = metric->add_subcommand(
      "cone3d", "asymptotic cone metric of the near-pure qutrit family");
  double czeta = 0.5, cu = 0.1, ctheta = std::numbers::pi / 2.0;
  bool ccurv = false;
  mcone->add_option("--zeta", czeta, "eigenvalue ratio of the shrinking block")
      ->required();
  mcone->add_option("--u", cu, "radial cone coordinate, u > 0")->required();
  mcone->add_option("--theta", ctheta, "polar angle on the base sphere");
  mcone->add_flag("--curvature", ccurv, "also print the scalar curvature at u");

  // geodesic
  auto* geo = app.add_subcommand("geodesic",
                                 "Integrate a cone geodesic and print it as CSV");
  double gu0 = 1.0, gdu0 = -1.0, gdtheta0 = 0.0, gkappa = 0.6, gsmax = 3.0;
  int gdim = 1, gsteps = 300;
  geo->add_option("--u0", gu0, "initial radius")->required();
  geo->add_option("--du0", gdu0, "initial radial velocity")->required();
  geo->add_option("--dtheta0", gdtheta0,
                  "initial angular velocity (azimuthal for --d 2)");
  geo->add_option("--kappa", gkappa, "cone scale")->required();
  geo->add_option("--d", gdim, "base dimension: 1 (circle) or 2 (sphere)")
      ->check(CLI::IsMember({1, 2}));
  geo->add_option("--s-max", gsmax, "arc length to integrate")
      ->check(CLI::PositiveNumber);
  geo->add_option("--steps", gsteps, "number of output intervals")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      ParamSet ps;
      if (!config_path.empty()) ps.values = parse_config(config_path);
      for (const auto& [key, opt] : param_opts) {
        if (opt->count() > 0) ps.values[key] = cli_params[key];  // flags win
      }
      return do_run(scenario, ps, resolve_out(out_flag), jobs);
    }
    if (check->parsed()) return do_check_all(as_json, tighten);
    if (mbloch->parsed()) return do_metric_bloch(mr, mtheta, mphi, mspectral);
    if (mcone->parsed()) return do_metric_cone3d(czeta, cu, ctheta, ccurv);
    if (geo->parsed()) return do_geodesic(gu0, gdu0, gdtheta0, gkappa, gdim, gsmax,
                                          gsteps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exception(e);
  }
  return kExitConfig;
}
