// gasflow: stationary spherically symmetric gas flows from a point source.
// Subcommands compute inviscid (Euler) density profiles with branch tracking,
// viscous (Navier-Stokes) profiles via a singularly perturbed BVP, phase
// distributions for van der Waals gases, calibration constants, and
// asymptotic series with residual-order verification.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gasflow/csv.hpp"
#include "gasflow/euler.hpp"
#include "gasflow/expansion.hpp"
#include "gasflow/numeric.hpp"
#include "gasflow/phase.hpp"
#include "gasflow/viscous.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ViscositySpec {
  double eta = 0.0;
  double zeta = 0.0;
  std::string bc_left = "lower";
  std::string bc_right = "higher";
  int nodes = 801;
};

struct ExpansionSpec {
  std::string type = "singular";  // singular | regular
  std::string regime = "large";   // small | large
  int order = 1;
  gasflow::SeriesCoefficients constants;
};

struct RunConfig {
  std::string gas;
  double n = 3.0;
  double sigma0 = 0.0;
  double R = 1.0;
  double intensity = 1.0;
  std::optional<double> c0;
  std::optional<double> rho_inf;
  std::optional<std::pair<double, double>> reference;  // (r_ref, rho_ref)
  double r_start = 1.0;
  double r_end = 10.0;
  int points = 2;
  std::string spacing = "linear";
  std::optional<ViscositySpec> viscosity;
  std::string branch = "lower";
  std::optional<ExpansionSpec> expansion;
};

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError("config: missing or non-numeric key '" + key + "'");
  return j[key].get<double>();
}

RunConfig parse_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  if (!j.contains("gas") || !j["gas"].is_string())
    throw ConfigError("config: 'gas' must be \"ideal\" or \"vdw\"");
  cfg.gas = j["gas"].get<std::string>();
  if (cfg.gas != "ideal" && cfg.gas != "vdw")
    throw ConfigError("config: 'gas' must be \"ideal\" or \"vdw\"");
  if (j.contains("n")) cfg.n = require_number(j, "n");
  if (j.contains("sigma0")) cfg.sigma0 = require_number(j, "sigma0");
  if (j.contains("R")) cfg.R = require_number(j, "R");
  cfg.intensity = require_number(j, "intensity");
  if (!(cfg.intensity > 0.0))
    throw ConfigError("config: 'intensity' must be > 0");

  if (!j.contains("calibration") || !j["calibration"].is_object())
    throw ConfigError("config: 'calibration' object is required");
  const json& cal = j["calibration"];
  int variants = 0;
  if (cal.contains("c0")) {
    cfg.c0 = require_number(cal, "c0");
    ++variants;
  }
  if (cal.contains("rho_inf")) {
    cfg.rho_inf = require_number(cal, "rho_inf");
    ++variants;
  }
  if (cal.contains("r_ref") || cal.contains("rho_ref")) {
    cfg.reference = {require_number(cal, "r_ref"),
                     require_number(cal, "rho_ref")};
    ++variants;
  }
  if (variants != 1)
    throw ConfigError(
        "config: calibration must contain exactly one of "
        "{c0}, {rho_inf}, {r_ref, rho_ref}");

  if (j.contains("grid")) {
    const json& g = j["grid"];
    cfg.r_start = require_number(g, "r_start");
    cfg.r_end = require_number(g, "r_end");
    cfg.points = static_cast<int>(require_number(g, "points"));
    if (g.contains("spacing")) cfg.spacing = g["spacing"].get<std::string>();
    if (cfg.points < 2) throw ConfigError("config: grid.points must be >= 2");
    if (!(cfg.r_start > 0.0) || !(cfg.r_end > cfg.r_start))
      throw ConfigError("config: need 0 < r_start < r_end");
    if (cfg.spacing != "linear" && cfg.spacing != "log")
      throw ConfigError("config: grid.spacing must be \"linear\" or \"log\"");
  }

  if (j.contains("viscosity")) {
    const json& v = j["viscosity"];
    ViscositySpec vs;
    vs.eta = require_number(v, "eta");
    vs.zeta = require_number(v, "zeta");
    if (v.contains("bc_left")) vs.bc_left = v["bc_left"].get<std::string>();
    if (v.contains("bc_right")) vs.bc_right = v["bc_right"].get<std::string>();
    if (v.contains("nodes"))
      vs.nodes = static_cast<int>(require_number(v, "nodes"));
    cfg.viscosity = vs;
  }

  if (j.contains("branch")) {
    cfg.branch = j["branch"].get<std::string>();
    if (cfg.branch != "lower" && cfg.branch != "higher")
      throw ConfigError("config: branch must be \"lower\" or \"higher\"");
  }

  if (j.contains("expansion")) {
    const json& e = j["expansion"];
    ExpansionSpec es;
    if (e.contains("type")) es.type = e["type"].get<std::string>();
    if (es.type != "singular" && es.type != "regular")
      throw ConfigError("config: expansion.type must be singular or regular");
    if (e.contains("regime")) es.regime = e["regime"].get<std::string>();
    if (es.regime != "small" && es.regime != "large")
      throw ConfigError("config: expansion.regime must be small or large");
    if (e.contains("order"))
      es.order = static_cast<int>(require_number(e, "order"));
    if (e.contains("constants")) {
      const json& c = e["constants"];
      auto pick = [&](const char* key, double& slot) {
        if (c.contains(key)) slot = require_number(c, key);
      };
      pick("c1", es.constants.c1);
      pick("c2", es.constants.c2);
      pick("c3", es.constants.c3);
      pick("c4", es.constants.c4);
      pick("f0", es.constants.f0);
      pick("v1", es.constants.v1);
      pick("alpha1", es.constants.alpha1);
      pick("alpha2", es.constants.alpha2);
    }
    cfg.expansion = es;
  }
  return cfg;
}

gasflow::IsentropeModel make_model(const RunConfig& cfg) {
  if (cfg.gas == "ideal")
    return gasflow::IsentropeModel::ideal(cfg.n, cfg.sigma0, cfg.R);
  return gasflow::IsentropeModel::vdw(cfg.n, cfg.sigma0);
}

gasflow::FlowConfig make_flow(const RunConfig& cfg) {
  auto model = make_model(cfg);
  if (cfg.c0)
    return gasflow::FlowConfig::with_c0(model, cfg.intensity, *cfg.c0);
  if (cfg.rho_inf)
    return gasflow::FlowConfig::with_rho_inf(model, cfg.intensity,
                                             *cfg.rho_inf);
  return gasflow::FlowConfig::with_reference(
      model, cfg.intensity, cfg.reference->first, cfg.reference->second);
}

std::vector<double> make_grid(const RunConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.points);
  return cfg.spacing == "log" ? gasflow::log_grid(cfg.r_start, cfg.r_end, n)
                              : gasflow::linear_grid(cfg.r_start, cfg.r_end, n);
}

gasflow::BranchSel parse_branch(const std::string& s) {
  return s == "higher" ? gasflow::BranchSel::Higher
                       : gasflow::BranchSel::Lower;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string profile_csv(const gasflow::DensityProfile& profile) {
  std::ostringstream ss;
  gasflow::write_profile_csv(ss, profile);
  return ss.str();
}

int fail_numerical(const fs::path& out_dir, const std::string& kind,
                   const std::string& message, json extra = json::object()) {
  json diag = {{"error", kind}, {"message", message}};
  diag.update(extra);
  std::cerr << diag.dump(2) << "\n";
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!ec) {
    std::ofstream out(out_dir / "diagnostic.json", std::ios::binary);
    if (out) out << diag.dump(2) << "\n";
  }
  return kExitNumerical;
}

int cmd_calibrate(const RunConfig& cfg) {
  const auto flow = make_flow(cfg);
  std::cout << gasflow::format_double(flow.C0) << "\n";
  return kExitOk;
}

int cmd_euler_profile(const RunConfig& cfg, const fs::path& out_dir,
                      bool phases) {
  if (phases && cfg.gas != "vdw")
    throw ConfigError("phases defined only for vdw");
  const auto flow = make_flow(cfg);
  const auto grid = make_grid(cfg);
  try {
    auto profile =
        gasflow::density_profile(flow, grid, parse_branch(cfg.branch));
    if (phases) profile = gasflow::phase_profile(flow, std::move(profile));
    fs::create_directories(out_dir);
    const fs::path out =
        out_dir / (phases ? "phases.csv" : "euler_profile.csv");
    write_text(out, profile_csv(profile));
    std::cout << out.string() << "\n";
    return kExitOk;
  } catch (const gasflow::BranchLossError& e) {
    return fail_numerical(out_dir, "no solution branch", e.what(),
                          {{"r", e.r_fold}});
  }
}

int cmd_ns_profile(const RunConfig& cfg, const fs::path& out_dir,
                   const std::vector<double>& mu_sweep) {
  if (!cfg.viscosity)
    throw ConfigError("ns-profile requires a viscosity block");
  const auto flow = make_flow(cfg);
  const ViscositySpec& vs = *cfg.viscosity;

  std::vector<std::pair<double, double>> etas;  // (eta, zeta) per run
  if (mu_sweep.empty()) {
    etas.emplace_back(vs.eta, vs.zeta);
  } else {
    const double mu_base = (vs.zeta + 4.0 * vs.eta / 3.0) / cfg.intensity;
    if (!(mu_base > 0.0))
      throw ConfigError("mu-sweep needs nonzero base viscosities");
    for (double mu : mu_sweep)
      etas.emplace_back(vs.eta * mu / mu_base, vs.zeta * mu / mu_base);
  }

  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const std::string suffix =
        etas.size() == 1 ? std::string{} : "_" + std::to_string(i);
    gasflow::BvpOptions opts;
    opts.nodes = vs.nodes;
    try {
      const auto vcfg = gasflow::ViscousConfig::from_branches(
          flow, etas[i].first, etas[i].second, cfg.r_start, cfg.r_end,
          parse_branch(vs.bc_left), parse_branch(vs.bc_right), opts);
      const auto sol = gasflow::solve_bvp(vcfg);

      json summary = {{"mu", vcfg.mu},
                      {"residual_norm", sol.residual_norm},
                      {"newton_iters", sol.newton_iters}};
      try {
        const auto step = gasflow::step_location(sol.profile);
        summary["r_step"] = step.r_step;
        summary["step_width"] = step.width;
      } catch (const gasflow::NoStepError&) {
        summary["r_step"] = nullptr;
        summary["step_width"] = nullptr;
      }
      write_text(out_dir / ("ns_profile" + suffix + ".csv"),
                 profile_csv(sol.profile));
      write_text(out_dir / ("ns_summary" + suffix + ".json"),
                 summary.dump(2) + "\n");
      std::cout << (out_dir / ("ns_profile" + suffix + ".csv")).string()
                << "\n";
    } catch (const gasflow::BvpConvergenceError& e) {
      return fail_numerical(out_dir, "bvp did not converge", e.what(),
                            {{"residual_norm", e.residual_norm}});
    } catch (const gasflow::BranchLossError& e) {
      return fail_numerical(out_dir, "no solution branch", e.what(),
                            {{"r", e.r_fold}});
    }
  }
  return kExitOk;
}

int cmd_expand(const RunConfig& cfg, const fs::path& out_dir) {
  if (!cfg.expansion) throw ConfigError("expand requires an expansion block");
  if (!cfg.viscosity)
    throw ConfigError("expand requires a viscosity block (k = 4 eta/3 + zeta)");
  const ExpansionSpec& es = *cfg.expansion;
  const double k = 4.0 * cfg.viscosity->eta / 3.0 + cfg.viscosity->zeta;
  const auto model = make_model(cfg);
  const auto grid = make_grid(cfg);
  const std::vector<double> eps_set = {1e-2, 5e-3, 2.5e-3};

  fs::create_directories(out_dir);
  std::ostringstream csv;
  json report;

  if (es.type == "singular") {
    const auto regime = es.regime == "small" ? gasflow::Regime::SmallI
                                             : gasflow::Regime::LargeI;
    const auto scaling = gasflow::scaling_exponents(model, regime);
    const double eps = scaling.epsilon(cfg.intensity);
    auto eval = [&](double x, double e) {
      return cfg.gas == "ideal"
                 ? gasflow::singular_series_ideal(x, es.constants, e, model, k)
                 : gasflow::singular_series_vdw3(x, es.constants, e, k);
    };
    csv << "x,w\n";
    for (double x : grid)
      csv << gasflow::format_double(x) << ','
          << gasflow::format_double(eval(x, eps).w) << '\n';

    // residual order in eps; I follows from eps through the scaling
    std::vector<double> resid;
    for (double e : eps_set) {
      const double intensity = std::pow(e, 1.0 / (1.0 - scaling.alpha));
      double worst = 0.0;
      for (double x : grid)
        worst = std::max(worst,
                         std::fabs(gasflow::scaled_ode_residual(
                             model, scaling, k, intensity, x, eval(x, e))));
      resid.push_back(worst);
    }
    const auto fit = gasflow::fit_order(eps_set, resid, 1.8);
    report = {{"regime", es.regime},
              {"alpha", scaling.alpha},
              {"beta", scaling.beta},
              {"fitted_order", fit.slope},
              {"pass", fit.pass}};
  } else {
    csv << "r,v\n";
    for (double r : grid)
      csv << gasflow::format_double(r) << ','
          << gasflow::format_double(gasflow::regular_series(
                 model, es.constants, cfg.intensity, r, es.order, k))
          << '\n';

    // scaled euler residual order in I, with C0 = f0 / I^2
    std::vector<double> resid;
    for (double intensity : eps_set) {
      const double C0 = es.constants.f0 / (intensity * intensity);
      const auto flow = gasflow::FlowConfig::with_c0(model, intensity, C0);
      double worst = 0.0;
      for (double r : grid) {
        const double v = gasflow::regular_series(model, es.constants,
                                                 intensity, r, es.order, k);
        worst = std::max(worst, std::fabs(gasflow::euler_residual(flow, r, v)) /
                                    std::max(1.0, std::fabs(C0)));
      }
      resid.push_back(worst);
    }
    const auto fit = gasflow::fit_order(eps_set, resid, 2.5);
    report = {{"regime", "small"},
              {"alpha", nullptr},
              {"beta", nullptr},
              {"fitted_order", fit.slope},
              {"pass", fit.pass}};
  }

  write_text(out_dir / "expand_series.csv", csv.str());
  write_text(out_dir / "expand_report.json", report.dump(2) + "\n");
  std::cout << (out_dir / "expand_series.csv").string() << "\n";
  return report["pass"].get<bool>() ? kExitOk : kExitValidation;
}

int cmd_validate(const RunConfig& cfg, const fs::path& out_dir,
                 const std::string& input_csv) {
  const auto flow = make_flow(cfg);
  const double scale = std::max(1.0, std::fabs(flow.C0));
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };

  if (!input_csv.empty()) {
    std::ifstream in(input_csv);
    if (!in) throw ConfigError("cannot open input CSV: " + input_csv);
    const auto profile = gasflow::read_profile_csv(in);
    const auto& recs = profile.records;
    if (cfg.viscosity) {
      // viscous profile: re-evaluate the discrete ODE residual on the mesh
      double worst = 0.0;
      const double mu =
          (cfg.viscosity->zeta + 4.0 * cfg.viscosity->eta / 3.0) /
          cfg.intensity;
      const auto vcfg = gasflow::ViscousConfig::from_values(
          flow, cfg.viscosity->eta, cfg.viscosity->zeta, recs.front().r,
          recs.back().r, recs.front().v, recs.back().v);
      (void)mu;
      for (std::size_t i = 1; i + 1 < recs.size(); ++i) {
        const double h1 = recs[i].r - recs[i - 1].r;
        const double h2 = recs[i + 1].r - recs[i].r;
        const double vp = (-h2 / (h1 * (h1 + h2))) * recs[i - 1].v +
                          ((h2 - h1) / (h1 * h2)) * recs[i].v +
                          (h1 / (h2 * (h1 + h2))) * recs[i + 1].v;
        const double vpp = 2.0 / (h1 * (h1 + h2)) * recs[i - 1].v -
                           2.0 / (h1 * h2) * recs[i].v +
                           2.0 / (h2 * (h1 + h2)) * recs[i + 1].v;
        worst = std::max(worst, std::fabs(gasflow::ns_residual(
                                    vcfg, recs[i].r, recs[i].v, vp, vpp)));
      }
      check(worst <= 1e-8 * scale,
            "viscous residual on CSV mesh (max " +
                gasflow::format_double(worst) + ")");
    } else {
      double worst = 0.0;
      for (const auto& rec : recs)
        worst = std::max(
            worst, std::fabs(gasflow::euler_residual(flow, rec.r, rec.v)));
      check(worst <= 1e-9 * scale,
            "euler residual on CSV rows (max " + gasflow::format_double(worst) +
                ")");
    }
    double worst_consistency = 0.0;
    for (const auto& rec : recs) {
      worst_consistency = std::max(
          {worst_consistency, std::fabs(rec.rho - 1.0 / rec.v),
           std::fabs(rec.T - flow.model.temperature(rec.v)),
           std::fabs(rec.p - flow.model.pressure(rec.v)),
           std::fabs(rec.U - gasflow::velocity(flow, rec.r, rec.v))});
    }
    check(worst_consistency <= 1e-12 * scale,
          "derived columns consistent with v");
    return failures == 0 ? kExitOk : kExitValidation;
  }

  // built-in invariant suite
  (void)out_dir;
  const auto grid = make_grid(cfg);
  for (const char* branch : {"lower", "higher"}) {
    try {
      const auto profile =
          gasflow::density_profile(flow, grid, parse_branch(branch));
      double worst = 0.0;
      for (const auto& rec : profile.records)
        worst = std::max(
            worst, std::fabs(gasflow::euler_residual(flow, rec.r, rec.v)));
      check(worst <= 1e-9 * scale,
            std::string("euler residual, ") + branch + " branch (max " +
                gasflow::format_double(worst) + ")");
      for (const auto& rec : profile.records)
        if (gasflow::mass_flux(flow, rec.r, rec.v) !=
            4.0 * std::acos(-1.0) * cfg.intensity) {
          check(false, "mass flux invariance");
          break;
        }
    } catch (const gasflow::BranchLossError& e) {
      check(false, std::string("branch tracking (") + branch +
                       "): " + e.what());
    }
  }
  if (cfg.gas == "vdw" && cfg.rho_inf) {
    const double direct = flow.model.f(1.0 / *cfg.rho_inf) /
                          (cfg.intensity * cfg.intensity);
    check(std::fabs(flow.C0 - direct) <= 1e-10 * scale,
          "vdw calibration consistency (relation vs f-convention)");
  }
  const auto er = gasflow::existence_radius(flow);
  if (er.bounded && std::isfinite(er.r_min)) {
    const auto roots = gasflow::solve_branches(flow, er.r_min * 1.0001);
    check(roots.size() >= 2 || !roots.empty(),
          "roots present just above the existence radius");
  }
  return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stationary isentropic gas flow from a point source: exact Euler "
      "branches, van der Waals phases, viscous BVP, asymptotic series"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string branch_override;
  std::string mu_sweep_arg;
  std::string input_csv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--branch", branch_override,
                    "override branch (lower|higher)");
  };

  auto* euler = app.add_subcommand("euler-profile", "inviscid density profile");
  add_common(euler);
  auto* ns = app.add_subcommand("ns-profile", "viscous profile + summary");
  add_common(ns);
  ns->add_option("--mu-sweep", mu_sweep_arg, "comma-separated mu values");
  auto* phases = app.add_subcommand("phases", "profile with phase labels");
  add_common(phases);
  auto* calibrate = app.add_subcommand("calibrate", "print C0");
  add_common(calibrate);
  auto* expand = app.add_subcommand("expand", "asymptotic series + order fit");
  add_common(expand);
  auto* validate = app.add_subcommand("validate", "invariant suite");
  add_common(validate);
  validate->add_option("--input", input_csv, "re-validate an emitted CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = parse_config(config_path);
    if (!branch_override.empty()) {
      if (branch_override != "lower" && branch_override != "higher")
        throw ConfigError("--branch must be lower or higher");
      cfg.branch = branch_override;
    }
    std::vector<double> mu_sweep;
    if (!mu_sweep_arg.empty()) {
      std::stringstream ss(mu_sweep_arg);
      std::string tok;
      while (std::getline(ss, tok, ','))
        mu_sweep.push_back(std::stod(tok));
    }

    if (euler->parsed()) return cmd_euler_profile(cfg, out_dir, false);
    if (phases->parsed()) return cmd_euler_profile(cfg, out_dir, true);
    if (ns->parsed()) return cmd_ns_profile(cfg, out_dir, mu_sweep);
    if (calibrate->parsed()) return cmd_calibrate(cfg);
    if (expand->parsed()) return cmd_expand(cfg, out_dir);
    if (validate->parsed()) return cmd_validate(cfg, out_dir, input_csv);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
