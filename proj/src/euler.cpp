#include "gasflow/euler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gasflow/numeric.hpp"

namespace gasflow {

namespace {

constexpr std::size_t kBracketCells = 4096;
constexpr double kBracketCeiling = 1e6;

double root_ftol(const FlowConfig& cfg) {
  return 1e-12 * std::max(1.0, std::fabs(cfg.C0));
}

void check_intensity(double intensity) {
  if (!(intensity > 0.0))
    throw std::invalid_argument("source intensity must be > 0");
}

}  // namespace

FlowConfig FlowConfig::with_c0(IsentropeModel model, double intensity,
                               double C0) {
  check_intensity(intensity);
  return FlowConfig{std::move(model), intensity, C0, std::nullopt};
}

FlowConfig FlowConfig::with_rho_inf(IsentropeModel model, double intensity,
                                    double rho_inf) {
  check_intensity(intensity);
  const double C0 = calibrate(model, intensity, rho_inf);
  return FlowConfig{std::move(model), intensity, C0, rho_inf};
}

FlowConfig FlowConfig::with_reference(IsentropeModel model, double intensity,
                                      double r_ref, double rho_ref) {
  check_intensity(intensity);
  if (!(r_ref > 0.0) || !(rho_ref > 0.0))
    throw std::domain_error("reference point must have r > 0, rho > 0");
  const double v_ref = 1.0 / rho_ref;
  model.require_domain(v_ref);
  const double C0 = 1.0 / (2.0 * rho_ref * rho_ref * std::pow(r_ref, 4)) +
                    model.f(v_ref) / (intensity * intensity);
  return FlowConfig{std::move(model), intensity, C0, std::nullopt};
}

double calibrate(const IsentropeModel& model, double intensity,
                 double rho_inf) {
  check_intensity(intensity);
  if (rho_inf == 0.0)
    throw std::domain_error(
        "rho_inf = 0 does not determine C0; supply C0 directly");
  if (!(rho_inf > 0.0)) throw std::domain_error("rho_inf must be positive");
  const double I2 = intensity * intensity;
  const double n = model.dof();
  const double c = model.entropy_constant();
  if (model.kind() == GasKind::Ideal) {
    return model.gas_constant() * c * (n + 2.0) * std::pow(rho_inf, 2.0 / n) /
           (2.0 * I2);
  }
  if (!(rho_inf < 3.0))
    throw std::domain_error("vdw rho_inf must be below the pole density 3");
  // 3 C0 rho I^2 / 2 = 2c (3/rho - 1)^{-(1+2/n)} (3n+6 - n rho) - 9 rho^2
  const double rhs = 2.0 * c *
                         std::pow(3.0 / rho_inf - 1.0, -(1.0 + 2.0 / n)) *
                         (3.0 * n + 6.0 - n * rho_inf) -
                     9.0 * rho_inf * rho_inf;
  return 2.0 * rhs / (3.0 * rho_inf * I2);
}

double euler_residual(const FlowConfig& cfg, double r, double v) {
  if (!(r > 0.0)) throw std::domain_error("radius must be > 0");
  const double I2 = cfg.intensity * cfg.intensity;
  return v * v / (2.0 * std::pow(r, 4)) + cfg.model.f(v) / I2 - cfg.C0;
}

namespace {

double euler_residual_dv(const FlowConfig& cfg, double r, double v) {
  return v / std::pow(r, 4) +
         cfg.model.f_prime(v) / (cfg.intensity * cfg.intensity);
}

double polish_root(const FlowConfig& cfg, double r, double lo, double hi) {
  const double ftol = root_ftol(cfg);
  auto fn = [&](double v) { return euler_residual(cfg, r, v); };
  auto dfn = [&](double v) { return euler_residual_dv(cfg, r, v); };
  const double x0 = bisect(fn, lo, hi, 1e-10);
  return newton(fn, dfn, x0, lo, hi, ftol);
}

}  // namespace

std::vector<double> solve_branches(const FlowConfig& cfg, double r) {
  if (!(r > 0.0)) throw std::domain_error("radius must be > 0");
  // the bracketing grid depends only on the gas kind; build each once
  static const std::vector<double> ideal_grid =
      log_grid(1e-9, kBracketCeiling, kBracketCells + 1);
  static const std::vector<double> vdw_grid =
      log_grid(1.0 / 3.0 + 1e-9, kBracketCeiling, kBracketCells + 1);
  // The dilute root grows like sqrt(2 C0) r^2; extend the window at large
  // radii so it stays interior to the bracketing grid.
  const double ceiling =
      std::max(kBracketCeiling,
               4.0 * std::sqrt(2.0 * std::max(1.0, std::fabs(cfg.C0))) * r * r);
  const double floor_v =
      cfg.model.kind() == GasKind::Ideal ? 1e-9 : 1.0 / 3.0 + 1e-9;
  std::vector<double> extended;
  if (ceiling > kBracketCeiling)
    extended = log_grid(floor_v, ceiling, kBracketCells + 1);
  const std::vector<double>& grid =
      !extended.empty()
          ? extended
          : (cfg.model.kind() == GasKind::Ideal ? ideal_grid : vdw_grid);

  std::vector<double> fs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    fs[i] = euler_residual(cfg, r, grid[i]);

  std::vector<double> roots;
  const double ftol = root_ftol(cfg);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(grid[i]);
    } else if (fs[i] * fs[i + 1] < 0.0) {
      roots.push_back(polish_root(cfg, r, grid[i], grid[i + 1]));
    }
  }
  if (fs.back() == 0.0) roots.push_back(grid.back());

  // A pair of roots can hide between nodes near a fold: refine every sampled
  // local minimum that comes close to zero without a sign change.
  const double near = 1e-2 * std::max(1.0, std::fabs(cfg.C0));
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!(fs[i] > 0.0 && fs[i] < near)) continue;
    if (!(fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1])) continue;
    // ternary search for the true minimum on [grid[i-1], grid[i+1]]
    double a = grid[i - 1], b = grid[i + 1];
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + a); ++it) {
      const double m1 = a + (b - a) / 3.0;
      const double m2 = b - (b - a) / 3.0;
      if (euler_residual(cfg, r, m1) < euler_residual(cfg, r, m2))
        b = m2;
      else
        a = m1;
    }
    const double vmin = 0.5 * (a + b);
    const double fmin = euler_residual(cfg, r, vmin);
    if (fmin < 0.0) {
      roots.push_back(polish_root(cfg, r, grid[i - 1], vmin));
      roots.push_back(polish_root(cfg, r, vmin, grid[i + 1]));
    } else if (fmin <= ftol) {
      roots.push_back(vmin);  // tangent (fold) root
    }
  }

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) {
                            return std::fabs(x - y) <= 1e-11 * (1.0 + x);
                          }),
              roots.end());
  return roots;
}

ExistenceRadius existence_radius(const FlowConfig& cfg) {
  const IsentropeModel& m = cfg.model;
  const double I2 = cfg.intensity * cfg.intensity;
  if (m.kind() == GasKind::Ideal) {
    if (!(cfg.C0 > 0.0))
      throw std::domain_error("ideal existence radius needs C0 > 0");
    const double n = m.dof();
    const double Rc = m.gas_constant() * m.entropy_constant();
    const double rho_star =
        std::pow(2.0 * I2 * n * cfg.C0 / (Rc * (n + 1.0) * (n + 2.0)),
                 0.5 * n);
    const double arg =
        cfg.C0 - Rc * (0.5 * n + 1.0) * std::pow(rho_star, 2.0 / n) / I2;
    if (!(arg > 0.0))
      return {false, std::numeric_limits<double>::infinity()};
    return {true, std::pow(2.0 * rho_star * rho_star * arg, -0.25)};
  }

  // vdw: fold condition {F = 0, dF/dv = 0} eliminates r, leaving
  // g(v) = (f(v) - v f'(v)/2)/I^2 - C0 = 0 on the branch where f'(v) < 0,
  // with r^4 = -v I^2 / f'(v). The existence radius is the smallest fold
  // radius (the global minimum of F in v is strictly decreasing in r).
  auto g = [&](double v) {
    return (m.f(v) - 0.5 * v * m.f_prime(v)) / I2 - cfg.C0;
  };
  const auto grid = log_grid(1.0 / 3.0 + 1e-9, kBracketCeiling, 8193);
  double best = std::numeric_limits<double>::infinity();
  double prev_v = grid.front();
  double prev_g = g(prev_v);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur_v = grid[i];
    const double cur_g = g(cur_v);
    if (prev_g * cur_g < 0.0) {
      const double v = bisect(g, prev_v, cur_v, 1e-13);
      const double fp = m.f_prime(v);
      if (fp < 0.0)
        best = std::min(best, std::pow(-v * I2 / fp, 0.25));
    }
    prev_v = cur_v;
    prev_g = cur_g;
  }
  if (!std::isfinite(best))
    return {false, 0.0};  // no fold: roots exist at every radius
  return {true, best};
}

double velocity(const FlowConfig& cfg, double r, double v) {
  if (!(r > 0.0)) throw std::domain_error("radius must be > 0");
  return cfg.intensity * v / (r * r * r);
}

double mass_flux(const FlowConfig& cfg, double r, double v) {
  if (!(r > 0.0) || !(v > 0.0))
    throw std::domain_error("mass flux needs r > 0, v > 0");
  // 4 pi r^3 U / v with U = I v / r^3; the r and v factors cancel exactly.
  return 4.0 * std::numbers::pi * cfg.intensity;
}

namespace {

ProfileRecord make_record(const FlowConfig& cfg, double r, double v) {
  ProfileRecord rec;
  rec.r = r;
  rec.v = v;
  rec.rho = 1.0 / v;
  rec.T = cfg.model.temperature(v);
  rec.p = cfg.model.pressure(v);
  rec.U = velocity(cfg, r, v);
  return rec;
}

double vtol(double v) { return 1e-12 * (1.0 + std::fabs(v)); }

// Nearest-root step from (r_from, v_from) to r_to, halving the step when the
// target roots are ambiguous or missing.
double continue_root(const FlowConfig& cfg, double r_from, double v_from,
                     double r_to, int depth) {
  const auto roots = solve_branches(cfg, r_to);
  if (!roots.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < roots.size(); ++i)
      if (std::fabs(roots[i] - v_from) < std::fabs(roots[best] - v_from))
        best = i;
    bool ambiguous = false;
    if (roots.size() > 1) {
      const double d_lo =
          best > 0 ? roots[best] - roots[best - 1]
                   : std::numeric_limits<double>::infinity();
      const double d_hi = best + 1 < roots.size()
                              ? roots[best + 1] - roots[best]
                              : std::numeric_limits<double>::infinity();
      ambiguous = std::min(d_lo, d_hi) < 10.0 * vtol(roots[best]);
    }
    if (!ambiguous || depth >= 48) return roots[best];
  } else if (depth >= 48) {
    throw BranchLossError(r_to, "branch lost: no root near r = " +
                                    std::to_string(r_to));
  }
  const double r_mid = 0.5 * (r_from + r_to);
  const double v_mid = continue_root(cfg, r_from, v_from, r_mid, depth + 1);
  return continue_root(cfg, r_mid, v_mid, r_to, depth + 1);
}

}  // namespace

DensityProfile density_profile(const FlowConfig& cfg,
                               std::span<const double> r_grid, BranchSel sel) {
  if (r_grid.size() < 1) throw std::invalid_argument("empty radial grid");
  for (std::size_t i = 0; i + 1 < r_grid.size(); ++i)
    if (!(r_grid[i] < r_grid[i + 1]))
      throw std::invalid_argument("radial grid must be strictly increasing");

  DensityProfile profile;
  profile.branch = (sel == BranchSel::Lower) ? "lower" : "higher";
  profile.gas = cfg.model.kind();
  profile.intensity = cfg.intensity;
  profile.C0 = cfg.C0;

  const auto first = solve_branches(cfg, r_grid[0]);
  if (first.empty())
    throw BranchLossError(r_grid[0],
                          "no solution branch at the first grid point");
  double v = (sel == BranchSel::Higher) ? first.front() : first.back();
  profile.records.push_back(make_record(cfg, r_grid[0], v));

  for (std::size_t k = 1; k < r_grid.size(); ++k) {
    v = continue_root(cfg, r_grid[k - 1], v, r_grid[k], 0);
    profile.records.push_back(make_record(cfg, r_grid[k], v));
  }
  return profile;
}

double dense_beta1(const FlowConfig& cfg) {
  if (!cfg.rho_inf || !(*cfg.rho_inf > 0.0))
    throw std::domain_error("beta1 needs a rho_inf calibration");
  const double v0 = 1.0 / *cfg.rho_inf;
  return cfg.intensity * cfg.intensity / (2.0 * cfg.model.f_prime(v0));
}

double asymptotic_density(const FlowConfig& cfg, double r, int order) {
  if (!(r > 0.0)) throw std::domain_error("radius must be > 0");
  if (order < 0 || order > 1)
    throw std::invalid_argument("asymptotic order must be 0 or 1");
  if (cfg.rho_inf && *cfg.rho_inf > 0.0) {
    const double rho0 = *cfg.rho_inf;
    if (order == 0) return rho0;
    return rho0 + dense_beta1(cfg) / std::pow(r, 4);
  }
  if (!(cfg.C0 > 0.0))
    throw std::domain_error("vacuum asymptotics need C0 > 0");
  return 1.0 / (std::sqrt(2.0 * cfg.C0) * r * r);
}

}  // namespace gasflow
