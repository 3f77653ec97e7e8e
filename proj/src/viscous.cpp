#include "gasflow/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gasflow/numeric.hpp"

namespace gasflow {

namespace {

double derived_mu(double eta, double zeta, double intensity) {
  if (eta < 0.0 || zeta < 0.0)
    throw std::invalid_argument("viscosities must be non-negative");
  return (zeta + 4.0 * eta / 3.0) / intensity;
}

double branch_value(const FlowConfig& flow, double r, BranchSel sel) {
  const auto roots = solve_branches(flow, r);
  if (roots.empty())
    throw BranchLossError(r, "no Euler branch at BVP endpoint");
  return sel == BranchSel::Higher ? roots.front() : roots.back();
}

void validate_config(const ViscousConfig& cfg) {
  if (!(cfg.mu > 0.0))
    throw std::invalid_argument("viscous solve needs mu > 0");
  if (!(cfg.r_a > 0.0) || !(cfg.r_a < cfg.r_b))
    throw std::invalid_argument("need 0 < r_a < r_b");
  if (!cfg.flow.model.in_domain(cfg.v_a) || !cfg.flow.model.in_domain(cfg.v_b))
    throw std::domain_error("boundary values outside the model domain");
  if (cfg.opts.nodes < 5)
    throw std::invalid_argument("mesh needs at least 5 nodes");
}

// Three-point finite-difference weights on a possibly non-uniform mesh.
struct FdWeights {
  double d1m, d10, d1p;  // first derivative
  double d2m, d20, d2p;  // second derivative
};

FdWeights fd_weights(double h1, double h2) {
  FdWeights w;
  w.d1m = -h2 / (h1 * (h1 + h2));
  w.d10 = (h2 - h1) / (h1 * h2);
  w.d1p = h1 / (h2 * (h1 + h2));
  w.d2m = 2.0 / (h1 * (h1 + h2));
  w.d20 = -2.0 / (h1 * h2);
  w.d2p = 2.0 / (h2 * (h1 + h2));
  return w;
}

double residual_at(const ViscousConfig& cfg, double mu, double r, double v,
                   double vp, double vpp) {
  const double I2 = cfg.flow.intensity * cfg.flow.intensity;
  const double r3 = r * r * r;
  return -(v / r3) * (r * vpp - 2.0 * vp) * mu + v * vp / (r3 * r) -
         2.0 * v * v / (r3 * r * r) + cfg.flow.model.f_prime(v) * vp / I2;
}

struct NewtonResult {
  bool converged;
  double residual_norm;
  int iters;
};

// Damped Newton for the interior unknowns; v holds boundary values at the
// ends and is updated in place.
NewtonResult newton_solve(const ViscousConfig& cfg, double mu,
                          const std::vector<double>& mesh,
                          std::vector<double>& v) {
  const std::size_t n = mesh.size();
  const std::size_t m = n - 2;
  const double I2 = cfg.flow.intensity * cfg.flow.intensity;
  const double floor = cfg.flow.model.v_floor() + 1e-9;
  const double tol = cfg.opts.tol * std::max(1.0, std::fabs(cfg.flow.C0));

  // On fine meshes the 1/h^2 difference weights amplify rounding error; the
  // residual cannot be driven below that floor, so fold it into the target.
  double roundoff_floor = 0.0;
  auto assemble_residual = [&](const std::vector<double>& vv,
                               std::vector<double>& res) {
    double norm = 0.0;
    roundoff_floor = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double r = mesh[k];
      const auto w = fd_weights(mesh[k] - mesh[k - 1], mesh[k + 1] - mesh[k]);
      const double vp =
          w.d1m * vv[k - 1] + w.d10 * vv[k] + w.d1p * vv[k + 1];
      const double vpp =
          w.d2m * vv[k - 1] + w.d20 * vv[k] + w.d2p * vv[k + 1];
      res[k - 1] = residual_at(cfg, mu, r, vv[k], vp, vpp);
      norm = std::max(norm, std::fabs(res[k - 1]));
      const double vmax = std::max({std::fabs(vv[k - 1]), std::fabs(vv[k]),
                                    std::fabs(vv[k + 1])});
      const double d1 =
          (std::fabs(w.d1m) + std::fabs(w.d10) + std::fabs(w.d1p)) * vmax;
      const double d2 =
          (std::fabs(w.d2m) + std::fabs(w.d20) + std::fabs(w.d2p)) * vmax;
      const double amp = mu * (vv[k] / (r * r * r)) * (r * d2 + 2.0 * d1) +
                         vv[k] * d1 / (r * r * r * r) +
                         std::fabs(cfg.flow.model.f_prime(vv[k])) * d1 / I2;
      roundoff_floor = std::max(
          roundoff_floor,
          8.0 * std::numeric_limits<double>::epsilon() * std::fabs(amp));
    }
    return norm;
  };

  std::vector<double> res(m), sub(m), dia(m), sup(m), rhs(m), trial(n);
  double norm = assemble_residual(v, res);
  int iters = 0;
  for (; iters < cfg.opts.max_newton; ++iters) {
    if (norm <= std::max(tol, roundoff_floor)) return {true, norm, iters};
    // tridiagonal Jacobian
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double r = mesh[k];
      const double r3 = r * r * r;
      const auto w = fd_weights(mesh[k] - mesh[k - 1], mesh[k + 1] - mesh[k]);
      const double vp = w.d1m * v[k - 1] + w.d10 * v[k] + w.d1p * v[k + 1];
      const double vpp = w.d2m * v[k - 1] + w.d20 * v[k] + w.d2p * v[k + 1];
      const double fp = cfg.flow.model.f_prime(v[k]);
      const double fpp = cfg.flow.model.f_second(v[k]);
      auto offdiag = [&](double c1, double c2) {
        return -(v[k] / r3) * (r * c2 - 2.0 * c1) * mu + v[k] * c1 / (r3 * r) +
               fp * c1 / I2;
      };
      sub[k - 1] = (k >= 2) ? offdiag(w.d1m, w.d2m) : 0.0;
      sup[k - 1] = (k + 2 < n) ? offdiag(w.d1p, w.d2p) : 0.0;
      dia[k - 1] = -(1.0 / r3) * (r * vpp - 2.0 * vp) * mu +
                   offdiag(w.d10, w.d20) + vp / (r3 * r) -
                   4.0 * v[k] / (r3 * r * r) + fpp * vp / I2;
      rhs[k - 1] = -res[k - 1];
    }
    solve_tridiagonal(sub, dia, sup, rhs);

    // line search with domain safeguard
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
      trial = v;
      bool in_domain = true;
      for (std::size_t k = 1; k + 1 < n; ++k) {
        trial[k] = v[k] + lambda * rhs[k - 1];
        if (!(trial[k] > floor)) {
          in_domain = false;
          break;
        }
      }
      if (!in_domain) continue;
      const double trial_norm = assemble_residual(trial, res);
      if (std::isfinite(trial_norm) &&
          trial_norm <
              (1.0 - 0.25 * lambda) * norm + std::max(tol, roundoff_floor)) {
        v = trial;
        norm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      norm = assemble_residual(v, res);
      return {norm <= std::max(tol, roundoff_floor), norm, iters + 1};
    }
  }
  return {norm <= std::max(tol, roundoff_floor), norm, iters};
}

std::vector<double> graded_mesh(const std::vector<double>& mesh,
                                const std::vector<double>& v) {
  const std::size_t n = mesh.size();
  const double span = *std::max_element(v.begin(), v.end()) -
                      *std::min_element(v.begin(), v.end());
  const double scale =
      span > 0.0 ? span / (mesh.back() - mesh.front()) : 1.0;
  // arc-length monitor, equidistributed by inverse interpolation
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double slope = (v[i] - v[i - 1]) / (mesh[i] - mesh[i - 1]);
    const double w = std::sqrt(1.0 + (slope / scale) * (slope / scale));
    cum[i] = cum[i - 1] + w * (mesh[i] - mesh[i - 1]);
  }
  std::vector<double> out(n);
  out.front() = mesh.front();
  out.back() = mesh.back();
  std::size_t j = 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double target =
        cum.back() * static_cast<double>(i) / static_cast<double>(n - 1);
    while (j + 1 < n && cum[j] < target) ++j;
    const double t = (target - cum[j - 1]) / (cum[j] - cum[j - 1]);
    out[i] = mesh[j - 1] + t * (mesh[j] - mesh[j - 1]);
  }
  return out;
}

double interp(const std::vector<double>& x, const std::vector<double>& y,
              double xi) {
  if (xi <= x.front()) return y.front();
  if (xi >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xi);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double t = (xi - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + t * (y[j] - y[j - 1]);
}

}  // namespace

ViscousConfig ViscousConfig::from_branches(FlowConfig flow, double eta,
                                           double zeta, double r_a, double r_b,
                                           BranchSel bc_a, BranchSel bc_b,
                                           BvpOptions opts) {
  const double v_a = branch_value(flow, r_a, bc_a);
  const double v_b = branch_value(flow, r_b, bc_b);
  return from_values(std::move(flow), eta, zeta, r_a, r_b, v_a, v_b, opts);
}

ViscousConfig ViscousConfig::from_values(FlowConfig flow, double eta,
                                         double zeta, double r_a, double r_b,
                                         double v_a, double v_b,
                                         BvpOptions opts) {
  const double mu = derived_mu(eta, zeta, flow.intensity);
  ViscousConfig cfg{std::move(flow), eta, zeta, mu, r_a, r_b, v_a, v_b, opts};
  validate_config(cfg);
  return cfg;
}

double ns_residual(const ViscousConfig& cfg, double r, double v, double vp,
                   double vpp) {
  if (!(r > 0.0)) throw std::domain_error("radius must be > 0");
  cfg.flow.model.require_domain(v);
  return residual_at(cfg, cfg.mu, r, v, vp, vpp);
}

BvpSolution solve_bvp(const ViscousConfig& cfg) {
  validate_config(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.opts.nodes);
  std::vector<double> mesh = linear_grid(cfg.r_a, cfg.r_b, n);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (mesh[k] - cfg.r_a) / (cfg.r_b - cfg.r_a);
    v[k] = cfg.v_a + t * (cfg.v_b - cfg.v_a);
  }
  v.front() = cfg.v_a;
  v.back() = cfg.v_b;

  int total_iters = 0;
  int stages = 0;
  NewtonResult last = newton_solve(cfg, cfg.mu, mesh, v);
  total_iters += last.iters;

  if (!last.converged) {
    // continuation: restart from a heavily smoothed problem and halve mu
    double mu_start = std::max(cfg.mu, 0.5 * (cfg.r_b - cfg.r_a));
    std::vector<double> mus;
    for (double mu = mu_start; mu > cfg.mu && static_cast<int>(mus.size()) <
                                                  cfg.opts.max_continuation;
         mu *= 0.5)
      mus.push_back(mu);
    mus.push_back(cfg.mu);

    for (std::size_t k = 0; k < n; ++k) {
      const double t = (mesh[k] - cfg.r_a) / (cfg.r_b - cfg.r_a);
      v[k] = cfg.v_a + t * (cfg.v_b - cfg.v_a);
    }
    for (double mu : mus) {
      last = newton_solve(cfg, mu, mesh, v);
      total_iters += last.iters;
      ++stages;
      if (!last.converged)
        throw BvpConvergenceError(
            "Newton stalled during mu-continuation at mu = " +
                std::to_string(mu),
            v, last.residual_norm);
    }
  }

  if (cfg.opts.adapt_mesh) {
    const auto new_mesh = graded_mesh(mesh, v);
    std::vector<double> new_v(n);
    for (std::size_t k = 0; k < n; ++k) new_v[k] = interp(mesh, v, new_mesh[k]);
    new_v.front() = cfg.v_a;
    new_v.back() = cfg.v_b;
    const NewtonResult refined = newton_solve(cfg, cfg.mu, new_mesh, new_v);
    total_iters += refined.iters;
    if (refined.converged) {
      mesh = new_mesh;
      v = new_v;
      last = refined;
    }
  }

  BvpSolution sol;
  sol.mesh = mesh;
  sol.v = v;
  sol.residual_norm = last.residual_norm;
  sol.newton_iters = total_iters;
  sol.continuation_stages = stages;
  sol.profile.branch = "viscous";
  sol.profile.gas = cfg.flow.model.kind();
  sol.profile.intensity = cfg.flow.intensity;
  sol.profile.C0 = cfg.flow.C0;
  sol.profile.records.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ProfileRecord rec;
    rec.r = mesh[k];
    rec.v = v[k];
    rec.rho = 1.0 / v[k];
    rec.T = cfg.flow.model.temperature(v[k]);
    rec.p = cfg.flow.model.pressure(v[k]);
    rec.U = velocity(cfg.flow, mesh[k], v[k]);
    sol.profile.records.push_back(rec);
  }
  return sol;
}

StepInfo step_location(const DensityProfile& profile) {
  const auto& recs = profile.records;
  if (recs.size() < 5) throw NoStepError("profile too short");
  const std::size_t ni = recs.size() - 1;  // intervals
  std::vector<double> x(ni), d(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    x[i] = 0.5 * (recs[i].r + recs[i + 1].r);
    d[i] = (recs[i + 1].v - recs[i].v) / (recs[i + 1].r - recs[i].r);
  }
  std::size_t imax = 0;
  for (std::size_t i = 1; i < ni; ++i)
    if (std::fabs(d[i]) > std::fabs(d[imax])) imax = i;
  const double max_slope = std::fabs(d[imax]);

  // 10%-90% transition width between the endpoint plateaus
  const double va = recs.front().v;
  const double vb = recs.back().v;
  const double lo_level = va + 0.1 * (vb - va);
  const double hi_level = va + 0.9 * (vb - va);
  auto crossing = [&](double level) {
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      const double y0 = recs[i].v, y1 = recs[i + 1].v;
      if ((y0 - level) * (y1 - level) <= 0.0 && y0 != y1) {
        const double t = (level - y0) / (y1 - y0);
        return recs[i].r + t * (recs[i + 1].r - recs[i].r);
      }
    }
    return recs.back().r;
  };
  const double c_lo = crossing(lo_level);
  const double c_hi = crossing(hi_level);
  const double width = std::fabs(c_hi - c_lo);
  const double span = recs.back().r - recs.front().r;
  if (!(width <= 0.25 * span))
    throw NoStepError(
        "no transition layer: 10-90 width exceeds a quarter of the domain");

  // Boundary-region slope, measured on the edge intervals that sit outside
  // the (padded) transition zone; a layer attached to one boundary must not
  // mask itself.
  const double zone_lo = std::min(c_lo, c_hi) - width;
  const double zone_hi = std::max(c_lo, c_hi) + width;
  const std::size_t edge = std::max<std::size_t>(2, ni / 10);
  double boundary_slope = 0.0;
  for (std::size_t i = 0; i < edge; ++i) {
    for (std::size_t j : {i, ni - 1 - i}) {
      if (x[j] >= zone_lo && x[j] <= zone_hi) continue;
      boundary_slope = std::max(boundary_slope, std::fabs(d[j]));
    }
  }
  if (max_slope < 3.0 * boundary_slope)
    throw NoStepError("no transition layer: interior slope within 3x of the "
                      "boundary slope");

  // quadratic refinement of the discrete-derivative peak
  double r_step = x[imax];
  if (imax > 0 && imax + 1 < ni) {
    const double ym = std::fabs(d[imax - 1]);
    const double y0 = std::fabs(d[imax]);
    const double yp = std::fabs(d[imax + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double offset = 0.5 * (ym - yp) / denom;
      const double h = 0.5 * (x[imax + 1] - x[imax - 1]);
      if (std::fabs(offset) <= 1.0) r_step = x[imax] + offset * h;
    }
  }

  StepInfo info;
  info.r_step = r_step;
  info.width = width;
  info.max_slope = max_slope;
  return info;
}

}  // namespace gasflow
