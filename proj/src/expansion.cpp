#include "gasflow/expansion.hpp"

#include <cmath>
#include <stdexcept>

#include "gasflow/numeric.hpp"

namespace gasflow {

double ScalingChoice::epsilon(double intensity) const {
  if (!(intensity > 0.0))
    throw std::invalid_argument("intensity must be > 0");
  return std::pow(intensity, 1.0 - alpha);
}

bool ScalingChoice::feasible() const {
  const double lhs = 3.0 * alpha - 2.0 * beta - 1.0 + A * beta;
  if (regime == Regime::SmallI) return lhs > 0.0 && 1.0 - alpha > 0.0;
  return lhs < 0.0 && 1.0 - alpha < 0.0;
}

ScalingChoice scaling_exponents(const IsentropeModel& model, Regime regime) {
  const double n = model.dof();
  const double A = -2.0 / n;
  ScalingChoice choice{regime, 0.0, 0.0, A};
  if (model.kind() == GasKind::Ideal) {
    choice.alpha = (regime == Regime::SmallI) ? 0.5 : 2.0;
    choice.beta = n * (2.0 * choice.alpha - 1.0) / (n + 1.0);
  } else if (regime == Regime::LargeI) {
    if (model.dof() != 3.0)
      throw std::invalid_argument("vdw scaling is elaborated for n = 3 only");
    choice.alpha = 2.0;
    choice.beta = 6.0;
  } else {
    // SmallI vdw: smallest feasible quarter-integer pair (alpha, beta)
    if (model.dof() != 3.0)
      throw std::invalid_argument("vdw scaling is elaborated for n = 3 only");
    bool found = false;
    for (int ia = 0; ia <= 8 && !found; ++ia) {
      for (int ib = 0; ib <= 8 && !found; ++ib) {
        choice.alpha = 0.25 * ia;
        choice.beta = 0.25 * ib;
        if (choice.feasible()) found = true;
      }
    }
    if (!found)
      throw std::runtime_error("no feasible SmallI scaling found");
  }
  if (!choice.feasible())
    throw std::logic_error("scaling choice violates its inequalities");
  return choice;
}

SeriesValue singular_series_ideal(double x, const SeriesCoefficients& cf,
                                  double eps, const IsentropeModel& model,
                                  double k) {
  if (!(x > 0.0)) throw std::domain_error("x must be > 0");
  if (cf.c1 == 0.0)
    throw std::domain_error("ideal singular series requires C1 != 0");
  if (!(k > 0.0)) throw std::invalid_argument("k = 4 eta/3 + zeta must be > 0");
  const double n = model.dof();
  const double Rc = model.gas_constant() * model.entropy_constant();
  const double w0 = cf.c1 * x * x * x + cf.c2;
  const double w0p = 3.0 * cf.c1 * x * x;
  const double w0pp = 6.0 * cf.c1 * x;

  const double q = 2.0 / n;
  // u = -(R c n / (6 C1 k)) w0^{-2/n}
  const double u = -Rc * n / (6.0 * cf.c1 * k) * std::pow(w0, -q);
  const double up = Rc / k * x * x * std::pow(w0, -(q + 1.0));
  const double upp =
      Rc / k *
      (2.0 * x * std::pow(w0, -(q + 1.0)) -
       3.0 * cf.c1 * (1.0 + q) * std::pow(x, 4) * std::pow(w0, -(q + 2.0)));
  // s = (2 x^4 C3 k - 3 C1 x^3 + 6 k x C4 - 3 C2) / (6 x k)
  const double s =
      (2.0 * std::pow(x, 4) * cf.c3 * k - 3.0 * cf.c1 * x * x * x +
       6.0 * k * x * cf.c4 - 3.0 * cf.c2) /
      (6.0 * x * k);
  const double sp = (6.0 * cf.c3 * k * x * x - 6.0 * cf.c1 * x +
                     3.0 * cf.c2 / (x * x)) /
                    (6.0 * k);
  const double spp =
      (12.0 * cf.c3 * k * x - 6.0 * cf.c1 - 6.0 * cf.c2 / (x * x * x)) /
      (6.0 * k);

  SeriesValue out;
  out.w = w0 + eps * (u + s);
  out.wp = w0p + eps * (up + sp);
  out.wpp = w0pp + eps * (upp + spp);
  return out;
}

SeriesValue singular_series_vdw3(double x, const SeriesCoefficients& cf,
                                 double eps, double k) {
  if (!(x > 0.0)) throw std::domain_error("x must be > 0");
  if (!(k > 0.0)) throw std::invalid_argument("k = 4 eta/3 + zeta must be > 0");
  const double w0 = cf.c1 * x * x * x + cf.c2;
  const double s =
      (2.0 * std::pow(x, 4) * cf.c3 * k - 3.0 * cf.c1 * x * x * x +
       6.0 * cf.c4 * k * x - 3.0 * cf.c2) /
      (6.0 * x * k);
  const double sp = (6.0 * cf.c3 * k * x * x - 6.0 * cf.c1 * x +
                     3.0 * cf.c2 / (x * x)) /
                    (6.0 * k);
  const double spp =
      (12.0 * cf.c3 * k * x - 6.0 * cf.c1 - 6.0 * cf.c2 / (x * x * x)) /
      (6.0 * k);
  SeriesValue out;
  out.w = w0 + eps * s;
  out.wp = 3.0 * cf.c1 * x * x + eps * sp;
  out.wpp = 6.0 * cf.c1 * x + eps * spp;
  return out;
}

double scaled_ode_residual(const IsentropeModel& model,
                           const ScalingChoice& scaling, double k,
                           double intensity, double x, const SeriesValue& s) {
  if (!(x > 0.0)) throw std::domain_error("x must be > 0");
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  const double a = scaling.alpha;
  const double b = scaling.beta;
  const double lhs = s.w / (x * x * x) * (x * s.wpp - 2.0 * s.wp);
  const double inertial = std::pow(intensity, 1.0 - a) *
                          (s.w * s.wp / std::pow(x, 4) -
                           2.0 * s.w * s.w / std::pow(x, 5));
  const double v = std::pow(intensity, b) * s.w;
  const double thermo = std::pow(intensity, 3.0 * a - 2.0 * b - 1.0 + b) *
                        model.f_prime(v) * s.wp;
  return lhs - (inertial + thermo) / k;
}

std::vector<double> invert_f_all(const IsentropeModel& model, double f0) {
  std::vector<double> roots;
  auto g = [&](double v) { return model.f(v) - f0; };
  const double lo =
      model.kind() == GasKind::Ideal ? 1e-9 : 1.0 / 3.0 + 1e-9;
  const auto grid = log_grid(lo, 1e9, 20000);
  double prev_v = grid.front();
  double prev_g = g(prev_v);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur_v = grid[i];
    const double cur_g = g(cur_v);
    if (prev_g == 0.0)
      roots.push_back(prev_v);
    else if (prev_g * cur_g < 0.0)
      roots.push_back(bisect(g, prev_v, cur_v, 1e-13));
    prev_v = cur_v;
    prev_g = cur_g;
  }
  return roots;
}

double invert_f(const IsentropeModel& model, double f0) {
  if (model.kind() == GasKind::Ideal) {
    const double n = model.dof();
    const double Rc = model.gas_constant() * model.entropy_constant();
    if (!(f0 > 0.0))
      throw std::range_error("f0 outside the range of f (ideal: f > 0)");
    return std::pow(2.0 * f0 / (Rc * (n + 2.0)), -0.5 * n);
  }
  const auto inv = model.invertibility();
  if (!inv.globally_invertible) {
    auto roots = invert_f_all(model, f0);
    throw NonInvertibleError("f is not invertible at this entropy level",
                             std::move(roots));
  }
  // invertible vdw: f decreases monotonically from +inf to 0+
  if (!(f0 > 0.0))
    throw std::range_error("f0 outside the range of f (vdw: f > 0)");
  auto g = [&](double v) { return model.f(v) - f0; };
  double lo = 1.0 / 3.0 + 1e-9;
  double hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  const double x0 = bisect(g, lo, hi, 1e-10);
  return newton(g, [&](double v) { return model.f_prime(v); }, x0, lo, hi,
                1e-12 * std::max(1.0, std::fabs(f0)));
}

double regular_series(const IsentropeModel& model,
                      const SeriesCoefficients& cf, double intensity, double r,
                      int order, double k) {
  if (!(r > 0.0)) throw std::domain_error("radius must be > 0");
  if (order < 0 || order > 3)
    throw std::invalid_argument("regular series order must be in [0,3]");
  const double v0 = invert_f(model, cf.f0);
  double v = v0;
  if (order >= 1) v += intensity * cf.v1;
  if (order >= 2) {
    const double fp = model.f_prime(v0);
    if (fp == 0.0) throw std::domain_error("f'(v0) = 0: series singular");
    const double r4 = std::pow(r, 4);
    const double v2 = -v0 * v0 / (2.0 * fp * r4) + cf.alpha1;
    v += intensity * intensity * v2;
    if (order >= 3) {
      const double fpp = model.f_second(v0);
      const double v3 =
          2.0 * v0 / (r4 * fp * fp) *
              (k * v0 * v0 / (r * r * r) +
               0.25 * cf.v1 * (v0 * fpp - 2.0 * fp)) +
          cf.alpha2;
      v += intensity * intensity * intensity * v3;
    }
  }
  return v;
}

OrderFit fit_order(std::span<const double> eps, std::span<const double> resid,
                   double threshold) {
  OrderFit fit;
  fit.slope = loglog_slope(eps, resid);
  fit.threshold = threshold;
  fit.pass = fit.slope >= threshold;
  return fit;
}

}  // namespace gasflow
