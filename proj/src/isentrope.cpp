#include "gasflow/isentrope.hpp"

#include <cmath>
#include <stdexcept>

#include "gasflow/numeric.hpp"

namespace gasflow {

IsentropeModel::IsentropeModel(GasKind kind, double n, double sigma0, double c,
                               double R)
    : kind_(kind), n_(n), sigma0_(sigma0), c_(c), R_(R) {
  if (n <= 0.0) throw std::invalid_argument("degrees of freedom must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("entropy constant must be > 0");
  if (R <= 0.0) throw std::invalid_argument("gas constant must be > 0");
}

IsentropeModel IsentropeModel::ideal(double n, double sigma0, double R) {
  return IsentropeModel(GasKind::Ideal, n, sigma0, std::exp(2.0 * sigma0 / n),
                        R);
}

IsentropeModel IsentropeModel::vdw(double n, double sigma0) {
  return IsentropeModel(GasKind::VdwReduced, n, sigma0,
                        std::exp(3.0 * sigma0 / (4.0 * n)), 8.0 / 3.0);
}

IsentropeModel IsentropeModel::ideal_with_constant(double n, double c,
                                                   double R) {
  return IsentropeModel(GasKind::Ideal, n, 0.5 * n * std::log(c), c, R);
}

IsentropeModel IsentropeModel::vdw_with_constant(double n, double c) {
  return IsentropeModel(GasKind::VdwReduced, n, 4.0 * n / 3.0 * std::log(c), c,
                        8.0 / 3.0);
}

MassieuPotential IsentropeModel::potential() const {
  return kind_ == GasKind::Ideal ? MassieuPotential::ideal(n_, R_)
                                 : MassieuPotential::vdw_reduced(n_);
}

double IsentropeModel::v_floor() const {
  return kind_ == GasKind::Ideal ? 0.0 : 1.0 / 3.0;
}

bool IsentropeModel::in_domain(double v) const {
  return v > v_floor() + (kind_ == GasKind::VdwReduced ? kVdwPoleGuard : 0.0);
}

void IsentropeModel::require_domain(double v) const {
  if (!in_domain(v))
    throw std::domain_error("specific volume outside isentrope domain");
}

double IsentropeModel::temperature(double v) const {
  require_domain(v);
  if (kind_ == GasKind::Ideal) return c_ * std::pow(v, -2.0 / n_);
  return c_ * std::pow(3.0 * v - 1.0, -2.0 / n_);
}

double IsentropeModel::pressure(double v) const {
  require_domain(v);
  if (kind_ == GasKind::Ideal)
    return R_ * c_ * std::pow(v, -(1.0 + 2.0 / n_));
  return 8.0 * c_ * std::pow(3.0 * v - 1.0, -(1.0 + 2.0 / n_)) -
         3.0 / (v * v);
}

double IsentropeModel::pressure_deriv(double v) const {
  require_domain(v);
  const double a = 1.0 + 2.0 / n_;
  if (kind_ == GasKind::Ideal) return -R_ * c_ * a * std::pow(v, -(a + 1.0));
  return -24.0 * c_ * a * std::pow(3.0 * v - 1.0, -(a + 1.0)) +
         6.0 / (v * v * v);
}

double IsentropeModel::f(double v) const {
  require_domain(v);
  if (kind_ == GasKind::Ideal)
    return R_ * c_ * (0.5 * n_ + 1.0) * std::pow(v, -2.0 / n_);
  const double d = 3.0 * v - 1.0;
  return 8.0 * c_ / (3.0 * std::pow(d, 2.0 / n_ + 1.0)) +
         4.0 * c_ * (n_ + 2.0) / (3.0 * std::pow(d, 2.0 / n_)) - 6.0 / v;
}

double IsentropeModel::f_prime(double v) const {
  require_domain(v);
  const double a = 1.0 + 2.0 / n_;
  if (kind_ == GasKind::Ideal) return -R_ * c_ * a * std::pow(v, -a);
  const double d = 3.0 * v - 1.0;
  return -8.0 * c_ * a * std::pow(d, -(a + 1.0)) -
         8.0 * c_ * (n_ + 2.0) / n_ * std::pow(d, -a) + 6.0 / (v * v);
}

double IsentropeModel::f_second(double v) const {
  require_domain(v);
  const double a = 1.0 + 2.0 / n_;
  if (kind_ == GasKind::Ideal)
    return R_ * c_ * a * a * std::pow(v, -(a + 1.0));
  const double d = 3.0 * v - 1.0;
  return 24.0 * c_ * a * (a + 1.0) * std::pow(d, -(a + 2.0)) +
         24.0 * c_ * (n_ + 2.0) / n_ * a * std::pow(d, -(a + 1.0)) -
         12.0 / (v * v * v);
}

double IsentropeModel::vdw_invertibility_threshold(double n) {
  const double a = 1.0 + 2.0 / n;
  return 1.0 / (4.0 * a) * std::pow(1.0 + a, 1.0 + a) *
         std::pow(2.0 - a, 2.0 - a);
}

Invertibility IsentropeModel::invertibility() const {
  if (kind_ == GasKind::Ideal) return {true, {}};
  if (c_ > vdw_invertibility_threshold(n_)) return {true, {}};
  // sub-threshold: locate the stationary points of f by a sign scan of f'
  Invertibility result{false, {}};
  const auto grid = log_grid(1.0 / 3.0 + 1e-9, 1e3, 10000);
  double prev_v = grid.front();
  double prev_f = f_prime(prev_v);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur_v = grid[i];
    const double cur_f = f_prime(cur_v);
    if (prev_f == 0.0) {
      result.stationary_points.push_back(prev_v);
    } else if (prev_f * cur_f < 0.0) {
      result.stationary_points.push_back(
          bisect([this](double v) { return f_prime(v); }, prev_v, cur_v,
                 1e-12));
    }
    prev_v = cur_v;
    prev_f = cur_f;
  }
  // Right at the threshold the scan may fail to resolve the (degenerate)
  // sign change; the classification still follows the closed-form test.
  return result;
}

}  // namespace gasflow
