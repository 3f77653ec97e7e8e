#pragma once

#include <vector>

#include "gasflow/thermo.hpp"

namespace gasflow {

struct Invertibility {
  bool globally_invertible;
  std::vector<double> stationary_points;  // zeros of f'(v), empty if invertible
};

// A gas model restricted to a fixed entropy level. All thermodynamic
// quantities reduce to closed-form functions of the specific volume:
//
//   ideal:  T(v) = c v^{-2/n},        p(v) = R c v^{-(1+2/n)},
//           f(v) = R c (n/2+1) v^{-2/n},                 c = exp(2 sigma0 / n)
//   vdw:    T(v) = c (3v-1)^{-2/n},   p(v) = 8c (3v-1)^{-(1+2/n)} - 3/v^2,
//           f(v) = 8c/(3(3v-1)^{2/n+1}) + 4c(n+2)/(3(3v-1)^{2/n}) - 6/v,
//                                                     c = exp(3 sigma0 / (4n))
//
// f is the pressure work integral f(v) = int v p'(v) dv with the integration
// constant fixed to the closed forms above. sigma0 follows the per-gas
// entropy conventions the closed forms are written in (ideal: sigma/R with
// sigma = R ln(T^{n/2} v); vdw: sigma = ln(T^{4n/3}(3v-1)^{8/3})). Relative
// to the potential's entropy_level these differ by fixed affine constants:
//   entropy_level = sigma0 + n/2            (ideal)
//   entropy_level = (3/8) sigma0 + n/2      (vdw-reduced)
class IsentropeModel {
 public:
  static IsentropeModel ideal(double n, double sigma0, double R = 1.0);
  static IsentropeModel vdw(double n, double sigma0);
  // Construct directly from the entropy constant c.
  static IsentropeModel ideal_with_constant(double n, double c, double R = 1.0);
  static IsentropeModel vdw_with_constant(double n, double c);

  GasKind kind() const { return kind_; }
  double dof() const { return n_; }
  double sigma0() const { return sigma0_; }
  double entropy_constant() const { return c_; }
  double gas_constant() const { return R_; }
  MassieuPotential potential() const;

  double temperature(double v) const;
  double pressure(double v) const;
  double pressure_deriv(double v) const;  // dp/dv along the isentrope
  double f(double v) const;
  double f_prime(double v) const;   // equals v p'(v)
  double f_second(double v) const;

  // Lower end of the admissible v range (0 for ideal, 1/3 for vdw).
  double v_floor() const;
  bool in_domain(double v) const;
  void require_domain(double v) const;  // throws std::domain_error

  // Ideal gases are always globally invertible. For vdw the closed-form
  // threshold is c > (1/(4a)) (1+a)^{1+a} (2-a)^{2-a} with a = 1+2/n; below
  // it the stationary points of f are located by a sign scan plus bisection.
  Invertibility invertibility() const;
  static double vdw_invertibility_threshold(double n);

 private:
  IsentropeModel(GasKind kind, double n, double sigma0, double c, double R);

  GasKind kind_;
  double n_;
  double sigma0_;
  double c_;
  double R_;
};

// Guard against evaluating vdw forms on top of the v = 1/3 pole.
inline constexpr double kVdwPoleGuard = 1e-12;

}  // namespace gasflow
