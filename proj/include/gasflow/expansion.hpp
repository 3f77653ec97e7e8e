#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gasflow/isentrope.hpp"

namespace gasflow {

enum class Regime { SmallI, LargeI };

// Scaling r = I^alpha x, v = I^beta w that pushes the source intensity into
// a small factor eps = I^{1-alpha} on the right-hand side of the viscous
// equation. Feasibility (with A the growth exponent of f, A = -2/n for both
// gases):
//   SmallI:  3a - 2b - 1 + A b > 0  and  1 - a > 0
//   LargeI:  both reversed.
struct ScalingChoice {
  Regime regime;
  double alpha;
  double beta;
  double A;

  double epsilon(double intensity) const;  // I^{1-alpha}
  bool feasible() const;
};

// ideal: beta = n(2 alpha - 1)/(n+1) with alpha = 1/2 (SmallI) or 2 (LargeI).
// vdw n=3: alpha = 2, beta = 6 for LargeI; for SmallI the smallest feasible
// rational pair on a quarter-integer grid, which lands on (1/2, 0).
ScalingChoice scaling_exponents(const IsentropeModel& model, Regime regime);

// Free constants of the asymptotic series; fixed only by boundary data, so
// they are caller-supplied.
struct SeriesCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double f0 = 0.0;
  double v1 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

struct SeriesValue {
  double w;
  double wp;
  double wpp;
};

// Two-term singular series w0 + eps*w1 in scaled variables, with analytic x
// derivatives. k = 4 eta/3 + zeta.
//   w0 = C1 x^3 + C2
//   ideal: w1 = -(R c n / (6 C1 k)) w0^{-2/n}
//              + (2 x^4 C3 k - 3 C1 x^3 + 6 k x C4 - 3 C2)/(6 x k)
//   vdw(n=3): w1 = (2 x^4 C3 k - 3 C1 x^3 + 6 C4 k x - 3 C2)/(6 x k)
SeriesValue singular_series_ideal(double x, const SeriesCoefficients& coeffs,
                                  double eps, const IsentropeModel& model,
                                  double k);
SeriesValue singular_series_vdw3(double x, const SeriesCoefficients& coeffs,
                                 double eps, double k);

// Residual of the scaled viscous equation
//   (w/x^3)(x w'' - 2 w')
//     - k^{-1} [ I^{1-a} (w w'/x^4 - 2 w^2/x^5)
//              + I^{3a-2b-1+b} f'(I^b w) w' ]
// at the given point. For the truncated series this is O(eps^2).
double scaled_ode_residual(const IsentropeModel& model,
                           const ScalingChoice& scaling, double k,
                           double intensity, double x, const SeriesValue& s);

class NonInvertibleError : public std::runtime_error {
 public:
  NonInvertibleError(const std::string& what, std::vector<double> roots)
      : std::runtime_error(what), roots(std::move(roots)) {}
  std::vector<double> roots;  // all solutions of f(v) = f0
};

// v0 = f^{-1}(f0). Ideal: closed form (2 f0/(R c (n+2)))^{-n/2}. vdw:
// Newton/bisection when globally invertible; otherwise throws
// NonInvertibleError carrying every root so the caller can select.
double invert_f(const IsentropeModel& model, double f0);
std::vector<double> invert_f_all(const IsentropeModel& model, double f0);

// Regular expansion v = v0 + I v1 + I^2 v2(r) + I^3 v3(r), truncated at
// `order` (<= 3), with
//   v2 = -v0^2 / (2 f'(v0) r^4) + alpha1
//   v3 = (2 v0 / (r^4 f'(v0)^2)) (k v0^2 / r^3
//          + (v1/4)(v0 f''(v0) - 2 f'(v0))) + alpha2
// (signs verified against the ODE; see README for the derivation note).
double regular_series(const IsentropeModel& model,
                      const SeriesCoefficients& coeffs, double intensity,
                      double r, int order, double k);

struct OrderFit {
  double slope;
  double threshold;
  bool pass;
};

// log-log least-squares of |resid| against eps; pass when slope >= threshold.
OrderFit fit_order(std::span<const double> eps, std::span<const double> resid,
                   double threshold);

}  // namespace gasflow
