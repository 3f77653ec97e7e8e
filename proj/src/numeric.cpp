#include "gasflow/numeric.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace gasflow {

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (lo <= 0.0 || hi <= lo) throw std::invalid_argument("bad log grid bounds");
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(n);
  const double llo = std::log(lo);
  const double h = (std::log(hi) - llo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(llo + h * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double bisect(const std::function<double(double)>& fn, double a, double b,
              double xtol, int max_iter) {
  double fa = fn(a);
  double fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < max_iter; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    if (fm == 0.0 || (b - a) < xtol * (1.0 + std::fabs(m))) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

double newton(const std::function<double(double)>& fn,
              const std::function<double(double)>& dfn, double x0, double lo,
              double hi, double ftol, int max_iter) {
  double x = x0;
  double fx = fn(x);
  double a = lo, b = hi;
  for (int i = 0; i < max_iter; ++i) {
    if (std::fabs(fx) <= ftol) return x;
    const double d = dfn(x);
    double xn = (d != 0.0) ? x - fx / d : 0.5 * (a + b);
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    const double fxn = fn(xn);
    // maintain the bracket when the endpoints disagree in sign
    if (fn(a) * fxn <= 0.0)
      b = xn;
    else
      a = xn;
    x = xn;
    fx = fxn;
  }
  return x;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares: degenerate x");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::fabs(y[i]));
  }
  return least_squares(lx, ly).slope;
}

void solve_tridiagonal(std::span<double> a, std::span<double> b,
                       std::span<double> c, std::span<double> d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n || n == 0)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace gasflow
