#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gasflow {

std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Bisection on [a,b]; requires fn(a)*fn(b) <= 0.
double bisect(const std::function<double(double)>& fn, double a, double b,
              double xtol = 1e-14, int max_iter = 200);

// Newton iteration clamped to [lo,hi]; bisects against the bracket when a
// step leaves it or the derivative degenerates.
double newton(const std::function<double(double)>& fn,
              const std::function<double(double)>& dfn, double x0, double lo,
              double hi, double ftol, int max_iter = 80);

struct LinearFit {
  double slope;
  double intercept;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Least-squares slope of log|y| against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Thomas algorithm. a: sub-diagonal, b: diagonal, c: super-diagonal, d: rhs.
// Overwrites all inputs; the solution ends up in d.
void solve_tridiagonal(std::span<double> a, std::span<double> b,
                       std::span<double> c, std::span<double> d);

}  // namespace gasflow
