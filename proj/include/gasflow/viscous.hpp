#pragma once

#include <stdexcept>
#include <vector>

#include "gasflow/euler.hpp"

namespace gasflow {

struct BvpOptions {
  int nodes = 801;
  double tol = 1e-10;          // Newton residual tolerance (absolute)
  int max_newton = 60;
  int max_continuation = 20;   // geometric mu-continuation stages, ratio 1/2
  bool adapt_mesh = true;      // one re-mesh pass graded toward the step
};

// Two-point problem for the viscous radial ODE
//   -(v/r^3)(r v'' - 2 v') mu + d/dr( v^2/(2 r^4) + f(v)/I^2 ) = 0,
// with mu = (zeta + 4 eta / 3) / I multiplying the highest derivative
// (singularly perturbed). Dirichlet data at both ends, by default taken from
// the Euler branches; r_b acts as a truncation radius for the condition at
// infinity (truncation error O(r_b^-4)).
struct ViscousConfig {
  FlowConfig flow;
  double eta;
  double zeta;
  double mu;
  double r_a;
  double r_b;
  double v_a;
  double v_b;
  BvpOptions opts;

  static ViscousConfig from_branches(FlowConfig flow, double eta, double zeta,
                                     double r_a, double r_b, BranchSel bc_a,
                                     BranchSel bc_b, BvpOptions opts = {});
  static ViscousConfig from_values(FlowConfig flow, double eta, double zeta,
                                   double r_a, double r_b, double v_a,
                                   double v_b, BvpOptions opts = {});
};

// Pointwise residual of the expanded equation:
// -(v/r^3)(r v'' - 2 v') mu + v v'/r^4 - 2 v^2/r^5 + f'(v) v'/I^2.
double ns_residual(const ViscousConfig& cfg, double r, double v, double vp,
                   double vpp);

struct BvpSolution {
  DensityProfile profile;
  std::vector<double> mesh;
  std::vector<double> v;
  double residual_norm;  // max interior |residual| at convergence
  int newton_iters;      // total, across continuation stages
  int continuation_stages;
};

class BvpConvergenceError : public std::runtime_error {
 public:
  BvpConvergenceError(const std::string& what, std::vector<double> iterate,
                      double residual_norm)
      : std::runtime_error(what),
        last_iterate(std::move(iterate)),
        residual_norm(residual_norm) {}
  std::vector<double> last_iterate;
  double residual_norm;
};

// Damped Newton on second-order central differences; falls back to
// mu-continuation when the plain solve stalls.
BvpSolution solve_bvp(const ViscousConfig& cfg);

class NoStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepInfo {
  double r_step;     // position of max |dv/dr|, quadratically refined
  double width;      // 10%-90% transition width between endpoint plateaus
  double max_slope;
};

// Throws NoStepError when the max interior slope is below 3x the slope seen
// in the boundary regions (no transition layer present).
StepInfo step_location(const DensityProfile& profile);

}  // namespace gasflow
