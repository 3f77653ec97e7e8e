#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasflow/isentrope.hpp"

namespace gasflow {

// Inviscid flow from a point source. The solution is the implicit relation
//   F(r, v) = v^2 / (2 r^4) + f(v) / I^2 - C0 = 0,
// where I = J / (4 pi) is the source intensity and C0 is fixed by the
// conditions at infinity.
struct FlowConfig {
  IsentropeModel model;
  double intensity;                // I > 0
  double C0;
  std::optional<double> rho_inf;   // set when calibration came from rho at infinity

  static FlowConfig with_c0(IsentropeModel model, double intensity, double C0);
  static FlowConfig with_rho_inf(IsentropeModel model, double intensity,
                                 double rho_inf);
  // Calibration from a reference point on the profile:
  // C0 = 1/(2 rho_ref^2 r_ref^4) + f(1/rho_ref)/I^2.
  static FlowConfig with_reference(IsentropeModel model, double intensity,
                                   double r_ref, double rho_ref);
};

// C0 from the boundary density rho_inf > 0. For ideal gas this is the closed
// form R c (n+2) rho^{2/n} / (2 I^2); for vdw the equivalent relation
// 3 C0 rho I^2 / 2 = 2c (3/rho - 1)^{-(1+2/n)} (3n+6 - n rho) - 9 rho^2.
// Both coincide with C0 = f(1/rho_inf) / I^2 in this module's f-convention.
double calibrate(const IsentropeModel& model, double intensity, double rho_inf);

double euler_residual(const FlowConfig& cfg, double r, double v);

// All roots of F(r, .) in the model domain, ascending in v. Empty when r is
// below the existence radius.
std::vector<double> solve_branches(const FlowConfig& cfg, double r);

struct ExistenceRadius {
  bool bounded;   // false: roots exist for every r > 0
  double r_min;   // meaningful only when bounded
};

ExistenceRadius existence_radius(const FlowConfig& cfg);

// Branch selection at the first grid point, by density.
// Higher = densest root (smallest v), Lower = most dilute root (largest v).
enum class BranchSel { Lower, Higher };

struct ProfileRecord {
  double r;
  double v;
  double rho;
  double T;
  double p;
  double U;
  std::optional<double> phase;  // 0 gas, 0.5 intermediate, 1 liquid
};

struct DensityProfile {
  std::string branch;
  GasKind gas;
  double intensity;
  double C0;
  std::vector<ProfileRecord> records;
};

class BranchLossError : public std::runtime_error {
 public:
  BranchLossError(double r_fold, const std::string& what)
      : std::runtime_error(what), r_fold(r_fold) {}
  double r_fold;
};

// Nearest-root continuation along r_grid, seeded by `sel` at the first point.
// Halves the r-step near folds; throws BranchLossError when the tracked root
// disappears.
DensityProfile density_profile(const FlowConfig& cfg,
                               std::span<const double> r_grid, BranchSel sel);

// U(r) = I v / r^3; the velocity field is u = U(r) * x.
double velocity(const FlowConfig& cfg, double r, double v);

// J = 4 pi r^3 U(r) / v = 4 pi I, identically.
double mass_flux(const FlowConfig& cfg, double r, double v);

// Far-field density. Vacuum regime (no rho_inf): 1/(sqrt(2 C0) r^2).
// Dense regime (rho_inf set): rho0 + beta1 / r^4 at order 1.
double asymptotic_density(const FlowConfig& cfg, double r, int order);

// beta1 = I^2 / (2 f'(1/rho_inf)), from implicit differentiation of F = 0.
double dense_beta1(const FlowConfig& cfg);

}  // namespace gasflow
