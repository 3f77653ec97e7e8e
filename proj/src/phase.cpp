#include "gasflow/phase.hpp"

#include <cmath>
#include <stdexcept>

#include "gasflow/numeric.hpp"

namespace gasflow {

double phase_value(Phase p) {
  switch (p) {
    case Phase::Gas:
      return 0.0;
    case Phase::Intermediate:
      return 0.5;
    case Phase::Liquid:
      return 1.0;
  }
  throw std::logic_error("unreachable");
}

std::optional<std::pair<double, double>> spinodal(double T) {
  if (!(T > 0.0)) throw std::domain_error("temperature must be > 0");
  if (T >= 1.0) return std::nullopt;
  // dp/dv|_T = 0  <=>  h(v) = (3v-1)^2 - 4 T v^3 = 0.
  // h < 0 at the pole, h(1) = 4(1-T) > 0, h -> -inf at large v, so exactly
  // one root on each side of v = 1.
  auto h = [T](double v) {
    const double d = 3.0 * v - 1.0;
    return d * d - 4.0 * T * v * v * v;
  };
  const double v_left = bisect(h, 1.0 / 3.0 + kVdwPoleGuard, 1.0, 1e-14);
  double hi = 2.0;
  while (h(hi) > 0.0) hi *= 2.0;  // T < 1 guarantees termination
  const double v_right = bisect(h, 1.0, hi, 1e-14);
  return std::make_pair(v_left, v_right);
}

Phase classify(const IsentropeModel& model, double v) {
  if (model.kind() != GasKind::VdwReduced)
    throw std::invalid_argument("phases are defined only for vdw models");
  model.require_domain(v);
  const double T = model.temperature(v);
  if (T >= 1.0) return Phase::Gas;
  const auto sp = spinodal(T);
  if (v < sp->first) return Phase::Liquid;
  if (v > sp->second) return Phase::Gas;
  return Phase::Intermediate;
}

DensityProfile phase_profile(const FlowConfig& cfg, DensityProfile profile) {
  if (cfg.model.kind() != GasKind::VdwReduced)
    throw std::invalid_argument("phases are defined only for vdw models");
  for (auto& rec : profile.records)
    rec.phase = phase_value(classify(cfg.model, rec.v));
  return profile;
}

}  // namespace gasflow
