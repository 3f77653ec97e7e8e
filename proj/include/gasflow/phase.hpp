#pragma once

#include <optional>
#include <utility>

#include "gasflow/euler.hpp"

namespace gasflow {

enum class Phase { Gas, Intermediate, Liquid };

// CSV / figure encoding: gas 0, intermediate 0.5, liquid 1.
double phase_value(Phase p);

// Spinodal points of the reduced vdW isotherm: the two roots of
// dp/dv|_T = -24 T/(3v-1)^2 + 6/v^3 = 0, straddling v = 1.
// No real pair exists on or above the critical isotherm (T >= 1).
std::optional<std::pair<double, double>> spinodal(double T);

// Phase of a point on a vdw isentrope. With T = T(v): supercritical
// temperatures are gas; otherwise the spinodal interval [v_l, v_r] at that
// temperature is the intermediate (condensation) band, v < v_l is liquid,
// v > v_r is gas. Boundary points count as intermediate.
//
// The band is delimited by the spinodal stability boundary, not by Maxwell
// coexistence; that is this module's reading of the figures, see README.
Phase classify(const IsentropeModel& model, double v);

// Attaches a phase label to every record. Throws std::invalid_argument for
// ideal-gas configs (phases are defined only for vdw).
DensityProfile phase_profile(const FlowConfig& cfg, DensityProfile profile);

}  // namespace gasflow
