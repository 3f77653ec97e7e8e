#include "gasflow/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace gasflow {

MassieuPotential::MassieuPotential(GasKind kind, double n, double R)
    : kind_(kind), n_(n), R_(R) {
  if (n <= 0.0) throw std::invalid_argument("degrees of freedom must be > 0");
  if (R <= 0.0) throw std::invalid_argument("gas constant must be > 0");
}

MassieuPotential MassieuPotential::ideal(double n, double R) {
  return MassieuPotential(GasKind::Ideal, n, R);
}

MassieuPotential MassieuPotential::vdw_reduced(double n) {
  return MassieuPotential(GasKind::VdwReduced, n, 8.0 / 3.0);
}

std::string_view MassieuPotential::label() const {
  return kind_ == GasKind::Ideal ? "ideal" : "vdw-reduced";
}

bool MassieuPotential::in_domain(double v, double T) const {
  if (!(v > 0.0) || !(T > 0.0)) return false;
  if (kind_ == GasKind::VdwReduced && !(v > 1.0 / 3.0)) return false;
  return true;
}

void MassieuPotential::require_domain(double v, double T) const {
  if (!in_domain(v, T))
    throw std::domain_error("state (v,T) outside potential domain");
}

double MassieuPotential::phi(double v, double T) const {
  require_domain(v, T);
  if (kind_ == GasKind::Ideal) return std::log(v) + 0.5 * n_ * std::log(T);
  return std::log(3.0 * v - 1.0) + 0.5 * n_ * std::log(T) +
         9.0 / (8.0 * T * v);
}

double MassieuPotential::phi_v(double v, double T) const {
  require_domain(v, T);
  if (kind_ == GasKind::Ideal) return 1.0 / v;
  return 3.0 / (3.0 * v - 1.0) - 9.0 / (8.0 * T * v * v);
}

double MassieuPotential::phi_T(double v, double T) const {
  require_domain(v, T);
  if (kind_ == GasKind::Ideal) return 0.5 * n_ / T;
  return 0.5 * n_ / T - 9.0 / (8.0 * T * T * v);
}

double MassieuPotential::phi_vv(double v, double T) const {
  require_domain(v, T);
  if (kind_ == GasKind::Ideal) return -1.0 / (v * v);
  const double d = 3.0 * v - 1.0;
  return -9.0 / (d * d) + 9.0 / (4.0 * T * v * v * v);
}

double MassieuPotential::phi_TT(double v, double T) const {
  require_domain(v, T);
  if (kind_ == GasKind::Ideal) return -0.5 * n_ / (T * T);
  return -0.5 * n_ / (T * T) + 9.0 / (4.0 * T * T * T * v);
}

double MassieuPotential::phi_vT(double v, double T) const {
  require_domain(v, T);
  if (kind_ == GasKind::Ideal) return 0.0;
  return 9.0 / (8.0 * T * T * v * v);
}

StatePoint state_from_potential(const MassieuPotential& phi, double v,
                                double T) {
  phi.require_domain(v, T);
  const double R = phi.gas_constant();
  const double pt = phi.phi_T(v, T);
  StatePoint s;
  s.v = v;
  s.T = T;
  s.sigma = R * (phi.phi(v, T) + T * pt);
  s.p = R * T * phi.phi_v(v, T);
  s.e = R * T * T * pt;
  return s;
}

bool applicability(const MassieuPotential& phi, double v, double T) {
  phi.require_domain(v, T);
  return phi.phi_vv(v, T) < 0.0 &&
         phi.phi_TT(v, T) + 2.0 / T * phi.phi_T(v, T) > 0.0;
}

double entropy_level(const MassieuPotential& phi, double v, double T) {
  phi.require_domain(v, T);
  return phi.phi(v, T) + T * phi.phi_T(v, T);
}

}  // namespace gasflow
