#pragma once

#include <string_view>

namespace gasflow {

enum class GasKind { Ideal, VdwReduced };

// Massieu-Planck potential phi(v,T) with analytic partial derivatives.
// Entropy, pressure and energy of a state follow from phi by differentiation:
//   sigma = R(phi + T phi_T),  p = R T phi_v,  e = R T^2 phi_T.
//
// Two concrete potentials are provided:
//   ideal:        phi = ln v + (n/2) ln T,                     R user-chosen
//   vdw-reduced:  phi = ln(3v-1) + (n/2) ln T + 9/(8 T v),     R = 8/3
// The van der Waals form uses reduced coordinates, i.e. the critical point
// sits at (e,v,T,p) = (1,1,1,1). Additive entropy constants are fixed to 0.
class MassieuPotential {
 public:
  static MassieuPotential ideal(double n, double R = 1.0);
  static MassieuPotential vdw_reduced(double n);

  double phi(double v, double T) const;
  double phi_v(double v, double T) const;
  double phi_T(double v, double T) const;
  double phi_vv(double v, double T) const;
  double phi_TT(double v, double T) const;
  double phi_vT(double v, double T) const;

  double gas_constant() const { return R_; }
  double dof() const { return n_; }
  GasKind kind() const { return kind_; }
  std::string_view label() const;

  // v > 0, T > 0; for vdw-reduced additionally v > 1/3.
  bool in_domain(double v, double T) const;
  void require_domain(double v, double T) const;  // throws std::domain_error

 private:
  MassieuPotential(GasKind kind, double n, double R);

  GasKind kind_;
  double n_;
  double R_;
};

struct StatePoint {
  double e;
  double v;
  double T;
  double p;
  double sigma;
};

StatePoint state_from_potential(const MassieuPotential& phi, double v,
                                double T);

// Stability of the state: phi_vv < 0 and phi_TT + 2 phi_T / T > 0.
bool applicability(const MassieuPotential& phi, double v, double T);

// Dimensionless entropy sigma/R = phi + T phi_T.
double entropy_level(const MassieuPotential& phi, double v, double T);

}  // namespace gasflow
