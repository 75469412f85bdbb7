#pragma once

#include <cstddef>
#include <vector>

namespace ehf {

/// Smooth bump supported in (0,1): exp(-2 / (1 - (2y-1)^2)), zero elsewhere.
double rho(double y) noexcept;

/// Normalized cumulative cut-off built from `rho`.
///
/// chi(y) = rho0^{-1} * integral_{-inf}^{y} rho, so chi vanishes for y <= 0,
/// equals one for y >= 1 and increases strictly in between. Inside (0,1) the
/// integral is the nearest precomputed cumulative anchor plus an adaptive
/// Gauss-Kronrod integral over the remaining short panel; values above
/// y = 1/2 are taken from the upper tail so that chi(y) + chi(1-y) = 1 holds
/// to round-off.
class CutoffProfile {
 public:
  explicit CutoffProfile(double quadrature_tol = 1e-12);

  double rho0() const noexcept { return rho0_; }
  double quadrature_tol() const noexcept { return tol_; }

  double chi(double y) const;
  double chi_prime(double y) const noexcept;

  /// Transition function xi(s,r) = 1 - chi(r + 1 - s^2/2).
  double xi(double s, double r) const;
  /// Partial derivative of xi with respect to r.
  double xi_r(double s, double r) const noexcept;

  /// Exterior weight omega_eta(t,r) = chi(r-t) (1 + r - t)^eta.
  double weight_omega(double eta, double t, double r) const;

  /// Shared instance at the default tolerance.
  static const CutoffProfile& standard();

 private:
  double integrate_rho(double a, double b) const;
  double lower_mass(double y) const;  // integral of rho over [0, y], y <= 1/2
  static double panel_start(std::size_t k) noexcept;

  double tol_;
  double half_mass_;  // integral of rho over [0, 1/2]
  double rho0_;
  std::vector<double> anchors_;
};

inline double chi(double y) { return CutoffProfile::standard().chi(y); }
inline double chi_prime(double y) { return CutoffProfile::standard().chi_prime(y); }
inline double xi(double s, double r) { return CutoffProfile::standard().xi(s, r); }
inline double weight_omega(double eta, double t, double r) {
  return CutoffProfile::standard().weight_omega(eta, t, r);
}

}  // namespace ehf
