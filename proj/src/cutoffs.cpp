#include "ehf/cutoffs.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ehf/errors.hpp"

namespace ehf {

namespace {

constexpr double kDenominatorFloor = 1e-300;
constexpr unsigned kMaxDepth = 20;
constexpr unsigned kPanelDepth = 8;
constexpr std::size_t kPanels = 64;  // anchors on [0, 1/2]

}  // namespace

double rho(double y) noexcept {
  if (!(y > 0.0 && y < 1.0)) return 0.0;
  const double z = 2.0 * y - 1.0;
  const double denom = 1.0 - z * z;
  if (denom < kDenominatorFloor) return 0.0;
  return std::exp(-2.0 / denom);
}

CutoffProfile::CutoffProfile(double quadrature_tol) : tol_(quadrature_tol) {
  if (!(quadrature_tol > 0.0 && quadrature_tol < 1e-3)) {
    throw DomainError("CutoffProfile: quadrature_tol must lie in (0, 1e-3)");
  }
  // Cumulative mass at evenly spaced anchors, so chi only integrates one short panel.
  anchors_.assign(kPanels + 1, 0.0);
  for (std::size_t k = 0; k < kPanels; ++k) {
    anchors_[k + 1] = anchors_[k] + integrate_rho(panel_start(k), panel_start(k + 1));
  }
  half_mass_ = anchors_.back();
  rho0_ = 2.0 * half_mass_;
}

double CutoffProfile::panel_start(std::size_t k) noexcept {
  return 0.5 * static_cast<double>(k) / static_cast<double>(kPanels);
}

double CutoffProfile::lower_mass(double y) const {
  const auto k = std::min(kPanels - 1, static_cast<std::size_t>(y * 2.0 * static_cast<double>(kPanels)));
  const double a = panel_start(k);
  if (y <= a) return anchors_[k];
  auto f = [](double x) { return rho(x); };
  return anchors_[k] + boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, y, kPanelDepth, tol_);
}

double CutoffProfile::integrate_rho(double a, double b) const {
  if (b <= a) return 0.0;
  auto f = [](double y) { return rho(y); };
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, kMaxDepth, tol_);
}

double CutoffProfile::chi(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  if (y == 0.5) return 0.5;
  // rho is symmetric about 1/2, so the upper tail mirrors the lower one.
  if (y < 0.5) return lower_mass(y) / rho0_;
  return 1.0 - lower_mass(1.0 - y) / rho0_;
}

double CutoffProfile::chi_prime(double y) const noexcept { return rho(y) / rho0_; }

double CutoffProfile::xi(double s, double r) const { return 1.0 - chi(r + 1.0 - 0.5 * s * s); }

double CutoffProfile::xi_r(double s, double r) const noexcept {
  return -chi_prime(r + 1.0 - 0.5 * s * s);
}

double CutoffProfile::weight_omega(double eta, double t, double r) const {
  const double q = r - t;
  if (q <= 0.0) return 0.0;
  return chi(q) * std::pow(1.0 + q, eta);
}

const CutoffProfile& CutoffProfile::standard() {
  static const CutoffProfile profile{};
  return profile;
}

}  // namespace ehf
