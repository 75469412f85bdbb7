#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ehf/coupling.hpp"
#include "ehf/errors.hpp"
#include "ehf/evolution.hpp"
#include "ehf/foliation.hpp"
#include "ehf/spectral.hpp"

namespace {

using ehf::Boundary;
using ehf::EvolutionConfig;
using ehf::Profile;
using ehf::Unknown;

EvolutionConfig wave_config(std::size_t n_r, double r_max = 20.0, double t_end = 5.0) {
  EvolutionConfig c;
  c.r_max = r_max;
  c.n_r = n_r;
  c.t_start = 1.0;
  c.t_end = t_end;
  c.u.data = {Profile::WaveTail, 1.0, 1.0, 0.0, 0.5};
  return c;
}

EvolutionConfig gaussian_config(std::size_t n_r, Boundary b, double t_end) {
  EvolutionConfig c;
  c.r_max = 20.0;
  c.n_r = n_r;
  c.t_end = t_end;
  c.boundary = b;
  c.u.data = {Profile::Gaussian, 1.0, 1.0, 5.0, 0.5};
  return c;
}

TEST(WaveTail, SolvesRadialWaveEquation) {
  const double h = 1e-4;
  for (double t : {1.0, 2.5, 6.0}) {
    for (double r : {0.3, 1.0, 4.0, 9.0}) {
      auto u = [](double tt, double rr) { return ehf::wave_tail(tt, rr, 0.5)[0]; };
      const double utt = (u(t + h, r) - 2 * u(t, r) + u(t - h, r)) / (h * h);
      const double urr = (u(t, r + h) - 2 * u(t, r) + u(t, r - h)) / (h * h);
      const double ur = (u(t, r + h) - u(t, r - h)) / (2 * h);
      EXPECT_NEAR(utt - urr - 2.0 * ur / r, 0.0, 1e-5) << t << " " << r;
      const auto j = ehf::wave_tail(t, r, 0.5);
      EXPECT_NEAR(j[1], (u(t + h, r) - u(t - h, r)) / (2 * h), 1e-7);
      EXPECT_NEAR(j[2], ur, 1e-7);
    }
  }
}

TEST(Evolution, MatchesClosedFormWaveAtSecondOrder) {
  std::vector<double> errors;
  for (std::size_t n : {400u, 800u, 1600u}) {
    EvolutionConfig c = wave_config(n);
    c.stride = c.steps();
    const auto grid = ehf::evolve_radial(c);
    const auto& u = grid.values[0].back();
    const double t = grid.times.back();
    double err = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double r = grid.dr * static_cast<double>(j);
      if (!grid.in_domain_of_dependence(t, r)) break;
      err = std::max(err, std::abs(u[j] - ehf::wave_tail(t, r, 0.5)[0]));
    }
    errors.push_back(err);
  }
  EXPECT_LT(errors.back(), 1e-4);
  for (std::size_t i = 1; i < errors.size(); ++i) EXPECT_GT(std::log2(errors[i - 1] / errors[i]), 1.8);
}

TEST(Evolution, ManufacturedSolutionConvergesAtSecondOrder) {
  EvolutionConfig c;
  c.r_max = 2.0;
  c.t_start = 1.0;
  c.t_end = 2.0;
  c.boundary = Boundary::Dirichlet;
  c.exact = ehf::gaussian_decay_solution();
  const std::vector<std::size_t> ns{50, 100, 200, 400};
  const auto result = ehf::manufactured_convergence(c, ns);
  ASSERT_EQ(result.orders.size(), 3u);
  for (double o : result.orders) EXPECT_GE(o, 1.9);
}

TEST(Evolution, FirstOrderBoundaryIsCaughtByConvergenceCheck) {
  EvolutionConfig c;
  c.r_max = 2.0;
  c.t_start = 1.0;
  c.t_end = 2.0;
  c.boundary = Boundary::NeumannFirstOrder;
  c.exact = ehf::gaussian_decay_solution();
  const std::vector<std::size_t> ns{50, 100, 200, 400};
  const auto result = ehf::manufactured_convergence(c, ns);
  EXPECT_LT(result.orders.back(), 1.5);
}

TEST(Evolution, ZeroDataStaysZeroUnderCoupling) {
  EvolutionConfig c;
  c.r_max = 10.0;
  c.n_r = 200;
  c.t_end = 6.0;
  c.u.coupling = ehf::Coupling::parse("u*u + vt*vt - ur*vr");
  ehf::FieldConfig v;
  v.mass = 1.0;
  v.coupling = ehf::Coupling::parse("u*v");
  c.v = v;
  const auto grid = ehf::evolve_radial(c);
  for (int k = 0; k < 2; ++k) {
    for (const auto& level : grid.values[static_cast<std::size_t>(k)]) {
      for (double x : level) ASSERT_EQ(x, 0.0);
    }
  }
}

TEST(Evolution, ReflectingBoundaryConservesEnergy) {
  auto drift = [](std::size_t n) {
    EvolutionConfig c = gaussian_config(n, Boundary::Reflecting, 40.0);
    c.u.mass = 0.5;
    c.stride = 10;
    const auto grid = ehf::evolve_radial(c);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t l = 0; l < grid.times.size(); ++l) {
      const auto& u = grid.values[0][l];
      const auto& ut = grid.derivatives[0][l];
      double e = 0.0;
      // Energy of the staggered scheme: kinetic and mass at nodes, gradient on midpoints.
      for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        const double rm = grid.dr * (static_cast<double>(j) + 0.5);
        const double ur = (u[j + 1] - u[j]) / grid.dr;
        e += 4.0 * std::numbers::pi * rm * rm * ur * ur * grid.dr;
      }
      for (std::size_t j = 0; j < u.size(); ++j) {
        const double r = grid.dr * static_cast<double>(j);
        const double w = (j == 0 || j + 1 == u.size()) ? 0.5 : 1.0;
        e += 4.0 * std::numbers::pi * r * r * w * grid.dr * (ut[j] * ut[j] + 0.25 * u[j] * u[j]);
      }
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    return (hi - lo) / lo;
  };
  const double coarse = drift(400);
  const double fine = drift(800);
  EXPECT_LT(coarse, 1e-2);
  EXPECT_LT(fine, 0.5 * coarse);
}

TEST(Evolution, Deterministic) {
  EvolutionConfig c = gaussian_config(400, Boundary::Sommerfeld, 8.0);
  c.u.coupling = ehf::Coupling::parse("0.1*u*ut");
  c.stride = 7;
  const auto a = ehf::evolve_radial(c);
  const auto b = ehf::evolve_radial(c);
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.values[0], b.values[0]);
  EXPECT_EQ(a.derivatives[0], b.derivatives[0]);
}

TEST(Evolution, AxisStaysRegular) {
  for (std::size_t n : {400u, 800u}) {
    EvolutionConfig c = gaussian_config(n, Boundary::Sommerfeld, 10.0);
    c.u.data.centre = 0.0;
    c.stride = 25;
    const auto grid = ehf::evolve_radial(c);
    const double dr = grid.dr;
    for (const auto& u : grid.values[0]) {
      const double slope = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dr);
      EXPECT_LE(std::abs(slope), 10.0 * dr * dr) << n;
    }
  }
}

TEST(Evolution, StabilityLimitEnforced) {
  EvolutionConfig c = gaussian_config(400, Boundary::Sommerfeld, 5.0);
  c.cfl = 0.81;
  EXPECT_NO_THROW(c.validate());
  c.cfl = 0.9;
  EXPECT_THROW(c.validate(), ehf::ValidationError);
  c.cfl = 0.81;
  c.u.mass = 20.0;
  EXPECT_THROW(c.validate(), ehf::ValidationError);
}

TEST(Evolution, InconsistentConfigsRejected) {
  EvolutionConfig c = gaussian_config(400, Boundary::Sommerfeld, 5.0);
  c.u.coupling = ehf::Coupling::parse("v*v");
  EXPECT_THROW(c.validate(), ehf::ValidationError);
  c = gaussian_config(400, Boundary::Dirichlet, 5.0);
  EXPECT_THROW(c.validate(), ehf::ValidationError);
  c = gaussian_config(400, Boundary::Sommerfeld, 0.5);
  EXPECT_THROW(c.validate(), ehf::ValidationError);
  c = gaussian_config(4, Boundary::Sommerfeld, 5.0);
  EXPECT_THROW(c.validate(), ehf::ValidationError);
}

TEST(Evolution, BlowUpReportedAsNumericalFailure) {
  EvolutionConfig c = gaussian_config(200, Boundary::Sommerfeld, 15.0);
  c.u.data.amplitude = 50.0;
  c.u.coupling = ehf::Coupling::parse("u*u");
  EXPECT_THROW(ehf::evolve_radial(c), ehf::NumericalFailure);
}

TEST(Sampling, UnitLeafReturnsInitialData) {
  EvolutionConfig c = wave_config(800);
  const auto grid = ehf::evolve_radial(c);
  const auto slice = ehf::slice_points(1.0, 10.0, 200);
  const auto f = ehf::sample_on_slice(grid, Unknown::U, slice);
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const auto exact = ehf::wave_tail(1.0, slice.nodes[i].r, 0.5);
    // Slice nodes fall between grid nodes, so this is the four-point interpolation error.
    EXPECT_NEAR(f.v[i], exact[0], 1e-6);
    EXPECT_NEAR(f.v_t[i], exact[1], 5e-6);
    EXPECT_NEAR(f.v_r[i], exact[2], 2e-3);  // centred difference in r, O(dr^2)
  }
}

TEST(Sampling, LeafValuesMatchClosedForm) {
  EvolutionConfig c = wave_config(1600, 20.0, 6.0);
  const auto grid = ehf::evolve_radial(c);
  const auto table = ehf::build_time_function(2.5, 8.0);
  const auto slice = ehf::slice_points(table, 8.0, 200);
  const auto f = ehf::sample_on_slice(grid, Unknown::U, slice);
  for (std::size_t i = 0; i < slice.size(); ++i) {
    const auto exact = ehf::wave_tail(slice.nodes[i].t, slice.nodes[i].r, 0.5);
    EXPECT_NEAR(f.v[i], exact[0], 1e-4);
    EXPECT_NEAR(f.v_t[i], exact[1], 1e-3);
    EXPECT_NEAR(f.v_r[i], exact[2], 1e-3);
  }
}

TEST(Sampling, EscapingLeafThrows) {
  EvolutionConfig c = wave_config(400, 20.0, 5.0);
  const auto grid = ehf::evolve_radial(c);
  const auto slice = ehf::slice_points(4.0, 15.0, 64);
  EXPECT_THROW(ehf::sample_on_slice(grid, Unknown::U, slice), ehf::DomainError);
  EXPECT_THROW(grid.sample(Unknown::V, 2.0, 1.0), ehf::DomainError);
}

TEST(DecayFit, RecoversSyntheticPowerLaw) {
  std::vector<double> s, sup;
  for (double x = 2.0; x <= 8.0; x += 0.25) {
    s.push_back(x);
    sup.push_back(3.0 * std::pow(x, -1.5));
  }
  const auto fit = ehf::fit_decay(s, sup, 2.0, 8.0);
  EXPECT_NEAR(fit.exponent, -1.5, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-12);
  EXPECT_LT(fit.stderr_, 1e-12);
  EXPECT_EQ(fit.count, s.size());
  EXPECT_THROW(ehf::fit_decay(s, sup, 2.0, 3.0), ehf::DomainError);
  sup[3] = 0.0;
  EXPECT_THROW(ehf::fit_decay(s, sup, 2.0, 8.0), ehf::DomainError);
}

TEST(Spectral, SymbolOfLaplacianAndInverse) {
  const std::size_t n = 1000;
  const double dr = 0.01;
  std::vector<double> u(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double r = dr * static_cast<double>(j);
    u[j] = std::exp(-r * r);
  }
  const auto minus_lap = ehf::apply_radial_symbol(u, dr, 0.0, 2.0);
  for (std::size_t j = 1; j < 500; ++j) {
    const double r = dr * static_cast<double>(j);
    EXPECT_NEAR(minus_lap[j], -(4.0 * r * r - 6.0) * u[j], 1e-6) << r;
  }
  const auto there = ehf::apply_radial_symbol(u, dr, 1.0, 1.0);
  const auto back = ehf::apply_radial_symbol(there, dr, 1.0, -1.0);
  for (std::size_t j = 1; j < n; ++j) EXPECT_NEAR(back[j], u[j], 1e-10);
}

TEST(Companion, TracksInverseSymbolOfVelocity) {
  EvolutionConfig c;
  c.r_max = 40.0;
  c.n_r = 2000;
  c.t_start = 0.0;
  c.t_end = 6.0;
  c.u.mass = 1.0;
  c.u.data = {Profile::KgPointSource, 1.0, 0.5, 0.0, 0.5};
  c.stride = c.steps();
  const auto grid = ehf::evolve_radial(c);
  const auto comp = ehf::evolve_companion(c);
  auto expected = ehf::apply_radial_symbol(grid.derivatives[0].back(), grid.dr, 1.0, -1.0);
  double peak = 0.0, err = 0.0;
  for (std::size_t j = 0; j < expected.size(); ++j) {
    if (!grid.in_domain_of_dependence(grid.times.back(), grid.dr * static_cast<double>(j))) break;
    peak = std::max(peak, std::abs(expected[j]));
    err = std::max(err, std::abs(comp.values[0].back()[j] + expected[j]));
  }
  EXPECT_LT(err, 1e-3 * peak);
}

TEST(Names, RoundTrip) {
  for (auto b : {Boundary::Sommerfeld, Boundary::Reflecting, Boundary::Dirichlet, Boundary::NeumannFirstOrder}) {
    EXPECT_EQ(ehf::parse_boundary(ehf::to_string(b)), b);
  }
  for (auto p : {Profile::Zero, Profile::Gaussian, Profile::WaveTail, Profile::KgPointSource}) {
    EXPECT_EQ(ehf::parse_profile(ehf::to_string(p)), p);
  }
  EXPECT_FALSE(ehf::parse_boundary("absorbing").has_value());
}

}  // namespace
