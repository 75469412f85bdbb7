#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "ehf/cutoffs.hpp"
#include "ehf/errors.hpp"
#include "ehf/foliation.hpp"

namespace {

using ehf::Region;

// Fixed-step RK4 oracle for the leaf ODE, independent of the adaptive integrator.
double rk4_leaf(double s, double r_end, double h = 1e-3) {
  auto f = [s](double r) { return ehf::chi(s - 1.0) * ehf::xi(s, r) * r / std::sqrt(r * r + s * s); };
  const int n = static_cast<int>(std::ceil(r_end / h));
  const double step = r_end / n;
  double t = s;
  for (int i = 0; i < n; ++i) {
    const double r = i * step;
    // The right-hand side does not depend on T, so RK4 reduces to Simpson.
    t += step / 6.0 * (f(r) + 4.0 * f(r + 0.5 * step) + f(r + step));
  }
  return t;
}

TEST(Foliation, InteriorIsHyperboloid) {
  const auto table = ehf::build_time_function(3.0, 20.0, 1e-10);
  EXPECT_NEAR(table.eval_T(2.0), std::sqrt(13.0), 1e-8);
  EXPECT_EQ(table.eval_T(0.0), 3.0);
  EXPECT_NEAR(table.eval_drT(2.0), 2.0 / std::sqrt(13.0), 1e-10);
}

TEST(Foliation, ExteriorIsFlat) {
  const auto table = ehf::build_time_function(3.0, 20.0, 1e-10);
  EXPECT_NEAR(table.eval_T(10.0), table.eval_T(20.0), 1e-9);
  EXPECT_EQ(table.eval_drT(10.0), 0.0);
  EXPECT_NEAR(table.exterior_time(), table.eval_T(4.5), 1e-12);
}

TEST(Foliation, TransitionMatchesRk4Oracle) {
  for (double s : {2.0, 3.0, 5.0}) {
    const auto table = ehf::build_time_function(s, 0.5 * s * s + 4.0, 1e-10);
    for (double r : {0.5 * s * s - 0.75, 0.5 * s * s - 0.5, 0.5 * s * s - 0.1, 0.5 * s * s + 2.0}) {
      EXPECT_NEAR(table.eval_T(r), rk4_leaf(s, r), 1e-8) << "s=" << s << " r=" << r;
    }
  }
}

TEST(Foliation, UnitLeafIsFlat) {
  const auto table = ehf::build_time_function(1.0, 10.0, 1e-10);
  for (double r : {0.0, 0.3, 2.0, 10.0}) EXPECT_EQ(table.eval_T(r), 1.0);
}

TEST(Foliation, InteriorResidualScalesWithTolerance) {
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const auto table = ehf::build_time_function(4.0, 12.0, tol);
    for (double r = 0.0; r <= 7.0; r += 0.25) {
      const double t = table.eval_T(r);
      EXPECT_LE(std::abs(t - std::sqrt(16.0 + r * r)), 10.0 * tol * (1.0 + t)) << tol << " " << r;
    }
  }
}

TEST(Foliation, SlopeBoundsAndSpacelike) {
  for (double s : {1.5, 2.0, 3.0, 4.0}) {
    const auto table = ehf::build_time_function(s, 0.5 * s * s + 5.0, 1e-10);
    for (double r = 0.0; r <= table.r_max(); r += 0.037) {
      const double a = table.eval_drT(r);
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, r / std::sqrt(r * r + s * s) + 1e-14);
      EXPECT_LT(a, 1.0);
    }
  }
}

TEST(Foliation, LeavesIncreaseWithS) {
  std::vector<ehf::TimeFunctionTable> tables;
  for (double s = 1.0; s <= 5.0; s += 0.5) tables.push_back(ehf::build_time_function(s, 20.0, 1e-10));
  for (std::size_t k = 1; k < tables.size(); ++k) {
    for (double r = 0.0; r <= 20.0; r += 0.1) {
      EXPECT_GT(tables[k].eval_T(r), tables[k - 1].eval_T(r)) << tables[k].s() << " " << r;
    }
  }
}

TEST(Foliation, DsMatchesHyperboloidInInterior) {
  const auto table = ehf::build_time_function(3.0, 20.0, 1e-10);
  EXPECT_NEAR(table.eval_dsT(2.0), 3.0 / std::sqrt(13.0), 1e-6);
  EXPECT_NEAR(table.eval_dsT(0.0), 1.0, 1e-6);
}

TEST(Foliation, CurvatureMatchesDifferencedSlope) {
  const auto table = ehf::build_time_function(3.0, 20.0, 1e-10);
  const double h = 1e-5;
  for (double r : {1.0, 3.7, 4.0, 4.3}) {
    const double fd = (table.eval_drT(r + h) - table.eval_drT(r - h)) / (2.0 * h);
    EXPECT_NEAR(table.eval_drrT(r), fd, 1e-6) << r;
  }
}

TEST(Foliation, OutOfRangeThrows) {
  const auto table = ehf::build_time_function(3.0, 20.0, 1e-10);
  EXPECT_THROW(table.eval_T(21.0), ehf::DomainError);
  EXPECT_THROW(table.eval_T(-0.1), ehf::DomainError);
  EXPECT_THROW(ehf::build_time_function(0.5, 10.0), ehf::DomainError);
}

TEST(Foliation, BuildTimeUnderOneSecond) {
  for (double s : {2.0, 5.0}) {
    const auto start = std::chrono::steady_clock::now();
    const auto table = ehf::build_time_function(s, 50.0, 1e-10);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 1.0) << s;
    EXPECT_GT(table.r_max(), 49.9);
  }
}

TEST(Regions, Classification) {
  EXPECT_EQ(ehf::classify_region(3.0, 3.5), Region::Interior);
  EXPECT_EQ(ehf::classify_region(3.0, 3.6), Region::Transition);
  EXPECT_EQ(ehf::classify_region(3.0, 4.5), Region::Exterior);
  EXPECT_EQ(ehf::classify_region(3.0, 0.0), Region::Interior);
  EXPECT_THROW(ehf::classify_region(1.5, 0.0), ehf::DomainError);
  EXPECT_EQ(ehf::to_string(Region::Transition), "transition");
}

TEST(SlicePoints, BallVolume) {
  const auto sample = ehf::slice_points(3.0, 2.0, 64);
  std::vector<double> ones(sample.size(), 1.0);
  EXPECT_NEAR(sample.integrate(ones), 32.0 * std::numbers::pi / 3.0, 1e-6);
}

TEST(SlicePoints, GaussianIntegral) {
  const auto sample = ehf::slice_points(3.0, 8.0, 800);
  std::vector<double> f;
  for (const auto& n : sample.nodes) f.push_back(std::exp(-n.r * n.r));
  EXPECT_NEAR(sample.integrate(f), std::pow(std::numbers::pi, 1.5), 1e-6);
}

TEST(SlicePoints, ConvergenceUnderRefinement) {
  auto err = [](std::size_t n) {
    const auto sample = ehf::slice_points(3.0, 8.0, n, ehf::Grading::Uniform);
    std::vector<double> f;
    for (const auto& node : sample.nodes) f.push_back(std::exp(-node.r * node.r) * std::cos(node.r));
    // int_0^inf r^2 e^{-r^2} cos r dr = sqrt(pi) e^{-1/4} / 8
    const double exact = 4.0 * std::numbers::pi * std::sqrt(std::numbers::pi) * std::exp(-0.25) / 8.0;
    return std::abs(sample.integrate(f) - exact);
  };
  const double e1 = err(32);
  const double e2 = err(64);
  EXPECT_GT(e1 / e2, 3.5);
}

TEST(SlicePoints, NodesLieOnLeafAndRegionsAdd) {
  const auto table = ehf::build_time_function(3.0, 20.0, 1e-10);
  const auto sample = ehf::slice_points(table, 20.0, 200);
  std::vector<double> f;
  for (const auto& n : sample.nodes) {
    EXPECT_NEAR(n.t, table.eval_T(n.r), 1e-14);
    f.push_back(std::exp(-0.1 * n.r));
  }
  double parts = 0.0;
  for (Region g : {Region::Interior, Region::Transition, Region::Exterior}) parts += sample.integrate(f, g);
  EXPECT_NEAR(parts, sample.integrate(f), 1e-12 * sample.integrate(f));
}

TEST(SlicePoints, RejectsTooFewNodes) {
  EXPECT_THROW(ehf::slice_points(3.0, 8.0, 8), ehf::DomainError);
}

}  // namespace
