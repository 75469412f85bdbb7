#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehf/foliation.hpp"

namespace ehf {

/// Radial spacetime function with derivatives through second order at (t, r).
struct RadialJet2 {
  double u = 0.0;
  double u_t = 0.0;
  double u_r = 0.0;
  double u_tt = 0.0;
  double u_tr = 0.0;
  double u_rr = 0.0;
};

using RadialSpacetimeFn = std::function<RadialJet2(double t, double r)>;

enum class Inequality { ExteriorBar, ExteriorFlat, Interior };

std::string_view to_string(Inequality id) noexcept;

/// Sample of one ratio sup_probes LHS / RHS.
struct RatioSample {
  double ratio = 0.0;
  double lhs_sup = 0.0;
  double rhs = 0.0;
  double argmax_r = 0.0;
};

struct RatioOptions {
  std::size_t nodes = 256;     // Simpson intervals over the region
  double r_end = 0.0;          // outer end of exterior regions; required there
  double lhs_power = 1.0;      // exponent p of (1 + r)^p in the exterior LHS
  std::vector<double> probes;  // explicit probe radii; empty selects the default set
  std::uint64_t seed = 0;      // nonzero jitters the default log-spaced probes
};

/// Exterior inequality ratio on the leaf of `table`.
///
/// LHS is (1 + r)^p |u(T(s,r), r)|. RHS is the sum over |I| + |J| <= 2 of the
/// region L2 norms of the derivative combinations of u; rotations annihilate
/// radial functions so only the pure d-bar (or d) terms remain. ExteriorBar
/// covers transition plus exterior with slice-tangent derivatives,
/// ExteriorFlat covers the exterior with Cartesian derivatives.
RatioSample exterior_ratio(const RadialSpacetimeFn& u, const TimeFunctionTable& table, Inequality variant,
                           const RatioOptions& options);

/// Interior inequality ratio: t^{3/2}|u| on the hyperboloid t^2 = s^2 + r^2
/// against the boost norms sum_{|J| <= 2} ||L^J u||.
RatioSample interior_ratio(const RadialSpacetimeFn& u, double s, const RatioOptions& options);

/// One member of a test family on a given leaf.
struct FamilyMember {
  std::string param;
  RadialSpacetimeFn u;
  double reach = 0.0;  // radius beyond which u is below 1e-12 of its peak
};

/// Smooth radial test functions for one inequality and leaf, indexed by the
/// refinement level: level k exposes every member available at k.
class TestFamily {
 public:
  using Generator = std::function<std::vector<FamilyMember>(Inequality, const TimeFunctionTable&, int level)>;

  TestFamily(std::string name, Generator generator);

  const std::string& name() const noexcept { return name_; }
  std::vector<FamilyMember> members(Inequality id, const TimeFunctionTable& table, int level) const;

  /// Symmetrized Gaussian bumps A (e^{-(r-rc)^2/w^2} + e^{-(r+rc)^2/w^2}) times a
  /// time profile centred on the leaf. Exterior centres sit 4 * 2^j beyond the
  /// region start, j <= level + 1.
  static TestFamily gaussian(double amplitude = 1.0);
  static TestFamily zero();

 private:
  std::string name_;
  Generator generator_;
};

/// Closed form of one Gaussian bump.
RadialSpacetimeFn gaussian_bump(double amplitude, double centre, double width, double t_centre, double t_scale);

struct ConstantEstimate {
  Inequality inequality = Inequality::ExteriorBar;
  double s = 0.0;
  std::string family;
  std::string param;          // member label, or "sup" for the family supremum
  std::vector<int> levels;    // refinement levels present
  std::vector<double> ratios; // one per level
  bool alarm = false;

  /// Relative change between the two finest levels.
  double finest_spread() const;
};

struct SweepOptions {
  int refinements = 3;
  std::size_t base_nodes = 256;
  double lhs_power = 1.0;           // 2 in the negative-control self-test
  double growth_alarm = 0.25;       // per-level relative growth that raises the alarm
  std::uint64_t seed = 0;
  std::vector<Inequality> inequalities{Inequality::ExteriorBar, Inequality::ExteriorFlat, Inequality::Interior};
};

/// Level k uses base_nodes * 2^k quadrature intervals and the members the
/// family exposes at k. Returns one estimate per member plus one "sup" row
/// per (inequality, s), sorted by (inequality, s, param).
std::vector<ConstantEstimate> constant_sweep(const TestFamily& family, std::span<const double> s_list,
                                             const SweepOptions& options = {});

}  // namespace ehf
