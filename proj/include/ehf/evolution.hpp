#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehf/coupling.hpp"
#include "ehf/energy.hpp"
#include "ehf/foliation.hpp"

namespace ehf {

enum class Boundary {
  Sommerfeld,         // (r u)_t + (r u)_r = 0 along the outgoing characteristic
  Reflecting,         // d_r u = 0 via an even ghost node
  Dirichlet,          // exact values from the configured solution
  NeumannFirstOrder,  // exact d_r u imposed by a one-sided first-order difference
};

enum class Profile {
  Zero,
  Gaussian,        // u = A (e^{-(r-rc)^2/w^2} + e^{-(r+rc)^2/w^2}), u_t = 0
  WaveTail,        // exact free wave log1p(4tr/D)/(4r), D = a^2 + (t-r)^2, scaled by A
  KgPointSource,   // u = 0, u_t = A e^{-r^2/w^2}
};

std::string_view to_string(Boundary b) noexcept;
std::string_view to_string(Profile p) noexcept;
std::optional<Boundary> parse_boundary(std::string_view text) noexcept;
std::optional<Profile> parse_profile(std::string_view text) noexcept;

/// {u, u_t, u_r} of the exact free wave used by Profile::WaveTail (unit amplitude).
std::array<double, 3> wave_tail(double t, double r, double a);

struct InitialData {
  Profile profile = Profile::Zero;
  double amplitude = 0.0;
  double width = 1.0;
  double centre = 0.0;
  double tail_a = 0.5;
};

/// Closed-form solution with the derivatives the scheme and its checks need.
struct ExactSolution {
  std::function<double(double t, double r)> u;
  std::function<double(double t, double r)> u_t;
  std::function<double(double t, double r)> u_r;
  std::function<double(double t, double r)> u_tt;
  std::function<double(double t, double r)> u_rr;
};

struct FieldConfig {
  double mass = 0.0;
  Coupling coupling;
  InitialData data;
};

struct EvolutionConfig {
  double r_max = 40.0;
  std::size_t n_r = 2000;  // spatial intervals; nodes r_j = j r_max / n_r, j = 0..n_r
  double t_start = 1.0;
  double t_end = 10.0;
  double cfl = 0.5;
  std::size_t stride = 1;
  Boundary boundary = Boundary::Sommerfeld;
  FieldConfig u;
  std::optional<FieldConfig> v;
  /// Manufactured solution for u: supplies initial data, boundary values for
  /// Dirichlet and Neumann treatments, and the forcing that makes it exact.
  std::optional<ExactSolution> exact;

  /// Throws ValidationError for inconsistent or unstable settings.
  void validate() const;
  double dr() const noexcept { return r_max / static_cast<double>(n_r); }
  std::size_t steps() const;
  double dt() const;
};

enum class Unknown { U = 0, V = 1 };

struct RadialSample {
  double u = 0.0;
  double u_t = 0.0;
  double u_r = 0.0;
};

/// Stored time levels of a run. Immutable after evolve_radial returns.
class SpacetimeGrid {
 public:
  double dr = 0.0;
  double dt = 0.0;
  double t_start = 0.0;
  double r_max = 0.0;
  Boundary boundary = Boundary::Sommerfeld;
  bool has_v = false;
  std::vector<double> times;
  std::array<std::vector<std::vector<double>>, 2> values;       // [unknown][level][node]
  std::array<std::vector<std::vector<double>>, 2> derivatives;  // time derivatives, same layout

  std::size_t nodes() const noexcept { return values[0].empty() ? 0 : values[0].front().size(); }
  double t_last() const noexcept { return times.empty() ? t_start : times.back(); }

  /// Four-point Lagrange interpolation in t and r of u, u_t and u_r.
  RadialSample sample(Unknown which, double t, double r) const;

  /// True when (t, r) is free of boundary influence: r + (t - t_start) <= r_max.
  bool in_domain_of_dependence(double t, double r) const noexcept;
};

/// Leapfrog method of lines for u_tt = u_rr + (2/r) u_r - c^2 u + N + F.
///
/// The axis row uses the regular limit 3 u_rr with an even ghost node. The
/// nonlinearity sees d_t u through a second-order backward difference, and
/// the first step is a Taylor step from the data. Throws NumericalFailure on
/// non-finite values.
SpacetimeGrid evolve_radial(const EvolutionConfig& config);

/// Linear companion run for the analytic-signal amplitude of a Klein-Gordon
/// field: data (-w^{-1} u_t0, w u0) with w = sqrt(c^2 - Laplacian), no coupling.
SpacetimeGrid evolve_companion(const EvolutionConfig& config);

/// Sample one unknown on the nodes of a slice. Throws DomainError naming the
/// first node outside the computed rectangle or its domain of dependence.
FieldOnSlice sample_on_slice(const SpacetimeGrid& grid, Unknown which, const SliceSample& slice);

/// Sup over the interior of each leaf (the hyperboloid t^2 = s^2 + r^2,
/// r <= s^2/2 - 1) of |u|, or of sqrt(u^2 + w^2) when a companion grid is given.
std::vector<double> interior_sup(const SpacetimeGrid& grid, Unknown which, std::span<const double> s_list,
                                 const SpacetimeGrid* companion = nullptr, std::size_t probes = 400);

struct DecayFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  std::size_t count = 0;
  double s_min = 0.0;
  double s_max = 0.0;
};

/// Least-squares slope of log(sup) against log(s) over s in [s_min, s_max].
/// Needs at least six points in the window, all with positive sup.
DecayFit fit_decay(std::span<const double> s, std::span<const double> sup, double s_min, double s_max);

struct ConvergenceResult {
  std::vector<std::size_t> n_r;
  std::vector<double> errors;  // max-norm error at t_end
  std::vector<double> orders;  // log2 ratios of successive errors
};

/// Grid-doubling study of `config` (which must carry an exact solution) over the given n_r values.
ConvergenceResult manufactured_convergence(const EvolutionConfig& config, std::span<const std::size_t> n_r);

/// u = e^{-t} e^{-r^2}.
ExactSolution gaussian_decay_solution();

}  // namespace ehf
