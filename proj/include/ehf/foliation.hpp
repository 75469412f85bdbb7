#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ehf {

enum class Region { Interior, Transition, Exterior };

std::string_view to_string(Region region) noexcept;

/// Region of the leaf M_s containing radius r.
///
/// Interior iff r <= -1 + s^2/2, exterior iff r >= s^2/2, transition otherwise.
/// Requires s >= 2; throws DomainError below that.
Region classify_region(double s, double r);

/// Same boundaries as classify_region without the s >= 2 precondition.
Region region_of(double s, double r) noexcept;

/// Right-hand side of the leaf equation: chi(s-1) xi(s,r) r / sqrt(r^2 + s^2).
double time_function_slope(double s, double r);
/// Radial derivative of time_function_slope.
double time_function_curvature(double s, double r);

/// T(s, .) tabulated on a radial grid for one leaf.
///
/// Node values come from the ODE integration. Between nodes T is a cubic
/// Hermite interpolant built from the tabulated T and the exact slope, with a
/// Fritsch-Carlson limiter keeping it monotone. dT/dr is evaluated from the
/// closed-form right-hand side, dT/ds from a monotone cubic fit of the
/// tabulated differences.
class TimeFunctionTable {
 public:
  TimeFunctionTable(double s, double ode_tol, std::vector<double> r_nodes, std::vector<double> t_values,
                    std::vector<double> ds_values);

  double s() const noexcept { return s_; }
  double r_max() const noexcept { return r_nodes_.back(); }
  double ode_tol() const noexcept { return ode_tol_; }

  std::span<const double> r_nodes() const noexcept { return r_nodes_; }
  std::span<const double> t_values() const noexcept { return t_values_; }
  std::span<const double> dr_values() const noexcept { return dr_values_; }
  std::span<const double> ds_values() const noexcept { return ds_values_; }

  double eval_T(double r) const;
  double eval_drT(double r) const;
  double eval_dsT(double r) const;
  double eval_drrT(double r) const;

  /// Value of T beyond the transition annulus (constant in r there).
  double exterior_time() const noexcept { return t_values_.back(); }

 private:
  std::size_t locate(double r) const;
  void check_range(double r, const char* what) const;

  double s_;
  double ode_tol_;
  std::vector<double> r_nodes_;
  std::vector<double> t_values_;
  std::vector<double> dr_values_;
  std::vector<double> ds_values_;
  std::vector<double> ds_slopes_;
};

/// Integrate dT/dr = chi(s-1) xi(s,r) r / sqrt(r^2+s^2), T(s,0) = s, on [0, r_max]
/// with an adaptive Dormand-Prince pair. dT/ds is obtained by re-integrating at
/// s +/- 1e-4 s.
TimeFunctionTable build_time_function(double s, double r_max, double ode_tol = 1e-10);

/// Radial grid used for a table: spacing <= 0.05 (0.01 in the transition
/// annulus) with the region boundaries included as nodes.
std::vector<double> table_grid(double s, double r_max);

/// Integrate the leaf ODE for parameter s and report T at the given increasing radii (first must be 0).
std::vector<double> integrate_time_function(double s, std::span<const double> radii, double ode_tol);

enum class Grading { Uniform, Geometric };

struct SliceNode {
  double r = 0.0;
  double t = 0.0;
  Region region = Region::Interior;
  double weight = 0.0;  // includes the 4 pi r^2 radial measure
  std::array<double, 3> region_weight{};  // split of `weight` by region, indexed by Region
};

/// Quadrature-ready sample of a leaf M_s restricted to r in [0, r_end].
struct SliceSample {
  double s = 0.0;
  std::vector<SliceNode> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Integral of f over the sampled ball, f given per node.
  double integrate(std::span<const double> f) const;
  double integrate(std::span<const double> f, Region region) const;
};

/// Composite Simpson nodes on [0, r_end] with the 4 pi r^2 measure folded in.
///
/// Geometric grading places the region boundaries on nodes, spends about 40% of
/// the intervals in the transition annulus, and stretches the interior and
/// exterior spacing geometrically away from it. Requires n >= 16 and
/// r_end <= table.r_max().
SliceSample slice_points(const TimeFunctionTable& table, double r_end, std::size_t n,
                         Grading grading = Grading::Geometric);

/// Convenience overload that builds its own table at ode_tol = 1e-10.
SliceSample slice_points(double s, double r_max, std::size_t n, Grading grading = Grading::Geometric);

}  // namespace ehf
