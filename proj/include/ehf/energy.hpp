#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ehf/foliation.hpp"

namespace ehf {

/// Radial field sampled at the nodes of one slice.
struct FieldOnSlice {
  std::vector<double> v;
  std::vector<double> v_t;
  std::vector<double> v_r;
};

/// Radial spacetime field: returns {v, dv/dt, dv/dr} at (t, r).
using RadialField = std::function<std::array<double, 3>(double t, double r)>;

FieldOnSlice sample_field(const SliceSample& sample, const RadialField& field);

/// sqrt(1 - (d_r T)^2) on the leaf of `table`.
double zeta(double r, const TimeFunctionTable& table);

struct EnergyBreakdown {
  double total = 0.0;
  std::array<double, 3> by_region{};  // indexed by Region
};

/// Weighted energy written with the slice-tangent frame:
/// (1 + omega_eta)^2 (zeta^2 v_t^2 + sum_a (dbar_a v)^2 + c^2 v^2).
EnergyBreakdown energy_frame_form(const SliceSample& sample, const FieldOnSlice& v, double eta, double c,
                                  const TimeFunctionTable& table);

/// Same functional in Cartesian components:
/// (1 + omega_eta)^2 ((1 - a^2) v_t^2 + sum_a (a n_a v_t + d_a v)^2 + c^2 v^2), a = d_r T.
EnergyBreakdown energy_flat_form(const SliceSample& sample, const FieldOnSlice& v, double eta, double c,
                                 const TimeFunctionTable& table);

struct EnergySlice {
  double s = 0.0;
  double frame = 0.0;
  double flat = 0.0;
  std::array<double, 3> by_region{};  // frame form
  double form_gap = 0.0;              // |flat - frame|
};

struct EnergyReport {
  double eta = 0.0;
  double c = 0.0;
  std::vector<EnergySlice> slices;
};

struct EnergyOptions {
  double r_max = 40.0;
  std::size_t nodes = 2000;
  Grading grading = Grading::Geometric;
  double ode_tol = 1e-10;
};

/// Energies of `field` on the leaves s_list, one table and sample per leaf.
EnergyReport energy_series(std::span<const double> s_list, const RadialField& field, double eta, double c,
                           const EnergyOptions& options = {});

}  // namespace ehf
