#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ehf/jet.hpp"

namespace ehf {

class TimeFunctionTable;

/// Spacetime point (t, x1, x2, x3).
using Point = std::array<double, 4>;
using ScalarField = std::function<double(const Point&)>;
using CoefficientJets = std::array<Jet, 4>;

/// First-order differential operator X = c^alpha(t,x) d_alpha.
///
/// Coefficients are produced as Taylor jets about the evaluation point, so
/// commutators are computed exactly from the coefficient derivatives. Each
/// field advertises the highest jet order it can supply; the commutator of
/// two fields can supply one order less than the weaker of the two.
class VectorField {
 public:
  using JetFunction = std::function<CoefficientJets(const Point&, int order)>;

  VectorField(std::string label, int max_order, JetFunction jets);

  const std::string& label() const noexcept { return label_; }
  int max_order() const noexcept { return max_order_; }

  std::array<double, 4> coefficients(const Point& p) const;
  CoefficientJets jets(const Point& p, int order) const;

 private:
  std::string label_;
  int max_order_;
  JetFunction jets_;
};

enum class FieldKind {
  Translation,       // d_alpha, index alpha in 0..3
  Boost,             // L_a = x_a d_t + t d_a
  Rotation,          // Omega_ab = x_a d_b - x_b d_a
  Scaling,           // S = t d_t + r d_r
  SemiHyperboloidal, // (x_a / t) d_t + d_a
  Null,              // (x^a / r) d_t + d_a
  SliceTangent,      // d_a T d_t + d_a on a leaf t = T(s, r)
};

/// Build a field of the given family. Indices are 0..3 for translations and
/// 1..3 for the spatial families; rotations need two distinct indices.
VectorField make_field(FieldKind kind, int a = 0, int b = 0);

/// Slice-tangent field of the leaf described by `table`; defined for r <= table.r_max().
VectorField make_slice_tangent(std::shared_ptr<const TimeFunctionTable> table, int a);

/// The ten admissible fields: d_0..d_3, L_1..L_3, Omega_12, Omega_13, Omega_23.
std::vector<VectorField> admissible_fields();

VectorField commutator(const VectorField& x, const VectorField& y);

/// Default finite-difference step 1e-4 (1 + |p|).
double default_step(const Point& p) noexcept;

/// Centered derivative of u along coordinate `axis` with step h.
double partial_fd(const ScalarField& u, const Point& p, int axis, double h);

/// sum_alpha c^alpha(p) D_alpha u(p), D_alpha a centered difference of step h.
double apply_field(const VectorField& x, const ScalarField& u, const Point& p, double h);

/// ops[0] ops[1] ... ops[n-1] u evaluated at p, innermost operator applied
/// first. Level k from the inside uses step h 2^k. At most three operators.
double apply_multiindex(std::span<const VectorField> ops, const ScalarField& u, const Point& p, double h);

/// Minkowski d'Alembertian -d_t^2 + Laplacian by centered second differences.
double box_fd(const ScalarField& u, const Point& p, double h);

/// [X, Box - c^2] u at p. The inner operator of each product uses step h and
/// the outer one 2h, following the nesting rule of apply_multiindex.
double commute_with_operator_residual(const VectorField& x, double c, const ScalarField& u, const Point& p,
                                      double h);

}  // namespace ehf
