#pragma once

#include <array>
#include <span>
#include <vector>

namespace ehf {

/// Truncated Taylor expansion of a scalar in the four spacetime displacements
/// (dt, dx1, dx2, dx3) about a base point.
///
/// Arithmetic truncates at the smaller order of the operands. `derivative`
/// lowers the order by one, which is what makes exact commutators of vector
/// fields possible: the commutator of two fields known to order k+1 is known
/// exactly to order k.
class Jet {
 public:
  static constexpr int kVariables = 4;
  static constexpr int kMaxOrder = 6;
  using Exponents = std::array<int, kVariables>;

  explicit Jet(int order = 0, double value = 0.0);

  /// Coordinate function x^index expanded about base value `value`.
  static Jet variable(int order, int index, double value);

  int order() const noexcept { return order_; }
  double value() const noexcept { return coeffs_[0]; }
  double coefficient(const Exponents& e) const;
  /// First partial derivative at the base point.
  double partial(int index) const;

  Jet derivative(int index) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double k);
  Jet& operator+=(double k);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double k) { return a *= k; }
  friend Jet operator*(double k, Jet a) { return a *= k; }
  friend Jet operator+(Jet a, double k) { return a += k; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  int order_;
  std::vector<double> coeffs_;
};

/// g(u) for a univariate g, given g(u0), g'(u0), ..., at u0 = u.value().
/// The result order is min(u.order(), derivatives.size() - 1).
Jet compose(const Jet& u, std::span<const double> derivatives);

Jet sqrt(const Jet& u);
Jet reciprocal(const Jet& u);

}  // namespace ehf
