#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace ehf {

/// Quantities a nonlinearity may depend on.
enum class Factor { U, V, Ut, Ur, Vt, Vr };

struct CouplingInputs {
  double u = 0.0;
  double v = 0.0;
  double ut = 0.0;
  double ur = 0.0;
  double vt = 0.0;
  double vr = 0.0;

  double operator[](Factor f) const noexcept;
};

/// Sum of constant multiples of products of one or two factors, e.g.
/// "0.5*vt*vt - 2*u*v + ur". An empty string or "0" is the zero coupling.
class Coupling {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<Factor> factors;  // one or two entries
  };

  Coupling() = default;
  explicit Coupling(std::vector<Term> terms) : terms_(std::move(terms)) {}

  /// Throws ValidationError naming the offending token.
  static Coupling parse(std::string_view text);

  double operator()(const CouplingInputs& x) const noexcept;
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

std::string_view to_string(Factor f) noexcept;

}  // namespace ehf
