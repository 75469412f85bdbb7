#include "ehf/jet.hpp"

#include <cmath>
#include <stdexcept>

#include "ehf/errors.hpp"

namespace ehf {

namespace {

struct ProductEntry {
  int lhs;
  int rhs;
  int out;
};

struct MonomialTable {
  int order = 0;
  std::vector<Jet::Exponents> exponents;  // sorted by total degree
  std::vector<int> degree;
  std::vector<int> lookup;  // dense (order+1)^4 -> index, -1 beyond the order
  std::vector<ProductEntry> products;

  int index_of(const Jet::Exponents& e) const {
    const int base = order + 1;
    for (int v : e) {
      if (v < 0 || v > order) return -1;
    }
    return lookup[static_cast<std::size_t>(((e[0] * base + e[1]) * base + e[2]) * base + e[3])];
  }
};

MonomialTable make_table(int order) {
  MonomialTable t;
  t.order = order;
  const int base = order + 1;
  t.lookup.assign(static_cast<std::size_t>(base * base * base * base), -1);
  for (int deg = 0; deg <= order; ++deg) {
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        for (int c = 0; a + b + c <= deg; ++c) {
          const int d = deg - a - b - c;
          t.lookup[static_cast<std::size_t>(((a * base + b) * base + c) * base + d)] =
              static_cast<int>(t.exponents.size());
          t.exponents.push_back({a, b, c, d});
          t.degree.push_back(deg);
        }
      }
    }
  }
  const int n = static_cast<int>(t.exponents.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (t.degree[static_cast<std::size_t>(i)] + t.degree[static_cast<std::size_t>(j)] > order) continue;
      Jet::Exponents e{};
      for (int v = 0; v < Jet::kVariables; ++v) {
        e[static_cast<std::size_t>(v)] = t.exponents[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] +
                                         t.exponents[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)];
      }
      t.products.push_back({i, j, t.index_of(e)});
    }
  }
  return t;
}

const MonomialTable& table_for(int order) {
  static const std::vector<MonomialTable> tables = [] {
    std::vector<MonomialTable> all;
    for (int k = 0; k <= Jet::kMaxOrder; ++k) all.push_back(make_table(k));
    return all;
  }();
  if (order < 0 || order > Jet::kMaxOrder) throw DomainError("Jet: order out of range");
  return tables[static_cast<std::size_t>(order)];
}

}  // namespace

Jet::Jet(int order, double value) : order_(order) {
  coeffs_.assign(table_for(order).exponents.size(), 0.0);
  coeffs_[0] = value;
}

Jet Jet::variable(int order, int index, double value) {
  if (index < 0 || index >= kVariables) throw DomainError("Jet::variable: index out of range");
  Jet j(order, value);
  if (order >= 1) {
    Exponents e{};
    e[static_cast<std::size_t>(index)] = 1;
    j.coeffs_[static_cast<std::size_t>(table_for(order).index_of(e))] = 1.0;
  }
  return j;
}

double Jet::coefficient(const Exponents& e) const {
  const int idx = table_for(order_).index_of(e);
  return idx < 0 ? 0.0 : coeffs_[static_cast<std::size_t>(idx)];
}

double Jet::partial(int index) const {
  if (order_ < 1) throw DomainError("Jet::partial: order-0 jet carries no derivatives");
  Exponents e{};
  e[static_cast<std::size_t>(index)] = 1;
  return coefficient(e);
}

Jet Jet::derivative(int index) const {
  if (order_ < 1) throw DomainError("Jet::derivative: order-0 jet carries no derivatives");
  if (index < 0 || index >= kVariables) throw DomainError("Jet::derivative: index out of range");
  Jet out(order_ - 1);
  const auto& src = table_for(order_);
  const auto& dst = table_for(order_ - 1);
  for (std::size_t k = 0; k < dst.exponents.size(); ++k) {
    Exponents e = dst.exponents[k];
    const int power = ++e[static_cast<std::size_t>(index)];
    out.coeffs_[k] = power * coeffs_[static_cast<std::size_t>(src.index_of(e))];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet out(order);
  // Monomials are sorted by degree, so the lower-order table is a prefix.
  for (std::size_t k = 0; k < out.coeffs_.size(); ++k) out.coeffs_[k] = coeffs_[k];
  return out;
}

Jet& Jet::operator+=(const Jet& other) {
  if (other.order_ < order_) *this = truncated(other.order_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  if (other.order_ < order_) *this = truncated(other.order_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(double k) {
  for (auto& c : coeffs_) c *= k;
  return *this;
}

Jet& Jet::operator+=(double k) {
  coeffs_[0] += k;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order_, b.order_);
  Jet out(order);
  const auto& t = table_for(order);
  for (const auto& p : t.products) {
    out.coeffs_[static_cast<std::size_t>(p.out)] +=
        a.coeffs_[static_cast<std::size_t>(p.lhs)] * b.coeffs_[static_cast<std::size_t>(p.rhs)];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet compose(const Jet& u, std::span<const double> derivatives) {
  if (derivatives.empty()) throw DomainError("compose: no derivatives supplied");
  const int order = std::min(u.order(), static_cast<int>(derivatives.size()) - 1);
  Jet du = u.truncated(order);
  du += -u.value();
  Jet out(order, derivatives[0]);
  Jet power(order, 1.0);
  double factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    power = power * du;
    factorial *= k;
    out += power * (derivatives[static_cast<std::size_t>(k)] / factorial);
  }
  return out;
}

Jet sqrt(const Jet& u) {
  const double x = u.value();
  if (!(x > 0.0)) throw DomainError("sqrt(Jet): base value must be positive");
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  double coeff = 1.0;
  double exponent = 0.5;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = coeff * std::pow(x, exponent);
    coeff *= exponent;
    exponent -= 1.0;
  }
  return compose(u, d);
}

Jet reciprocal(const Jet& u) {
  const double x = u.value();
  if (x == 0.0) throw DomainError("reciprocal(Jet): base value is zero");
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  double coeff = 1.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = coeff / std::pow(x, static_cast<double>(k + 1));
    coeff *= -static_cast<double>(k + 1);
  }
  return compose(u, d);
}

}  // namespace ehf
