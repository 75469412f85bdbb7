#include "ehf/frames.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ehf/cutoffs.hpp"
#include "ehf/errors.hpp"
#include "ehf/foliation.hpp"

namespace ehf {

namespace {

constexpr double kSingularLocus = 1e-8;

using Coordinates = std::array<Jet, 4>;
using CoordinateRule = std::function<CoefficientJets(const Coordinates&, int order)>;

VectorField from_coordinates(std::string label, int max_order, CoordinateRule rule) {
  auto jets = [rule = std::move(rule)](const Point& p, int order) {
    Coordinates x{Jet::variable(order, 0, p[0]), Jet::variable(order, 1, p[1]), Jet::variable(order, 2, p[2]),
                  Jet::variable(order, 3, p[3])};
    return rule(x, order);
  };
  return VectorField(std::move(label), max_order, std::move(jets));
}

CoefficientJets zero_coefficients(int order) { return {Jet(order), Jet(order), Jet(order), Jet(order)}; }

void check_spatial(int a, const char* what) {
  if (a < 1 || a > 3) throw DomainError(std::string(what) + ": spatial index must be 1, 2 or 3");
}

double spatial_radius(const Point& p) { return std::sqrt(p[1] * p[1] + p[2] * p[2] + p[3] * p[3]); }

Jet radius_jet(const Coordinates& x) { return sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); }

}  // namespace

VectorField::VectorField(std::string label, int max_order, JetFunction jets)
    : label_(std::move(label)), max_order_(max_order), jets_(std::move(jets)) {
  if (max_order_ < 0) throw DomainError("VectorField '" + label_ + "': no coefficient jets available");
}

CoefficientJets VectorField::jets(const Point& p, int order) const {
  if (order < 0 || order > max_order_) {
    throw DomainError("VectorField '" + label_ + "': jet order " + std::to_string(order) + " exceeds " +
                      std::to_string(max_order_));
  }
  return jets_(p, order);
}

std::array<double, 4> VectorField::coefficients(const Point& p) const {
  const CoefficientJets j = jets_(p, 0);
  return {j[0].value(), j[1].value(), j[2].value(), j[3].value()};
}

VectorField make_field(FieldKind kind, int a, int b) {
  switch (kind) {
    case FieldKind::Translation: {
      if (a < 0 || a > 3) throw DomainError("make_field: translation index must be 0..3");
      return from_coordinates("d" + std::to_string(a), Jet::kMaxOrder, [a](const Coordinates&, int order) {
        CoefficientJets c = zero_coefficients(order);
        c[static_cast<std::size_t>(a)] = Jet(order, 1.0);
        return c;
      });
    }
    case FieldKind::Boost: {
      check_spatial(a, "make_field(Boost)");
      return from_coordinates("L" + std::to_string(a), Jet::kMaxOrder, [a](const Coordinates& x, int order) {
        CoefficientJets c = zero_coefficients(order);
        c[0] = x[static_cast<std::size_t>(a)];
        c[static_cast<std::size_t>(a)] = x[0];
        return c;
      });
    }
    case FieldKind::Rotation: {
      check_spatial(a, "make_field(Rotation)");
      check_spatial(b, "make_field(Rotation)");
      if (a == b) throw DomainError("make_field(Rotation): indices must differ");
      return from_coordinates("Omega" + std::to_string(a) + std::to_string(b), Jet::kMaxOrder,
                              [a, b](const Coordinates& x, int order) {
                                CoefficientJets c = zero_coefficients(order);
                                c[static_cast<std::size_t>(b)] = x[static_cast<std::size_t>(a)];
                                c[static_cast<std::size_t>(a)] = -x[static_cast<std::size_t>(b)];
                                return c;
                              });
    }
    case FieldKind::Scaling:
      return from_coordinates("S", Jet::kMaxOrder, [](const Coordinates& x, int) { return x; });
    case FieldKind::SemiHyperboloidal: {
      check_spatial(a, "make_field(SemiHyperboloidal)");
      return from_coordinates("dsemi" + std::to_string(a), Jet::kMaxOrder, [a](const Coordinates& x, int order) {
        if (std::abs(x[0].value()) < kSingularLocus) {
          throw DomainError("semi-hyperboloidal field is undefined at t = 0");
        }
        CoefficientJets c = zero_coefficients(order);
        c[0] = x[static_cast<std::size_t>(a)] / x[0];
        c[static_cast<std::size_t>(a)] = Jet(order, 1.0);
        return c;
      });
    }
    case FieldKind::Null: {
      check_spatial(a, "make_field(Null)");
      return from_coordinates("dnull" + std::to_string(a), Jet::kMaxOrder, [a](const Coordinates& x, int order) {
        const Jet r = radius_jet(x);
        if (r.value() < kSingularLocus) throw DomainError("null field is undefined at r = 0");
        CoefficientJets c = zero_coefficients(order);
        c[0] = x[static_cast<std::size_t>(a)] / r;
        c[static_cast<std::size_t>(a)] = Jet(order, 1.0);
        return c;
      });
    }
    case FieldKind::SliceTangent:
      throw DomainError("make_field: the slice-tangent field needs a time-function table (make_slice_tangent)");
  }
  throw DomainError("make_field: unknown field kind");
}

VectorField make_slice_tangent(std::shared_ptr<const TimeFunctionTable> table, int a) {
  check_spatial(a, "make_slice_tangent");
  if (!table) throw DomainError("make_slice_tangent: null table");
  auto jets = [table = std::move(table), a](const Point& p, int order) {
    const double r = spatial_radius(p);
    if (r > table->r_max()) throw DomainError("slice-tangent field evaluated outside its leaf table");
    const double s = table->s();
    const auto& cut = CutoffProfile::standard();
    const double lapse = cut.chi(s - 1.0);
    const double root = std::sqrt(r * r + s * s);
    // d_a T = x^a h(r) with h = d_r T / r, smooth through the axis.
    const double h = lapse * cut.xi(s, r) / root;
    CoefficientJets c = zero_coefficients(order);
    c[static_cast<std::size_t>(a)] = Jet(order, 1.0);
    if (order == 0) {
      c[0] = Jet(0, p[static_cast<std::size_t>(a)] * h);
      return c;
    }
    if (r < kSingularLocus) throw DomainError("slice-tangent jets are not available on the axis");
    const double dh = lapse * (cut.xi_r(s, r) / root - cut.xi(s, r) * r / (root * root * root));
    Coordinates x{Jet::variable(order, 0, p[0]), Jet::variable(order, 1, p[1]), Jet::variable(order, 2, p[2]),
                  Jet::variable(order, 3, p[3])};
    const std::array<double, 2> derivs{h, dh};
    c[0] = x[static_cast<std::size_t>(a)] * compose(radius_jet(x), derivs);
    return c;
  };
  return VectorField("dbar" + std::to_string(a), 1, std::move(jets));
}

std::vector<VectorField> admissible_fields() {
  std::vector<VectorField> fields;
  for (int alpha = 0; alpha < 4; ++alpha) fields.push_back(make_field(FieldKind::Translation, alpha));
  for (int a = 1; a <= 3; ++a) fields.push_back(make_field(FieldKind::Boost, a));
  fields.push_back(make_field(FieldKind::Rotation, 1, 2));
  fields.push_back(make_field(FieldKind::Rotation, 1, 3));
  fields.push_back(make_field(FieldKind::Rotation, 2, 3));
  return fields;
}

VectorField commutator(const VectorField& x, const VectorField& y) {
  const int max_order = std::min(x.max_order(), y.max_order()) - 1;
  auto jets = [x, y](const Point& p, int order) {
    const CoefficientJets xj = x.jets(p, order + 1);
    const CoefficientJets yj = y.jets(p, order + 1);
    CoefficientJets out = zero_coefficients(order);
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
      for (std::size_t beta = 0; beta < 4; ++beta) {
        const int b = static_cast<int>(beta);
        out[alpha] += xj[beta].truncated(order) * yj[alpha].derivative(b);
        out[alpha] -= yj[beta].truncated(order) * xj[alpha].derivative(b);
      }
    }
    return out;
  };
  return VectorField("[" + x.label() + "," + y.label() + "]", max_order, std::move(jets));
}

double default_step(const Point& p) noexcept {
  double norm2 = 0.0;
  for (double v : p) norm2 += v * v;
  return 1e-4 * (1.0 + std::sqrt(norm2));
}

double partial_fd(const ScalarField& u, const Point& p, int axis, double h) {
  Point plus = p;
  Point minus = p;
  plus[static_cast<std::size_t>(axis)] += h;
  minus[static_cast<std::size_t>(axis)] -= h;
  return (u(plus) - u(minus)) / (2.0 * h);
}

double apply_field(const VectorField& x, const ScalarField& u, const Point& p, double h) {
  if (!(h > 0.0)) throw DomainError("apply_field: step must be positive");
  const auto c = x.coefficients(p);
  double sum = 0.0;
  for (int alpha = 0; alpha < 4; ++alpha) {
    const double ca = c[static_cast<std::size_t>(alpha)];
    if (ca != 0.0) sum += ca * partial_fd(u, p, alpha, h);
  }
  return sum;
}

double apply_multiindex(std::span<const VectorField> ops, const ScalarField& u, const Point& p, double h) {
  if (ops.size() > 3) throw DomainError("apply_multiindex: at most three operators are supported");
  if (ops.empty()) return u(p);
  const std::size_t n = ops.size();
  std::vector<ScalarField> chain(n + 1);
  chain[n] = u;
  for (std::size_t i = n; i-- > 0;) {
    const double step = h * static_cast<double>(1u << (n - 1 - i));
    chain[i] = [&op = ops[i], &inner = chain[i + 1], step](const Point& q) {
      return apply_field(op, inner, q, step);
    };
  }
  return chain[0](p);
}

double box_fd(const ScalarField& u, const Point& p, double h) {
  const double centre = u(p);
  double sum = 0.0;
  for (std::size_t alpha = 0; alpha < 4; ++alpha) {
    Point plus = p;
    Point minus = p;
    plus[alpha] += h;
    minus[alpha] -= h;
    const double second = (u(plus) - 2.0 * centre + u(minus)) / (h * h);
    sum += alpha == 0 ? -second : second;
  }
  return sum;
}

double commute_with_operator_residual(const VectorField& x, double c, const ScalarField& u, const Point& p,
                                      double h) {
  const double c2 = c * c;
  ScalarField kg_u = [&u, c2, h](const Point& q) { return box_fd(u, q, h) - c2 * u(q); };
  ScalarField x_u = [&x, &u, h](const Point& q) { return apply_field(x, u, q, h); };
  const double outer = 2.0 * h;
  const double first = apply_field(x, kg_u, p, outer);
  const double second = box_fd(x_u, p, outer) - c2 * x_u(p);
  return first - second;
}

}  // namespace ehf
