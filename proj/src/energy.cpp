#include "ehf/energy.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ehf/cutoffs.hpp"
#include "ehf/errors.hpp"
#include "ehf/frames.hpp"
#include "ehf/parallel.hpp"

namespace ehf {

namespace {

// Unit direction used to place a radial node in R^3. Radial integrands do not
// depend on it; the generic choice keeps all three components nonzero.
constexpr std::array<double, 3> kDirection{1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};

void check_conformal(const SliceSample& sample, const FieldOnSlice& v) {
  const std::size_t n = sample.size();
  if (v.v.size() != n || v.v_t.size() != n || v.v_r.size() != n) {
    throw ValidationError("energy: field has " + std::to_string(v.v.size()) + " samples, slice has " +
                          std::to_string(n) + " nodes");
  }
}

template <class Density>
EnergyBreakdown accumulate(const SliceSample& sample, double eta, const Density& density) {
  const auto& cut = CutoffProfile::standard();
  EnergyBreakdown out;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const SliceNode& node = sample.nodes[i];
    const double w = 1.0 + cut.weight_omega(eta, node.t, node.r);
    const double e = w * w * density(i);
    for (std::size_t k = 0; k < 3; ++k) out.by_region[k] += node.region_weight[k] * e;
  }
  out.total = out.by_region[0] + out.by_region[1] + out.by_region[2];
  return out;
}

}  // namespace

FieldOnSlice sample_field(const SliceSample& sample, const RadialField& field) {
  FieldOnSlice out;
  out.v.reserve(sample.size());
  out.v_t.reserve(sample.size());
  out.v_r.reserve(sample.size());
  for (const auto& node : sample.nodes) {
    const auto f = field(node.t, node.r);
    out.v.push_back(f[0]);
    out.v_t.push_back(f[1]);
    out.v_r.push_back(f[2]);
  }
  return out;
}

double zeta(double r, const TimeFunctionTable& table) {
  const double a = table.eval_drT(r);
  return std::sqrt(std::max(0.0, 1.0 - a * a));
}

EnergyBreakdown energy_frame_form(const SliceSample& sample, const FieldOnSlice& v, double eta, double c,
                                  const TimeFunctionTable& table) {
  check_conformal(sample, v);
  auto shared = std::make_shared<const TimeFunctionTable>(table);
  const std::array<VectorField, 3> dbar{make_slice_tangent(shared, 1), make_slice_tangent(shared, 2),
                                        make_slice_tangent(shared, 3)};
  const double c2 = c * c;
  return accumulate(sample, eta, [&](std::size_t i) {
    const double r = sample.nodes[i].r;
    const Point p{sample.nodes[i].t, r * kDirection[0], r * kDirection[1], r * kDirection[2]};
    const double z = zeta(r, table);
    double tangential = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      const auto coeff = dbar[a].coefficients(p);
      const double d = coeff[0] * v.v_t[i] + coeff[a + 1] * kDirection[a] * v.v_r[i];
      tangential += d * d;
    }
    return z * z * v.v_t[i] * v.v_t[i] + tangential + c2 * v.v[i] * v.v[i];
  });
}

EnergyBreakdown energy_flat_form(const SliceSample& sample, const FieldOnSlice& v, double eta, double c,
                                 const TimeFunctionTable& table) {
  check_conformal(sample, v);
  const double c2 = c * c;
  return accumulate(sample, eta, [&](std::size_t i) {
    const double a = table.eval_drT(sample.nodes[i].r);
    double spatial = 0.0;
    for (double n : kDirection) {
      const double d = a * n * v.v_t[i] + n * v.v_r[i];
      spatial += d * d;
    }
    return (1.0 - a * a) * v.v_t[i] * v.v_t[i] + spatial + c2 * v.v[i] * v.v[i];
  });
}

EnergyReport energy_series(std::span<const double> s_list, const RadialField& field, double eta, double c,
                           const EnergyOptions& options) {
  EnergyReport report;
  report.eta = eta;
  report.c = c;
  report.slices.resize(s_list.size());
  parallel_for(s_list.size(), [&](std::size_t k) {
    const double s = s_list[k];
    const TimeFunctionTable table = build_time_function(s, options.r_max, options.ode_tol);
    const SliceSample sample = slice_points(table, options.r_max, options.nodes, options.grading);
    const FieldOnSlice v = sample_field(sample, field);
    const EnergyBreakdown frame = energy_frame_form(sample, v, eta, c, table);
    const EnergyBreakdown flat = energy_flat_form(sample, v, eta, c, table);
    EnergySlice& out = report.slices[k];
    out.s = s;
    out.frame = frame.total;
    out.flat = flat.total;
    out.by_region = frame.by_region;
    out.form_gap = std::abs(flat.total - frame.total);
  });
  return report;
}

}  // namespace ehf
