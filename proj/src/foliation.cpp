#include "ehf/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "ehf/cutoffs.hpp"
#include "ehf/errors.hpp"

namespace ehf {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kTableSpacing = 0.05;
constexpr double kTransitionSpacing = 0.01;
constexpr double kDsRelStep = 1e-4;
constexpr double kTransitionShare = 0.4;
constexpr double kMaxGrowth = 1.2;

double inner_boundary(double s) { return 0.5 * s * s - 1.0; }
double outer_boundary(double s) { return 0.5 * s * s; }

// Fritsch-Carlson slopes for a monotone piecewise cubic through (x_i, y_i).
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return d;
}

double hermite(double y0, double y1, double m0, double m1, double h, double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
}

void append_uniform(std::vector<double>& out, double a, double b, double spacing) {
  const auto m = static_cast<std::size_t>(std::ceil((b - a) / spacing - 1e-9));
  const std::size_t count = std::max<std::size_t>(m, 1);
  for (std::size_t j = 1; j <= count; ++j) {
    out.push_back(j == count ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(count));
  }
}

}  // namespace

std::string_view to_string(Region region) noexcept {
  switch (region) {
    case Region::Interior: return "interior";
    case Region::Transition: return "transition";
    case Region::Exterior: return "exterior";
  }
  return "unknown";
}

Region region_of(double s, double r) noexcept {
  if (r <= inner_boundary(s)) return Region::Interior;
  if (r >= outer_boundary(s)) return Region::Exterior;
  return Region::Transition;
}

Region classify_region(double s, double r) {
  if (!(s >= 2.0)) {
    throw DomainError("classify_region: requires s >= 2 (got s=" + std::to_string(s) + ")");
  }
  if (!(r >= 0.0)) throw DomainError("classify_region: requires r >= 0");
  return region_of(s, r);
}

double time_function_slope(double s, double r) {
  const auto& cut = CutoffProfile::standard();
  const double lapse = cut.chi(s - 1.0);
  if (lapse == 0.0) return 0.0;
  const double x = cut.xi(s, r);
  if (x == 0.0) return 0.0;
  return lapse * x * r / std::sqrt(r * r + s * s);
}

double time_function_curvature(double s, double r) {
  const auto& cut = CutoffProfile::standard();
  const double lapse = cut.chi(s - 1.0);
  if (lapse == 0.0) return 0.0;
  const double q = r * r + s * s;
  const double root = std::sqrt(q);
  return lapse * (cut.xi_r(s, r) * r / root + cut.xi(s, r) * s * s / (q * root));
}

std::vector<double> table_grid(double s, double r_max) {
  std::vector<double> breaks;
  for (double b : {inner_boundary(s), outer_boundary(s)}) {
    if (b > 0.0 && b < r_max) breaks.push_back(b);
  }
  breaks.push_back(r_max);
  std::vector<double> grid{0.0};
  double a = 0.0;
  for (double b : breaks) {
    const double mid = 0.5 * (a + b);
    const bool transition = region_of(s, mid) == Region::Transition;
    append_uniform(grid, a, b, transition ? kTransitionSpacing : kTableSpacing);
    a = b;
  }
  return grid;
}

std::vector<double> integrate_time_function(double s, std::span<const double> radii, double ode_tol) {
  using State = std::array<double, 1>;
  std::vector<double> values;
  values.reserve(radii.size());
  if (radii.empty()) return values;
  if (radii.front() != 0.0) throw DomainError("integrate_time_function: radii must start at 0");
  const double lapse = CutoffProfile::standard().chi(s - 1.0);
  if (lapse == 0.0) {
    values.assign(radii.size(), s);
    return values;
  }
  auto rhs = [s](const State& /*x*/, State& dxdt, double r) { dxdt[0] = time_function_slope(s, r); };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(ode_tol, ode_tol);
  State x{s};
  auto observer = [&values](const State& state, double /*r*/) { values.push_back(state[0]); };
  if (radii.size() == 1) {
    values.push_back(s);
    return values;
  }
  const double first_step = std::min(0.01, radii[1] - radii[0]);
  odeint::integrate_times(stepper, rhs, x, radii.begin(), radii.end(), first_step, observer);
  return values;
}

TimeFunctionTable build_time_function(double s, double r_max, double ode_tol) {
  if (!(s >= 1.0)) throw DomainError("build_time_function: requires s >= 1");
  if (!(r_max > 0.0)) throw DomainError("build_time_function: requires r_max > 0");
  if (!(ode_tol > 0.0 && ode_tol <= 1e-4)) throw DomainError("build_time_function: ode_tol must lie in (0, 1e-4]");

  std::vector<double> grid = table_grid(s, r_max);
  std::vector<double> t_values = integrate_time_function(s, grid, ode_tol);

  const double delta = kDsRelStep * s;
  const std::vector<double> t_plus = integrate_time_function(s + delta, grid, ode_tol);
  const std::vector<double> t_minus = integrate_time_function(s - delta, grid, ode_tol);
  std::vector<double> ds(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) ds[i] = (t_plus[i] - t_minus[i]) / (2.0 * delta);

  return TimeFunctionTable(s, ode_tol, std::move(grid), std::move(t_values), std::move(ds));
}

TimeFunctionTable::TimeFunctionTable(double s, double ode_tol, std::vector<double> r_nodes,
                                     std::vector<double> t_values, std::vector<double> ds_values)
    : s_(s),
      ode_tol_(ode_tol),
      r_nodes_(std::move(r_nodes)),
      t_values_(std::move(t_values)),
      ds_values_(std::move(ds_values)) {
  if (r_nodes_.size() < 2 || r_nodes_.size() != t_values_.size() || r_nodes_.size() != ds_values_.size()) {
    throw DomainError("TimeFunctionTable: inconsistent node arrays");
  }
  dr_values_.resize(r_nodes_.size());
  for (std::size_t i = 0; i < r_nodes_.size(); ++i) dr_values_[i] = time_function_slope(s_, r_nodes_[i]);
  ds_slopes_ = pchip_slopes(r_nodes_, ds_values_);
}

void TimeFunctionTable::check_range(double r, const char* what) const {
  if (!(r >= 0.0 && r <= r_max())) {
    throw DomainError(std::string(what) + ": r=" + std::to_string(r) + " outside [0, " +
                      std::to_string(r_max()) + "]");
  }
}

std::size_t TimeFunctionTable::locate(double r) const {
  auto it = std::upper_bound(r_nodes_.begin(), r_nodes_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - r_nodes_.begin());
  i = (i == 0) ? 0 : i - 1;
  return std::min(i, r_nodes_.size() - 2);
}

double TimeFunctionTable::eval_T(double r) const {
  check_range(r, "eval_T");
  const std::size_t i = locate(r);
  const double h = r_nodes_[i + 1] - r_nodes_[i];
  const double u = (r - r_nodes_[i]) / h;
  if (u == 0.0) return t_values_[i];
  if (u == 1.0) return t_values_[i + 1];
  const double y0 = t_values_[i];
  const double y1 = t_values_[i + 1];
  const double secant = (y1 - y0) / h;
  double m0 = dr_values_[i];
  double m1 = dr_values_[i + 1];
  if (secant <= 0.0) {
    return y0;
  }
  const double a = m0 / secant;
  const double b = m1 / secant;
  const double norm2 = a * a + b * b;
  if (norm2 > 9.0) {
    const double tau = 3.0 / std::sqrt(norm2);
    m0 = tau * a * secant;
    m1 = tau * b * secant;
  }
  return hermite(y0, y1, m0, m1, h, u);
}

double TimeFunctionTable::eval_drT(double r) const {
  check_range(r, "eval_drT");
  return time_function_slope(s_, r);
}

double TimeFunctionTable::eval_drrT(double r) const {
  check_range(r, "eval_drrT");
  return time_function_curvature(s_, r);
}

double TimeFunctionTable::eval_dsT(double r) const {
  check_range(r, "eval_dsT");
  const std::size_t i = locate(r);
  const double h = r_nodes_[i + 1] - r_nodes_[i];
  const double u = (r - r_nodes_[i]) / h;
  return hermite(ds_values_[i], ds_values_[i + 1], ds_slopes_[i], ds_slopes_[i + 1], h, u);
}

double SliceSample::integrate(std::span<const double> f) const {
  if (f.size() != nodes.size()) throw DomainError("SliceSample::integrate: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += nodes[i].weight * f[i];
  return sum;
}

double SliceSample::integrate(std::span<const double> f, Region region) const {
  if (f.size() != nodes.size()) throw DomainError("SliceSample::integrate: size mismatch");
  const auto k = static_cast<std::size_t>(region);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += nodes[i].region_weight[k] * f[i];
  return sum;
}

namespace {

struct Segment {
  double a;
  double b;
  Region region;
  std::size_t intervals = 0;
};

// Spacings for m intervals covering [0, length], the first of which is close to
// `first` and the rest growing geometrically (ratio capped at kMaxGrowth).
std::vector<double> geometric_spacings(double length, std::size_t m, double first) {
  std::vector<double> h(m, length / static_cast<double>(m));
  if (first * static_cast<double>(m) >= length) return h;
  auto covered = [m, first](double q) {
    double sum = 0.0;
    double step = first;
    for (std::size_t j = 0; j < m; ++j) {
      sum += step;
      step *= q;
    }
    return sum;
  };
  double q = kMaxGrowth;
  double start = first;
  if (covered(kMaxGrowth) < length) {
    // Ratio at the cap; enlarge the first step instead.
    start = first * length / covered(kMaxGrowth);
  } else {
    double lo = 1.0;
    double hi = kMaxGrowth;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (covered(mid) < length ? lo : hi) = mid;
    }
    q = 0.5 * (lo + hi);
  }
  double step = start;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    h[j] = step;
    sum += step;
    step *= q;
  }
  for (auto& v : h) v *= length / sum;
  return h;
}

std::size_t even_at_least_two(double x) {
  auto m = static_cast<std::size_t>(std::llround(std::max(x, 2.0)));
  if (m % 2 != 0) ++m;
  return m;
}

void add_simpson(std::span<const double> r, std::vector<double>& w) {
  for (std::size_t i = 0; i + 2 < r.size(); i += 2) {
    const double h0 = r[i + 1] - r[i];
    const double h1 = r[i + 2] - r[i + 1];
    const double sum = h0 + h1;
    w[i] += sum / 6.0 * (2.0 - h1 / h0);
    w[i + 1] += sum * sum * sum / (6.0 * h0 * h1);
    w[i + 2] += sum / 6.0 * (2.0 - h0 / h1);
  }
}

}  // namespace

SliceSample slice_points(const TimeFunctionTable& table, double r_end, std::size_t n, Grading grading) {
  if (n < 16) throw DomainError("slice_points: requires n >= 16");
  if (!(r_end > 0.0 && r_end <= table.r_max())) throw DomainError("slice_points: r_end outside table range");
  const double s = table.s();
  const std::size_t total = (n - 1) % 2 == 0 ? n - 1 : n;

  std::vector<double> r;
  std::vector<std::array<double, 3>> region_weight;

  if (grading == Grading::Uniform) {
    r.resize(total + 1);
    for (std::size_t j = 0; j <= total; ++j) {
      r[j] = r_end * static_cast<double>(j) / static_cast<double>(total);
    }
    std::vector<double> w(r.size(), 0.0);
    add_simpson(r, w);
    region_weight.assign(r.size(), {0.0, 0.0, 0.0});
    for (std::size_t j = 0; j < r.size(); ++j) {
      region_weight[j][static_cast<std::size_t>(region_of(s, r[j]))] = w[j];
    }
  } else {
    std::vector<Segment> segments;
    double a = 0.0;
    for (double b : {inner_boundary(s), outer_boundary(s), r_end}) {
      b = std::min(b, r_end);
      if (b > a + 1e-12) {
        segments.push_back({a, b, region_of(s, 0.5 * (a + b))});
        a = b;
      }
    }
    const auto total_d = static_cast<double>(total);
    double rest_length = 0.0;
    bool has_transition = false;
    for (const auto& seg : segments) {
      if (seg.region == Region::Transition) {
        has_transition = true;
      } else {
        rest_length += seg.b - seg.a;
      }
    }
    const double rest_share = has_transition && rest_length > 0.0 ? 1.0 - kTransitionShare : 1.0;
    for (auto& seg : segments) {
      if (seg.region == Region::Transition) {
        seg.intervals = even_at_least_two(rest_length > 0.0 ? kTransitionShare * total_d : total_d);
      } else {
        seg.intervals = even_at_least_two(rest_share * total_d * (seg.b - seg.a) / rest_length);
      }
    }
    double anchor_spacing = 0.0;
    for (const auto& seg : segments) {
      if (seg.region == Region::Transition) anchor_spacing = (seg.b - seg.a) / static_cast<double>(seg.intervals);
    }

    r.push_back(0.0);
    std::vector<double> w_all(1, 0.0);
    region_weight.assign(1, {0.0, 0.0, 0.0});
    for (const auto& seg : segments) {
      const double length = seg.b - seg.a;
      std::vector<double> h;
      if (anchor_spacing > 0.0 && seg.region != Region::Transition) {
        h = geometric_spacings(length, seg.intervals, anchor_spacing);
        if (seg.region == Region::Interior) std::reverse(h.begin(), h.end());
      } else {
        h.assign(seg.intervals, length / static_cast<double>(seg.intervals));
      }
      std::vector<double> local{seg.a};
      for (std::size_t j = 0; j < h.size(); ++j) {
        local.push_back(j + 1 == h.size() ? seg.b : local.back() + h[j]);
      }
      std::vector<double> w(local.size(), 0.0);
      add_simpson(local, w);
      const std::size_t base = r.size() - 1;
      for (std::size_t j = 1; j < local.size(); ++j) {
        r.push_back(local[j]);
        region_weight.push_back({0.0, 0.0, 0.0});
      }
      const auto k = static_cast<std::size_t>(seg.region);
      for (std::size_t j = 0; j < local.size(); ++j) region_weight[base + j][k] += w[j];
    }
  }

  SliceSample sample;
  sample.s = s;
  sample.nodes.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    SliceNode& node = sample.nodes[j];
    node.r = r[j];
    node.t = table.eval_T(r[j]);
    node.region = region_of(s, r[j]);
    const double measure = 4.0 * std::numbers::pi * r[j] * r[j];
    node.weight = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      node.region_weight[k] = region_weight[j][k] * measure;
      node.weight += node.region_weight[k];
    }
  }
  return sample;
}

SliceSample slice_points(double s, double r_max, std::size_t n, Grading grading) {
  const TimeFunctionTable table = build_time_function(s, r_max, 1e-10);
  return slice_points(table, r_max, n, grading);
}

}  // namespace ehf
