#include "ehf/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ehf/errors.hpp"
#include "ehf/spectral.hpp"

namespace ehf {

namespace {

constexpr double kSlack = 1e-12;

struct FieldState {
  std::vector<double> u0;
  std::vector<double> ut0;
};

bool uses_v(const Coupling& c) {
  for (const auto& t : c.terms()) {
    for (Factor f : t.factors) {
      if (f == Factor::V || f == Factor::Vt || f == Factor::Vr) return true;
    }
  }
  return false;
}

FieldState profile_data(const InitialData& d, double t, double dr, std::size_t n) {
  FieldState s{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  for (std::size_t j = 0; j <= n; ++j) {
    const double r = dr * static_cast<double>(j);
    switch (d.profile) {
      case Profile::Zero:
        break;
      case Profile::Gaussian: {
        const double w2 = d.width * d.width;
        s.u0[j] = d.amplitude * (std::exp(-(r - d.centre) * (r - d.centre) / w2) +
                                 std::exp(-(r + d.centre) * (r + d.centre) / w2));
        break;
      }
      case Profile::WaveTail: {
        const auto w = wave_tail(t, r, d.tail_a);
        s.u0[j] = d.amplitude * w[0];
        s.ut0[j] = d.amplitude * w[1];
        break;
      }
      case Profile::KgPointSource:
        s.ut0[j] = d.amplitude * std::exp(-r * r / (d.width * d.width));
        break;
    }
  }
  return s;
}

// Radial derivative at node j: zero on the axis, one-sided second order at the outer node.
double radial_derivative(const std::vector<double>& u, std::size_t j, double dr) {
  const std::size_t n = u.size() - 1;
  if (j == 0) return 0.0;
  if (j == n) return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * dr);
  return (u[j + 1] - u[j - 1]) / (2.0 * dr);
}

std::vector<double> lagrange_weights(std::span<const double> x, double at) {
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k != i) w[i] *= (at - x[k]) / (x[i] - x[k]);
    }
  }
  return w;
}

class Stepper {
 public:
  Stepper(const EvolutionConfig& config, std::array<FieldState, 2> data)
      : cfg_(config), dr_(config.dr()), dt_(config.dt()), n_(config.n_r), data_(std::move(data)) {
    fields_.push_back(&cfg_.u);
    if (cfg_.v) fields_.push_back(&*cfg_.v);
  }

  SpacetimeGrid run() {
    SpacetimeGrid grid;
    grid.dr = dr_;
    grid.dt = dt_;
    grid.t_start = cfg_.t_start;
    grid.r_max = cfg_.r_max;
    grid.boundary = cfg_.boundary;
    grid.has_v = fields_.size() == 2;

    const std::size_t nf = fields_.size();
    const std::size_t steps = cfg_.steps();
    std::array<std::vector<double>, 2> prev2, prev, cur, next, ut;
    for (std::size_t k = 0; k < nf; ++k) {
      cur[k] = data_[k].u0;
      ut[k] = data_[k].ut0;
    }

    // Taylor start: u^{+-1} = u^0 +- dt u_t + dt^2/2 a^0.
    const double t0 = cfg_.t_start;
    const auto a0 = accelerations(cur, ut, t0);
    for (std::size_t k = 0; k < nf; ++k) {
      next[k].resize(n_ + 1);
      prev[k].resize(n_ + 1);
      for (std::size_t j = 0; j <= n_; ++j) {
        const double half = 0.5 * dt_ * dt_ * a0[k][j];
        next[k][j] = cur[k][j] + dt_ * ut[k][j] + half;
        prev[k][j] = cur[k][j] - dt_ * ut[k][j] + half;
      }
      apply_boundary(k, next[k], cur[k], t0 + dt_);
    }
    check_finite(next, t0);
    store(grid, 0, cur, ut, steps);

    for (std::size_t step = 1; step < steps; ++step) {
      prev2 = std::move(prev);
      prev = std::move(cur);
      cur = std::move(next);
      const double t = t_at(step);
      for (std::size_t k = 0; k < nf; ++k) {
        ut[k].resize(n_ + 1);
        for (std::size_t j = 0; j <= n_; ++j) {
          ut[k][j] = (3.0 * cur[k][j] - 4.0 * prev[k][j] + prev2[k][j]) / (2.0 * dt_);
        }
      }
      const auto a = accelerations(cur, ut, t);
      for (std::size_t k = 0; k < nf; ++k) {
        next[k].resize(n_ + 1);
        for (std::size_t j = 0; j <= n_; ++j) {
          next[k][j] = 2.0 * cur[k][j] - prev[k][j] + dt_ * dt_ * a[k][j];
        }
        apply_boundary(k, next[k], cur[k], t_at(step + 1));
      }
      check_finite(next, t);
      if (step % cfg_.stride == 0) {
        std::array<std::vector<double>, 2> centred;
        for (std::size_t k = 0; k < nf; ++k) {
          centred[k].resize(n_ + 1);
          for (std::size_t j = 0; j <= n_; ++j) centred[k][j] = (next[k][j] - prev[k][j]) / (2.0 * dt_);
        }
        store(grid, step, cur, centred, steps);
      }
    }
    // Final level: backward difference for the time derivative.
    for (std::size_t k = 0; k < nf; ++k) {
      for (std::size_t j = 0; j <= n_; ++j) {
        ut[k][j] = (3.0 * next[k][j] - 4.0 * cur[k][j] + prev[k][j]) / (2.0 * dt_);
      }
    }
    store(grid, steps, next, ut, steps);
    return grid;
  }

 private:
  double t_at(std::size_t step) const {
    return step == cfg_.steps() ? cfg_.t_end : cfg_.t_start + dt_ * static_cast<double>(step);
  }

  void store(SpacetimeGrid& grid, std::size_t step, const std::array<std::vector<double>, 2>& u,
             const std::array<std::vector<double>, 2>& ut, std::size_t) const {
    grid.times.push_back(t_at(step));
    for (std::size_t k = 0; k < fields_.size(); ++k) {
      grid.values[k].push_back(u[k]);
      grid.derivatives[k].push_back(ut[k]);
    }
  }

  std::array<std::vector<double>, 2> accelerations(const std::array<std::vector<double>, 2>& u,
                                                   const std::array<std::vector<double>, 2>& ut, double t) const {
    const std::size_t nf = fields_.size();
    std::array<std::vector<double>, 2> a;
    const double inv2 = 1.0 / (dr_ * dr_);
    const bool reflecting = cfg_.boundary == Boundary::Reflecting;
    for (std::size_t k = 0; k < nf; ++k) {
      const FieldConfig& f = *fields_[k];
      const std::vector<double>& w = u[k];
      a[k].assign(n_ + 1, 0.0);
      const double c2 = f.mass * f.mass;
      const bool forced = k == 0 && cfg_.exact.has_value();
      const std::size_t last = reflecting ? n_ : n_ - 1;
      for (std::size_t j = 0; j <= last; ++j) {
        const double r = dr_ * static_cast<double>(j);
        double lap;
        if (j == 0) {
          lap = 6.0 * (w[1] - w[0]) * inv2;
        } else if (j == n_) {
          lap = 2.0 * (w[n_ - 1] - w[n_]) * inv2;
        } else {
          lap = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * inv2 + (w[j + 1] - w[j - 1]) / (dr_ * r);
        }
        double acc = lap - c2 * w[j];
        if (!f.coupling.empty()) {
          CouplingInputs in;
          in.u = u[0][j];
          in.ut = ut[0][j];
          in.ur = reflecting && j == n_ ? 0.0 : radial_derivative(u[0], j, dr_);
          if (nf == 2) {
            in.v = u[1][j];
            in.vt = ut[1][j];
            in.vr = reflecting && j == n_ ? 0.0 : radial_derivative(u[1], j, dr_);
          }
          acc += f.coupling(in);
        }
        if (forced) acc += forcing(t, r, c2);
        a[k][j] = acc;
      }
    }
    return a;
  }

  double forcing(double t, double r, double c2) const {
    const ExactSolution& e = *cfg_.exact;
    const double u = e.u(t, r);
    const double lap = r == 0.0 ? 3.0 * e.u_rr(t, r) : e.u_rr(t, r) + 2.0 * e.u_r(t, r) / r;
    return e.u_tt(t, r) - lap + c2 * u;
  }

  void apply_boundary(std::size_t k, std::vector<double>& next, const std::vector<double>& cur, double t) const {
    const double R = cfg_.r_max;
    const bool has_exact = k == 0 && cfg_.exact.has_value();
    switch (cfg_.boundary) {
      case Boundary::Reflecting:
        return;  // evolved with the ghost-node stencil
      case Boundary::Dirichlet:
        next[n_] = has_exact ? cfg_.exact->u(t, R) : 0.0;
        return;
      case Boundary::NeumannFirstOrder:
        next[n_] = next[n_ - 1] + dr_ * (has_exact ? cfg_.exact->u_r(t, R) : 0.0);
        return;
      case Boundary::Sommerfeld: {
        // r u is carried outward unchanged: quadratic interpolation at R - dt.
        const double x = dt_ / dr_;
        const double w0 = R * cur[n_];
        const double w1 = (R - dr_) * cur[n_ - 1];
        const double w2 = (R - 2.0 * dr_) * cur[n_ - 2];
        const double w = 0.5 * (1.0 - x) * (2.0 - x) * w0 + x * (2.0 - x) * w1 - 0.5 * x * (1.0 - x) * w2;
        next[n_] = w / R;
        return;
      }
    }
  }

  void check_finite(const std::array<std::vector<double>, 2>& u, double t_last_good) const {
    for (std::size_t k = 0; k < fields_.size(); ++k) {
      for (double x : u[k]) {
        if (!std::isfinite(x)) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "blow-up: non-finite values after t=%.17g", t_last_good);
          throw NumericalFailure(buf);
        }
      }
    }
  }

  const EvolutionConfig& cfg_;
  double dr_;
  double dt_;
  std::size_t n_;
  std::array<FieldState, 2> data_;
  std::vector<const FieldConfig*> fields_;
};

std::array<FieldState, 2> initial_data(const EvolutionConfig& config) {
  std::array<FieldState, 2> data;
  const double dr = config.dr();
  if (config.exact) {
    data[0].u0.resize(config.n_r + 1);
    data[0].ut0.resize(config.n_r + 1);
    for (std::size_t j = 0; j <= config.n_r; ++j) {
      const double r = dr * static_cast<double>(j);
      data[0].u0[j] = config.exact->u(config.t_start, r);
      data[0].ut0[j] = config.exact->u_t(config.t_start, r);
    }
  } else {
    data[0] = profile_data(config.u.data, config.t_start, dr, config.n_r);
  }
  if (config.v) data[1] = profile_data(config.v->data, config.t_start, dr, config.n_r);
  return data;
}

}  // namespace

std::string_view to_string(Boundary b) noexcept {
  switch (b) {
    case Boundary::Sommerfeld:
      return "sommerfeld";
    case Boundary::Reflecting:
      return "reflecting";
    case Boundary::Dirichlet:
      return "dirichlet";
    case Boundary::NeumannFirstOrder:
      return "neumann_first_order";
  }
  return "unknown";
}

std::string_view to_string(Profile p) noexcept {
  switch (p) {
    case Profile::Zero:
      return "zero";
    case Profile::Gaussian:
      return "gaussian";
    case Profile::WaveTail:
      return "wave_tail";
    case Profile::KgPointSource:
      return "kg_point_source";
  }
  return "unknown";
}

std::optional<Boundary> parse_boundary(std::string_view text) noexcept {
  for (Boundary b : {Boundary::Sommerfeld, Boundary::Reflecting, Boundary::Dirichlet, Boundary::NeumannFirstOrder}) {
    if (to_string(b) == text) return b;
  }
  return std::nullopt;
}

std::optional<Profile> parse_profile(std::string_view text) noexcept {
  for (Profile p : {Profile::Zero, Profile::Gaussian, Profile::WaveTail, Profile::KgPointSource}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::array<double, 3> wave_tail(double t, double r, double a) {
  const double a2 = a * a;
  const double dm = t - r;
  const double dp = t + r;
  const double d = a2 + dm * dm;
  const double x = 4.0 * t * r / d;
  // log1p(x) / x written to stay accurate as r -> 0.
  const double ratio = std::abs(x) < 1e-12 ? 1.0 - 0.5 * x : std::log1p(x) / x;
  const double u = t / d * ratio;
  const double u_t = (a2 - t * t + r * r) / ((a2 + dp * dp) * d);
  double u_r = 0.0;
  if (r > 1e-6) {
    const double fp = dp / (2.0 * (a2 + dp * dp));
    const double fm = dm / (2.0 * d);
    u_r = (fp + fm - u) / r;
  }
  return {u, u_t, u_r};
}

void EvolutionConfig::validate() const {
  auto fail = [](const std::string& why) { throw ValidationError("evolution: " + why); };
  if (!(r_max > 0.0)) fail("r_max must be positive");
  if (n_r < 8) fail("n_r must be at least 8");
  if (!(t_end > t_start)) fail("t_end must exceed t_start");
  if (!(cfl > 0.0)) fail("cfl must be positive");
  if (stride == 0) fail("stride must be at least 1");
  double c_max = 0.0;
  for (const FieldConfig* f : {&u, v ? &*v : nullptr}) {
    if (!f) continue;
    if (!(f->mass >= 0.0)) fail("mass must be nonnegative");
    if (!(f->data.amplitude >= 0.0)) fail("amplitude must be nonnegative");
    if (!(f->data.width > 0.0)) fail("width must be positive");
    if (!v && uses_v(f->coupling)) fail("coupling refers to v but no v field is configured");
    c_max = std::max(c_max, f->mass);
  }
  if (exact) {
    if (!u.coupling.empty() || v) fail("manufactured solutions support a single uncoupled field");
  } else if (boundary == Boundary::Dirichlet || boundary == Boundary::NeumannFirstOrder) {
    fail("boundary '" + std::string(to_string(boundary)) + "' needs an exact solution");
  }
  // Leapfrog is stable while dt^2 max|lambda| <= 4; the axis row gives max|lambda| = 6/dr^2 + c^2.
  const double limit = 2.0 / std::sqrt(6.0 / (dr() * dr()) + c_max * c_max);
  if (dt() > limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "time step %.6g exceeds the stability limit %.6g (lower cfl below %.4g)", dt(),
                  limit, limit / dr());
    fail(buf);
  }
}

std::size_t EvolutionConfig::steps() const {
  const double n = std::ceil((t_end - t_start) / (cfl * dr()) - 1e-9);
  return std::max<std::size_t>(2, static_cast<std::size_t>(n));
}

double EvolutionConfig::dt() const { return (t_end - t_start) / static_cast<double>(steps()); }

RadialSample SpacetimeGrid::sample(Unknown which, double t, double r) const {
  const auto k = static_cast<std::size_t>(which);
  if (k == 1 && !has_v) throw DomainError("sample: grid has no v field");
  if (t < t_start - kSlack || t > t_last() + kSlack) {
    throw DomainError("sample: t=" + std::to_string(t) + " outside the computed time range");
  }
  const std::size_t n = nodes() - 1;
  if (r < 0.0 || r > r_max + kSlack) throw DomainError("sample: r=" + std::to_string(r) + " outside [0, r_max]");

  // Time stencil: four stored levels around t, clamped at the ends.
  const std::size_t levels = times.size();
  const std::size_t width_t = std::min<std::size_t>(4, levels);
  const auto upper = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t after = static_cast<std::size_t>(upper - times.begin());
  std::size_t l0 = after >= 2 ? after - 2 : 0;
  l0 = std::min(l0, levels - width_t);
  const std::span<const double> tl(times.data() + l0, width_t);
  const auto wt = lagrange_weights(tl, t);

  // Radial stencil: four nodes, mirrored evenly through the axis, clamped at r_max.
  const auto base = static_cast<long>(std::floor(r / dr));
  long j0 = std::min<long>(base - 1, static_cast<long>(n) - 3);
  std::array<double, 4> xr{};
  std::array<std::size_t, 4> idx{};
  for (std::size_t m = 0; m < 4; ++m) {
    const long j = j0 + static_cast<long>(m);
    xr[m] = dr * static_cast<double>(j);
    idx[m] = static_cast<std::size_t>(std::abs(j));
  }
  const auto wr = lagrange_weights(xr, r);

  RadialSample out;
  for (std::size_t i = 0; i < width_t; ++i) {
    const auto& u = values[k][l0 + i];
    const auto& ut = derivatives[k][l0 + i];
    double su = 0.0, sut = 0.0, sur = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      const long j = j0 + static_cast<long>(m);
      const double sign = j < 0 ? -1.0 : 1.0;  // u_r is odd through the axis
      su += wr[m] * u[idx[m]];
      sut += wr[m] * ut[idx[m]];
      sur += wr[m] * sign * radial_derivative(u, idx[m], dr);
    }
    out.u += wt[i] * su;
    out.u_t += wt[i] * sut;
    out.u_r += wt[i] * sur;
  }
  return out;
}

bool SpacetimeGrid::in_domain_of_dependence(double t, double r) const noexcept {
  return r + (t - t_start) <= r_max + kSlack;
}

SpacetimeGrid evolve_radial(const EvolutionConfig& config) {
  config.validate();
  return Stepper(config, initial_data(config)).run();
}

SpacetimeGrid evolve_companion(const EvolutionConfig& config) {
  config.validate();
  if (config.exact) throw ValidationError("evolve_companion: not defined for manufactured runs");
  EvolutionConfig linear = config;
  linear.v.reset();
  linear.u.coupling = Coupling();
  const auto data = initial_data(linear);
  const double c = config.u.mass;
  const double dr = config.dr();
  std::array<FieldState, 2> companion;
  companion[0].u0 = apply_radial_symbol(data[0].ut0, dr, c, -1.0);
  for (double& x : companion[0].u0) x = -x;
  companion[0].ut0 = apply_radial_symbol(data[0].u0, dr, c, 1.0);
  return Stepper(linear, std::move(companion)).run();
}

FieldOnSlice sample_on_slice(const SpacetimeGrid& grid, Unknown which, const SliceSample& slice) {
  const bool check_dependence = grid.boundary == Boundary::Sommerfeld || grid.boundary == Boundary::Reflecting;
  FieldOnSlice out;
  out.v.reserve(slice.size());
  out.v_t.reserve(slice.size());
  out.v_r.reserve(slice.size());
  for (const auto& node : slice.nodes) {
    const bool inside = node.t >= grid.t_start - kSlack && node.t <= grid.t_last() + kSlack &&
                        node.r <= grid.r_max + kSlack;
    if (!inside || (check_dependence && !grid.in_domain_of_dependence(node.t, node.r))) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "slice escapes the computed region at (s, r) = (%.17g, %.17g), t = %.17g",
                    slice.s, node.r, node.t);
      throw DomainError(buf);
    }
    const RadialSample x = grid.sample(which, node.t, node.r);
    out.v.push_back(x.u);
    out.v_t.push_back(x.u_t);
    out.v_r.push_back(x.u_r);
  }
  return out;
}

std::vector<double> interior_sup(const SpacetimeGrid& grid, Unknown which, std::span<const double> s_list,
                                 const SpacetimeGrid* companion, std::size_t probes) {
  if (probes < 2) throw DomainError("interior_sup: need at least two probes");
  std::vector<double> out;
  out.reserve(s_list.size());
  for (double s : s_list) {
    if (s < 2.0) throw DomainError("interior_sup: requires s >= 2");
    const double edge = 0.5 * s * s - 1.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < probes; ++i) {
      const double r = edge * static_cast<double>(i) / static_cast<double>(probes - 1);
      const double t = std::sqrt(s * s + r * r);
      if (!grid.in_domain_of_dependence(t, r) && grid.boundary != Boundary::Dirichlet) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "interior probe outside the domain of dependence at (s, r) = (%.17g, %.17g)", s,
                      r);
        throw DomainError(buf);
      }
      double value = std::abs(grid.sample(which, t, r).u);
      if (companion) value = std::hypot(value, companion->sample(which, t, r).u);
      sup = std::max(sup, value);
    }
    out.push_back(sup);
  }
  return out;
}

DecayFit fit_decay(std::span<const double> s, std::span<const double> sup, double s_min, double s_max) {
  if (s.size() != sup.size()) throw DomainError("fit_decay: series lengths differ");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < s_min - kSlack || s[i] > s_max + kSlack) continue;
    if (!(sup[i] > 0.0) || !(s[i] > 0.0)) {
      throw DomainError("fit_decay: nonpositive value at s=" + std::to_string(s[i]));
    }
    x.push_back(std::log(s[i]));
    y.push_back(std::log(sup[i]));
  }
  if (x.size() < 6) throw DomainError("fit_decay: fewer than six slices in the window");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_decay: degenerate window");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.exponent * x[i]);
    ssr += e * e;
  }
  fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
  fit.count = x.size();
  fit.s_min = std::exp(*std::min_element(x.begin(), x.end()));
  fit.s_max = std::exp(*std::max_element(x.begin(), x.end()));
  return fit;
}

ConvergenceResult manufactured_convergence(const EvolutionConfig& config, std::span<const std::size_t> n_r) {
  if (!config.exact) throw ValidationError("manufactured_convergence: config carries no exact solution");
  if (n_r.size() < 2) throw ValidationError("manufactured_convergence: need at least two grids");
  ConvergenceResult result;
  for (std::size_t n : n_r) {
    EvolutionConfig c = config;
    c.n_r = n;
    c.stride = c.steps();
    const SpacetimeGrid grid = evolve_radial(c);
    const auto& last = grid.values[0].back();
    double err = 0.0;
    for (std::size_t j = 0; j < last.size(); ++j) {
      err = std::max(err, std::abs(last[j] - c.exact->u(c.t_end, grid.dr * static_cast<double>(j))));
    }
    result.n_r.push_back(n);
    result.errors.push_back(err);
  }
  for (std::size_t i = 1; i < result.errors.size(); ++i) {
    const double ratio = static_cast<double>(result.n_r[i]) / static_cast<double>(result.n_r[i - 1]);
    const double a = result.errors[i - 1];
    const double b = result.errors[i];
    result.orders.push_back(a > 0.0 && b > 0.0 ? std::log(a / b) / std::log(ratio) : 0.0);
  }
  return result;
}

ExactSolution gaussian_decay_solution() {
  auto u = [](double t, double r) { return std::exp(-t - r * r); };
  return {u,
          [u](double t, double r) { return -u(t, r); },
          [u](double t, double r) { return -2.0 * r * u(t, r); },
          [u](double t, double r) { return u(t, r); },
          [u](double t, double r) { return (4.0 * r * r - 2.0) * u(t, r); }};
}

}  // namespace ehf
