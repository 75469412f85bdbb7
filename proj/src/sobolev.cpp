#include "ehf/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "ehf/errors.hpp"
#include "ehf/parallel.hpp"

namespace ehf {

namespace {

constexpr std::size_t kProbeCount = 64;
constexpr double kExteriorOffset = 4.0;
constexpr double kBumpWidth = 1.0;
constexpr double kTimeScale = 4.0;
constexpr double kReachWidths = 6.0;  // e^{-36} is below 1e-12 of the peak

struct QuadNode {
  double r;
  double w;  // Simpson weight times 4 pi r^2
};

std::vector<QuadNode> region_quadrature(double a, double b, std::size_t intervals) {
  const std::size_t n = std::max<std::size_t>(2, intervals + intervals % 2);
  const double h = (b - a) / static_cast<double>(n);
  std::vector<QuadNode> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = i == n ? b : a + h * static_cast<double>(i);
    const double simpson = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    nodes[i] = {r, simpson * h / 3.0 * 4.0 * std::numbers::pi * r * r};
  }
  return nodes;
}

// Squared-norm sums of the radial reductions. With v' and v'' the first and
// second radial derivatives and q = v'/r, the angular averages of n_a^2,
// n_a^4 and n_a^2 n_b^2 (1/3, 1/5, 1/15) give
//   sum_a ||d_a v|| = sqrt(3) ||v'||,
//   sum_ab ||d_a d_b v|| = 3 ||diag|| + 6 ||offdiag||.
struct NormSums {
  double zero = 0.0;
  double first = 0.0;
  double diag = 0.0;
  double offdiag = 0.0;

  void add(double w, double v, double v1, double v2, double q) {
    zero += w * v * v;
    first += w * v1 * v1;
    diag += w * (v2 * v2 / 5.0 + 4.0 / 15.0 * v2 * q + 8.0 / 15.0 * q * q);
    offdiag += w * (v2 - q) * (v2 - q) / 15.0;
  }

  double rhs() const {
    return std::sqrt(zero) + std::sqrt(3.0) * std::sqrt(first) + 3.0 * std::sqrt(std::max(diag, 0.0)) +
           6.0 * std::sqrt(offdiag);
  }
};

std::vector<double> default_probes(double a, double b, double log_start, std::uint64_t seed) {
  std::vector<double> probes{a};
  const double la = std::log(log_start);
  const double lb = std::log(b);
  const double step = (lb - la) / static_cast<double>(kProbeCount + 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4);
  for (std::size_t i = 0; i < kProbeCount; ++i) {
    const double shift = seed == 0 ? 0.0 : jitter(rng);
    probes.push_back(std::exp(la + step * (static_cast<double>(i + 1) + shift)));
  }
  probes.push_back(b);
  return probes;
}

// Sup of f over the probes; with refine set, a bounded Brent search on the
// bracket around the best probe sharpens the maximum.
std::pair<double, double> probe_sup(const std::function<double(double)>& f, const std::vector<double>& probes,
                                    bool refine) {
  double best = -1.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double v = f(probes[i]);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  double best_r = probes[arg];
  if (refine && probes.size() >= 3) {
    const double lo = probes[arg == 0 ? 0 : arg - 1];
    const double hi = probes[std::min(arg + 1, probes.size() - 1)];
    const auto [r, neg] = boost::math::tools::brent_find_minima([&f](double r) { return -f(r); }, lo, hi, 40);
    if (-neg > best) {
      best = -neg;
      best_r = r;
    }
  }
  return {best, best_r};
}

void check_probes(const std::vector<double>& probes, double a, double b) {
  for (double r : probes) {
    if (r < a - 1e-12 || r > b + 1e-12) {
      throw DomainError("sobolev: probe r=" + std::to_string(r) + " outside region [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
    }
  }
}

RatioSample finish(double lhs, double rhs, double argmax_r) {
  RatioSample out;
  out.lhs_sup = lhs;
  out.rhs = rhs;
  out.argmax_r = argmax_r;
  if (rhs > 0.0) {
    out.ratio = lhs / rhs;
  } else if (lhs > 0.0) {
    throw NumericalFailure("sobolev: zero right-hand side with nonzero left-hand side");
  }
  return out;
}

std::string format_param(const char* fmt, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

std::string_view to_string(Inequality id) noexcept {
  switch (id) {
    case Inequality::ExteriorBar:
      return "ext_bar";
    case Inequality::ExteriorFlat:
      return "ext_flat";
    case Inequality::Interior:
      return "interior";
  }
  return "unknown";
}

RatioSample exterior_ratio(const RadialSpacetimeFn& u, const TimeFunctionTable& table, Inequality variant,
                           const RatioOptions& options) {
  if (variant == Inequality::Interior) throw DomainError("exterior_ratio: interior variant requested");
  const double s = table.s();
  if (s < 2.0) throw DomainError("exterior_ratio: requires s >= 2");
  const bool bar = variant == Inequality::ExteriorBar;
  const double a = bar ? 0.5 * s * s - 1.0 : 0.5 * s * s;
  const double b = options.r_end;
  if (!(b > a)) throw DomainError("exterior_ratio: r_end must lie beyond the region start");
  if (b > table.r_max()) throw DomainError("exterior_ratio: r_end beyond the time-function table");

  NormSums sums;
  for (const auto& node : region_quadrature(a, b, options.nodes)) {
    const double r = node.r;
    const RadialJet2 j = u(table.eval_T(r), r);
    double v1 = j.u_r;
    double v2 = j.u_rr;
    if (bar) {
      const double tr = table.eval_drT(r);
      const double trr = table.eval_drrT(r);
      v1 = j.u_t * tr + j.u_r;
      v2 = j.u_tt * tr * tr + 2.0 * j.u_tr * tr + j.u_rr + j.u_t * trr;
    }
    sums.add(node.w, j.u, v1, v2, v1 / r);
  }

  const double p = options.lhs_power;
  auto lhs = [&](double r) { return std::pow(1.0 + r, p) * std::abs(u(table.eval_T(r), r).u); };
  const bool explicit_probes = !options.probes.empty();
  if (explicit_probes) check_probes(options.probes, a, b);
  const auto [sup, arg] = probe_sup(lhs, explicit_probes ? options.probes : default_probes(a, b, a, options.seed), !explicit_probes);
  return finish(sup, sums.rhs(), arg);
}

RatioSample interior_ratio(const RadialSpacetimeFn& u, double s, const RatioOptions& options) {
  if (s < 2.0) throw DomainError("interior_ratio: requires s >= 2");
  const double b = 0.5 * s * s - 1.0;
  auto hyperboloid = [s](double r) { return std::sqrt(s * s + r * r); };

  NormSums sums;
  for (const auto& node : region_quadrature(0.0, b, options.nodes)) {
    const double r = node.r;
    const double t = hyperboloid(r);
    const RadialJet2 j = u(t, r);
    // L_a u = n_a B and L_b L_a u = n_a n_b B2 + (delta_ab - n_a n_b) t B / r.
    const double boost = r * j.u_t + t * j.u_r;
    const double boost2 = r * r * j.u_tt + 2.0 * r * t * j.u_tr + t * t * j.u_rr + r * j.u_r + t * j.u_t;
    const double q = r > 0.0 ? t * boost / r : t * (j.u_t + t * j.u_rr);
    sums.add(node.w, j.u, boost, boost2, q);
  }

  auto lhs = [&](double r) {
    const double t = hyperboloid(r);
    return std::pow(t, 1.5) * std::abs(u(t, r).u);
  };
  const bool explicit_probes = !options.probes.empty();
  if (explicit_probes) check_probes(options.probes, 0.0, b);
  const auto [sup, arg] =
      probe_sup(lhs, explicit_probes ? options.probes : default_probes(0.0, b, 1e-2 * b, options.seed), !explicit_probes);
  return finish(sup, sums.rhs(), arg);
}

TestFamily::TestFamily(std::string name, Generator generator)
    : name_(std::move(name)), generator_(std::move(generator)) {}

std::vector<FamilyMember> TestFamily::members(Inequality id, const TimeFunctionTable& table, int level) const {
  return generator_(id, table, level);
}

RadialSpacetimeFn gaussian_bump(double amplitude, double centre, double width, double t_centre, double t_scale) {
  return [=](double t, double r) {
    const double w2 = width * width;
    const double dm = r - centre;
    const double dp = r + centre;
    const double em = std::exp(-dm * dm / w2);
    const double ep = std::exp(-dp * dp / w2);
    const double g = em + ep;
    const double g1 = -2.0 * (dm * em + dp * ep) / w2;
    const double g2 = (4.0 * dm * dm / (w2 * w2) - 2.0 / w2) * em + (4.0 * dp * dp / (w2 * w2) - 2.0 / w2) * ep;
    const double tau2 = t_scale * t_scale;
    const double dt = t - t_centre;
    const double p = std::exp(-dt * dt / tau2);
    const double p1 = -2.0 * dt / tau2 * p;
    const double p2 = (4.0 * dt * dt / (tau2 * tau2) - 2.0 / tau2) * p;
    RadialJet2 j;
    j.u = amplitude * g * p;
    j.u_t = amplitude * g * p1;
    j.u_r = amplitude * g1 * p;
    j.u_tt = amplitude * g * p2;
    j.u_tr = amplitude * g1 * p1;
    j.u_rr = amplitude * g2 * p;
    return j;
  };
}

TestFamily TestFamily::gaussian(double amplitude) {
  return TestFamily("gaussian", [amplitude](Inequality id, const TimeFunctionTable& table, int level) {
    const double s = table.s();
    std::vector<FamilyMember> out;
    if (id == Inequality::Interior) {
      const double edge = 0.5 * s * s - 1.0;
      const std::array<std::pair<double, double>, 2> shapes{
          {{0.0, std::max(0.5 * edge, 0.5)}, {0.5 * edge, std::max(0.25 * edge, 0.25)}}};
      for (const auto& [centre, width] : shapes) {
        out.push_back({format_param("rc=%g;w=%g", centre, width),
                       gaussian_bump(amplitude, centre, width, std::sqrt(s * s + centre * centre), kTimeScale),
                       centre + kReachWidths * width});
      }
      return out;
    }
    const double start = id == Inequality::ExteriorBar ? 0.5 * s * s - 1.0 : 0.5 * s * s;
    for (int j = 0; j <= level + 1; ++j) {
      const double offset = kExteriorOffset * std::ldexp(1.0, j);
      const double centre = start + offset;
      const double t_centre = centre <= table.r_max() ? table.eval_T(centre) : table.exterior_time();
      out.push_back({format_param("offset=%g;w=%g", offset, kBumpWidth),
                     gaussian_bump(amplitude, centre, kBumpWidth, t_centre, kTimeScale),
                     centre + kReachWidths * kBumpWidth});
    }
    return out;
  });
}

TestFamily TestFamily::zero() {
  return TestFamily("zero", [](Inequality id, const TimeFunctionTable& table, int level) {
    std::vector<FamilyMember> out = gaussian(0.0).members(id, table, level);
    for (auto& m : out) m.param = "zero;" + m.param;
    return out;
  });
}

double ConstantEstimate::finest_spread() const {
  if (ratios.size() < 2) return 0.0;
  const double prev = ratios[ratios.size() - 2];
  const double last = ratios.back();
  if (prev == 0.0) return last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(last - prev) / std::abs(prev);
}

std::vector<ConstantEstimate> constant_sweep(const TestFamily& family, std::span<const double> s_list,
                                             const SweepOptions& options) {
  if (options.refinements < 2) throw ValidationError("constant_sweep: needs at least two refinement levels");
  struct Task {
    Inequality id;
    double s;
    int level;
    std::vector<std::pair<std::string, double>> ratios;
  };
  std::vector<Task> tasks;
  for (Inequality id : options.inequalities) {
    for (double s : s_list) {
      for (int k = 0; k < options.refinements; ++k) tasks.push_back({id, s, k, {}});
    }
  }

  parallel_for(tasks.size(), [&](std::size_t i) {
    Task& task = tasks[i];
    const double s = task.s;
    // A short table fixes the exterior time; the working table then covers every member's reach.
    const TimeFunctionTable probe_table = build_time_function(s, 0.5 * s * s + 2.0);
    const auto members = family.members(task.id, probe_table, task.level);
    double reach = 0.5 * s * s + 2.0;
    for (const auto& m : members) reach = std::max(reach, m.reach);
    const TimeFunctionTable table = build_time_function(s, reach + 1.0);
    RatioOptions ro;
    ro.nodes = options.base_nodes << task.level;
    ro.r_end = reach;
    ro.lhs_power = options.lhs_power;
    ro.seed = options.seed;
    for (const auto& m : family.members(task.id, table, task.level)) {
      const RatioSample sample =
          task.id == Inequality::Interior ? interior_ratio(m.u, s, ro) : exterior_ratio(m.u, table, task.id, ro);
      task.ratios.emplace_back(m.param, sample.ratio);
    }
  });

  auto flag = [&](ConstantEstimate& e) {
    for (std::size_t k = 1; k < e.ratios.size(); ++k) {
      const double prev = e.ratios[k - 1];
      if (prev > 0.0 && (e.ratios[k] - prev) / prev > options.growth_alarm) e.alarm = true;
    }
  };

  std::vector<ConstantEstimate> out;
  for (Inequality id : options.inequalities) {
    for (double s : s_list) {
      std::vector<std::string> order;
      std::map<std::string, ConstantEstimate> by_param;
      ConstantEstimate sup{id, s, family.name(), "sup", {}, {}, false};
      for (const Task& task : tasks) {
        if (task.id != id || task.s != s) continue;
        double level_sup = 0.0;
        for (const auto& [param, ratio] : task.ratios) {
          auto [it, inserted] = by_param.try_emplace(param, ConstantEstimate{id, s, family.name(), param, {}, {}, false});
          if (inserted) order.push_back(param);
          it->second.levels.push_back(task.level);
          it->second.ratios.push_back(ratio);
          level_sup = std::max(level_sup, ratio);
        }
        sup.levels.push_back(task.level);
        sup.ratios.push_back(level_sup);
      }
      for (const auto& param : order) {
        ConstantEstimate& e = by_param.at(param);
        flag(e);
        out.push_back(std::move(e));
      }
      flag(sup);
      out.push_back(std::move(sup));
    }
  }
  return out;
}

}  // namespace ehf
