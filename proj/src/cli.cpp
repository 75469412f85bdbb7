#include "ehf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ehf/energy.hpp"
#include "ehf/errors.hpp"
#include "ehf/evolution.hpp"
#include "ehf/foliation.hpp"
#include "ehf/sobolev.hpp"

#ifndef EHF_VERSION
#define EHF_VERSION "0.0.0"
#endif

namespace ehf {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Products of one run, held in memory until the run has succeeded.
struct Products {
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  json headline = json::object();
};

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (auto c : columns) {
      if (!first) out_ += ',';
      out_ += c;
      first = false;
    }
    out_ += '\n';
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((append(cells, first)), ...);
    out_ += '\n';
  }
  std::string str() && { return std::move(out_); }

 private:
  void append(double x, bool& first) { append(num(x), first); }
  void append(std::string_view x, bool& first) {
    if (!first) out_ += ',';
    out_ += x;
    first = false;
  }
  void append(const std::string& x, bool& first) { append(std::string_view(x), first); }
  void append(const char* x, bool& first) { append(std::string_view(x), first); }
  void append(int x, bool& first) { append(std::to_string(x), first); }
  void append(std::size_t x, bool& first) { append(std::to_string(x), first); }

  std::string out_;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void require_at_least(const std::vector<double>& s_list, double lo, const char* what) {
  if (s_list.empty()) throw ValidationError(std::string(what) + ": empty s list");
  for (double s : s_list) {
    if (s < lo) throw ValidationError(std::string(what) + ": s=" + num(s) + " below " + num(lo));
  }
}

// ---------------------------------------------------------------- foliate

Products run_foliate(const RunConfig& cfg) {
  const auto s_list = cfg.number_list("s");
  require_at_least(s_list, 1.0, "foliate");
  const double r_max = cfg.number("r_max");
  const double tol = cfg.number("tol");
  if (!(r_max > 0.0)) throw ValidationError("foliate: r_max must be positive");
  if (!(tol > 0.0 && tol <= 1e-4)) throw ValidationError("foliate: tol must lie in (0, 1e-4]");

  Csv csv{"s", "r", "T", "drT", "dsT", "region"};
  double interior_residual = 0.0;
  double exterior_spread = 0.0;
  for (double s : s_list) {
    const TimeFunctionTable table = build_time_function(s, r_max, tol);
    double ext_lo = INFINITY, ext_hi = -INFINITY;
    const auto r = table.r_nodes();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double t = table.t_values()[i];
      const Region region = region_of(s, r[i]);
      csv.row(s, r[i], t, table.dr_values()[i], table.ds_values()[i], to_string(region));
      if (region == Region::Interior) {
        interior_residual = std::max(interior_residual, std::abs(t * t - (s * s + r[i] * r[i])) / (1.0 + t * t));
      } else if (region == Region::Exterior) {
        ext_lo = std::min(ext_lo, t);
        ext_hi = std::max(ext_hi, t);
      }
    }
    if (ext_hi >= ext_lo) exterior_spread = std::max(exterior_spread, ext_hi - ext_lo);
  }
  Products p;
  p.files.emplace_back("foliate.csv", std::move(csv).str());
  p.headline["max_interior_relative_residual"] = interior_residual;
  p.headline["max_exterior_spread"] = exterior_spread;
  return p;
}

// ----------------------------------------------------------------- energy

RadialField energy_field(const RunConfig& cfg) {
  const std::string& kind = cfg.text("field");
  const double a = cfg.number("amplitude");
  const double rc = cfg.number("centre");
  const double w = cfg.number("width");
  if (!(w > 0.0)) throw ValidationError("energy: width must be positive");
  if (kind == "gaussian") {
    return [=](double, double r) -> std::array<double, 3> {
      const double em = std::exp(-(r - rc) * (r - rc) / (w * w));
      const double ep = std::exp(-(r + rc) * (r + rc) / (w * w));
      return {a * (em + ep), 0.0, -2.0 * a * ((r - rc) * em + (r + rc) * ep) / (w * w)};
    };
  }
  if (kind == "free_wave") {
    // (G(t-r) - G(t+r)) / r with G(y) = a e^{-(y-rc)^2/w^2}.
    auto g1 = [=](double y) { return -2.0 * a * (y - rc) / (w * w) * std::exp(-(y - rc) * (y - rc) / (w * w)); };
    auto g2 = [=](double y) {
      const double z = (y - rc) / w;
      return a * (4.0 * z * z - 2.0) / (w * w) * std::exp(-z * z);
    };
    auto g0 = [=](double y) { return a * std::exp(-(y - rc) * (y - rc) / (w * w)); };
    return [=](double t, double r) -> std::array<double, 3> {
      if (r < 1e-6) return {-2.0 * g1(t), -2.0 * g2(t), 0.0};
      const double v = (g0(t - r) - g0(t + r)) / r;
      const double vt = (g1(t - r) - g1(t + r)) / r;
      const double vr = -(g1(t - r) + g1(t + r)) / r - v / r;
      return {v, vt, vr};
    };
  }
  throw ValidationError("energy: unknown field '" + kind + "' (gaussian | free_wave)");
}

Grading parse_grading(const std::string& text) {
  if (text == "geometric") return Grading::Geometric;
  if (text == "uniform") return Grading::Uniform;
  throw ValidationError("unknown grading '" + text + "' (geometric | uniform)");
}

Products run_energy(const RunConfig& cfg) {
  const auto s_list = cfg.number_list("s");
  require_at_least(s_list, 1.0, "energy");
  const double eta = cfg.number("eta");
  const double c = cfg.number("c");
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("energy: eta must lie in (0, 1]");
  if (c < 0.0) throw ValidationError("energy: c must be nonnegative");
  EnergyOptions opt;
  opt.r_max = cfg.number("r_max");
  opt.nodes = cfg.count("nodes");
  opt.grading = parse_grading(cfg.text("grading"));
  opt.ode_tol = cfg.number("tol");
  if (opt.nodes < 16) throw ValidationError("energy: nodes must be at least 16");
  if (!(opt.r_max > 0.0)) throw ValidationError("energy: r_max must be positive");
  const RadialField field = energy_field(cfg);

  const EnergyReport report = energy_series(s_list, field, eta, c, opt);
  Csv csv{"s", "E_total", "E_int", "E_tran", "E_ext", "eta", "c", "form_gap"};
  double max_gap = 0.0, max_rel_gap = 0.0;
  for (const auto& sl : report.slices) {
    csv.row(sl.s, sl.frame, sl.by_region[0], sl.by_region[1], sl.by_region[2], eta, c, sl.form_gap);
    max_gap = std::max(max_gap, sl.form_gap);
    max_rel_gap = std::max(max_rel_gap, sl.form_gap / (1.0 + sl.flat));
  }
  Products p;
  p.files.emplace_back("energy.csv", std::move(csv).str());
  p.headline["form_gap_max"] = max_gap;
  p.headline["form_gap_relative_max"] = max_rel_gap;
  return p;
}

// ---------------------------------------------------------------- sobolev

struct SobolevOutcome {
  Products products;
  bool alarm = false;
  bool self_test = false;
};

SobolevOutcome run_sobolev(const RunConfig& cfg) {
  const auto s_list = cfg.number_list("s");
  require_at_least(s_list, 2.0, "sobolev");
  const std::string& name = cfg.text("family");
  const double amplitude = cfg.number("amplitude");
  TestFamily family = name == "gaussian" ? TestFamily::gaussian(amplitude)
                      : name == "zero"   ? TestFamily::zero()
                                         : throw ValidationError("sobolev: unknown family '" + name + "'");
  SweepOptions opt;
  opt.refinements = static_cast<int>(cfg.count("refinements"));
  opt.base_nodes = cfg.count("nodes");
  opt.seed = cfg.seed;
  if (opt.refinements < 2) throw ValidationError("sobolev: refinements must be at least 2");
  if (opt.base_nodes < 16) throw ValidationError("sobolev: nodes must be at least 16");
  const bool self_test = cfg.flag("self_test");
  if (self_test) opt.lhs_power = 2.0;
  const std::string& which = cfg.text("inequality");
  if (which != "all") {
    bool found = false;
    for (Inequality id : {Inequality::ExteriorBar, Inequality::ExteriorFlat, Inequality::Interior}) {
      if (to_string(id) == which) {
        opt.inequalities = {id};
        found = true;
      }
    }
    if (!found) throw ValidationError("sobolev: unknown inequality '" + which + "'");
  }

  const auto estimates = constant_sweep(family, s_list, opt);
  Csv csv{"inequality", "s", "family", "param", "refinement", "ratio", "alarm"};
  SobolevOutcome out;
  out.self_test = self_test;
  std::size_t alarms = 0;
  double max_spread = 0.0, max_ratio = 0.0;
  for (const auto& e : estimates) {
    for (std::size_t k = 0; k < e.ratios.size(); ++k) {
      csv.row(to_string(e.inequality), e.s, e.family, e.param, e.levels[k], e.ratios[k], e.alarm ? 1 : 0);
      max_ratio = std::max(max_ratio, e.ratios[k]);
    }
    if (e.alarm) ++alarms;
    if (e.param == "sup") max_spread = std::max(max_spread, e.finest_spread());
  }
  out.alarm = alarms > 0;
  out.products.files.emplace_back("sobolev.csv", std::move(csv).str());
  out.products.headline["alarms"] = alarms;
  out.products.headline["self_test"] = self_test;
  out.products.headline["max_ratio"] = max_ratio;
  out.products.headline["max_finest_spread"] = max_spread;
  return out;
}

// ----------------------------------------------------------------- evolve

FieldConfig field_config(const RunConfig& cfg, const std::string& prefix) {
  FieldConfig f;
  f.mass = cfg.number(prefix + "_mass");
  f.coupling = Coupling::parse(cfg.text(prefix + "_coupling"));
  const auto profile = parse_profile(cfg.text(prefix + "_profile"));
  if (!profile) throw ValidationError("evolve: unknown profile '" + cfg.text(prefix + "_profile") + "'");
  f.data.profile = *profile;
  f.data.amplitude = cfg.number(prefix + "_amplitude");
  f.data.width = cfg.number(prefix + "_width");
  f.data.centre = cfg.number(prefix + "_centre");
  f.data.tail_a = cfg.number(prefix + "_tail_a");
  return f;
}

Products run_evolve(const RunConfig& cfg) {
  EvolutionConfig ec;
  ec.n_r = cfg.count("n_r");
  ec.t_start = cfg.number("t_start");
  ec.cfl = cfg.number("cfl");
  ec.stride = cfg.count("stride");
  const auto boundary = parse_boundary(cfg.text("boundary"));
  if (!boundary) throw ValidationError("evolve: unknown boundary '" + cfg.text("boundary") + "'");
  ec.boundary = *boundary;
  ec.u = field_config(cfg, "u");
  if (cfg.flag("v")) ec.v = field_config(cfg, "v");
  const double eta = cfg.number("eta");
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("evolve: eta must lie in (0, 1]");

  const auto s_list = cfg.number_list("s");
  require_at_least(s_list, 2.0, "evolve");
  const double extent = cfg.number("slice_extent");
  const std::size_t slice_nodes = cfg.count("slice_nodes");
  if (!(extent > 0.0)) throw ValidationError("evolve: slice_extent must be positive");
  if (slice_nodes < 16) throw ValidationError("evolve: slice_nodes must be at least 16");

  // Leaves, their sampled extent and the rectangle they need.
  std::vector<TimeFunctionTable> tables;
  double t_needed = ec.t_start, r_needed = 0.0;
  for (double s : s_list) {
    const double r_end = 0.5 * s * s + extent;
    tables.push_back(build_time_function(s, r_end));
    const double t_far = tables.back().eval_T(r_end);
    if (t_far < ec.t_start) throw ValidationError("evolve: slice s=" + num(s) + " starts before t_start");
    t_needed = std::max(t_needed, t_far);
    r_needed = std::max(r_needed, r_end + t_far - ec.t_start);
  }
  ec.t_end = cfg.text("t_end") == "auto" ? t_needed + 0.5 : cfg.number("t_end");
  ec.r_max = cfg.text("r_max") == "auto" ? r_needed + 2.0 : cfg.number("r_max");
  if (ec.t_end < t_needed) {
    throw ValidationError("evolve: t_end=" + num(ec.t_end) + " below the last slice time " + num(t_needed));
  }
  if (ec.r_max < r_needed) {
    throw ValidationError("evolve: r_max=" + num(ec.r_max) + " lets the boundary reach the slices (need " +
                          num(r_needed) + ")");
  }
  ec.validate();

  std::string mode = cfg.text("amplitude_mode");
  if (mode == "auto") mode = ec.u.mass > 0.0 && ec.u.coupling.empty() && !ec.v ? "analytic" : "abs";
  if (mode != "abs" && mode != "analytic") throw ValidationError("evolve: unknown amplitude_mode '" + mode + "'");
  std::vector<double> window{s_list.front(), s_list.back()};
  if (cfg.text("decay_window") != "auto") window = cfg.number_list("decay_window");
  if (window.size() != 2 || window[1] <= window[0]) throw ValidationError("evolve: decay_window must be s_min,s_max");

  const SpacetimeGrid grid = evolve_radial(ec);
  std::optional<SpacetimeGrid> companion;
  if (mode == "analytic") companion = evolve_companion(ec);

  Products p;
  p.headline["dr"] = grid.dr;
  p.headline["dt"] = grid.dt;
  p.headline["t_end"] = ec.t_end;
  p.headline["r_max"] = ec.r_max;
  json summary = json::object();
  summary["amplitude_mode"] = mode;
  summary["dr"] = grid.dr;
  summary["dt"] = grid.dt;

  std::vector<Unknown> unknowns{Unknown::U};
  if (ec.v) unknowns.push_back(Unknown::V);
  for (Unknown which : unknowns) {
    const std::string tag = which == Unknown::U ? "u" : "v";
    const FieldConfig& fc = which == Unknown::U ? ec.u : *ec.v;
    Csv slices{"s", "r", "t", "u", "ut", "ur"};
    Csv energy{"s", "E_total", "E_int", "E_tran", "E_ext", "eta", "c", "form_gap"};
    std::vector<double> energies;
    for (std::size_t k = 0; k < s_list.size(); ++k) {
      const double s = s_list[k];
      const SliceSample sample = slice_points(tables[k], tables[k].r_max(), slice_nodes);
      const FieldOnSlice f = sample_on_slice(grid, which, sample);
      for (std::size_t i = 0; i < sample.size(); ++i) {
        slices.row(s, sample.nodes[i].r, sample.nodes[i].t, f.v[i], f.v_t[i], f.v_r[i]);
      }
      const auto frame = energy_frame_form(sample, f, eta, fc.mass, tables[k]);
      const auto flat = energy_flat_form(sample, f, eta, fc.mass, tables[k]);
      energy.row(s, frame.total, frame.by_region[0], frame.by_region[1], frame.by_region[2], eta, fc.mass,
                 std::abs(frame.total - flat.total));
      energies.push_back(frame.total);
    }
    const SpacetimeGrid* partner = which == Unknown::U && companion ? &*companion : nullptr;
    const auto sup = interior_sup(grid, which, s_list, partner);
    Csv decay{"s", "sup", "region"};
    for (std::size_t k = 0; k < s_list.size(); ++k) decay.row(s_list[k], sup[k], "interior");

    json entry = json::object();
    const double e0 = energies.front();
    const double e_max = *std::max_element(energies.begin(), energies.end());
    entry["energy_growth"] = e0 > 0.0 ? json(e_max / e0) : json(nullptr);
    entry["sup_max"] = *std::max_element(sup.begin(), sup.end());
    const bool positive = std::all_of(sup.begin(), sup.end(), [](double x) { return x > 0.0; });
    if (positive) {
      const DecayFit fit = fit_decay(s_list, sup, window[0], window[1]);
      entry["fit"] = {{"exponent", fit.exponent}, {"stderr", fit.stderr_}, {"intercept", fit.intercept},
                      {"count", fit.count},       {"s_min", fit.s_min},    {"s_max", fit.s_max},
                      {"region", "interior"}};
      p.headline["decay_exponent_" + tag] = fit.exponent;
    } else {
      entry["fit"] = nullptr;
    }
    p.headline["energy_growth_" + tag] = entry["energy_growth"];
    summary[tag] = entry;
    p.files.emplace_back("slices_" + tag + ".csv", std::move(slices).str());
    p.files.emplace_back("energy_" + tag + ".csv", std::move(energy).str());
    p.files.emplace_back("decay_" + tag + ".csv", std::move(decay).str());
  }
  p.files.emplace_back("summary.json", summary.dump(2) + "\n");
  return p;
}

// --------------------------------------------------------------- manifest

json params_json(const RunConfig& cfg) {
  json params = json::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  return params;
}

void write_manifest(const RunConfig& cfg, const Products& products, const std::string& status,
                    const std::string& reason) {
  std::filesystem::create_directories(cfg.out_dir);
  std::string digest_input = params_json(cfg).dump();
  json outputs = json::array();
  for (const auto& [name, content] : products.files) {
    write_file(cfg.out_dir / name, content);
    outputs.push_back(name);
    digest_input += '\n' + name + '\n' + content;
  }
  json m = json::object();
  m["tool"] = "ehf";
  m["version"] = version();
  m["subcommand"] = cfg.subcommand;
  m["params"] = params_json(cfg);
  m["seed"] = cfg.seed;
  m["status"] = status;
  m["reason"] = reason;
  m["outputs"] = outputs;
  m["headline"] = products.headline;
  m["hash"] = fnv1a_hex(digest_input);
  m["timestamp"] = utc_timestamp();
  write_file(cfg.out_dir / (cfg.subcommand + "_manifest.json"), m.dump(2) + "\n");
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

}  // namespace

std::string version() { return EHF_VERSION; }

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(const RunConfig& config, std::ostream& err) {
  if (config.subcommand == "report") return report(config.out_dir, err);
  Products products;
  try {
    if (config.subcommand == "foliate") {
      products = run_foliate(config);
    } else if (config.subcommand == "energy") {
      products = run_energy(config);
    } else if (config.subcommand == "sobolev") {
      SobolevOutcome s = run_sobolev(config);
      products = std::move(s.products);
      if (s.self_test) {
        products.headline["negative_control_fired"] = s.alarm;
        if (!s.alarm) {
          const std::string reason = "self-test alarm did not fire";
          write_manifest(config, products, "failed", reason);
          err << "ehf: status=numerical_failure reason=" << reason << '\n';
          return kExitNumerical;
        }
      } else if (s.alarm) {
        const std::string reason = "inequality-violation alarm: a ratio grew by more than 25% per refinement level";
        write_manifest(config, products, "failed", reason);
        err << "ehf: status=numerical_failure reason=" << reason << '\n';
        return kExitNumerical;
      }
    } else if (config.subcommand == "evolve") {
      products = run_evolve(config);
    } else {
      throw ValidationError("unknown subcommand '" + config.subcommand + "'");
    }
  } catch (const ValidationError& e) {
    err << "ehf: status=validation_error reason=" << one_line(e.what()) << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    const std::string reason = one_line(e.what());
    try {
      write_manifest(config, Products{}, "failed", reason);
    } catch (const std::exception&) {
      // the reason line below is the remaining channel
    }
    err << "ehf: status=numerical_failure reason=" << reason << '\n';
    return kExitNumerical;
  }
  write_manifest(config, products, "ok", "");
  return kExitOk;
}

int report(const std::filesystem::path& dir, std::ostream& err) {
  json runs = json::array();
  json problems = json::array();
  double form_gap = 0.0;
  bool have_gap = false;
  json exponents = json::object();
  std::size_t alarms = 0;

  std::vector<std::filesystem::path> manifests;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.size() > 14 && name.ends_with("_manifest.json")) {
        manifests.push_back(entry.path());
      }
    }
  } else if (std::filesystem::exists(dir)) {
    err << "ehf: status=validation_error reason=" << dir.string() << " is not a directory\n";
    return kExitValidation;
  }
  std::sort(manifests.begin(), manifests.end());

  for (const auto& path : manifests) {
    json m;
    try {
      std::ifstream in(path);
      m = json::parse(in);
      if (!m.is_object() || !m.contains("subcommand") || !m.contains("status")) {
        throw std::runtime_error("missing required fields");
      }
    } catch (const std::exception& e) {
      problems.push_back({{"file", path.filename().string()}, {"problem", one_line(e.what())}});
      continue;
    }
    json run = json::object();
    run["file"] = path.filename().string();
    run["subcommand"] = m.value("subcommand", "");
    run["status"] = m.value("status", "");
    run["failed"] = m.value("status", "") != "ok";
    run["reason"] = m.value("reason", "");
    run["hash"] = m.value("hash", "");
    run["headline"] = m.value("headline", json::object());
    const json& h = run["headline"];
    if (h.contains("form_gap_max") && h["form_gap_max"].is_number()) {
      form_gap = std::max(form_gap, h["form_gap_max"].get<double>());
      have_gap = true;
    }
    for (const char* key : {"decay_exponent_u", "decay_exponent_v"}) {
      if (h.contains(key)) exponents[key] = h[key];
    }
    if (h.contains("alarms") && h["alarms"].is_number()) alarms += h["alarms"].get<std::size_t>();
    runs.push_back(run);
  }

  json summary = json::object();
  summary["tool"] = "ehf";
  summary["version"] = version();
  summary["runs"] = runs;
  summary["problems"] = problems;
  json headline = json::object();
  if (have_gap) headline["form_gap_max"] = form_gap;
  if (!exponents.empty()) headline["decay_exponents"] = exponents;
  if (!runs.empty()) headline["sobolev_alarms"] = alarms;
  summary["headline"] = headline;
  try {
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "ehf: status=numerical_failure reason=" << one_line(e.what()) << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Numerical workbench for hyperboloidal-flat leaves of Minkowski space"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  struct Sub {
    CLI::App* app;
    std::string config_file;
    std::string out = ".";
    std::vector<std::string> tokens;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  for (const char* name : {"foliate", "energy", "sobolev", "evolve", "report"}) {
    auto sub = std::make_unique<Sub>();
    const bool is_report = std::string_view(name) == "report";
    sub->app = app.add_subcommand(name, is_report ? "merge run manifests of a directory" : "run a workflow");
    sub->app->add_option("--config", sub->config_file, "flat key=value file");
    sub->app->add_option("--out", sub->out, "output directory");
    sub->app->add_option("params", sub->tokens, is_report ? "directory to summarize" : "key=value parameters");
    subs.push_back(std::move(sub));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ehf: status=validation_error reason=" << one_line(e.what()) << '\n';
    return kExitValidation;
  }
  for (const auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    const std::string name = sub->app->get_name();
    try {
      if (name == "report") {
        std::filesystem::path dir = sub->out;
        if (sub->tokens.size() > 1) throw ValidationError("report takes at most one directory");
        if (!sub->tokens.empty()) dir = sub->tokens.front();
        return report(dir, std::cerr);
      }
      const auto file_params = sub->config_file.empty() ? std::map<std::string, std::string>{}
                                                        : read_config_file(sub->config_file);
      const auto cli_params = parse_assignments(sub->tokens);
      const RunConfig config = resolve_config(name, file_params, cli_params, sub->out);
      return run(config, std::cerr);
    } catch (const ValidationError& e) {
      std::cerr << "ehf: status=validation_error reason=" << one_line(e.what()) << '\n';
      return kExitValidation;
    }
  }
  return kExitValidation;
}

}  // namespace ehf
