#include "ehf/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ehf/errors.hpp"

namespace ehf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::map<std::string, std::vector<ParamSpec>>& all_specs() {
  static const std::map<std::string, std::vector<ParamSpec>> specs{
      {"foliate",
       {{"s", "3", "leaf parameters, list or start:stop:step"},
        {"r_max", "20", "outer radius of the tables"},
        {"tol", "1e-10", "ODE tolerance"},
        {"seed", "0", "unused by this subcommand"}}},
      {"energy",
       {{"s", "2,3,4", "leaf parameters"},
        {"eta", "0.5", "exterior weight exponent in (0,1]"},
        {"c", "1", "Klein-Gordon mass"},
        {"field", "gaussian", "gaussian | free_wave"},
        {"amplitude", "1", "field amplitude"},
        {"centre", "0", "bump centre"},
        {"width", "1", "bump width"},
        {"r_max", "40", "slice extent"},
        {"nodes", "2000", "quadrature nodes per slice"},
        {"grading", "geometric", "geometric | uniform"},
        {"tol", "1e-10", "ODE tolerance"},
        {"seed", "0", "unused by this subcommand"}}},
      {"sobolev",
       {{"family", "gaussian", "gaussian | zero"},
        {"s", "2,3,4", "leaf parameters (each >= 2)"},
        {"amplitude", "1", "family amplitude"},
        {"refinements", "3", "refinement levels (>= 2)"},
        {"nodes", "256", "Simpson intervals at level 0"},
        {"inequality", "all", "all | ext_bar | ext_flat | interior"},
        {"self_test", "0", "1 injects the (1+r)^2 exterior weight; the alarm must fire"},
        {"seed", "0", "probe jitter seed; 0 keeps the deterministic probes"}}},
      {"evolve",
       {{"r_max", "auto", "outer radius, or auto to cover the slices"},
        {"n_r", "4000", "spatial intervals"},
        {"t_start", "1", "initial time"},
        {"t_end", "auto", "final time, or auto to cover the slices"},
        {"cfl", "0.5", "dt / dr"},
        {"stride", "8", "stored level stride"},
        {"boundary", "sommerfeld", "sommerfeld | reflecting"},
        {"u_mass", "0", "mass of u"},
        {"u_coupling", "0", "nonlinearity of u"},
        {"u_profile", "wave_tail", "zero | gaussian | wave_tail | kg_point_source"},
        {"u_amplitude", "1", "data amplitude of u"},
        {"u_width", "1", "data width of u"},
        {"u_centre", "0", "data centre of u"},
        {"u_tail_a", "0.5", "wave_tail scale a"},
        {"v", "0", "1 evolves a second field v"},
        {"v_mass", "1", "mass of v"},
        {"v_coupling", "0", "nonlinearity of v"},
        {"v_profile", "gaussian", "data profile of v"},
        {"v_amplitude", "1", "data amplitude of v"},
        {"v_width", "1", "data width of v"},
        {"v_centre", "0", "data centre of v"},
        {"v_tail_a", "0.5", "wave_tail scale a for v"},
        {"s", "2:8:0.25", "slices to sample"},
        {"slice_extent", "6", "slices are sampled to r = s^2/2 + slice_extent"},
        {"slice_nodes", "400", "nodes per sampled slice"},
        {"decay_window", "auto", "s_min,s_max of the decay fit, or auto for the full list"},
        {"amplitude_mode", "auto", "auto | abs | analytic"},
        {"eta", "0.5", "exterior weight exponent for slice energies"},
        {"seed", "0", "unused by this subcommand"}}},
      {"report", {}},
  };
  return specs;
}

}  // namespace

const std::vector<ParamSpec>& param_specs(std::string_view subcommand) {
  const auto& specs = all_specs();
  const auto it = specs.find(std::string(subcommand));
  if (it == specs.end()) throw ValidationError("unknown subcommand '" + std::string(subcommand) + "'");
  return it->second;
}

bool is_subcommand(std::string_view name) noexcept { return all_specs().contains(std::string(name)); }

double parse_number(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ValidationError("malformed number '" + s + "' for " + std::string(what));
  }
  return value;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  const std::string s = trim(text);
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    for (;;) {
      const auto colon = s.find(':', start);
      parts.push_back(parse_number(s.substr(start, colon - start), "range"));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ValidationError("malformed range '" + s + "' (expected start:stop:step)");
    }
    const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(parts[0] + parts[2] * static_cast<double>(i));
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(parse_number(s.substr(start, comma - start), "list"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::map<std::string, std::string> parse_assignments(std::span<const std::string> tokens) {
  std::map<std::string, std::string> out;
  for (const auto& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ValidationError("malformed assignment '" + token + "' (expected key=value)");
    const std::string key = trim(std::string_view(token).substr(0, eq));
    if (key.empty()) throw ValidationError("empty key in '" + token + "'");
    out[key] = trim(std::string_view(token).substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (!body.empty()) tokens.push_back(body);
  }
  return parse_assignments(tokens);
}

RunConfig resolve_config(const std::string& subcommand, const std::map<std::string, std::string>& file_params,
                         const std::map<std::string, std::string>& cli_params, const std::filesystem::path& out_dir) {
  const auto& specs = param_specs(subcommand);
  RunConfig config;
  config.subcommand = subcommand;
  config.out_dir = out_dir;
  for (const auto& spec : specs) config.params[spec.key] = spec.fallback;
  for (const auto* source : {&file_params, &cli_params}) {
    for (const auto& [key, value] : *source) {
      if (!config.params.contains(key)) {
        throw ValidationError("unknown key '" + key + "' for subcommand " + subcommand);
      }
      config.params[key] = value;
    }
  }
  if (config.params.contains("seed")) {
    const double seed = config.number("seed");
    if (seed < 0.0 || seed != std::floor(seed)) throw ValidationError("seed must be a nonnegative integer");
    config.seed = static_cast<std::uint64_t>(seed);
  }
  return config;
}

double RunConfig::number(const std::string& key) const { return parse_number(text(key), key); }

std::size_t RunConfig::count(const std::string& key) const {
  const double v = number(key);
  if (v < 0.0 || v != std::floor(v)) throw ValidationError(key + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = text(key);
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ValidationError(key + " must be 0 or 1");
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ValidationError("missing parameter '" + key + "'");
  return it->second;
}

std::vector<double> RunConfig::number_list(const std::string& key) const { return parse_number_list(text(key)); }

}  // namespace ehf
