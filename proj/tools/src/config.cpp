#include "fcomp/cli/config.hpp"

#include <cerrno>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fcomp/errors.hpp"

namespace fcomp::cli {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, int line) {
  throw ValidationError("config line " + std::to_string(line) + ": invalid value '" + value + "' for '" +
                        key + "'");
}

double parse_double(const std::string& key, const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(x))
    bad_value(key, value, line);
  return x;
}

long long parse_integer(const std::string& key, const std::string& value, int line) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) bad_value(key, value, line);
  return x;
}

int parse_int(const std::string& key, const std::string& value, int line) {
  const long long x = parse_integer(key, value, line);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) bad_value(key, value, line);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, line);
}

Algorithm parse_algorithm_value(const std::string& key, const std::string& value, int line) {
  auto a = parse_algorithm(value);
  if (!a) bad_value(key, value, line);
  return *a;
}

}  // namespace

std::string_view to_string(Normalization n) {
  return n == Normalization::grid_step ? "grid_step" : "resolution";
}
std::string_view to_string(SynthesisModel m) { return m == SynthesisModel::exact ? "exact" : "factorized"; }
std::string_view to_string(IndexSelection s) { return s == IndexSelection::simplified ? "simplified" : "full"; }

int ExperimentConfig::target_count() const {
  return target_count_set ? solver.target_count : static_cast<int>(scene.size());
}

void ExperimentConfig::validate() const {
  radar.validate();
  validate_scene(radar, scene);
  if (range_bins < 2 || speed_bins < 2) throw ValidationError("config: Nr and Nv must be at least 2");
  if (!(noise_sigma >= 0.0)) throw ValidationError("config: noise_sigma must be non-negative");
  if (trials < 1) throw ValidationError("config: trials must be at least 1");
  if (threads < 0) throw ValidationError("config: threads must be non-negative");
  for (int n : nstar)
    if (n < 2) throw ValidationError("config: every Nstar value must be at least 2");
  SolverOptions probe = solver;
  probe.target_count = std::max(1, target_count());
  probe.validate();
  if (target_count_set && solver.target_count < 1) throw ValidationError("config: K must be at least 1");
}

ExperimentConfig parse_config(std::istream& in) {
  static const std::set<std::string> kKeys = {
      "f0", "B", "Ts", "Tc", "Ms", "Mc", "Nr", "Nv", "normalization", "K", "algorithm", "index_selection",
      "correction_max_iters", "correction_tolerance", "clamp_deviations", "model", "noise_sigma", "seed",
      "target", "Nstar", "algorithms", "trials", "threads", "out"};

  ExperimentConfig cfg;
  std::map<std::string, std::pair<std::string, int>> values;
  std::vector<std::pair<std::string, int>> targets;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!kKeys.contains(key)) throw ValidationError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    if (key == "target") {
      targets.emplace_back(value, line);
    } else if (!values.emplace(key, std::pair{value, line}).second) {
      throw ValidationError("config line " + std::to_string(line) + ": duplicate key '" + key + "'");
    }
  }

  auto get = [&](const std::string& key) -> const std::pair<std::string, int>* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  RadarConfig& radar = cfg.radar;
  if (auto* v = get("f0")) radar.f0 = parse_double("f0", v->first, v->second);
  if (auto* v = get("B")) radar.bandwidth = parse_double("B", v->first, v->second);
  if (auto* v = get("Ts")) radar.ts = parse_double("Ts", v->first, v->second);
  if (auto* v = get("Ms")) radar.ms_count = parse_int("Ms", v->first, v->second);
  if (auto* v = get("Mc")) radar.mc_count = parse_int("Mc", v->first, v->second);
  radar.tc = radar.ms_count * radar.ts;
  if (auto* v = get("Tc")) radar.tc = parse_double("Tc", v->first, v->second);

  if (auto* v = get("Nr")) cfg.range_bins = parse_int("Nr", v->first, v->second);
  if (auto* v = get("Nv")) cfg.speed_bins = parse_int("Nv", v->first, v->second);
  if (auto* v = get("normalization")) {
    if (v->first == "grid_step") cfg.normalization = Normalization::grid_step;
    else if (v->first == "resolution") cfg.normalization = Normalization::resolution;
    else bad_value("normalization", v->first, v->second);
  }
  if (auto* v = get("K")) {
    cfg.solver.target_count = parse_int("K", v->first, v->second);
    cfg.target_count_set = true;
  }
  if (auto* v = get("algorithm")) cfg.algorithm = parse_algorithm_value("algorithm", v->first, v->second);
  if (auto* v = get("index_selection")) {
    if (v->first == "simplified") cfg.solver.index_selection = IndexSelection::simplified;
    else if (v->first == "full") cfg.solver.index_selection = IndexSelection::full;
    else bad_value("index_selection", v->first, v->second);
  }
  if (auto* v = get("correction_max_iters"))
    cfg.solver.correction_max_iters = parse_int("correction_max_iters", v->first, v->second);
  if (auto* v = get("correction_tolerance"))
    cfg.solver.correction_tolerance = parse_double("correction_tolerance", v->first, v->second);
  if (auto* v = get("clamp_deviations"))
    cfg.solver.clamp_deviations = parse_bool("clamp_deviations", v->first, v->second);
  if (auto* v = get("model")) {
    if (v->first == "exact") cfg.model = SynthesisModel::exact;
    else if (v->first == "factorized") cfg.model = SynthesisModel::factorized;
    else bad_value("model", v->first, v->second);
  }
  if (auto* v = get("noise_sigma")) cfg.noise_sigma = parse_double("noise_sigma", v->first, v->second);
  if (auto* v = get("seed")) {
    const long long s = parse_integer("seed", v->first, v->second);
    if (s < 0) bad_value("seed", v->first, v->second);
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (auto* v = get("Nstar"))
    for (const std::string& item : split_list(v->first)) cfg.nstar.push_back(parse_int("Nstar", item, v->second));
  if (auto* v = get("algorithms"))
    for (const std::string& item : split_list(v->first))
      cfg.algorithms.push_back(parse_algorithm_value("algorithms", item, v->second));
  if (auto* v = get("trials")) cfg.trials = parse_int("trials", v->first, v->second);
  if (auto* v = get("threads")) cfg.threads = parse_int("threads", v->first, v->second);
  if (auto* v = get("out")) cfg.out = v->first;

  for (const auto& [value, at] : targets) {
    const std::vector<std::string> fields = split_list(value);
    if (fields.size() != 2 && fields.size() != 4)
      throw ValidationError("config line " + std::to_string(at) + ": target needs 'r, v[, alpha_re, alpha_im]'");
    Target t;
    t.r = parse_double("target", fields[0], at);
    t.v = parse_double("target", fields[1], at);
    if (fields.size() == 4) t.alpha = Complex(parse_double("target", fields[2], at), parse_double("target", fields[3], at));
    cfg.scene.push_back(t);
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace fcomp::cli
