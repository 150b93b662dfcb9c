#include "fcomp/cli/bench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "fcomp/cli/io.hpp"
#include "fcomp/errors.hpp"

namespace fcomp::cli {
namespace {

constexpr int kDefaultTargets = 5;
constexpr int kDefaultTrials = 200;
constexpr std::uint64_t kDefaultSeed = 1;

const char* kColumns = "experiment,algorithm,Nstar,Ms,Mc,trials,MR,AHE,mean_time_s";
const char* kRatioColumns = ",time_ratio,MR_ratio,AHE_ratio";

std::string display_name(std::string_view algorithm) {
  if (algorithm == "omp") return "OMP";
  if (algorithm == "comp") return "COMP";
  if (algorithm == "f_omp") return "F-OMP";
  if (algorithm == "f_comp") return "F-COMP";
  return std::string(algorithm);
}

std::string canonical(const BenchPlan& plan) {
  const SweepSpec& s = plan.spec;
  std::ostringstream os;
  os << "experiment=" << plan.experiment << ";K=" << s.settings.target_count
     << ";model=" << to_string(s.settings.model) << ";noise=" << format_number(s.settings.noise_sigma, 17)
     << ";normalization=" << to_string(s.normalization)
     << ";selection=" << to_string(s.settings.solver.index_selection)
     << ";corr_iters=" << s.settings.solver.correction_max_iters
     << ";corr_tol=" << format_number(s.settings.solver.correction_tolerance, 17)
     << ";clamp=" << s.settings.solver.clamp_deviations << ";trials=" << s.trials << ";seed=" << s.base_seed
     << ";algorithms=";
  for (Algorithm a : s.algorithms) os << to_string(a) << ',';
  for (const SweepPoint& p : s.points) {
    os << ";point=" << format_number(p.cfg.f0, 17) << ',' << format_number(p.cfg.bandwidth, 17) << ','
       << format_number(p.cfg.ts, 17) << ',' << format_number(p.cfg.tc, 17) << ',' << p.cfg.ms_count << ','
       << p.cfg.mc_count << ',' << p.range_bins << ',' << p.speed_bins;
  }
  return os.str();
}

std::vector<SweepPoint> square_points(const RadarConfig& cfg, const std::vector<int>& nstar) {
  std::vector<SweepPoint> points;
  for (int n : nstar) points.push_back({cfg, n, n, n});
  return points;
}

std::string optional_number(const std::optional<double>& x) {
  return x ? format_number(*x, kCsvDigits) : std::string();
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::optional<double> ratio(const std::optional<double>& num, const std::optional<double>& den) {
  if (!num || !den) return std::nullopt;
  return ratio(*num, *den);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw ValidationError("results csv: bad number '" + s + "'");
  return x;
}

std::optional<double> to_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

int to_int_or_zero(const std::string& s) { return s.empty() ? 0 : std::stoi(s); }

}  // namespace

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

BenchPlan make_plan(const BenchRequest& request) {
  BenchPlan plan;
  plan.experiment = request.preset;
  SweepSpec& spec = plan.spec;
  spec.settings.target_count = kDefaultTargets;
  spec.trials = kDefaultTrials;
  spec.base_seed = kDefaultSeed;

  const std::string& preset = request.preset;
  if (preset != "fig3" && !request.sizes.empty())
    throw ValidationError("bench: --sizes only applies to the fig3 preset");
  if (preset == "fig3" && !request.nstar.empty())
    throw ValidationError("bench: fig3 derives its grids from Ms and Mc; --nstar is not accepted");

  if (preset == "fig1") {
    const std::vector<int> nstar = request.nstar.empty() ? std::vector<int>{16, 32, 64} : request.nstar;
    spec.points = square_points(RadarConfig::k_band(16, 16), nstar);
    spec.algorithms = {Algorithm::omp, Algorithm::comp, Algorithm::f_omp, Algorithm::f_comp};
  } else if (preset == "fig2") {
    const std::vector<int> nstar = request.nstar.empty() ? std::vector<int>{64, 128, 256} : request.nstar;
    spec.points = square_points(RadarConfig::k_band(64, 64), nstar);
    spec.algorithms = {Algorithm::f_omp, Algorithm::f_comp};
  } else if (preset == "fig3") {
    const std::vector<int> sizes = request.sizes.empty() ? std::vector<int>{8, 16, 32} : request.sizes;
    for (int ms : sizes)
      for (int mc : sizes) {
        if (ms < 1 || mc < 1) throw ValidationError("bench: sizes must be positive");
        spec.points.push_back({RadarConfig::k_band(ms, mc), 2 * ms, 2 * mc, 0});
      }
    spec.algorithms = {Algorithm::f_omp, Algorithm::f_comp};
    plan.ratio_columns = true;
  } else if (preset == "custom") {
    if (!request.config) throw ValidationError("bench: the custom preset needs --config");
    const ExperimentConfig& cfg = *request.config;
    const std::vector<int> nstar = !request.nstar.empty() ? request.nstar : cfg.nstar;
    if (nstar.empty()) throw ValidationError("bench: custom preset needs Nstar values");
    spec.points = square_points(cfg.radar, nstar);
    spec.algorithms = cfg.algorithms.empty()
                          ? std::vector<Algorithm>{Algorithm::omp, Algorithm::comp, Algorithm::f_omp, Algorithm::f_comp}
                          : cfg.algorithms;
    spec.normalization = cfg.normalization;
    spec.settings.model = cfg.model;
    spec.settings.noise_sigma = cfg.noise_sigma;
    spec.settings.solver = cfg.solver;
    if (cfg.target_count_set) spec.settings.target_count = cfg.solver.target_count;
    spec.trials = cfg.trials;
    spec.base_seed = cfg.seed;
    spec.threads = cfg.threads;
  } else {
    throw ValidationError("bench: unknown preset '" + preset + "' (fig1, fig2, fig3, custom)");
  }

  if (request.trials) spec.trials = *request.trials;
  if (request.seed) spec.base_seed = *request.seed;
  if (request.threads) spec.threads = *request.threads;
  for (const SweepPoint& p : spec.points)
    if (p.range_bins < 2 || p.speed_bins < 2) throw ValidationError("bench: grid sizes must be at least 2");
  spec.validate();
  plan.digest = fnv1a(canonical(plan));
  return plan;
}

std::vector<ResultRow> make_rows(const BenchPlan& plan, const AggregateResult& result) {
  std::vector<ResultRow> rows;
  for (std::size_t p = 0; p < plan.spec.points.size(); ++p) {
    const SweepPoint& point = plan.spec.points[p];
    for (Algorithm a : plan.spec.algorithms) {
      const AggregateStats& s = result.at(a, p);
      ResultRow row;
      row.experiment = plan.experiment;
      row.algorithm = std::string(to_string(a));
      row.nstar = point.nstar;
      row.ms = point.cfg.ms_count;
      row.mc = point.cfg.mc_count;
      row.trials = s.trials;
      row.mr = s.mean_mr;
      row.ahe = s.mean_ahe;
      row.mean_time_s = s.mean_time;
      if (plan.ratio_columns && a == Algorithm::f_comp && result.stats.contains({Algorithm::f_omp, p})) {
        const AggregateStats& base = result.at(Algorithm::f_omp, p);
        row.time_ratio = ratio(s.mean_time, base.mean_time);
        row.mr_ratio = ratio(s.mean_mr, base.mean_mr);
        row.ahe_ratio = ratio(s.mean_ahe, base.mean_ahe);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_results_csv(std::ostream& out, const BenchPlan& plan, const std::vector<ResultRow>& rows) {
  std::ostringstream digest;
  digest << std::hex << std::setw(16) << std::setfill('0') << plan.digest;
  out << "# fcomp bench results\n"
      << "# version=" << kArtifactVersion << '\n'
      << "# preset=" << plan.experiment << '\n'
      << "# base_seed=" << plan.spec.base_seed << '\n'
      << "# config_digest=" << digest.str() << '\n'
      << kColumns << (plan.ratio_columns ? kRatioColumns : "") << '\n';
  for (const ResultRow& r : rows) {
    out << r.experiment << ',' << r.algorithm << ',' << (r.nstar > 0 ? std::to_string(r.nstar) : "") << ',' << r.ms
        << ',' << r.mc << ',' << r.trials << ',' << format_number(r.mr, kCsvDigits) << ',' << optional_number(r.ahe)
        << ',' << format_number(r.mean_time_s, kCsvDigits);
    if (plan.ratio_columns)
      out << ',' << optional_number(r.time_ratio) << ',' << optional_number(r.mr_ratio) << ','
          << optional_number(r.ahe_ratio);
    out << '\n';
  }
}

CsvDocument read_results_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) doc.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line == std::string(kColumns)) {
        doc.ratio_columns = false;
      } else if (line == std::string(kColumns) + kRatioColumns) {
        doc.ratio_columns = true;
      } else {
        throw ValidationError("results csv: unexpected column header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    const std::size_t expected = doc.ratio_columns ? 12 : 9;
    if (f.size() != expected) throw ValidationError("results csv: wrong field count in '" + line + "'");
    ResultRow r;
    r.experiment = f[0];
    r.algorithm = f[1];
    r.nstar = to_int_or_zero(f[2]);
    r.ms = std::stoi(f[3]);
    r.mc = std::stoi(f[4]);
    r.trials = std::stoi(f[5]);
    r.mr = to_double(f[6]);
    r.ahe = to_optional(f[7]);
    r.mean_time_s = to_double(f[8]);
    if (doc.ratio_columns) {
      r.time_ratio = to_optional(f[9]);
      r.mr_ratio = to_optional(f[10]);
      r.ahe_ratio = to_optional(f[11]);
    }
    doc.rows.push_back(std::move(r));
  }
  if (!header_seen) throw ValidationError("results csv: missing column header");
  return doc;
}

std::vector<std::string> trend_verdicts(const BenchPlan& plan, const std::vector<ResultRow>& rows) {
  std::vector<std::string> verdicts;
  auto yes_no = [](bool b) { return b ? std::string("yes") : std::string("no"); };
  // Rows per algorithm, in sweep-point order.
  std::map<std::string, std::vector<const ResultRow*>> by_alg;
  for (const ResultRow& r : rows) by_alg[r.algorithm].push_back(&r);

  auto compare_ahe = [&](const std::string& better, const std::string& worse) {
    if (!by_alg.contains(better) || !by_alg.contains(worse)) return;
    bool all = true;
    for (std::size_t i = 0; i < by_alg[better].size(); ++i) {
      const auto& b = by_alg[better][i]->ahe;
      const auto& w = by_alg[worse][i]->ahe;
      all = all && b && w && *b < *w;
    }
    verdicts.push_back("AHE(" + display_name(better) + ") < AHE(" + display_name(worse) +
                       ") at all points: " + yes_no(all));
  };

  if (plan.ratio_columns) {
    bool mr_better = true, any = false;
    for (const ResultRow& r : rows) {
      if (r.algorithm != "f_comp") continue;
      any = true;
      mr_better = mr_better && r.mr_ratio && *r.mr_ratio < 1.0;
    }
    if (any) verdicts.push_back("MR(F-COMP)/MR(F-OMP) < 1 at all points: " + yes_no(mr_better));
    compare_ahe("f_comp", "f_omp");
    return verdicts;
  }

  compare_ahe("comp", "omp");
  compare_ahe("f_comp", "f_omp");
  for (const auto& [alg, list] : by_alg) {
    bool monotone = true;
    for (std::size_t i = 1; i < list.size(); ++i) monotone = monotone && list[i]->mr <= list[i - 1]->mr;
    verdicts.push_back("MR(" + display_name(alg) + ") non-increasing in N*: " + yes_no(monotone));
  }
  if (by_alg.contains("comp") && by_alg.contains("f_comp")) {
    const bool slower = by_alg["comp"].back()->mean_time_s > by_alg["f_comp"].back()->mean_time_s;
    verdicts.push_back("time(COMP) > time(F-COMP) at the largest N*: " + yes_no(slower));
  }
  return verdicts;
}

void print_summary(std::ostream& out, const BenchPlan& plan, const std::vector<ResultRow>& rows) {
  out << "experiment " << plan.experiment << " (" << plan.spec.trials << " trials, K=" << plan.spec.settings.target_count
      << ", seed " << plan.spec.base_seed << ")\n";
  out << std::left << std::setw(8) << "alg" << std::right << std::setw(7) << "N*" << std::setw(5) << "Ms"
      << std::setw(5) << "Mc" << std::setw(12) << "MR" << std::setw(12) << "AHE" << std::setw(14) << "time [s]";
  if (plan.ratio_columns) out << std::setw(12) << "t ratio" << std::setw(12) << "MR ratio" << std::setw(12) << "AHE ratio";
  out << '\n';
  auto cell = [](const std::optional<double>& x) { return x ? format_number(*x, 4) : std::string("-"); };
  for (const ResultRow& r : rows) {
    out << std::left << std::setw(8) << display_name(r.algorithm) << std::right << std::setw(7)
        << (r.nstar > 0 ? std::to_string(r.nstar) : "-") << std::setw(5) << r.ms << std::setw(5) << r.mc
        << std::setw(12) << format_number(r.mr, 4) << std::setw(12) << cell(r.ahe) << std::setw(14)
        << format_number(r.mean_time_s, 4);
    if (plan.ratio_columns)
      out << std::setw(12) << cell(r.time_ratio) << std::setw(12) << cell(r.mr_ratio) << std::setw(12)
          << cell(r.ahe_ratio);
    out << '\n';
  }
  for (const std::string& v : trend_verdicts(plan, rows)) out << v << '\n';
}

}  // namespace fcomp::cli
