#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fcomp/cli/config.hpp"
#include "fcomp/evaluation.hpp"

namespace fcomp::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kCsvDigits = 9;

/// Canned sweeps: fig1 (four algorithms, M* = 16, N* sweep), fig2 (factorized
/// pair, M* = 64, N* sweep), fig3 (factorized pair over Ms x Mc with
/// Nr = 2 Ms, Nv = 2 Mc), custom (from a config file).
struct BenchRequest {
  std::string preset = "fig1";
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<int> nstar;  // fig1, fig2, custom
  std::vector<int> sizes;  // fig3: values taken by both Ms and Mc
  std::optional<ExperimentConfig> config;  // required by custom
};

struct BenchPlan {
  std::string experiment;
  SweepSpec spec;
  bool ratio_columns = false;  // F-COMP / F-OMP ratios per point
  std::uint64_t digest = 0;
};

/// Resolves and validates a request; throws ValidationError.
BenchPlan make_plan(const BenchRequest& request);

struct ResultRow {
  std::string experiment;
  std::string algorithm;
  int nstar = 0;
  int ms = 0;
  int mc = 0;
  int trials = 0;
  double mr = 0.0;
  std::optional<double> ahe;
  double mean_time_s = 0.0;
  std::optional<double> time_ratio;
  std::optional<double> mr_ratio;
  std::optional<double> ahe_ratio;
};

std::vector<ResultRow> make_rows(const BenchPlan& plan, const AggregateResult& result);

struct CsvDocument {
  std::vector<std::pair<std::string, std::string>> metadata;  // "# key=value" lines
  bool ratio_columns = false;
  std::vector<ResultRow> rows;
};

void write_results_csv(std::ostream& out, const BenchPlan& plan, const std::vector<ResultRow>& rows);
CsvDocument read_results_csv(std::istream& in);

/// Human-readable table plus trend verdicts ("...: yes/no").
void print_summary(std::ostream& out, const BenchPlan& plan, const std::vector<ResultRow>& rows);
std::vector<std::string> trend_verdicts(const BenchPlan& plan, const std::vector<ResultRow>& rows);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

}  // namespace fcomp::cli
