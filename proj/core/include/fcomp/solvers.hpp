#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fcomp/dictionary.hpp"
#include "fcomp/radar.hpp"

namespace fcomp {

enum class Algorithm { omp, f_omp, comp, f_comp };

std::string_view to_string(Algorithm algorithm);
/// Accepts "omp", "f_omp", "comp", "f_comp" (and "f-omp"/"f-comp").
std::optional<Algorithm> parse_algorithm(std::string_view name);

inline bool is_factorized(Algorithm a) { return a == Algorithm::f_omp || a == Algorithm::f_comp; }
inline bool is_continuous(Algorithm a) { return a == Algorithm::comp || a == Algorithm::f_comp; }

enum class IndexSelection { simplified, full };

struct SolverOptions {
  int target_count = 1;  // K
  IndexSelection index_selection = IndexSelection::simplified;
  int correction_max_iters = 50;
  double correction_tolerance = 1e-10;
  bool clamp_deviations = true;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Index selection

struct IndexPick {
  Index n = 0;
  double score = 0.0;           // correlation magnitude, or attained LS objective
  bool zero_correlation = false;  // every candidate scored zero
  bool regularized = false;     // full selection needed a ridge at the chosen node
};

/// argmax_n |<d1[n], residual>| over nodes not in `excluded`.
IndexPick select_index_simplified(const Eigen::VectorXcd& residual,
                                  const VectorDictionary& dict,
                                  std::span<const Index> excluded = {});

/// argmin_n min_beta ||D_n beta - residual||^2, D_n = the first
/// `interpolant_count` interpolants of node n (defaults to all of them).
IndexPick select_index_full(const Eigen::VectorXcd& residual, const VectorDictionary& dict,
                            std::span<const Index> excluded = {},
                            int interpolant_count = 0);

/// argmax |xi1[nr]^H R conj(eta1[nv])|, returned as linear index nv * Nr + nr.
IndexPick select_index_factorized(const Eigen::MatrixXcd& residual,
                                  const FactorizedDictionary& dict,
                                  std::span<const Index> excluded = {});

/// Full (I x I normal equations) selection on the factorized dictionary.
IndexPick select_index_factorized_full(const Eigen::MatrixXcd& residual,
                                       const FactorizedDictionary& dict,
                                       std::span<const Index> excluded = {});

// ---------------------------------------------------------------------------
// Joint least squares over all picked interpolants

struct JointLsResult {
  std::vector<Eigen::VectorXcd> betas;  // one length-I vector per pick
  bool regularized = false;             // Gram matrix was singular, ridge applied
};

/// Ridge strength relative to the Gram trace when the Gram matrix is singular.
inline constexpr double kRidgeFactor = 1e-10;

/// Throws NumericError on duplicate picks.
JointLsResult joint_ls_exact(const Eigen::VectorXcd& y, const VectorDictionary& dict,
                             std::span<const Index> picks, int interpolant_count = 0);

/// Gram matrix built as (Xi^H Xi) .* (Eta^H Eta). Throws NumericError on
/// duplicate picks.
JointLsResult joint_ls_factorized(const Eigen::MatrixXcd& y, const FactorizedDictionary& dict,
                                  std::span<const Index> picks, int interpolant_count = 0);

// ---------------------------------------------------------------------------
// Off-the-grid correction

struct Correction {
  Complex alpha{};
  double delta_r = 0.0;
  double delta_v = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Fixed-point solution of
///   alpha = (b1 + b2 dr + b3 dv) / (1 + dr^2 + dv^2),  dr = Re(b2/alpha),  dv = Re(b3/alpha)
/// from dr = dv = 0. With clamping on, deviations are clipped to
/// [-clamp_r, clamp_r] x [-clamp_v, clamp_v].
Correction correct_offgrid(const std::array<Complex, 3>& beta, const SolverOptions& options,
                           double clamp_r = 0.5, double clamp_v = 0.5);

// ---------------------------------------------------------------------------
// Greedy solvers

struct PickedAtom {
  Index n = 0;
  Index nr = 0;
  Index nv = 0;
  Eigen::VectorXcd beta;
};

struct Estimate {
  double r_hat = 0.0;
  double v_hat = 0.0;
  Complex alpha_hat{};
  double delta_r = 0.0;
  double delta_v = 0.0;
  PickedAtom source;
};

struct PickDiagnostics {
  Index n = 0;
  double selection_score = 0.0;
  double residual_norm = 0.0;  // after the joint LS of this iteration
  bool zero_correlation = false;
  bool regularized = false;
  int correction_iterations = 0;
  bool correction_converged = true;
};

struct SolverReport {
  Algorithm algorithm = Algorithm::omp;
  std::vector<Estimate> estimates;
  double residual_norm = 0.0;
  double wall_time = 0.0;  // seconds, solve call only
  std::vector<PickDiagnostics> iterations_detail;
};

/// OMP (I = 1) or COMP (I = 3) on the vectorized measurement.
SolverReport solve(const Measurement& y, const VectorDictionary& dict,
                   const SolverOptions& options, Algorithm algorithm);

/// F-OMP or F-COMP on the matrix-shaped measurement. Ranges are reported
/// after removing gamma * v_hat from r', wrapped into (0, max_range].
SolverReport solve(const Measurement& y, const FactorizedDictionary& dict,
                   const SolverOptions& options, Algorithm algorithm);

}  // namespace fcomp
