#include "fcomp/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "fcomp/errors.hpp"

namespace fcomp {
namespace {

// LDLT reciprocal condition estimate below which a Gram matrix is singular.
constexpr double kSingularRcond = 1e-13;

bool contains(std::span<const Index> picks, Index n) {
  return std::find(picks.begin(), picks.end(), n) != picks.end();
}

void require_distinct(std::span<const Index> picks) {
  for (std::size_t i = 0; i < picks.size(); ++i)
    for (std::size_t j = i + 1; j < picks.size(); ++j)
      if (picks[i] == picks[j])
        throw NumericError("joint least squares: node " + std::to_string(picks[i]) +
                           " picked twice, Gram matrix is singular");
}

struct GramSolve {
  Eigen::VectorXcd x;
  bool regularized = false;
};

// Solves G x = f for a Hermitian positive semi-definite G, with a trace-relative
// ridge when G is numerically singular.
GramSolve solve_gram(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& rhs) {
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    // rcond() skips zero pivots, so check the pivot spread as well.
    const Eigen::VectorXd pivots = ldlt.vectorD().real().cwiseAbs();
    const double spread = pivots.size() == 0 ? 1.0 : pivots.minCoeff() / pivots.maxCoeff();
    if (spread > kSingularRcond && ldlt.rcond() > kSingularRcond) return {ldlt.solve(rhs), false};
  }

  double ridge = kRidgeFactor * gram.trace().real();
  if (!(ridge > 0.0)) ridge = kRidgeFactor;
  Eigen::MatrixXcd regularized = gram;
  regularized.diagonal().array() += ridge;
  ldlt.compute(regularized);
  return {ldlt.solve(rhs), true};
}

// Scans candidates in increasing n; strict comparison keeps the smallest index on ties.
template <typename ScoreFn, typename Better>
IndexPick scan(Index count, std::span<const Index> excluded, ScoreFn score_of, Better better) {
  IndexPick best;
  bool found = false;
  bool all_zero = true;
  for (Index n = 0; n < count; ++n) {
    if (contains(excluded, n)) continue;
    const auto [score, regularized] = score_of(n);
    if (score != 0.0) all_zero = false;
    if (!found || better(score, best.score)) {
      best.n = n;
      best.score = score;
      best.regularized = regularized;
      found = true;
    }
  }
  if (!found) throw ValidationError("index selection: every grid node is excluded");
  best.zero_correlation = all_zero;
  return best;
}

IndexPick argmax_magnitude(const Eigen::MatrixXcd& correlations, std::span<const Index> excluded) {
  const Eigen::MatrixXd magnitude = correlations.cwiseAbs();
  return scan(
      magnitude.size(), excluded,
      [&](Index n) { return std::pair{magnitude.data()[n], false}; },
      [](double a, double b) { return a > b; });
}

JointLsResult joint_ls_blocks(const Eigen::VectorXcd& y, std::span<const Eigen::MatrixXcd> blocks,
                              Eigen::VectorXcd* residual) {
  const Index per = blocks.empty() ? 0 : blocks.front().cols();
  Eigen::MatrixXcd a(y.size(), per * static_cast<Index>(blocks.size()));
  for (std::size_t k = 0; k < blocks.size(); ++k) a.middleCols(static_cast<Index>(k) * per, per) = blocks[k];

  const Eigen::MatrixXcd gram = a.adjoint() * a;
  const Eigen::VectorXcd rhs = a.adjoint() * y;
  GramSolve sol = solve_gram(gram, rhs);

  JointLsResult out;
  out.regularized = sol.regularized;
  for (std::size_t k = 0; k < blocks.size(); ++k) out.betas.push_back(sol.x.segment(static_cast<Index>(k) * per, per));
  if (residual != nullptr) *residual = y - a * sol.x;
  return out;
}

int resolve_count(int requested, int available) {
  const int count = requested <= 0 ? available : requested;
  if (count > available)
    throw ValidationError("solver: dictionary provides " + std::to_string(available) +
                          " interpolants, " + std::to_string(count) + " requested");
  return count;
}

// Sub-atom matrices (one column per pick and interpolant) of the factorized picks.
struct SubAtomStack {
  Eigen::MatrixXcd xi;
  Eigen::MatrixXcd eta;
};

SubAtomStack stack_sub_atoms(const FactorizedDictionary& dict, std::span<const Index> picks, int count) {
  SubAtomStack s{Eigen::MatrixXcd(dict.ms(), static_cast<Index>(picks.size()) * count),
                 Eigen::MatrixXcd(dict.mc(), static_cast<Index>(picks.size()) * count)};
  for (std::size_t k = 0; k < picks.size(); ++k) {
    auto [nr, nv] = dict.grid().split(picks[k]);
    for (int i = 0; i < count; ++i) {
      const Index col = static_cast<Index>(k) * count + i;
      s.xi.col(col) = dict.xi(i).col(nr);
      s.eta.col(col) = dict.eta(i).col(nv);
    }
  }
  return s;
}

JointLsResult joint_ls_stack(const Eigen::MatrixXcd& y, const SubAtomStack& s, int count,
                             Eigen::MatrixXcd* residual) {
  // <vec(xa ea^T), vec(xb eb^T)> = (xa^H xb)(ea^H eb)
  const Eigen::MatrixXcd gram =
      ((s.xi.adjoint() * s.xi).array() * (s.eta.adjoint() * s.eta).array()).matrix();
  const Eigen::MatrixXcd projected = s.xi.adjoint() * y;  // (kI) x Mc
  const Eigen::VectorXcd rhs = (projected.array() * s.eta.adjoint().array()).rowwise().sum();
  GramSolve sol = solve_gram(gram, rhs);

  JointLsResult out;
  out.regularized = sol.regularized;
  const Index picks = s.xi.cols() / count;
  for (Index k = 0; k < picks; ++k) out.betas.push_back(sol.x.segment(k * count, count));
  if (residual != nullptr) *residual = y - s.xi * sol.x.asDiagonal() * s.eta.transpose();
  return out;
}

double wrap_range(double r, double period) {
  double w = std::fmod(r, period);
  if (w <= 0.0) w += period;
  return w;
}

void check_problem_size(const SolverOptions& options, Index signal_size, Index nodes, int per_pick) {
  options.validate();
  if (Index{options.target_count} * per_pick > signal_size)
    throw ValidationError("solver: K * I exceeds the number of samples");
  if (options.target_count > nodes) throw ValidationError("solver: K exceeds the number of grid nodes");
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::omp: return "omp";
    case Algorithm::f_omp: return "f_omp";
    case Algorithm::comp: return "comp";
    case Algorithm::f_comp: return "f_comp";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "omp") return Algorithm::omp;
  if (name == "comp") return Algorithm::comp;
  if (name == "f_omp" || name == "f-omp") return Algorithm::f_omp;
  if (name == "f_comp" || name == "f-comp") return Algorithm::f_comp;
  return std::nullopt;
}

void SolverOptions::validate() const {
  if (target_count < 1) throw ValidationError("solver options: K must be at least 1");
  if (correction_max_iters < 1) throw ValidationError("solver options: correction_max_iters must be at least 1");
  if (!(correction_tolerance > 0.0)) throw ValidationError("solver options: correction_tolerance must be positive");
}

IndexPick select_index_simplified(const Eigen::VectorXcd& residual, const VectorDictionary& dict,
                                  std::span<const Index> excluded) {
  if (residual.size() != dict.signal_size()) throw ValidationError("index selection: residual length mismatch");
  const Eigen::VectorXcd correlations = dict.atoms().adjoint() * residual;
  return argmax_magnitude(correlations, excluded);
}

IndexPick select_index_full(const Eigen::VectorXcd& residual, const VectorDictionary& dict,
                            std::span<const Index> excluded, int interpolant_count) {
  if (residual.size() != dict.signal_size()) throw ValidationError("index selection: residual length mismatch");
  const int count = resolve_count(interpolant_count, dict.interpolant_count());
  const double energy = residual.squaredNorm();

  IndexPick pick = scan(
      dict.size(), excluded,
      [&](Index n) {
        const Eigen::MatrixXcd d =
            count == 1 ? Eigen::MatrixXcd(dict.atoms().col(n)) : dict.interpolants(n).leftCols(count);
        const Eigen::VectorXcd f = d.adjoint() * residual;
        GramSolve sol = solve_gram(d.adjoint() * d, f);
        return std::pair{energy - f.dot(sol.x).real(), sol.regularized};
      },
      [](double a, double b) { return a < b; });
  // The objective of an all-zero residual is zero everywhere.
  pick.zero_correlation = energy == 0.0;
  return pick;
}

IndexPick select_index_factorized(const Eigen::MatrixXcd& residual, const FactorizedDictionary& dict,
                                  std::span<const Index> excluded) {
  if (residual.rows() != dict.ms() || residual.cols() != dict.mc())
    throw ValidationError("index selection: residual shape mismatch");
  const Eigen::MatrixXcd& xi = dict.xi(0);
  const Eigen::MatrixXcd& eta = dict.eta(0);
  const Index ms = dict.ms(), mc = dict.mc(), nr = xi.cols(), nv = eta.cols();

  // Contract first along whichever side gives the cheaper product chain.
  const Index range_first = nr * ms * mc + nr * mc * nv;
  const Index speed_first = ms * mc * nv + nr * ms * nv;
  Eigen::MatrixXcd correlations =
      range_first <= speed_first ? Eigen::MatrixXcd((xi.adjoint() * residual) * eta.conjugate())
                                 : Eigen::MatrixXcd(xi.adjoint() * (residual * eta.conjugate()));
  return argmax_magnitude(correlations, excluded);
}

IndexPick select_index_factorized_full(const Eigen::MatrixXcd& residual, const FactorizedDictionary& dict,
                                       std::span<const Index> excluded) {
  if (residual.rows() != dict.ms() || residual.cols() != dict.mc())
    throw ValidationError("index selection: residual shape mismatch");
  static constexpr int kI = kTaylorInterpolants;
  const ParamGrid& grid = dict.grid();

  // f_i(nr, nv) = xi_i[nr]^H R conj(eta_i[nv]) for the three (xi, eta) pairings.
  std::array<Eigen::MatrixXcd, kI> maps;
  for (int i = 0; i < kI; ++i) maps[static_cast<std::size_t>(i)] = dict.xi(i).adjoint() * residual * dict.eta(i).conjugate();

  auto sub_gram = [](const Eigen::MatrixXcd& first, const Eigen::MatrixXcd& second, const Eigen::MatrixXcd& third,
                     Index col) {
    Eigen::MatrixXcd s(first.rows(), kI);
    s << first.col(col), second.col(col), third.col(col);
    return Eigen::MatrixXcd(s.adjoint() * s);
  };
  std::vector<Eigen::MatrixXcd> xi_gram, eta_gram;
  for (Index nr = 0; nr < grid.range_count(); ++nr) xi_gram.push_back(sub_gram(dict.xi(0), dict.xi(1), dict.xi(2), nr));
  for (Index nv = 0; nv < grid.speed_count(); ++nv) eta_gram.push_back(sub_gram(dict.eta(0), dict.eta(1), dict.eta(2), nv));

  const double energy = residual.squaredNorm();
  IndexPick pick = scan(
      grid.size(), excluded,
      [&](Index n) {
        auto [nr, nv] = grid.split(n);
        const Eigen::MatrixXcd gram = (xi_gram[static_cast<std::size_t>(nr)].array() *
                                       eta_gram[static_cast<std::size_t>(nv)].array()).matrix();
        Eigen::VectorXcd f(kI);
        for (int i = 0; i < kI; ++i) f[i] = maps[static_cast<std::size_t>(i)](nr, nv);
        GramSolve sol = solve_gram(gram, f);
        return std::pair{energy - f.dot(sol.x).real(), sol.regularized};
      },
      [](double a, double b) { return a < b; });
  pick.zero_correlation = energy == 0.0;
  return pick;
}

JointLsResult joint_ls_exact(const Eigen::VectorXcd& y, const VectorDictionary& dict, std::span<const Index> picks,
                             int interpolant_count) {
  if (y.size() != dict.signal_size()) throw ValidationError("joint least squares: measurement length mismatch");
  require_distinct(picks);
  const int count = resolve_count(interpolant_count, dict.interpolant_count());
  std::vector<Eigen::MatrixXcd> blocks;
  for (Index n : picks) blocks.push_back(dict.interpolants(n).leftCols(count));
  return joint_ls_blocks(y, blocks, nullptr);
}

JointLsResult joint_ls_factorized(const Eigen::MatrixXcd& y, const FactorizedDictionary& dict,
                                  std::span<const Index> picks, int interpolant_count) {
  if (y.rows() != dict.ms() || y.cols() != dict.mc())
    throw ValidationError("joint least squares: measurement shape mismatch");
  require_distinct(picks);
  for (Index n : picks) dict.grid().check_index(n);
  const int count = resolve_count(interpolant_count, kTaylorInterpolants);
  return joint_ls_stack(y, stack_sub_atoms(dict, picks, count), count, nullptr);
}

Correction correct_offgrid(const std::array<Complex, 3>& beta, const SolverOptions& options, double clamp_r,
                           double clamp_v) {
  Correction c;
  c.alpha = beta[0];
  if (beta[0] == Complex{}) return c;  // nothing to divide by: stay on the grid

  auto alpha_of = [&](double dr, double dv) {
    return (beta[0] + beta[1] * dr + beta[2] * dv) / (1.0 + dr * dr + dv * dv);
  };
  double dr = 0.0, dv = 0.0;
  c.converged = false;
  for (int it = 1; it <= options.correction_max_iters; ++it) {
    const Complex alpha = alpha_of(dr, dv);
    if (alpha == Complex{}) break;
    double next_r = (beta[1] / alpha).real();
    double next_v = (beta[2] / alpha).real();
    if (options.clamp_deviations) {
      next_r = std::clamp(next_r, -clamp_r, clamp_r);
      next_v = std::clamp(next_v, -clamp_v, clamp_v);
    }
    const double change = std::max(std::abs(next_r - dr), std::abs(next_v - dv));
    dr = next_r;
    dv = next_v;
    c.iterations = it;
    if (change < options.correction_tolerance) {
      c.converged = true;
      break;
    }
  }
  c.delta_r = dr;
  c.delta_v = dv;
  c.alpha = alpha_of(dr, dv);
  return c;
}

SolverReport solve(const Measurement& y, const VectorDictionary& dict, const SolverOptions& options,
                   Algorithm algorithm) {
  if (is_factorized(algorithm))
    throw ValidationError("solve: " + std::string(to_string(algorithm)) + " needs a factorized dictionary");
  const int count = is_continuous(algorithm) ? kTaylorInterpolants : 1;
  resolve_count(count, dict.interpolant_count());
  if (y.size() != dict.signal_size()) throw ValidationError("solve: measurement length does not match dictionary");
  check_problem_size(options, dict.signal_size(), dict.size(), count);

  const auto start = std::chrono::steady_clock::now();
  const ParamGrid& grid = dict.grid();
  SolverReport report;
  report.algorithm = algorithm;

  Eigen::VectorXcd residual = y.samples();
  std::vector<Index> picks;
  std::vector<Eigen::MatrixXcd> blocks;
  JointLsResult ls;
  for (int k = 0; k < options.target_count; ++k) {
    const IndexPick pick = options.index_selection == IndexSelection::full
                               ? select_index_full(residual, dict, picks, count)
                               : select_index_simplified(residual, dict, picks);
    picks.push_back(pick.n);
    blocks.push_back(count == 1 ? Eigen::MatrixXcd(dict.atoms().col(pick.n)) : dict.interpolants(pick.n));
    ls = joint_ls_blocks(y.samples(), blocks, &residual);

    PickDiagnostics diag;
    diag.n = pick.n;
    diag.selection_score = pick.score;
    diag.zero_correlation = pick.zero_correlation;
    diag.regularized = ls.regularized || pick.regularized;
    diag.residual_norm = residual.norm();
    report.iterations_detail.push_back(diag);
  }

  const double clamp_r = 0.5 * grid.range_step() / grid.range_norm();
  const double clamp_v = 0.5 * grid.speed_step() / grid.speed_norm();
  for (std::size_t k = 0; k < picks.size(); ++k) {
    Estimate e;
    auto [nr, nv] = grid.split(picks[k]);
    e.source = PickedAtom{picks[k], nr, nv, ls.betas[k]};
    e.r_hat = grid.range_at(picks[k]);
    e.v_hat = grid.speed_at(picks[k]);
    e.alpha_hat = ls.betas[k][0];
    if (count == kTaylorInterpolants) {
      const Correction c = correct_offgrid({ls.betas[k][0], ls.betas[k][1], ls.betas[k][2]}, options, clamp_r, clamp_v);
      e.alpha_hat = c.alpha;
      e.delta_r = c.delta_r;
      e.delta_v = c.delta_v;
      e.r_hat += grid.range_norm() * c.delta_r;
      e.v_hat += grid.speed_norm() * c.delta_v;
      report.iterations_detail[k].correction_iterations = c.iterations;
      report.iterations_detail[k].correction_converged = c.converged;
    }
    report.estimates.push_back(std::move(e));
  }
  report.residual_norm = residual.norm();
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolverReport solve(const Measurement& y, const FactorizedDictionary& dict, const SolverOptions& options,
                   Algorithm algorithm) {
  if (!is_factorized(algorithm))
    throw ValidationError("solve: " + std::string(to_string(algorithm)) + " needs an exact dictionary");
  const int count = is_continuous(algorithm) ? kTaylorInterpolants : 1;
  if (y.ms() != dict.ms() || y.mc() != dict.mc())
    throw ValidationError("solve: measurement shape does not match dictionary");
  const ParamGrid& grid = dict.grid();
  check_problem_size(options, y.size(), grid.size(), count);

  const auto start = std::chrono::steady_clock::now();
  SolverReport report;
  report.algorithm = algorithm;

  const Eigen::MatrixXcd measured = y.matrix();
  Eigen::MatrixXcd residual = measured;
  std::vector<Index> picks;
  JointLsResult ls;
  for (int k = 0; k < options.target_count; ++k) {
    const IndexPick pick = options.index_selection == IndexSelection::full && count > 1
                               ? select_index_factorized_full(residual, dict, picks)
                               : select_index_factorized(residual, dict, picks);
    picks.push_back(pick.n);
    ls = joint_ls_stack(measured, stack_sub_atoms(dict, picks, count), count, &residual);

    PickDiagnostics diag;
    diag.n = pick.n;
    diag.selection_score = pick.score;
    diag.zero_correlation = pick.zero_correlation;
    diag.regularized = ls.regularized || pick.regularized;
    diag.residual_norm = residual.norm();
    report.iterations_detail.push_back(diag);
  }

  const RadarConfig& cfg = dict.config();
  const double clamp_r = 0.5 * grid.range_step() / grid.range_norm();
  const double clamp_v = 0.5 * grid.speed_step() / grid.speed_norm();
  for (std::size_t k = 0; k < picks.size(); ++k) {
    Estimate e;
    auto [nr, nv] = grid.split(picks[k]);
    e.source = PickedAtom{picks[k], nr, nv, ls.betas[k]};
    double r_prime = grid.range_at(picks[k]);
    e.v_hat = grid.speed_at(picks[k]);
    e.alpha_hat = ls.betas[k][0];
    if (count == kTaylorInterpolants) {
      const Correction c = correct_offgrid({ls.betas[k][0], ls.betas[k][1], ls.betas[k][2]}, options, clamp_r, clamp_v);
      e.alpha_hat = c.alpha;
      e.delta_r = c.delta_r;
      e.delta_v = c.delta_v;
      r_prime += grid.range_norm() * c.delta_r;
      e.v_hat += grid.speed_norm() * c.delta_v;
      report.iterations_detail[k].correction_iterations = c.iterations;
      report.iterations_detail[k].correction_converged = c.converged;
    }
    e.r_hat = wrap_range(r_prime - cfg.gamma() * e.v_hat, cfg.max_range());
    report.estimates.push_back(std::move(e));
  }
  report.residual_norm = residual.norm();
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace fcomp
