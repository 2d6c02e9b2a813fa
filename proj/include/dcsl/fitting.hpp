#pragma once

#include <span>
#include <variant>
#include <vector>

#include "dcsl/types.hpp"

namespace dcsl {

enum class OutlierPolicy { IncludeAll, DropFlagged };

struct FitConfig {
  double huber_delta = 1e-3;
  bool tie_exponents = false;
  int max_starts = 512;          // grid pruned to at most this many starts
  int max_iterations = 300;
  double convergence_tol = 1e-12;
  OutlierPolicy outlier_policy = OutlierPolicy::IncludeAll;

  // Initialization grids. Positivity-constrained coefficients (alpha,
  // beta, half-lives) are optimized through a log transform; zeros in a
  // grid are floored at kPositivityFloor before the transform.
  std::vector<double> grid_alpha = {0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> grid_a = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  std::vector<double> grid_b = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  std::vector<double> grid_e = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<double> grid_r_star = {0.0, 4.0, 8.0, 12.0, 16.0, 20.0};

  void validate() const;

  static constexpr double kPositivityFloor = 1e-8;
};

struct FitResult {
  std::variant<BaseCoefficients, DecayConstants> coefficients;
  double objective = 0.0;
  int n_runs = 0;
  int n_starts_total = 0;
  int n_starts_converged = 0;
  // Signed residuals ln(predicted) - ln(observed), in canonical run order
  // (runs sorted by params, total_tokens, unique_tokens, loss).
  std::vector<double> per_run_residuals;

  const BaseCoefficients& base() const { return std::get<BaseCoefficients>(coefficients); }
  const DecayConstants& decay() const { return std::get<DecayConstants>(coefficients); }
};

/// Huber penalty: r^2/2 for |r| <= delta, delta*(|r| - delta/2) beyond.
double huber(double residual, double delta);

/// Stable ln(e^x + e^y + e^z).
double log_sum_exp3(double x, double y, double z);

/// Sum over runs of Huber_delta(LSE(a - alpha*ln N_i, b - beta*ln D_i, e)
/// - ln L_i). Runs are treated as single-epoch: D enters directly.
/// Throws DomainError on an empty run list.
double chinchilla_objective(std::span<const TrainRun> runs,
                            const BaseCoefficients& candidate,
                            double huber_delta);

/// Same residual shape with N', D' from the approx-exponential decay of
/// `candidate` applied to each run's split under the fixed base
/// coefficients.
double decay_objective(std::span<const TrainRun> runs,
                       const BaseCoefficients& base,
                       const DecayConstants& candidate,
                       double huber_delta);

/// Multi-start fit of the five base coefficients (four when
/// tie_exponents). Starts run from every pruned grid point; the lowest
/// objective wins, ties broken by earliest grid point in row-major
/// (alpha, [beta,] a, b, e) order.
FitResult fit_base(std::span<const TrainRun> runs, const FitConfig& config);

/// Multi-start 2-D fit of (R*_N, R*_D) with the base coefficients held
/// fixed, started from grid_r_star x grid_r_star in row-major order.
/// Throws FittingError(Unidentifiable) unless at least two runs carry
/// repetition (R_D > 0 or R_N > 0).
FitResult fit_decay(std::span<const TrainRun> runs, const BaseCoefficients& base,
                    const FitConfig& config);

}  // namespace dcsl
