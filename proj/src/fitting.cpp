#include "dcsl/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <tuple>

#include "dcsl/effective.hpp"
#include "dcsl/minimize.hpp"
#include "dcsl/scaling.hpp"

namespace dcsl {

namespace {

// Fixed internal seed for pruning oversized start grids; part of the
// deterministic-fit contract.
constexpr std::uint64_t kGridPruneSeed = 0x9e3779b97f4a7c15ull;

std::vector<TrainRun> canonical_runs(std::span<const TrainRun> runs,
                                     OutlierPolicy policy) {
  std::vector<TrainRun> out;
  out.reserve(runs.size());
  for (const TrainRun& run : runs) {
    run.validate();
    if (policy == OutlierPolicy::DropFlagged && run.outlier) continue;
    out.push_back(run);
  }
  std::sort(out.begin(), out.end(), [](const TrainRun& x, const TrainRun& y) {
    return std::tie(x.params, x.total_tokens, x.unique_tokens, x.loss) <
           std::tie(y.params, y.total_tokens, y.unique_tokens, y.loss);
  });
  return out;
}

double positive_log(double value) {
  return std::log(std::max(value, FitConfig::kPositivityFloor));
}

struct BaseCache {
  std::vector<double> ln_n, ln_d, ln_l;

  explicit BaseCache(std::span<const TrainRun> runs) {
    ln_n.reserve(runs.size());
    ln_d.reserve(runs.size());
    ln_l.reserve(runs.size());
    for (const TrainRun& run : runs) {
      ln_n.push_back(std::log(run.params));
      ln_d.push_back(std::log(run.total_tokens));
      ln_l.push_back(std::log(run.loss));
    }
  }

  double objective(double a, double b, double e, double alpha, double beta,
                   double huber_delta) const {
    double total = 0.0;
    for (std::size_t i = 0; i < ln_n.size(); ++i) {
      const double pred = log_sum_exp3(a - alpha * ln_n[i], b - beta * ln_d[i], e);
      total += huber(pred - ln_l[i], huber_delta);
    }
    return total;
  }
};

struct DecayCache {
  std::vector<DataSplit> splits;
  std::vector<double> ln_l;
  const BaseCoefficients& base;

  DecayCache(std::span<const TrainRun> runs, const BaseCoefficients& coeffs)
      : base(coeffs) {
    splits.reserve(runs.size());
    ln_l.reserve(runs.size());
    for (const TrainRun& run : runs) {
      splits.push_back(split_run(run, coeffs));
      ln_l.push_back(std::log(run.loss));
    }
  }

  double objective(double rn_star, double rd_star, double huber_delta) const {
    double total = 0.0;
    for (std::size_t i = 0; i < splits.size(); ++i) {
      const DataSplit& s = splits[i];
      const double n_prime = effective_params(s.u_n, s.r_n, rn_star);
      const double d_prime = effective_data_approx(s.u_d, s.r_d, rd_star);
      const double pred = log_sum_exp3(base.a - base.alpha * std::log(n_prime),
                                       base.b - base.beta * std::log(d_prime), base.e);
      total += huber(pred - ln_l[i], huber_delta);
    }
    return total;
  }
};

// Keeps the first max_count starts chosen uniformly at random but
// reported in original (row-major) order, so tie-breaking is unaffected.
template <typename T>
void prune_starts(std::vector<T>& starts, int max_count) {
  if (starts.size() <= static_cast<std::size_t>(max_count)) return;
  std::mt19937_64 rng(kGridPruneSeed);
  std::vector<std::size_t> index(starts.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
  for (std::size_t i = 0; i < static_cast<std::size_t>(max_count); ++i) {
    // Raw modulo keeps the stream implementation-independent; bias is
    // irrelevant for start selection.
    const std::size_t j = i + rng() % (index.size() - i);
    std::swap(index[i], index[j]);
  }
  index.resize(static_cast<std::size_t>(max_count));
  std::sort(index.begin(), index.end());
  std::vector<T> kept;
  kept.reserve(index.size());
  for (std::size_t i : index) kept.push_back(starts[i]);
  starts = std::move(kept);
}

struct MultiStartOutcome {
  std::vector<double> x;
  double fx = 0.0;
  int converged = 0;
  int usable = 0;
};

MultiStartOutcome run_starts(const ObjectiveFn& f,
                             const std::vector<std::vector<double>>& starts,
                             const FitConfig& config) {
  MinimizeOptions options;
  options.max_iterations = config.max_iterations;
  options.convergence_tol = config.convergence_tol;
  MultiStartOutcome best;
  bool have_best = false;
  for (const std::vector<double>& start : starts) {
    MinimizeResult r = minimize_bfgs(f, start, options);
    if (!std::isfinite(r.fx)) continue;
    ++best.usable;
    if (r.converged) ++best.converged;
    if (!have_best || r.fx < best.fx) {
      best.fx = r.fx;
      best.x = r.x;
      have_best = true;
    }
  }
  if (!have_best)
    throw FittingError(FittingError::Kind::NoConvergence,
                       "fit: no start produced a finite objective (" +
                           std::to_string(starts.size()) + " starts attempted)");
  if (best.converged == 0)
    throw FittingError(FittingError::Kind::NoConvergence,
                       "fit: none of " + std::to_string(starts.size()) +
                           " starts converged (" + std::to_string(best.usable) +
                           " usable, best objective " + std::to_string(best.fx) + ")");
  return best;
}

}  // namespace

void FitConfig::validate() const {
  if (!(huber_delta > 0.0)) throw DomainError("fit config: huber_delta must be positive");
  if (max_starts < 1) throw DomainError("fit config: max_starts must be >= 1");
  if (max_iterations < 1) throw DomainError("fit config: max_iterations must be >= 1");
  if (!(convergence_tol > 0.0))
    throw DomainError("fit config: convergence_tol must be positive");
  if (grid_alpha.empty() || grid_a.empty() || grid_b.empty() || grid_e.empty() ||
      grid_r_star.empty())
    throw DomainError("fit config: initialization grids must be non-empty");
}

double huber(double residual, double delta) {
  if (!(delta > 0.0)) throw DomainError("huber: delta must be positive");
  const double r = std::abs(residual);
  if (r <= delta) return 0.5 * r * r;
  return delta * (r - 0.5 * delta);
}

double log_sum_exp3(double x, double y, double z) {
  const double m = std::max({x, y, z});
  if (std::isinf(m) && m < 0.0) return m;
  return m + std::log(std::exp(x - m) + std::exp(y - m) + std::exp(z - m));
}

double chinchilla_objective(std::span<const TrainRun> runs,
                            const BaseCoefficients& candidate, double huber_delta) {
  if (runs.empty()) throw DomainError("chinchilla_objective: empty run list");
  if (!(huber_delta > 0.0)) throw DomainError("huber delta must be positive");
  candidate.validate();
  const std::vector<TrainRun> sorted = canonical_runs(runs, OutlierPolicy::IncludeAll);
  return BaseCache(sorted).objective(candidate.a, candidate.b, candidate.e,
                                     candidate.alpha, candidate.beta, huber_delta);
}

double decay_objective(std::span<const TrainRun> runs, const BaseCoefficients& base,
                       const DecayConstants& candidate, double huber_delta) {
  if (runs.empty()) throw DomainError("decay_objective: empty run list");
  if (!(huber_delta > 0.0)) throw DomainError("huber delta must be positive");
  base.validate();
  candidate.validate();
  const std::vector<TrainRun> sorted = canonical_runs(runs, OutlierPolicy::IncludeAll);
  return DecayCache(sorted, base).objective(candidate.rn_star, candidate.rd_star,
                                            huber_delta);
}

FitResult fit_base(std::span<const TrainRun> runs, const FitConfig& config) {
  config.validate();
  const std::vector<TrainRun> sorted = canonical_runs(runs, config.outlier_policy);
  const std::size_t n_free = config.tie_exponents ? 4 : 5;
  if (sorted.size() < n_free)
    throw FittingError(FittingError::Kind::Underdetermined,
                       "fit_base: " + std::to_string(sorted.size()) + " runs cannot determine " +
                           std::to_string(n_free) + " coefficients");

  const BaseCache cache(sorted);
  const double delta = config.huber_delta;

  // Row-major start enumeration: alpha, [beta,] a, b, e.
  std::vector<std::vector<double>> starts;
  if (config.tie_exponents) {
    for (double alpha : config.grid_alpha)
      for (double a : config.grid_a)
        for (double b : config.grid_b)
          for (double e : config.grid_e)
            starts.push_back({a, b, e, positive_log(alpha)});
  } else {
    for (double alpha : config.grid_alpha)
      for (double beta : config.grid_alpha)
        for (double a : config.grid_a)
          for (double b : config.grid_b)
            for (double e : config.grid_e)
              starts.push_back({a, b, e, positive_log(alpha), positive_log(beta)});
  }
  prune_starts(starts, config.max_starts);

  const bool tied = config.tie_exponents;
  const ObjectiveFn f = [&](std::span<const double> x) {
    const double alpha = std::exp(x[3]);
    const double beta = tied ? alpha : std::exp(x[4]);
    return cache.objective(x[0], x[1], x[2], alpha, beta, delta);
  };

  const MultiStartOutcome outcome = run_starts(f, starts, config);

  BaseCoefficients fitted;
  fitted.a = outcome.x[0];
  fitted.b = outcome.x[1];
  fitted.e = outcome.x[2];
  fitted.alpha = std::exp(outcome.x[3]);
  fitted.beta = tied ? fitted.alpha : std::exp(outcome.x[4]);
  fitted.tied = tied;

  FitResult result;
  result.coefficients = fitted;
  result.n_runs = static_cast<int>(sorted.size());
  result.n_starts_total = static_cast<int>(starts.size());
  result.n_starts_converged = outcome.converged;
  result.objective = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double pred = log_sum_exp3(fitted.a - fitted.alpha * cache.ln_n[i],
                                     fitted.b - fitted.beta * cache.ln_d[i], fitted.e);
    const double residual = pred - cache.ln_l[i];
    result.per_run_residuals.push_back(residual);
    result.objective += huber(residual, delta);
  }
  return result;
}

FitResult fit_decay(std::span<const TrainRun> runs, const BaseCoefficients& base,
                    const FitConfig& config) {
  config.validate();
  base.validate();
  const std::vector<TrainRun> sorted = canonical_runs(runs, config.outlier_policy);
  if (sorted.empty()) throw DomainError("fit_decay: empty run list");

  const DecayCache cache(sorted, base);
  int repeated = 0;
  for (const DataSplit& s : cache.splits)
    if (s.r_d > 0.0 || s.r_n > 0.0) ++repeated;
  if (repeated < 2)
    throw FittingError(
        FittingError::Kind::Unidentifiable,
        "fit_decay: decay constants unidentifiable: " + std::to_string(repeated) +
            " of " + std::to_string(sorted.size()) +
            " runs carry any repetition; the objective is flat in (R*_N, R*_D)");

  std::vector<std::vector<double>> starts;
  for (double rn : config.grid_r_star)
    for (double rd : config.grid_r_star)
      starts.push_back({positive_log(rn), positive_log(rd)});
  prune_starts(starts, config.max_starts);

  const double delta = config.huber_delta;
  const ObjectiveFn f = [&](std::span<const double> x) {
    return cache.objective(std::exp(x[0]), std::exp(x[1]), delta);
  };

  const MultiStartOutcome outcome = run_starts(f, starts, config);

  DecayConstants fitted;
  fitted.rn_star = std::exp(outcome.x[0]);
  fitted.rd_star = std::exp(outcome.x[1]);
  fitted.variant = DecayVariant::ApproxExponential;

  FitResult result;
  result.coefficients = fitted;
  result.n_runs = static_cast<int>(sorted.size());
  result.n_starts_total = static_cast<int>(starts.size());
  result.n_starts_converged = outcome.converged;
  result.objective = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const DataSplit& s = cache.splits[i];
    const double n_prime = effective_params(s.u_n, s.r_n, fitted.rn_star);
    const double d_prime = effective_data_approx(s.u_d, s.r_d, fitted.rd_star);
    const double pred = log_sum_exp3(base.a - base.alpha * std::log(n_prime),
                                     base.b - base.beta * std::log(d_prime), base.e);
    const double residual = pred - cache.ln_l[i];
    result.per_run_residuals.push_back(residual);
    result.objective += huber(residual, delta);
  }
  return result;
}

}  // namespace dcsl
