#include "dcsl/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "dcsl/effective.hpp"
#include "dcsl/scaling.hpp"

namespace dcsl {

namespace {

constexpr int kScanPoints = 257;
constexpr double kGoldenTolLnN = 1e-12;

DataSplit split_point(double params, double total_tokens, double data_budget,
                      const BaseCoefficients& coeffs) {
  TrainRun run;
  run.params = params;
  run.total_tokens = total_tokens;
  run.unique_tokens = std::isinf(data_budget) ? total_tokens : data_budget;
  run.loss = 1.0;  // unused by the split
  return split_run(run, coeffs);
}

double loss_at_ln_n(double ln_n, const FrontierQuery& q) {
  const double n = std::exp(ln_n);
  const double d = q.flops / (6.0 * n);
  return predict_loss(split_point(n, d, q.data_budget, q.coeffs), q.coeffs, q.decay);
}

// Golden-section minimization of f over [lo, hi], assuming unimodality
// within the bracket.
template <typename F>
double golden_section(const F& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Outward bisection for the edge of the flatness window: the point in
// [inner, outer] where loss first exceeds threshold (loss(inner) is below
// it). Returns `outer` when the whole side stays flat.
template <typename F>
double flatness_edge(const F& f, double inner, double outer, double threshold) {
  if (f(outer) <= threshold) return outer;
  double lo = inner, hi = outer;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= threshold)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void FrontierQuery::validate() const {
  if (!(flops > 0.0)) throw DomainError("frontier: flops must be positive");
  if (!(data_budget > 0.0)) throw DomainError("frontier: data_budget must be positive");
  coeffs.validate();
  decay.validate();
  if (!(n_min > 0.0) || !(n_max > n_min))
    throw DomainError("frontier: search bounds must satisfy 0 < n_min < n_max");
}

AllocationPoint allocate_single_epoch(double flops_budget,
                                      const BaseCoefficients& coeffs) {
  if (!(flops_budget > 0.0))
    throw DomainError("allocate_single_epoch: flops must be positive");
  coeffs.validate();
  const double g = allocation_constant(coeffs);
  const double a_exp = coeffs.beta / (coeffs.alpha + coeffs.beta);
  const double b_exp = coeffs.alpha / (coeffs.alpha + coeffs.beta);
  AllocationPoint point;
  point.params = g * std::pow(flops_budget / 6.0, a_exp);
  point.total_tokens = std::pow(flops_budget / 6.0, b_exp) / g;
  point.flops = flops(point.params, point.total_tokens);
  point.epochs = 1.0;
  point.predicted_loss = chinchilla_loss(point.params, point.total_tokens, coeffs);
  return point;
}

FrontierResult frontier(const FrontierQuery& query) {
  query.validate();
  const double ln_lo = std::log(query.n_min);
  const double ln_hi = std::log(query.n_max);
  const auto f = [&](double ln_n) { return loss_at_ln_n(ln_n, query); };

  // Coarse scan to bracket the minimum; the objective can have budget
  // kinks, so a single golden-section from the full interval is not safe.
  int best_index = 0;
  double best_loss = kInfinity;
  const double step = (ln_hi - ln_lo) / (kScanPoints - 1);
  for (int i = 0; i < kScanPoints; ++i) {
    const double loss = f(ln_lo + i * step);
    if (loss < best_loss) {
      best_loss = loss;
      best_index = i;
    }
  }
  if (best_index == 0 || best_index == kScanPoints - 1)
    throw BoundsError("frontier: minimizer lies at the search bound; widen n_min/n_max");

  const double ln_best = golden_section(f, ln_lo + (best_index - 1) * step,
                                        ln_lo + (best_index + 1) * step, kGoldenTolLnN);

  FrontierResult result;
  const double n = std::exp(ln_best);
  const double d = query.flops / (6.0 * n);
  result.split = split_point(n, d, query.data_budget, query.coeffs);
  result.point.params = n;
  result.point.total_tokens = d;
  result.point.flops = flops(n, d);
  result.point.epochs = 1.0 + result.split.r_d;
  result.point.predicted_loss = predict_loss(result.split, query.coeffs, query.decay);

  const double threshold = result.point.predicted_loss + FrontierResult::kFlatnessWindow;
  result.n_low = std::exp(flatness_edge(f, ln_best, ln_lo, threshold));
  result.n_high = std::exp(flatness_edge(f, ln_best, ln_hi, threshold));
  return result;
}

std::vector<IsoflopPoint> isoflop_profile(double flops_budget,
                                          std::span<const double> data_budgets,
                                          const BaseCoefficients& coeffs,
                                          const DecayConstants& decay) {
  const AllocationPoint optimum = allocate_single_epoch(flops_budget, coeffs);
  decay.validate();
  std::vector<IsoflopPoint> profile;
  profile.reserve(data_budgets.size());
  for (double budget : data_budgets) {
    if (!(budget > 0.0)) throw DomainError("isoflop_profile: data budgets must be positive");
    const DataSplit split =
        split_point(optimum.params, optimum.total_tokens, budget, coeffs);
    IsoflopPoint point;
    point.data_budget = budget;
    point.epochs = 1.0 + split.r_d;
    point.predicted_loss = predict_loss(split, coeffs, decay);
    profile.push_back(point);
  }
  return profile;
}

void LogAxis::validate() const {
  if (!(min > 0.0) || !(max >= min)) throw DomainError("axis: need 0 < min <= max");
  if (count < 1) throw DomainError("axis: count must be >= 1");
  if (count == 1 && max != min) throw DomainError("axis: single-point axis needs min == max");
}

std::vector<double> LogAxis::values() const {
  validate();
  std::vector<double> vals(static_cast<std::size_t>(count));
  if (count == 1) {
    vals[0] = min;
    return vals;
  }
  const double ln_min = std::log(min);
  const double ln_step = (std::log(max) - ln_min) / (count - 1);
  for (int i = 0; i < count; ++i) vals[static_cast<std::size_t>(i)] = std::exp(ln_min + i * ln_step);
  vals.front() = min;  // pin the ends exactly
  vals.back() = max;
  return vals;
}

ContourGrid contour_grid(double data_budget, const LogAxis& param_multiples,
                         const LogAxis& epoch_range, const BaseCoefficients& coeffs,
                         const DecayConstants& decay) {
  if (!(data_budget > 0.0)) throw DomainError("contour_grid: data_budget must be positive");
  coeffs.validate();
  decay.validate();

  ContourGrid grid;
  grid.data_budget = data_budget;
  grid.u_n = base_params_for_unique(data_budget, coeffs);
  grid.axis_params = param_multiples.values();
  grid.axis_epochs = epoch_range.values();
  grid.losses.resize(grid.axis_params.size() * grid.axis_epochs.size());

  for (std::size_t i = 0; i < grid.axis_params.size(); ++i) {
    const double n = grid.axis_params[i] * grid.u_n;
    for (std::size_t j = 0; j < grid.axis_epochs.size(); ++j) {
      const double d = grid.axis_epochs[j] * data_budget;
      grid.losses[i * grid.axis_epochs.size() + j] =
          predict_loss(split_point(n, d, data_budget, coeffs), coeffs, decay);
    }
  }

  // Frontier: minimize over each iso-FLOP diagonal m * epochs = level.
  // Rows are exact in m; the epoch coordinate is interpolated log-log
  // between the two bracketing grid columns.
  const std::size_t n_m = grid.axis_params.size();
  const std::size_t n_e = grid.axis_epochs.size();
  if (n_m < 2 || n_e < 2) return grid;

  std::vector<double> ln_epochs(n_e);
  for (std::size_t j = 0; j < n_e; ++j) ln_epochs[j] = std::log(grid.axis_epochs[j]);

  const double unit_flops = 6.0 * grid.u_n * data_budget;
  const double level_lo = grid.axis_params.front() * grid.axis_epochs.front();
  const double level_hi = grid.axis_params.back() * grid.axis_epochs.back();
  const int n_levels = static_cast<int>(std::max(n_m, n_e));
  for (int k = 0; k < n_levels; ++k) {
    const double t = (k + 0.5) / n_levels;
    const double level = std::exp(std::log(level_lo) +
                                  t * (std::log(level_hi) - std::log(level_lo)));
    bool found = false;
    ContourGrid::FrontierCell cell;
    for (std::size_t i = 0; i < n_m; ++i) {
      const double ln_target = std::log(level / grid.axis_params[i]);
      if (ln_target < ln_epochs.front() || ln_target > ln_epochs.back()) continue;
      const auto upper =
          std::upper_bound(ln_epochs.begin(), ln_epochs.end(), ln_target);
      std::size_t j1 = std::min<std::size_t>(
          static_cast<std::size_t>(upper - ln_epochs.begin()), n_e - 1);
      if (j1 == 0) j1 = 1;
      const std::size_t j0 = j1 - 1;
      const double w =
          (ln_target - ln_epochs[j0]) / (ln_epochs[j1] - ln_epochs[j0]);
      const double ln_loss = (1.0 - w) * std::log(grid.loss_at(i, j0)) +
                             w * std::log(grid.loss_at(i, j1));
      const double loss = std::exp(ln_loss);
      if (!found || loss < cell.loss) {
        found = true;
        cell.flops = unit_flops * level;
        cell.param_multiple = grid.axis_params[i];
        cell.epochs = std::exp(ln_target);
        cell.loss = loss;
      }
    }
    if (found) grid.frontier.push_back(cell);
  }
  return grid;
}

}  // namespace dcsl
