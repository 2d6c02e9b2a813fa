#pragma once

#include <span>
#include <vector>

#include "dcsl/types.hpp"

namespace dcsl {

struct FrontierQuery {
  double flops = 0.0;
  double data_budget = kInfinity;
  BaseCoefficients coeffs;
  DecayConstants decay;
  double n_min = 1e5;   // parameter search bounds
  double n_max = 1e14;

  void validate() const;
};

/// Frontier argmin plus the flatness interval: the range of N whose
/// predicted loss stays within kFlatnessWindow of the minimum. Wide
/// intervals tell the caller the optimum is a plateau, not a point.
struct FrontierResult {
  AllocationPoint point;
  DataSplit split;
  double n_low = 0.0;
  double n_high = 0.0;

  static constexpr double kFlatnessWindow = 1e-4;
};

/// Closed-form single-epoch optimum:
///   N_opt = G*(C/6)^(beta/(alpha+beta)), D_opt = (C/6)^(alpha/(alpha+beta))/G.
/// predicted_loss is the Chinchilla value at the optimum.
AllocationPoint allocate_single_epoch(double flops, const BaseCoefficients& coeffs);

/// Minimizes predicted loss over N with D = C/(6N) under the data budget:
/// coarse scan in ln N, golden-section refinement, then the flatness
/// interval by bisection. Throws BoundsError when the argmin lands on a
/// search bound.
FrontierResult frontier(const FrontierQuery& query);

struct IsoflopPoint {
  double data_budget = 0.0;
  double epochs = 1.0;
  double predicted_loss = 0.0;
};

/// Loss at the fixed single-epoch-optimal (N, D) for the budget, under
/// each data constraint in `data_budgets`. Non-increasing in the budget.
std::vector<IsoflopPoint> isoflop_profile(double flops,
                                          std::span<const double> data_budgets,
                                          const BaseCoefficients& coeffs,
                                          const DecayConstants& decay);

/// Log-spaced axis specification, inclusive of both ends.
struct LogAxis {
  double min = 1.0;
  double max = 100.0;
  int count = 25;

  void validate() const;
  std::vector<double> values() const;
};

struct ContourGrid {
  double data_budget = 0.0;
  double u_n = 0.0;                 // base params for the budget
  std::vector<double> axis_params;  // multiples of u_n
  std::vector<double> axis_epochs;
  std::vector<double> losses;       // row-major: [param index][epoch index]

  struct FrontierCell {
    double flops = 0.0;
    double param_multiple = 0.0;
    double epochs = 0.0;
    double loss = 0.0;
  };
  // Per iso-FLOP level, the loss-minimizing point on the diagonal; epochs
  // off the grid are log-log interpolated between neighboring cells.
  std::vector<FrontierCell> frontier;

  double loss_at(std::size_t param_index, std::size_t epoch_index) const {
    return losses[param_index * axis_epochs.size() + epoch_index];
  }
};

ContourGrid contour_grid(double data_budget, const LogAxis& param_multiples,
                         const LogAxis& epoch_range, const BaseCoefficients& coeffs,
                         const DecayConstants& decay);

}  // namespace dcsl
