#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dcsl {

using ObjectiveFn = std::function<double(std::span<const double>)>;

struct MinimizeOptions {
  int max_iterations = 300;
  double convergence_tol = 1e-12;  // relative objective decrease
  double gradient_tol = 1e-10;     // stationarity, scaled by max(1, |f|)
  double fd_step_rel = 1e-6;       // central-difference step, relative
};

struct MinimizeResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;  // stopped on convergence_tol (or hit an exact minimum)
};

/// BFGS with central-difference gradients and Armijo backtracking.
/// The iterate objective is non-increasing by construction. converged is
/// true when the relative-decrease tolerance fired or the gradient is
/// stationary; stalls (no acceptable step), non-finite starts, and
/// max_iterations report false.
MinimizeResult minimize_bfgs(const ObjectiveFn& f, std::span<const double> x0,
                             const MinimizeOptions& options = {});

}  // namespace dcsl
