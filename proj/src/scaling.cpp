#include "dcsl/scaling.hpp"

#include <algorithm>
#include <cmath>

namespace dcsl {

double flops(double params, double total_tokens) {
  if (!(params > 0.0)) throw DomainError("flops: params must be positive");
  if (!(total_tokens > 0.0)) throw DomainError("flops: total_tokens must be positive");
  return 6.0 * params * total_tokens;
}

double allocation_constant(const BaseCoefficients& coeffs) {
  coeffs.validate();
  const double log_ratio =
      std::log(coeffs.alpha) + coeffs.a - std::log(coeffs.beta) - coeffs.b;
  return std::exp(log_ratio / (coeffs.alpha + coeffs.beta));
}

double base_params_for_unique(double u_d, const BaseCoefficients& coeffs,
                              double n_cap) {
  if (!(u_d > 0.0)) throw DomainError("base_params_for_unique: u_d must be positive");
  const double g = allocation_constant(coeffs);
  const double n_opt = std::pow(u_d * g, coeffs.beta / coeffs.alpha) * g;
  return std::min(n_opt, n_cap);
}

double unique_tokens_for_params(double u_n, const BaseCoefficients& coeffs) {
  if (!(u_n > 0.0)) throw DomainError("unique_tokens_for_params: u_n must be positive");
  const double g = allocation_constant(coeffs);
  return std::pow(u_n / g, coeffs.alpha / coeffs.beta) / g;
}

DataSplit split_run(const TrainRun& run, const BaseCoefficients& coeffs) {
  run.validate();
  DataSplit split;
  split.u_d = std::min(run.unique_tokens, run.total_tokens);
  split.r_d = run.total_tokens / split.u_d - 1.0;
  split.u_n = base_params_for_unique(split.u_d, coeffs, run.params);
  split.r_n = std::max(run.params / split.u_n - 1.0, 0.0);
  return split;
}

}  // namespace dcsl
