#pragma once

#include "dcsl/types.hpp"

namespace dcsl {

/// Training compute of a run, 6*N*D FLOPs. Throws DomainError on
/// non-positive inputs.
double flops(double params, double total_tokens);

/// G = (alpha*A / (beta*B))^(1/(alpha+beta)), the constant mapping a
/// compute budget onto its optimal parameter count.
double allocation_constant(const BaseCoefficients& coeffs);

/// Base parameter count for a unique-token budget:
/// U_N = min(((u_d*G)^(beta/alpha)) * G, n_cap). With tied exponents this
/// is min(u_d*G^2, n_cap).
double base_params_for_unique(double u_d, const BaseCoefficients& coeffs,
                              double n_cap = kInfinity);

/// Inverse of base_params_for_unique: the unique-token budget whose base
/// parameter count is u_n.
double unique_tokens_for_params(double u_n, const BaseCoefficients& coeffs);

/// Decomposes a run into (U_D, R_D, U_N, R_N):
///   U_D = min(D_C, D), R_D = D/U_D - 1,
///   U_N = base_params_for_unique(U_D, coeffs, N), R_N = max(N/U_N - 1, 0).
DataSplit split_run(const TrainRun& run, const BaseCoefficients& coeffs);

}  // namespace dcsl
