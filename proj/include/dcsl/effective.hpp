#pragma once

#include "dcsl/types.hpp"

namespace dcsl {

/// Effective data and parameters after discounting repetition.
struct EffectiveQuantities {
  double d_prime = 0.0;
  double n_prime = 0.0;
};

/// Per-repetition information loss delta in [0, 1]. Bijective with the
/// half-life: R* = (1-delta)/delta, delta = 1/(1+R*).
struct DecayFraction {
  double delta = 0.0;
};

DecayFraction decay_fraction_from_half_life(double r_star);
double half_life_from_decay_fraction(DecayFraction fraction);

/// D' = U + U*R* * (1 - exp(-R_D/R*)). rd_star = infinity gives
/// U*(1+R_D) = D; rd_star = 0 gives U (instant decay, plateau limit).
/// R_D/R* is clamped to [0, 700]; beyond that the plateau U*(1+R*) is
/// returned outright.
double effective_data_approx(double u_d, double r_d, double rd_star);

/// Geometric-series form: D' = U + (1-delta)*U * (1-(1-delta)^R_D)/delta.
/// Works for non-integer R_D. delta = 0 is handled as the no-decay limit
/// D' = D.
double effective_data_exact_geometric(double u_d, double r_d, DecayFraction fraction);

/// D' = U * (1 - exp(-rate)^(R_D+1)) / (1 - exp(-rate)); `rate` is a
/// per-repetition decay rate, not a half-life. rate = 0 is the no-decay
/// limit D' = D.
double effective_data_explicit_exponential(double u_d, double r_d, double rate);

/// N' = U_N + U_N*R* * (1 - exp(-R_N/R*)); same shape as
/// effective_data_approx.
double effective_params(double u_n, double r_n, double rn_star);

/// (D', N') for a split under the decay constants' variant. Not defined
/// for AlphaBetaDecay, which discounts exponents instead of quantities.
EffectiveQuantities effective_quantities(const DataSplit& split,
                                         const DecayConstants& decay);

/// L = E + A/N'^alpha + B/D'^beta with N', D' per the decay variant.
/// With infinite constants and no repetition this equals the Chinchilla
/// prediction E + A/N^alpha + B/D^beta exactly. AlphaBetaDecay dispatches
/// to predict_loss_alpha_beta_decay.
double predict_loss(const DataSplit& split, const BaseCoefficients& coeffs,
                    const DecayConstants& decay);

/// L = E + A/N^(alpha*max(0, 1-R_N/R*_N)) + B/D^(beta*max(0, 1-R_D/R*_D)).
/// Unlike the quantity-discounting variants this lets excess repetition
/// push a term back up, so loss can eventually worsen.
double predict_loss_alpha_beta_decay(const DataSplit& split,
                                     const BaseCoefficients& coeffs,
                                     const DecayConstants& decay);

/// Chinchilla prediction at raw (N, D), no repetition accounting.
double chinchilla_loss(double params, double total_tokens,
                       const BaseCoefficients& coeffs);

}  // namespace dcsl
