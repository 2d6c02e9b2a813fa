#include "dcsl/effective.hpp"

#include <algorithm>
#include <cmath>

namespace dcsl {

namespace {

// Exponent clamp: exp(-x) for x > 700 underflows; the plateau value is
// the analytic limit there.
constexpr double kExpClamp = 700.0;

double check_nonneg(double value, const char* what) {
  if (std::isnan(value) || value < 0.0)
    throw DomainError(std::string(what) + " must be >= 0");
  return value;
}

}  // namespace

DecayFraction decay_fraction_from_half_life(double r_star) {
  check_nonneg(r_star, "half-life");
  return DecayFraction{1.0 / (1.0 + r_star)};
}

double half_life_from_decay_fraction(DecayFraction fraction) {
  const double d = fraction.delta;
  if (std::isnan(d) || d < 0.0 || d > 1.0)
    throw DomainError("decay fraction must lie in [0, 1]");
  return (1.0 - d) / d;
}

double effective_data_approx(double u_d, double r_d, double rd_star) {
  if (!(u_d > 0.0)) throw DomainError("effective data: u_d must be positive");
  check_nonneg(r_d, "repetitions");
  check_nonneg(rd_star, "half-life");
  if (std::isinf(rd_star)) return u_d * (1.0 + r_d);
  if (rd_star == 0.0) return u_d;
  const double x = std::min(r_d / rd_star, kExpClamp);
  return u_d + u_d * rd_star * (-std::expm1(-x));
}

double effective_data_exact_geometric(double u_d, double r_d, DecayFraction fraction) {
  if (!(u_d > 0.0)) throw DomainError("effective data: u_d must be positive");
  check_nonneg(r_d, "repetitions");
  const double delta = fraction.delta;
  if (std::isnan(delta) || delta < 0.0 || delta > 1.0)
    throw DomainError("decay fraction must lie in [0, 1]");
  if (delta == 0.0) return u_d * (1.0 + r_d);  // no-decay limit
  if (delta == 1.0) return u_d;                // repeats worth nothing
  const double kept = 1.0 - delta;
  return u_d + kept * u_d * (1.0 - std::pow(kept, r_d)) / delta;
}

double effective_data_explicit_exponential(double u_d, double r_d, double rate) {
  if (!(u_d > 0.0)) throw DomainError("effective data: u_d must be positive");
  check_nonneg(r_d, "repetitions");
  check_nonneg(rate, "decay rate");
  if (rate == 0.0) return u_d * (1.0 + r_d);  // no-decay limit
  if (std::isinf(rate)) return u_d;
  const double x = std::min(rate * (r_d + 1.0), kExpClamp);
  // Ratio first: at r_d = 0 numerator and denominator are the same double,
  // so the result is exactly u_d.
  return u_d * (std::expm1(-x) / std::expm1(-std::min(rate, kExpClamp)));
}

double effective_params(double u_n, double r_n, double rn_star) {
  if (!(u_n > 0.0)) throw DomainError("effective params: u_n must be positive");
  check_nonneg(r_n, "repetitions");
  check_nonneg(rn_star, "half-life");
  if (std::isinf(rn_star)) return u_n * (1.0 + r_n);
  if (rn_star == 0.0) return u_n;
  const double x = std::min(r_n / rn_star, kExpClamp);
  return u_n + u_n * rn_star * (-std::expm1(-x));
}

EffectiveQuantities effective_quantities(const DataSplit& split,
                                         const DecayConstants& decay) {
  decay.validate();
  EffectiveQuantities q;
  switch (decay.variant) {
    case DecayVariant::ApproxExponential:
      q.n_prime = effective_params(split.u_n, split.r_n, decay.rn_star);
      q.d_prime = effective_data_approx(split.u_d, split.r_d, decay.rd_star);
      return q;
    case DecayVariant::ExactGeometric:
      q.n_prime = effective_data_exact_geometric(
          split.u_n, split.r_n, decay_fraction_from_half_life(decay.rn_star));
      q.d_prime = effective_data_exact_geometric(
          split.u_d, split.r_d, decay_fraction_from_half_life(decay.rd_star));
      return q;
    case DecayVariant::ExplicitExponential:
      q.n_prime = effective_data_explicit_exponential(split.u_n, split.r_n, decay.rn_star);
      q.d_prime = effective_data_explicit_exponential(split.u_d, split.r_d, decay.rd_star);
      return q;
    case DecayVariant::AlphaBetaDecay:
      throw DomainError(
          "alpha-beta-decay discounts exponents, not effective quantities");
  }
  throw DomainError("unknown decay variant");
}

double predict_loss(const DataSplit& split, const BaseCoefficients& coeffs,
                    const DecayConstants& decay) {
  coeffs.validate();
  if (decay.variant == DecayVariant::AlphaBetaDecay)
    return predict_loss_alpha_beta_decay(split, coeffs, decay);
  const EffectiveQuantities q = effective_quantities(split, decay);
  return coeffs.big_e() + std::exp(coeffs.a - coeffs.alpha * std::log(q.n_prime)) +
         std::exp(coeffs.b - coeffs.beta * std::log(q.d_prime));
}

double predict_loss_alpha_beta_decay(const DataSplit& split,
                                     const BaseCoefficients& coeffs,
                                     const DecayConstants& decay) {
  coeffs.validate();
  decay.validate();
  // r/inf = 0, so infinite half-lives leave the exponents undecayed. The
  // r = 0 case is split out to dodge 0/0 at a zero half-life.
  const auto frac = [](double r, double r_star) {
    return r == 0.0 ? 1.0 : std::max(0.0, 1.0 - r / r_star);
  };
  const double n_frac = frac(split.r_n, decay.rn_star);
  const double d_frac = frac(split.r_d, decay.rd_star);
  const double n = split.params();
  const double d = split.total_tokens();
  return coeffs.big_e() + std::exp(coeffs.a - coeffs.alpha * n_frac * std::log(n)) +
         std::exp(coeffs.b - coeffs.beta * d_frac * std::log(d));
}

double chinchilla_loss(double params, double total_tokens,
                       const BaseCoefficients& coeffs) {
  coeffs.validate();
  if (!(params > 0.0) || !(total_tokens > 0.0))
    throw DomainError("chinchilla_loss: params and total_tokens must be positive");
  return coeffs.big_e() + std::exp(coeffs.a - coeffs.alpha * std::log(params)) +
         std::exp(coeffs.b - coeffs.beta * std::log(total_tokens));
}

}  // namespace dcsl
