#include "dcsl/types.hpp"

namespace dcsl {

std::string to_string(DecayVariant variant) {
  switch (variant) {
    case DecayVariant::ApproxExponential: return "approx-exponential";
    case DecayVariant::ExactGeometric: return "exact-geometric";
    case DecayVariant::ExplicitExponential: return "explicit-exponential";
    case DecayVariant::AlphaBetaDecay: return "alpha-beta-decay";
  }
  return "unknown";
}

std::optional<DecayVariant> variant_from_string(std::string_view name) {
  if (name == "approx-exponential") return DecayVariant::ApproxExponential;
  if (name == "exact-geometric") return DecayVariant::ExactGeometric;
  if (name == "explicit-exponential") return DecayVariant::ExplicitExponential;
  if (name == "alpha-beta-decay") return DecayVariant::AlphaBetaDecay;
  return std::nullopt;
}

void BaseCoefficients::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("coefficients: alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("coefficients: beta must be positive");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(e))
    throw DomainError("coefficients: a, b, e must be finite");
  if (tied && alpha != beta)
    throw DomainError("coefficients: tied flag set but alpha != beta");
}

BaseCoefficients BaseCoefficients::c4_defaults() {
  BaseCoefficients c;
  c.a = 6.255414;
  c.b = 7.3049974;
  c.e = 0.6254804;
  c.alpha = 0.3526596;
  c.beta = 0.3526596;
  c.tied = true;
  return c;
}

void DecayConstants::validate() const {
  if (std::isnan(rn_star) || rn_star < 0.0)
    throw DomainError("decay constants: rn_star must be >= 0 (infinity allowed)");
  if (std::isnan(rd_star) || rd_star < 0.0)
    throw DomainError("decay constants: rd_star must be >= 0 (infinity allowed)");
}

DecayConstants DecayConstants::none() { return DecayConstants{}; }

DecayConstants DecayConstants::fitted_defaults() {
  return DecayConstants{5.309743, 15.387756, DecayVariant::ApproxExponential};
}

DecayConstants DecayConstants::alpha_beta_defaults() {
  return DecayConstants{2040.8163, 26530.611, DecayVariant::AlphaBetaDecay};
}

DecayConstants DecayConstants::defaults_for(DecayVariant variant) {
  switch (variant) {
    case DecayVariant::ApproxExponential:
      return fitted_defaults();
    case DecayVariant::ExactGeometric: {
      DecayConstants c = fitted_defaults();
      c.variant = DecayVariant::ExactGeometric;
      return c;
    }
    case DecayVariant::ExplicitExponential: {
      // Per-repetition ratio (1 - delta) = exp(-rate), with delta derived
      // from the canonical half-lives.
      DecayConstants c = fitted_defaults();
      c.rn_star = -std::log1p(-1.0 / (1.0 + c.rn_star));
      c.rd_star = -std::log1p(-1.0 / (1.0 + c.rd_star));
      c.variant = DecayVariant::ExplicitExponential;
      return c;
    }
    case DecayVariant::AlphaBetaDecay:
      return alpha_beta_defaults();
  }
  return none();
}

void TrainRun::validate() const {
  if (!(params > 0.0) || !std::isfinite(params))
    throw DomainError("run: params must be positive");
  if (!(total_tokens > 0.0) || !std::isfinite(total_tokens))
    throw DomainError("run: total_tokens must be positive");
  if (!(unique_tokens > 0.0) || !std::isfinite(unique_tokens))
    throw DomainError("run: unique_tokens must be positive");
  if (!(loss > 0.0) || !std::isfinite(loss))
    throw DomainError("run: loss must be positive");
}

}  // namespace dcsl
