#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dcsl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Input or usage problems (bad values, unparseable files). CLI exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violations on library operations. CLI exit 2.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// File-content problems, carrying a line number when known. CLI exit 2.
class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, long line = -1)
      : InputError(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Numerical failures (non-convergence, bad search bounds). CLI exit 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundsError : public NumericError {
 public:
  using NumericError::NumericError;
};

class FittingError : public NumericError {
 public:
  enum class Kind { Underdetermined, Unidentifiable, NoConvergence };
  FittingError(Kind kind, const std::string& msg) : NumericError(msg), kind_(kind) {}
  Kind kind() const { return kind_; }
  /// Underdetermined/unidentifiable fits are input-data problems, not
  /// numerical breakdowns; the CLI maps them to exit 2.
  bool is_input_problem() const { return kind_ != Kind::NoConvergence; }

 private:
  Kind kind_;
};

/// Which effective-data/parameter discounting formula a DecayConstants
/// instance parameterizes.
enum class DecayVariant {
  ApproxExponential,    // D' = U + U*R*(1 - exp(-R_D/R*))
  ExactGeometric,       // geometric series in (1-delta)
  ExplicitExponential,  // D' = U*(1 - exp(-rate*(R_D+1)))/(1 - exp(-rate))
  AlphaBetaDecay,       // exponents alpha/beta decay linearly to 0
};

std::string to_string(DecayVariant variant);
std::optional<DecayVariant> variant_from_string(std::string_view name);

/// The five Chinchilla-law constants. The multipliers are stored in log
/// space (a = ln A, b = ln B, e = ln E); `tied` records that alpha and
/// beta were constrained equal during fitting.
struct BaseCoefficients {
  double a = 0.0;
  double b = 0.0;
  double e = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool tied = false;

  double big_a() const { return std::exp(a); }
  double big_b() const { return std::exp(b); }
  double big_e() const { return std::exp(e); }

  /// Throws DomainError unless alpha, beta > 0 and (if tied) alpha == beta.
  void validate() const;

  /// Constants fitted on the C4 corpus; the library-wide defaults.
  static BaseCoefficients c4_defaults();
};

/// Repetition half-lives for data (rd_star) and excess parameters
/// (rn_star). Infinity means no decay: repeated tokens stay as good as
/// fresh ones and the law collapses to plain Chinchilla.
///
/// Interpretation depends on the variant: half-lives for
/// approx-exponential and exact-geometric (converted to a per-repetition
/// decay fraction on demand), a per-repetition rate for
/// explicit-exponential, and exponent half-lives for alpha-beta-decay.
struct DecayConstants {
  double rn_star = kInfinity;
  double rd_star = kInfinity;
  DecayVariant variant = DecayVariant::ApproxExponential;

  void validate() const;
  bool finite() const { return std::isfinite(rn_star) || std::isfinite(rd_star); }

  /// No decay at all; predictions equal the pure Chinchilla law.
  static DecayConstants none();
  /// Half-lives fitted on the multi-epoch C4 runs (approx-exponential).
  static DecayConstants fitted_defaults();
  /// Exponent half-lives for the alpha-beta-decay formulation.
  static DecayConstants alpha_beta_defaults();
  /// Fitted constants re-expressed for the requested variant.
  static DecayConstants defaults_for(DecayVariant variant);
};

/// One observed training run. unique_tokens may exceed total_tokens; the
/// splitting rule caps U_D at min(unique_tokens, total_tokens).
struct TrainRun {
  double params = 0.0;
  double total_tokens = 0.0;
  double unique_tokens = 0.0;
  double loss = 0.0;
  bool outlier = false;

  void validate() const;
};

/// (N, D) decomposed into unique and repeated components.
struct DataSplit {
  double u_d = 0.0;  // unique tokens used
  double r_d = 0.0;  // data repetitions, epochs - 1
  double u_n = 0.0;  // base parameters for u_d
  double r_n = 0.0;  // parameter repetitions

  double total_tokens() const { return u_d * (1.0 + r_d); }
  double params() const { return u_n * (1.0 + r_n); }
};

/// A resolved (N, D) allocation with its budget and predicted loss.
struct AllocationPoint {
  double params = 0.0;
  double total_tokens = 0.0;
  double flops = 0.0;
  double epochs = 1.0;
  double predicted_loss = 0.0;
};

}  // namespace dcsl
