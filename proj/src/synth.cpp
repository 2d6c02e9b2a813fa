#include "dcsl/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "dcsl/effective.hpp"
#include "dcsl/scaling.hpp"

namespace dcsl {

namespace {

// 53-bit uniforms straight from the mt19937_64 word stream; std
// distributions are avoided so the byte stream is identical across
// standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform01_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = uniform01_open(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  const double u = uniform01(rng);
  return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

}  // namespace

void SynthConfig::validate() const {
  truth_base.validate();
  truth_decay.validate();
  if (n_runs < 1) throw DomainError("synth: n_runs must be >= 1");
  if (!(param_min > 0.0) || !(param_max >= param_min))
    throw DomainError("synth: need 0 < param_min <= param_max");
  if (!(epoch_min >= 1.0) || !(epoch_max >= epoch_min))
    throw DomainError("synth: need 1 <= epoch_min <= epoch_max");
  if (noise_sigma < 0.0 || !std::isfinite(noise_sigma))
    throw DomainError("synth: noise_sigma must be >= 0");
}

std::vector<TrainRun> generate(const SynthConfig& config) {
  config.validate();
  // One shared data budget: the single-epoch-optimal token count for the
  // smallest model in range. Model size then controls R_N and the epoch
  // draw controls R_D independently, which keeps both half-lives
  // identifiable from the output.
  const double data_budget = unique_tokens_for_params(config.param_min, config.truth_base);

  std::mt19937_64 rng(config.seed);
  std::vector<TrainRun> runs;
  runs.reserve(static_cast<std::size_t>(config.n_runs));
  for (int i = 0; i < config.n_runs; ++i) {
    TrainRun run;
    run.params = log_uniform(rng, config.param_min, config.param_max);
    const double epochs = log_uniform(rng, config.epoch_min, config.epoch_max);
    run.unique_tokens = data_budget;
    run.total_tokens = epochs * data_budget;
    run.loss = 1.0;  // placeholder so the split's validation passes
    const DataSplit split = split_run(run, config.truth_base);
    run.loss = predict_loss(split, config.truth_base, config.truth_decay);
    if (config.noise_sigma > 0.0)
      run.loss *= std::exp(config.noise_sigma * standard_normal(rng));
    run.validate();
    runs.push_back(run);
  }
  return runs;
}

}  // namespace dcsl
