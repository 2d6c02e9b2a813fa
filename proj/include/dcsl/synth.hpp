#pragma once

#include <cstdint>
#include <vector>

#include "dcsl/types.hpp"

namespace dcsl {

/// Generator identity recorded in output provenance. The stream is fully
/// specified: mt19937_64 raw output mapped to 53-bit uniforms, Box-Muller
/// for normals, so identical seeds reproduce identical datasets anywhere.
inline constexpr const char* kSynthRngName = "mt19937_64/box-muller/v1";

struct SynthConfig {
  BaseCoefficients truth_base;
  DecayConstants truth_decay;  // infinite constants generate pure Chinchilla losses
  int n_runs = 182;
  double param_min = 7e6;
  double param_max = 9e9;
  double epoch_min = 1.0;
  double epoch_max = 500.0;
  double noise_sigma = 0.0;  // multiplicative log-normal std on loss
  std::uint64_t seed = 0;

  void validate() const;
};

/// Samples N and epochs log-uniformly. Every run shares one data budget:
/// the single-epoch-optimal token count for the reference model size
/// param_min, so parameter excess (R_N) and repetition (R_D) vary
/// independently across runs. loss = predicted * exp(sigma * z).
std::vector<TrainRun> generate(const SynthConfig& config);

}  // namespace dcsl
