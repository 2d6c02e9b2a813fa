#include "dcsl/arch.hpp"

#include <array>
#include <cmath>

namespace dcsl {

void ArchSpec::validate() const {
  if (d_model <= 0) throw DomainError("arch: d_model must be positive");
  if (n_layers <= 0) throw DomainError("arch: n_layers must be positive");
  if (vocab <= 0) throw DomainError("arch: vocab must be positive");
  if (seq_len <= 0) throw DomainError("arch: seq_len must be positive");
  if (ffw_size < 0 || kv_size < 0 || n_heads < 0)
    throw DomainError("arch: sizes must be non-negative");
  if (n_heads > 0) {
    if (kv_size > 0 && kv_size * n_heads != d_model)
      throw DomainError("arch: d_model must equal kv_size * n_heads");
    if (d_model % n_heads != 0)
      throw DomainError("arch: d_model must be divisible by n_heads");
  }
}

double param_count(const ArchSpec& spec) {
  // Only the fields entering the formula are required here; head-layout
  // consistency is validate()'s concern (a few published rows skip it).
  if (spec.d_model <= 0 || spec.n_layers <= 0 || spec.vocab <= 0 || spec.seq_len <= 0)
    throw DomainError("arch: d_model, n_layers, vocab, seq_len must be positive");
  const double h = spec.d_model;
  const double l = spec.n_layers;
  const double vs = spec.vocab + spec.seq_len;
  return 12.0 * l * h * h * (1.0 + 13.0 / (12.0 * h) + vs / (12.0 * l * h));
}

double arch_flops(const ArchSpec& spec, double total_tokens) {
  if (total_tokens < 0.0) throw DomainError("arch_flops: tokens must be >= 0");
  return 6.0 * param_count(spec) * total_tokens;
}

double round_to_millions(double params) { return std::round(params / 1e6); }

namespace {

// vocab 50257, sequence length 2048 throughout. -1 marks a missing
// reference count. Several rows do not satisfy d_model == kv_size*n_heads;
// they are kept as published.
constexpr std::array<ArchRow, 55> kArchitectureTable = {{
    {7, -1, 128, 512, 32, 4, 3},
    {14, -1, 224, 896, 32, 7, 4},
    {20, -1, 288, 1152, 32, 7, 5},
    {38, -1, 448, 1792, 32, 7, 6},
    {52, 44, 512, 2048, 64, 8, 8},
    {66, 57, 576, 2304, 64, 9, 9},
    {83, 74, 640, 2560, 64, 10, 10},
    {97, 90, 640, 2560, 64, 10, 13},
    {112, 106, 640, 2560, 64, 10, 16},
    {125, 117, 768, 3072, 64, 12, 12},
    {146, 140, 768, 3072, 64, 12, 15},
    {168, 163, 768, 3072, 64, 12, 18},
    {182, 175, 896, 3584, 64, 14, 14},
    {201, 196, 896, 3584, 64, 14, 16},
    {220, 217, 896, 3584, 64, 14, 18},
    {255, 251, 1024, 4096, 64, 16, 16},
    {280, 278, 1024, 4096, 64, 16, 18},
    {305, 306, 1024, 4096, 64, 16, 20},
    {421, 425, 1280, 5120, 128, 10, 18},
    {480, 489, 1280, 5120, 128, 10, 21},
    {502, 509, 1408, 5632, 128, 11, 18},
    {539, 552, 1280, 5120, 128, 10, 24},
    {574, 587, 1408, 5632, 128, 11, 21},
    {619, 632, 1536, 6144, 128, 12, 19},
    {645, 664, 1408, 5632, 128, 11, 24},
    {704, 724, 1536, 6144, 128, 12, 22},
    {789, 816, 1536, 6144, 128, 12, 25},
    {865, 893, 1792, 7168, 128, 14, 20},
    {981, 1018, 1792, 7168, 128, 14, 23},
    {1096, 1143, 1792, 7168, 128, 14, 26},
    {1215, 1266, 2048, 8192, 128, 16, 22},
    {1364, 1424, 2176, 8704, 128, 17, 22},
    {1366, 1429, 2048, 8192, 128, 16, 25},
    {1517, 1593, 2048, 8192, 128, 16, 28},
    {1535, 1609, 2176, 8704, 128, 17, 25},
    {1650, 1731, 2304, 9216, 128, 18, 24},
    {1706, 1794, 2176, 8704, 128, 17, 28},
    {1905, 2007, 2304, 9216, 128, 18, 28},
    {2160, 2283, 2304, 9216, 128, 18, 32},
    {2179, 2298, 2560, 10240, 128, 20, 26},
    {2494, 2639, 2560, 10240, 128, 20, 30},
    {2809, 2980, 2560, 10240, 128, 20, 34},
    {3090, -1, 2688, 10752, 128, 22, 34},
    {3263, 3530, 2688, 10752, 128, 21, 36},
    {3574, 3802, 2816, 11264, 128, 22, 36},
    {3900, 4084, 2944, 11776, 128, 23, 36},
    {4239, 4516, 3072, 12288, 128, 24, 36},
    {6355, 6796, 3584, 14336, 128, 28, 40},
    {8672, 9293, 4096, 16384, 128, 32, 42},
    {10912, 11452, 4352, 17408, 128, 32, 47},
    {11455, 12295, 4608, 18432, 128, 36, 44},
    {12220, 12569, 4608, 18432, 128, 32, 47},
    {13601, 13735, 4864, 19456, 128, 32, 47},
    {14917, 14940, 4992, 19968, 128, 32, 49},
    {15056, 16183, 5120, 20480, 128, 40, 47},
}};

}  // namespace

std::span<const ArchRow> architecture_table() { return kArchitectureTable; }

}  // namespace dcsl
