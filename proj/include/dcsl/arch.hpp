#pragma once

#include <span>

#include "dcsl/types.hpp"

namespace dcsl {

/// Transformer shape for parameter accounting. ffw_size, kv_size and
/// n_heads are optional (0 = unspecified); they do not enter the count
/// but are validated against d_model when given.
struct ArchSpec {
  int d_model = 0;
  int n_layers = 0;
  int ffw_size = 0;
  int kv_size = 0;
  int n_heads = 0;
  int vocab = 50257;
  int seq_len = 2048;

  void validate() const;
};

/// P = 12*l*h^2 * (1 + 13/(12h) + (V+s)/(12*l*h)), embeddings included.
double param_count(const ArchSpec& spec);

/// 6 * param_count * tokens.
double arch_flops(const ArchSpec& spec, double total_tokens);

double round_to_millions(double params);

/// One published architecture row. chinchilla_millions is -1 where the
/// original table has no value. Rows are stored verbatim; a handful do
/// not satisfy d_model == kv_size * n_heads.
struct ArchRow {
  int params_millions;
  int chinchilla_millions;
  int d_model;
  int ffw_size;
  int kv_size;
  int n_heads;
  int n_layers;

  ArchSpec spec() const {
    return ArchSpec{d_model, n_layers, ffw_size, kv_size, n_heads};
  }
};

/// The bundled 55-row architecture table (vocab 50257, sequence length
/// 2048 throughout).
std::span<const ArchRow> architecture_table();

}  // namespace dcsl
