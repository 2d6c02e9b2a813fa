#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcsl/allocation.hpp"
#include "dcsl/arch.hpp"
#include "dcsl/effective.hpp"
#include "dcsl/fitting.hpp"
#include "dcsl/io.hpp"
#include "dcsl/scaling.hpp"
#include "dcsl/synth.hpp"
#include "dcsl/types.hpp"
#include "dcsl/version.hpp"

namespace {

using namespace dcsl;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void print_kv(const char* key, double value) {
  std::cout << key << ' ' << format_human(value) << '\n';
}

void print_kv(const char* key, const std::string& value) {
  std::cout << key << ' ' << value << '\n';
}

std::string join_grid(const std::vector<double>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_human(values[i]);
  }
  out += "}";
  return out;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf);
}

// Reinterpret canonical approx-exponential half-lives for another decay
// variant (delta and rate derive from the half-life; alpha-beta constants
// are not convertible).
DecayConstants convert_canonical(const DecayConstants& canonical, DecayVariant target) {
  DecayConstants out = canonical;
  out.variant = target;
  switch (target) {
    case DecayVariant::ApproxExponential:
    case DecayVariant::ExactGeometric:
      return out;
    case DecayVariant::ExplicitExponential:
      out.rn_star = std::isinf(canonical.rn_star)
                        ? 0.0
                        : -std::log1p(-1.0 / (1.0 + canonical.rn_star));
      out.rd_star = std::isinf(canonical.rd_star)
                        ? 0.0
                        : -std::log1p(-1.0 / (1.0 + canonical.rd_star));
      return out;
    case DecayVariant::AlphaBetaDecay:
      throw InputError(
          "alpha-beta-decay constants are fitted separately and cannot be derived "
          "from half-lives; supply a coefficients file with variant "
          "alpha-beta-decay or use --paper-defaults");
  }
  throw InputError("unknown decay variant");
}

struct CoeffSource {
  std::string path;
  bool paper_defaults = false;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--coeffs", path, "coefficients file (JSON)");
    cmd->add_flag("--paper-defaults", paper_defaults,
                  "use the bundled published constants instead of a file");
  }

  CoefficientsDoc load(DecayVariant default_variant = DecayVariant::ApproxExponential,
                       bool base_only = false) const {
    if (paper_defaults && !path.empty())
      throw InputError("--coeffs and --paper-defaults are mutually exclusive");
    if (paper_defaults) return CoefficientsDoc::from_defaults(default_variant, base_only);
    if (path.empty()) throw InputError("either --coeffs or --paper-defaults is required");
    return read_coefficients_file(path);
  }
};

// Decay constants for a requested variant, from a loaded document.
DecayConstants resolve_decay(const CoefficientsDoc& doc,
                             std::optional<DecayVariant> requested) {
  if (!requested && !doc.has_decay()) return DecayConstants::none();
  if (!doc.has_decay())
    throw InputError("coefficients file carries no decay constants but variant '" +
                     to_string(*requested) + "' was requested");
  const DecayConstants stored = doc.decay();
  if (!requested || *requested == stored.variant) return stored;
  if (stored.variant == DecayVariant::ApproxExponential)
    return convert_canonical(stored, *requested);
  throw InputError("coefficients file stores " + to_string(stored.variant) +
                   " constants; cannot reinterpret them as " + to_string(*requested));
}

// ---------------------------------------------------------------------------
// fit-base

struct FitBaseArgs {
  std::string runs_path, out_path;
  bool tie = false;
  bool drop_outliers = false;
  int grid_size = 512;
  double huber_delta = 1e-3;
};

int cmd_fit_base(const FitBaseArgs& args) {
  const std::vector<TrainRun> runs = read_runs_csv_file(args.runs_path);
  FitConfig config;
  config.tie_exponents = args.tie;
  config.max_starts = args.grid_size;
  config.huber_delta = args.huber_delta;
  config.outlier_policy =
      args.drop_outliers ? OutlierPolicy::DropFlagged : OutlierPolicy::IncludeAll;

  const FitResult result = fit_base(runs, config);
  const BaseCoefficients& fitted = result.base();

  CoefficientsDoc doc;
  doc.base = fitted;
  CoefficientsDoc::Provenance prov;
  prov.objective = result.objective;
  prov.n_runs = result.n_runs;
  prov.tool_version = DCSL_VERSION;
  prov.grid = "alpha" + join_grid(config.grid_alpha) + " a" + join_grid(config.grid_a) +
              " b" + join_grid(config.grid_b) + " e" + join_grid(config.grid_e) +
              " starts=" + std::to_string(result.n_starts_total) +
              " huber_delta=" + format_human(config.huber_delta);
  doc.provenance = prov;
  write_coefficients_file(args.out_path, doc);

  double max_abs = 0.0, sum_sq = 0.0;
  for (double r : result.per_run_residuals) {
    max_abs = std::max(max_abs, std::abs(r));
    sum_sq += r * r;
  }
  print_kv("objective", result.objective);
  print_kv("n_runs", static_cast<double>(result.n_runs));
  print_kv("n_starts_total", static_cast<double>(result.n_starts_total));
  print_kv("n_starts_converged", static_cast<double>(result.n_starts_converged));
  print_kv("alpha", fitted.alpha);
  print_kv("beta", fitted.beta);
  print_kv("big_a", fitted.big_a());
  print_kv("big_b", fitted.big_b());
  print_kv("big_e", fitted.big_e());
  print_kv("residual_max_abs", max_abs);
  print_kv("residual_rms",
           result.n_runs ? std::sqrt(sum_sq / result.n_runs) : 0.0);
  print_kv("out", args.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fit-decay

struct FitDecayArgs {
  std::string runs_path, coeffs_path, out_path;
  bool drop_outliers = false;
  double huber_delta = 1e-3;
};

int cmd_fit_decay(const FitDecayArgs& args) {
  const std::vector<TrainRun> runs = read_runs_csv_file(args.runs_path);
  const CoefficientsDoc base_doc = read_coefficients_file(args.coeffs_path);

  FitConfig config;
  config.huber_delta = args.huber_delta;
  config.outlier_policy =
      args.drop_outliers ? OutlierPolicy::DropFlagged : OutlierPolicy::IncludeAll;

  const FitResult result = fit_decay(runs, base_doc.base, config);
  const DecayConstants& fitted = result.decay();

  CoefficientsDoc doc;
  doc.base = base_doc.base;
  doc.rn_star = fitted.rn_star;
  doc.rd_star = fitted.rd_star;
  doc.variant = fitted.variant;
  CoefficientsDoc::Provenance prov;
  prov.objective = result.objective;
  prov.n_runs = result.n_runs;
  prov.tool_version = DCSL_VERSION;
  prov.grid = join_grid(config.grid_r_star) + "^2 huber_delta=" +
              format_human(config.huber_delta);
  doc.provenance = prov;
  write_coefficients_file(args.out_path, doc);

  print_kv("objective", result.objective);
  print_kv("n_runs", static_cast<double>(result.n_runs));
  print_kv("n_starts_total", static_cast<double>(result.n_starts_total));
  print_kv("n_starts_converged", static_cast<double>(result.n_starts_converged));
  print_kv("rn_star", fitted.rn_star);
  print_kv("rd_star", fitted.rd_star);
  print_kv("out", args.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  CoeffSource source;
  double params = 0.0, tokens = 0.0;
  double unique = 0.0;  // 0 = same as tokens
  std::string variant_name;
};

int cmd_predict(const PredictArgs& args) {
  std::optional<DecayVariant> requested;
  if (!args.variant_name.empty()) {
    requested = variant_from_string(args.variant_name);
    if (!requested) throw InputError("unknown variant '" + args.variant_name + "'");
  }
  const CoefficientsDoc doc =
      args.source.load(requested.value_or(DecayVariant::ApproxExponential),
                       /*base_only=*/!requested && !args.source.paper_defaults);
  DecayConstants decay;
  if (args.source.paper_defaults) {
    decay = doc.has_decay() ? doc.decay() : DecayConstants::none();
    if (requested && decay.variant != *requested)
      decay = convert_canonical(decay, *requested);
  } else {
    decay = resolve_decay(doc, requested);
  }

  TrainRun run;
  run.params = args.params;
  run.total_tokens = args.tokens;
  run.unique_tokens = args.unique > 0.0 ? args.unique : args.tokens;
  run.loss = 1.0;  // placeholder; prediction only
  const DataSplit split = split_run(run, doc.base);
  const double loss = predict_loss(split, doc.base, decay);

  print_kv("predicted_loss", loss);
  print_kv("variant", to_string(decay.variant));
  print_kv("params", run.params);
  print_kv("total_tokens", run.total_tokens);
  print_kv("unique_tokens", run.unique_tokens);
  print_kv("u_d", split.u_d);
  print_kv("r_d", split.r_d);
  print_kv("u_n", split.u_n);
  print_kv("r_n", split.r_n);
  print_kv("epochs", 1.0 + split.r_d);
  if (decay.variant == DecayVariant::AlphaBetaDecay) {
    const auto frac = [](double r, double r_star) {
      return r == 0.0 ? 1.0 : std::max(0.0, 1.0 - r / r_star);
    };
    print_kv("alpha_effective", doc.base.alpha * frac(split.r_n, decay.rn_star));
    print_kv("beta_effective", doc.base.beta * frac(split.r_d, decay.rd_star));
  } else {
    const EffectiveQuantities q = effective_quantities(split, decay);
    print_kv("n_prime", q.n_prime);
    print_kv("d_prime", q.d_prime);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// allocate / frontier

struct AllocateArgs {
  CoeffSource source;
  double flops = 0.0;
};

int cmd_allocate(const AllocateArgs& args) {
  const CoefficientsDoc doc =
      args.source.load(DecayVariant::ApproxExponential, /*base_only=*/true);
  const AllocationPoint point = allocate_single_epoch(args.flops, doc.base);
  print_kv("n_opt", point.params);
  print_kv("d_opt", point.total_tokens);
  print_kv("flops", point.flops);
  print_kv("epochs", point.epochs);
  print_kv("predicted_loss", point.predicted_loss);
  return kExitOk;
}

struct FrontierArgs {
  CoeffSource source;
  double flops = 0.0;
  double data_budget = kInfinity;
  double n_min = 1e5, n_max = 1e14;
};

int cmd_frontier(const FrontierArgs& args) {
  const CoefficientsDoc doc = args.source.load(DecayVariant::ApproxExponential);
  FrontierQuery query;
  query.flops = args.flops;
  query.data_budget = args.data_budget;
  query.coeffs = doc.base;
  query.decay = doc.has_decay() ? doc.decay() : DecayConstants::none();
  query.n_min = args.n_min;
  query.n_max = args.n_max;
  const FrontierResult result = frontier(query);
  print_kv("n_opt", result.point.params);
  print_kv("d_opt", result.point.total_tokens);
  print_kv("flops", result.point.flops);
  print_kv("epochs", result.point.epochs);
  print_kv("predicted_loss", result.point.predicted_loss);
  print_kv("flat_n_low", result.n_low);
  print_kv("flat_n_high", result.n_high);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// grid

struct GridArgs {
  CoeffSource source;
  std::string mode, out_path;
  double data_budget = 0.0;
  double flops = 0.0;
  double multiple_min = 1.0, multiple_max = 100.0;
  int multiple_steps = 25;
  double epoch_min = 1.0, epoch_max = 100.0;
  int epoch_steps = 25;
  double budget_min = 0.0, budget_max = 0.0;  // 0 = derive from the optimum
  int budget_steps = 25;
};

int cmd_grid(const GridArgs& args) {
  if (args.mode != "contour" && args.mode != "isoflop")
    throw InputError("unknown --mode '" + args.mode + "' (expected contour or isoflop)");
  const CoefficientsDoc doc = args.source.load(DecayVariant::ApproxExponential);
  if (!doc.has_decay())
    throw InputError("grid requires coefficients with decay constants");
  const DecayConstants decay = doc.decay();

  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw InputError("cannot write grid file: " + args.out_path);

  if (args.mode == "contour") {
    if (!(args.data_budget > 0.0))
      throw InputError("contour mode requires --data-budget > 0");
    const LogAxis multiples{args.multiple_min, args.multiple_max, args.multiple_steps};
    const LogAxis epochs{args.epoch_min, args.epoch_max, args.epoch_steps};
    const ContourGrid grid =
        contour_grid(args.data_budget, multiples, epochs, doc.base, decay);
    out << "params,epochs,total_tokens,predicted_loss\n";
    for (std::size_t i = 0; i < grid.axis_params.size(); ++i) {
      const double n = grid.axis_params[i] * grid.u_n;
      for (std::size_t j = 0; j < grid.axis_epochs.size(); ++j) {
        out << format_full(n) << ',' << format_full(grid.axis_epochs[j]) << ','
            << format_full(grid.axis_epochs[j] * args.data_budget) << ','
            << format_full(grid.loss_at(i, j)) << "\n";
      }
    }
    print_kv("mode", std::string("contour"));
    print_kv("rows", static_cast<double>(grid.axis_params.size() * grid.axis_epochs.size()));
  } else {
    if (!(args.flops > 0.0)) throw InputError("isoflop mode requires --flops > 0");
    const AllocationPoint optimum = allocate_single_epoch(args.flops, doc.base);
    const double lo = args.budget_min > 0.0 ? args.budget_min : optimum.total_tokens / 100.0;
    const double hi = args.budget_max > 0.0 ? args.budget_max : optimum.total_tokens;
    const LogAxis budgets{lo, hi, args.budget_steps};
    const std::vector<double> budget_values = budgets.values();
    const std::vector<IsoflopPoint> profile =
        isoflop_profile(args.flops, budget_values, doc.base, decay);
    out << "data_budget,epochs,predicted_loss\n";
    for (const IsoflopPoint& point : profile) {
      out << format_full(point.data_budget) << ',' << format_full(point.epochs) << ','
          << format_full(point.predicted_loss) << "\n";
    }
    print_kv("mode", std::string("isoflop"));
    print_kv("rows", static_cast<double>(profile.size()));
  }
  print_kv("out", args.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// params

struct ParamsArgs {
  int d_model = 0, layers = 0, ffw = 0, kv = 0, heads = 0;
  int vocab = 50257, seq_len = 2048;
  bool table = false;
};

int cmd_params(const ParamsArgs& args) {
  if (args.table) {
    std::cout << "params_millions,d_model,ffw_size,kv_size,n_heads,n_layers,"
                 "computed_millions\n";
    for (const ArchRow& row : architecture_table()) {
      const double computed = round_to_millions(param_count(row.spec()));
      std::cout << row.params_millions << ',' << row.d_model << ',' << row.ffw_size
                << ',' << row.kv_size << ',' << row.n_heads << ',' << row.n_layers
                << ',' << static_cast<long>(computed) << "\n";
    }
    return kExitOk;
  }
  if (args.d_model <= 0 || args.layers <= 0)
    throw InputError("params requires --d-model and --layers (or --table)");
  ArchSpec spec;
  spec.d_model = args.d_model;
  spec.n_layers = args.layers;
  spec.ffw_size = args.ffw;
  spec.kv_size = args.kv;
  spec.n_heads = args.heads;
  spec.vocab = args.vocab;
  spec.seq_len = args.seq_len;
  spec.validate();
  const double count = param_count(spec);
  std::cout << static_cast<long>(round_to_millions(count)) << "M\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate / defaults

struct SimulateArgs {
  std::string truth_path, out_path;
  int n_runs = 182;
  double noise = 0.0;
  std::uint64_t seed = 0;
  double param_min = 7e6, param_max = 9e9;
  double epoch_min = 1.0, epoch_max = 500.0;
};

int cmd_simulate(const SimulateArgs& args) {
  const std::string truth_bytes = read_file_bytes(args.truth_path);
  std::istringstream truth_stream(truth_bytes);
  const CoefficientsDoc truth = read_coefficients(truth_stream);

  SynthConfig config;
  config.truth_base = truth.base;
  config.truth_decay = truth.has_decay() ? truth.decay() : DecayConstants::none();
  config.n_runs = args.n_runs;
  config.noise_sigma = args.noise;
  config.seed = args.seed;
  config.param_min = args.param_min;
  config.param_max = args.param_max;
  config.epoch_min = args.epoch_min;
  config.epoch_max = args.epoch_max;

  const std::vector<TrainRun> runs = generate(config);

  std::vector<std::string> comments;
  comments.push_back(std::string("dcsl simulate v") + DCSL_VERSION);
  comments.push_back(std::string("rng ") + kSynthRngName);
  comments.push_back("seed " + std::to_string(args.seed));
  comments.push_back("truth fnv1a64:" + hex64(fnv1a64(truth_bytes)));
  comments.push_back("n_runs " + std::to_string(args.n_runs) + " noise_sigma " +
                     format_full(args.noise));
  comments.push_back("param_range [" + format_full(args.param_min) + "," +
                     format_full(args.param_max) + "] epoch_range [" +
                     format_full(args.epoch_min) + "," + format_full(args.epoch_max) +
                     "]");
  write_runs_csv_file(args.out_path, runs, comments);
  print_kv("n_runs", static_cast<double>(runs.size()));
  print_kv("out", args.out_path);
  return kExitOk;
}

struct DefaultsArgs {
  std::string out_path;
  std::string variant_name = "approx-exponential";
  bool base_only = false;
};

int cmd_defaults(const DefaultsArgs& args) {
  const auto variant = variant_from_string(args.variant_name);
  if (!variant) throw InputError("unknown variant '" + args.variant_name + "'");
  write_coefficients_file(args.out_path,
                          CoefficientsDoc::from_defaults(*variant, args.base_only));
  print_kv("out", args.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"data-constrained scaling laws: fitting, prediction, allocation"};
  app.set_version_flag("--version", DCSL_VERSION);
  app.require_subcommand(1);

  FitBaseArgs fit_base_args;
  CLI::App* fit_base_cmd =
      app.add_subcommand("fit-base", "fit the five base coefficients from runs");
  fit_base_cmd->add_option("--runs", fit_base_args.runs_path, "runs CSV")->required();
  fit_base_cmd->add_option("--out", fit_base_args.out_path, "output coefficients file")
      ->required();
  fit_base_cmd->add_flag("--tie-exponents", fit_base_args.tie,
                         "constrain alpha == beta during the fit");
  fit_base_cmd->add_option("--grid-size", fit_base_args.grid_size,
                           "cap on initialization starts");
  fit_base_cmd->add_option("--huber-delta", fit_base_args.huber_delta,
                           "Huber transition point");
  fit_base_cmd->add_flag("--drop-outliers", fit_base_args.drop_outliers,
                         "drop rows flagged in the outlier column");

  FitDecayArgs fit_decay_args;
  CLI::App* fit_decay_cmd = app.add_subcommand(
      "fit-decay", "fit the repetition half-lives with base coefficients fixed");
  fit_decay_cmd->add_option("--runs", fit_decay_args.runs_path, "runs CSV")->required();
  fit_decay_cmd->add_option("--coeffs", fit_decay_args.coeffs_path,
                            "base coefficients file")->required();
  fit_decay_cmd->add_option("--out", fit_decay_args.out_path,
                            "output coefficients file")->required();
  fit_decay_cmd->add_option("--huber-delta", fit_decay_args.huber_delta,
                            "Huber transition point");
  fit_decay_cmd->add_flag("--drop-outliers", fit_decay_args.drop_outliers,
                          "drop rows flagged in the outlier column");

  PredictArgs predict_args;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "predict loss for one configuration");
  predict_args.source.add_options(predict_cmd);
  predict_cmd->add_option("--params", predict_args.params, "model parameters N")
      ->required();
  predict_cmd->add_option("--tokens", predict_args.tokens, "total training tokens D")
      ->required();
  predict_cmd->add_option("--unique", predict_args.unique,
                          "unique-token budget D_C (default: --tokens)");
  predict_cmd->add_option("--variant", predict_args.variant_name, "decay variant");

  AllocateArgs allocate_args;
  CLI::App* allocate_cmd =
      app.add_subcommand("allocate", "closed-form single-epoch optimal allocation");
  allocate_args.source.add_options(allocate_cmd);
  allocate_cmd->add_option("--flops", allocate_args.flops, "compute budget")->required();

  FrontierArgs frontier_args;
  CLI::App* frontier_cmd = app.add_subcommand(
      "frontier", "data-constrained compute-optimal allocation");
  frontier_args.source.add_options(frontier_cmd);
  frontier_cmd->add_option("--flops", frontier_args.flops, "compute budget")->required();
  frontier_cmd->add_option("--data-budget", frontier_args.data_budget,
                           "unique-token budget (default: unconstrained)");
  frontier_cmd->add_option("--n-min", frontier_args.n_min, "parameter search lower bound");
  frontier_cmd->add_option("--n-max", frontier_args.n_max, "parameter search upper bound");

  GridArgs grid_args;
  CLI::App* grid_cmd = app.add_subcommand("grid", "emit a loss surface or profile CSV");
  grid_args.source.add_options(grid_cmd);
  grid_cmd->add_option("--mode", grid_args.mode, "contour | isoflop")->required();
  grid_cmd->add_option("--out", grid_args.out_path, "output CSV")->required();
  grid_cmd->add_option("--data-budget", grid_args.data_budget,
                       "unique-token budget (contour mode)");
  grid_cmd->add_option("--flops", grid_args.flops, "compute budget (isoflop mode)");
  grid_cmd->add_option("--multiple-min", grid_args.multiple_min, "min U_N multiple");
  grid_cmd->add_option("--multiple-max", grid_args.multiple_max, "max U_N multiple");
  grid_cmd->add_option("--multiple-steps", grid_args.multiple_steps, "U_N multiple count");
  grid_cmd->add_option("--epoch-min", grid_args.epoch_min, "min epochs");
  grid_cmd->add_option("--epoch-max", grid_args.epoch_max, "max epochs");
  grid_cmd->add_option("--epoch-steps", grid_args.epoch_steps, "epoch count");
  grid_cmd->add_option("--budget-min", grid_args.budget_min,
                       "min data budget (isoflop mode)");
  grid_cmd->add_option("--budget-max", grid_args.budget_max,
                       "max data budget (isoflop mode)");
  grid_cmd->add_option("--budget-steps", grid_args.budget_steps, "data budget count");

  ParamsArgs params_args;
  CLI::App* params_cmd =
      app.add_subcommand("params", "transformer parameter count");
  params_cmd->add_option("--d-model", params_args.d_model, "hidden width");
  params_cmd->add_option("--layers", params_args.layers, "layer count");
  params_cmd->add_option("--ffw-size", params_args.ffw, "feed-forward width");
  params_cmd->add_option("--kv-size", params_args.kv, "attention head width");
  params_cmd->add_option("--heads", params_args.heads, "head count");
  params_cmd->add_option("--vocab", params_args.vocab, "vocabulary size");
  params_cmd->add_option("--seq-len", params_args.seq_len, "sequence length");
  params_cmd->add_flag("--table", params_args.table, "print the bundled architecture table");

  SimulateArgs simulate_args;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "generate synthetic runs from truth coefficients");
  simulate_cmd->add_option("--truth", simulate_args.truth_path, "truth coefficients file")
      ->required();
  simulate_cmd->add_option("--out", simulate_args.out_path, "output runs CSV")->required();
  simulate_cmd->add_option("--n-runs", simulate_args.n_runs, "number of runs");
  simulate_cmd->add_option("--noise", simulate_args.noise,
                           "multiplicative log-normal noise std");
  simulate_cmd->add_option("--seed", simulate_args.seed, "RNG seed");
  simulate_cmd->add_option("--param-min", simulate_args.param_min, "min model size");
  simulate_cmd->add_option("--param-max", simulate_args.param_max, "max model size");
  simulate_cmd->add_option("--epoch-min", simulate_args.epoch_min, "min epochs");
  simulate_cmd->add_option("--epoch-max", simulate_args.epoch_max, "max epochs");

  DefaultsArgs defaults_args;
  CLI::App* defaults_cmd =
      app.add_subcommand("defaults", "write the bundled published constants to a file");
  defaults_cmd->add_option("--out", defaults_args.out_path, "output coefficients file")
      ->required();
  defaults_cmd->add_option("--variant", defaults_args.variant_name, "decay variant");
  defaults_cmd->add_flag("--base-only", defaults_args.base_only,
                         "omit decay constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (fit_base_cmd->parsed()) return cmd_fit_base(fit_base_args);
    if (fit_decay_cmd->parsed()) return cmd_fit_decay(fit_decay_args);
    if (predict_cmd->parsed()) return cmd_predict(predict_args);
    if (allocate_cmd->parsed()) return cmd_allocate(allocate_args);
    if (frontier_cmd->parsed()) return cmd_frontier(frontier_args);
    if (grid_cmd->parsed()) return cmd_grid(grid_args);
    if (params_cmd->parsed()) return cmd_params(params_args);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_args);
    if (defaults_cmd->parsed()) return cmd_defaults(defaults_args);
  } catch (const FittingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_input_problem() ? kExitInput : kExitNumeric;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInput;
}
