#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcsl/types.hpp"

namespace dcsl {

/// 17 significant digits, round-trip exact. Used for machine files.
std::string format_full(double value);
/// 6 significant digits, for human-facing output.
std::string format_human(double value);

/// Runs CSV: header `params,total_tokens,unique_tokens,loss[,outlier]`,
/// LF endings, '#' comment lines permitted and skipped. Rows violating
/// TrainRun invariants raise ParseError with their line number.
std::vector<TrainRun> read_runs_csv(std::istream& in);
std::vector<TrainRun> read_runs_csv_file(const std::filesystem::path& path);

void write_runs_csv(std::ostream& out, const std::vector<TrainRun>& runs,
                    const std::vector<std::string>& comment_lines = {});
void write_runs_csv_file(const std::filesystem::path& path,
                         const std::vector<TrainRun>& runs,
                         const std::vector<std::string>& comment_lines = {});

/// Coefficients document: JSON with keys a, b, e, alpha, beta, tied,
/// optional rn_star/rd_star/variant (infinities spelled "inf"), and an
/// optional provenance block. format_version is 1.
struct CoefficientsDoc {
  BaseCoefficients base;
  std::optional<double> rn_star;
  std::optional<double> rd_star;
  std::optional<DecayVariant> variant;

  struct Provenance {
    std::optional<double> objective;
    std::optional<long> n_runs;
    std::string tool_version;
    std::string grid;
  };
  std::optional<Provenance> provenance;

  bool has_decay() const { return rn_star.has_value() && rd_star.has_value(); }
  /// Decay constants when both are present; throws DomainError otherwise.
  DecayConstants decay() const;

  static CoefficientsDoc from_defaults(DecayVariant variant, bool base_only);
};

CoefficientsDoc read_coefficients(std::istream& in);
CoefficientsDoc read_coefficients_file(const std::filesystem::path& path);
std::string serialize_coefficients(const CoefficientsDoc& doc);
void write_coefficients_file(const std::filesystem::path& path,
                             const CoefficientsDoc& doc);

/// FNV-1a 64-bit over raw bytes, for provenance hashes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace dcsl
