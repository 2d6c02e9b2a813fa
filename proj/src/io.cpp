#include "dcsl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dcsl/version.hpp"
#include "json.hpp"

namespace dcsl {

namespace {

using nlohmann::json;

std::string format_sig(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  for (std::string& f : fields) {  // trim surrounding blanks
    const auto first = f.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      f.clear();
      continue;
    }
    const auto last = f.find_last_not_of(" \t\r");
    f = f.substr(first, last - first + 1);
  }
  return fields;
}

double parse_double(const std::string& text, long line, const std::string& column) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError("column '" + column + "': cannot parse number from '" + text + "'",
                     line);
  return value;
}

json json_number_or_inf(double value) {
  if (std::isinf(value)) return json(value > 0 ? "inf" : "-inf");
  return json(value);
}

double double_from_json(const json& node, const std::string& key) {
  if (node.is_number()) return node.get<double>();
  if (node.is_string()) {
    const std::string s = node.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
  }
  throw ParseError("coefficients: key '" + key + "' must be a number or \"inf\"");
}

}  // namespace

std::string format_full(double value) { return format_sig(value, 17); }
std::string format_human(double value) { return format_sig(value, 6); }

std::vector<TrainRun> read_runs_csv(std::istream& in) {
  std::vector<TrainRun> runs;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  int outlier_column = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_fields(line);
    if (!header_seen) {
      static const char* kRequired[] = {"params", "total_tokens", "unique_tokens", "loss"};
      if (fields.size() < 4 || fields.size() > 5)
        throw ParseError("header must list params,total_tokens,unique_tokens,loss[,outlier]",
                         line_no);
      for (int i = 0; i < 4; ++i)
        if (fields[static_cast<std::size_t>(i)] != kRequired[i])
          throw ParseError("missing or misplaced column '" + std::string(kRequired[i]) + "'",
                           line_no);
      if (fields.size() == 5) {
        if (fields[4] != "outlier")
          throw ParseError("unknown trailing column '" + fields[4] + "'", line_no);
        outlier_column = 4;
      }
      header_seen = true;
      continue;
    }
    const std::size_t expected = outlier_column >= 0 ? 5 : 4;
    if (fields.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    TrainRun run;
    run.params = parse_double(fields[0], line_no, "params");
    run.total_tokens = parse_double(fields[1], line_no, "total_tokens");
    run.unique_tokens = parse_double(fields[2], line_no, "unique_tokens");
    run.loss = parse_double(fields[3], line_no, "loss");
    if (outlier_column >= 0) {
      if (fields[4] != "0" && fields[4] != "1")
        throw ParseError("column 'outlier': expected 0 or 1, found '" + fields[4] + "'",
                         line_no);
      run.outlier = fields[4] == "1";
    }
    try {
      run.validate();
    } catch (const DomainError& err) {
      throw ParseError(err.what(), line_no);
    }
    runs.push_back(run);
  }
  if (!header_seen) throw ParseError("empty input: no header row found", line_no);
  return runs;
}

std::vector<TrainRun> read_runs_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open runs file: " + path.string());
  return read_runs_csv(in);
}

void write_runs_csv(std::ostream& out, const std::vector<TrainRun>& runs,
                    const std::vector<std::string>& comment_lines) {
  for (const std::string& comment : comment_lines) out << "# " << comment << "\n";
  bool any_outlier = false;
  for (const TrainRun& run : runs) any_outlier = any_outlier || run.outlier;
  out << "params,total_tokens,unique_tokens,loss";
  if (any_outlier) out << ",outlier";
  out << "\n";
  for (const TrainRun& run : runs) {
    out << format_full(run.params) << ',' << format_full(run.total_tokens) << ','
        << format_full(run.unique_tokens) << ',' << format_full(run.loss);
    if (any_outlier) out << ',' << (run.outlier ? '1' : '0');
    out << "\n";
  }
}

void write_runs_csv_file(const std::filesystem::path& path,
                         const std::vector<TrainRun>& runs,
                         const std::vector<std::string>& comment_lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write runs file: " + path.string());
  write_runs_csv(out, runs, comment_lines);
}

DecayConstants CoefficientsDoc::decay() const {
  if (!has_decay())
    throw DomainError("coefficients document carries no decay constants");
  DecayConstants constants;
  constants.rn_star = *rn_star;
  constants.rd_star = *rd_star;
  constants.variant = variant.value_or(DecayVariant::ApproxExponential);
  constants.validate();
  return constants;
}

CoefficientsDoc CoefficientsDoc::from_defaults(DecayVariant variant, bool base_only) {
  CoefficientsDoc doc;
  doc.base = BaseCoefficients::c4_defaults();
  if (!base_only) {
    const DecayConstants constants = DecayConstants::defaults_for(variant);
    doc.rn_star = constants.rn_star;
    doc.rd_star = constants.rd_star;
    doc.variant = constants.variant;
  }
  Provenance prov;
  prov.tool_version = DCSL_VERSION;
  prov.grid = "bundled-defaults";
  doc.provenance = prov;
  return doc;
}

CoefficientsDoc read_coefficients(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("coefficients: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ParseError("coefficients: top level must be an object");
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer() ||
      doc["format_version"].get<long>() != 1)
    throw ParseError("coefficients: format_version must be 1");

  CoefficientsDoc out;
  for (const char* key : {"a", "b", "e", "alpha", "beta"})
    if (!doc.contains(key))
      throw ParseError(std::string("coefficients: missing key '") + key + "'");
  out.base.a = double_from_json(doc["a"], "a");
  out.base.b = double_from_json(doc["b"], "b");
  out.base.e = double_from_json(doc["e"], "e");
  out.base.alpha = double_from_json(doc["alpha"], "alpha");
  out.base.beta = double_from_json(doc["beta"], "beta");
  out.base.tied = doc.value("tied", false);
  try {
    out.base.validate();
  } catch (const DomainError& err) {
    throw ParseError(err.what());
  }

  if (doc.contains("rn_star")) out.rn_star = double_from_json(doc["rn_star"], "rn_star");
  if (doc.contains("rd_star")) out.rd_star = double_from_json(doc["rd_star"], "rd_star");
  if (out.rn_star.has_value() != out.rd_star.has_value())
    throw ParseError("coefficients: rn_star and rd_star must appear together");
  if (doc.contains("variant")) {
    const std::string name = doc["variant"].get<std::string>();
    const auto variant = variant_from_string(name);
    if (!variant) throw ParseError("coefficients: unknown variant '" + name + "'");
    out.variant = *variant;
  }
  if (out.has_decay()) out.decay();  // validates

  if (doc.contains("provenance") && doc["provenance"].is_object()) {
    const json& prov = doc["provenance"];
    CoefficientsDoc::Provenance p;
    if (prov.contains("objective")) p.objective = double_from_json(prov["objective"], "objective");
    if (prov.contains("n_runs")) p.n_runs = prov["n_runs"].get<long>();
    p.tool_version = prov.value("tool_version", "");
    p.grid = prov.value("grid", "");
    out.provenance = p;
  }
  return out;
}

CoefficientsDoc read_coefficients_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open coefficients file: " + path.string());
  return read_coefficients(in);
}

std::string serialize_coefficients(const CoefficientsDoc& doc) {
  json out;
  out["format_version"] = 1;
  out["a"] = json_number_or_inf(doc.base.a);
  out["b"] = json_number_or_inf(doc.base.b);
  out["e"] = json_number_or_inf(doc.base.e);
  out["alpha"] = json_number_or_inf(doc.base.alpha);
  out["beta"] = json_number_or_inf(doc.base.beta);
  out["tied"] = doc.base.tied;
  if (doc.rn_star) out["rn_star"] = json_number_or_inf(*doc.rn_star);
  if (doc.rd_star) out["rd_star"] = json_number_or_inf(*doc.rd_star);
  if (doc.variant) out["variant"] = to_string(*doc.variant);
  if (doc.provenance) {
    json prov;
    if (doc.provenance->objective) prov["objective"] = json_number_or_inf(*doc.provenance->objective);
    if (doc.provenance->n_runs) prov["n_runs"] = *doc.provenance->n_runs;
    if (!doc.provenance->tool_version.empty())
      prov["tool_version"] = doc.provenance->tool_version;
    if (!doc.provenance->grid.empty()) prov["grid"] = doc.provenance->grid;
    out["provenance"] = prov;
  }
  return out.dump(2) + "\n";
}

void write_coefficients_file(const std::filesystem::path& path,
                             const CoefficientsDoc& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write coefficients file: " + path.string());
  out << serialize_coefficients(doc);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace dcsl
