#include <sstream>

#include "dcsl/io.hpp"
#include "doctest.h"

using namespace dcsl;

TEST_CASE("number formatting") {
  CHECK(format_human(2.0251910540165) == "2.02519");
  CHECK(format_full(kInfinity) == "inf");
  // 17 significant digits round-trip
  const double value = 0.1 + 0.2;
  CHECK(std::stod(format_full(value)) == value);
  CHECK(std::stod(format_full(6.255414)) == 6.255414);
}

TEST_CASE("runs CSV round trip with comments and outlier column") {
  std::vector<TrainRun> runs = {
      {8.7e9, 178e9, 44e9, 2.2, false},
      {7e6, 1.3e8, 1.3e8, 3.5, true},
  };
  std::ostringstream out;
  write_runs_csv(out, runs, {"provenance line", "another"});
  const std::string text = out.str();
  CHECK(text.find("# provenance line\n") == 0);
  CHECK(text.find("params,total_tokens,unique_tokens,loss,outlier") != std::string::npos);

  std::istringstream in(text);
  const std::vector<TrainRun> parsed = read_runs_csv(in);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].params == runs[0].params);
  CHECK(parsed[0].loss == runs[0].loss);
  CHECK(parsed[1].outlier);
  CHECK(!parsed[0].outlier);
}

TEST_CASE("runs CSV accepts scientific and decimal notation") {
  std::istringstream in(
      "# comment up top\n"
      "params,total_tokens,unique_tokens,loss\n"
      "1e9,2.5E11,400000000,2.125\n");
  const auto runs = read_runs_csv(in);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].params == 1e9);
  CHECK(runs[0].total_tokens == 2.5e11);
  CHECK(runs[0].unique_tokens == 4e8);
}

TEST_CASE("runs CSV errors carry line numbers and column names") {
  std::istringstream missing("params,total_tokens,loss\n");
  CHECK_THROWS_WITH_AS(read_runs_csv(missing),
                       doctest::Contains("unique_tokens"), ParseError);

  std::istringstream bad_number(
      "params,total_tokens,unique_tokens,loss\n"
      "1e9,2e9,1e9,2.0\n"
      "1e9,x,1e9,2.0\n");
  try {
    read_runs_csv(bad_number);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 3);
    CHECK(std::string(err.what()).find("total_tokens") != std::string::npos);
  }

  std::istringstream negative(
      "params,total_tokens,unique_tokens,loss\n"
      "-1e9,2e9,1e9,2.0\n");
  CHECK_THROWS_AS(read_runs_csv(negative), ParseError);

  std::istringstream empty("");
  CHECK_THROWS_AS(read_runs_csv(empty), ParseError);
}

TEST_CASE("coefficients document round trip at full precision") {
  CoefficientsDoc doc;
  doc.base = BaseCoefficients::c4_defaults();
  doc.rn_star = 5.309743;
  doc.rd_star = 15.387756;
  doc.variant = DecayVariant::ApproxExponential;
  CoefficientsDoc::Provenance prov;
  prov.objective = 1.2345678901234567e-9;
  prov.n_runs = 182;
  prov.tool_version = "0.1.0";
  prov.grid = "{0,4,8,12,16,20}^2";
  doc.provenance = prov;

  const std::string text = serialize_coefficients(doc);
  std::istringstream in(text);
  const CoefficientsDoc parsed = read_coefficients(in);
  CHECK(parsed.base.a == doc.base.a);
  CHECK(parsed.base.b == doc.base.b);
  CHECK(parsed.base.e == doc.base.e);
  CHECK(parsed.base.alpha == doc.base.alpha);
  CHECK(parsed.base.beta == doc.base.beta);
  CHECK(parsed.base.tied == doc.base.tied);
  CHECK(parsed.rn_star == doc.rn_star);
  CHECK(parsed.rd_star == doc.rd_star);
  CHECK(parsed.variant == DecayVariant::ApproxExponential);
  REQUIRE(parsed.provenance.has_value());
  CHECK(parsed.provenance->objective == prov.objective);
  CHECK(parsed.provenance->n_runs == 182);

  // serialization is stable: a second pass is byte-identical
  CHECK(serialize_coefficients(parsed) == text);
}

TEST_CASE("infinite half-lives survive the round trip") {
  CoefficientsDoc doc;
  doc.base = BaseCoefficients::c4_defaults();
  doc.rn_star = kInfinity;
  doc.rd_star = kInfinity;
  const std::string text = serialize_coefficients(doc);
  CHECK(text.find("\"inf\"") != std::string::npos);
  std::istringstream in(text);
  const CoefficientsDoc parsed = read_coefficients(in);
  CHECK(std::isinf(*parsed.rn_star));
  CHECK(parsed.decay().rd_star == kInfinity);
}

TEST_CASE("coefficient document validation") {
  std::istringstream not_json("not json at all");
  CHECK_THROWS_AS(read_coefficients(not_json), ParseError);

  std::istringstream missing_version(R"({"a":1,"b":1,"e":0,"alpha":0.3,"beta":0.3})");
  CHECK_THROWS_AS(read_coefficients(missing_version), ParseError);

  std::istringstream missing_key(R"({"format_version":1,"a":1,"b":1,"e":0,"alpha":0.3})");
  CHECK_THROWS_WITH_AS(read_coefficients(missing_key), doctest::Contains("beta"),
                       ParseError);

  std::istringstream bad_alpha(
      R"({"format_version":1,"a":1,"b":1,"e":0,"alpha":-1,"beta":0.3})");
  CHECK_THROWS_AS(read_coefficients(bad_alpha), ParseError);

  std::istringstream lone_rn(
      R"({"format_version":1,"a":1,"b":1,"e":0,"alpha":0.3,"beta":0.3,"rn_star":4})");
  CHECK_THROWS_AS(read_coefficients(lone_rn), ParseError);

  std::istringstream bad_variant(
      R"({"format_version":1,"a":1,"b":1,"e":0,"alpha":0.3,"beta":0.3,
          "rn_star":4,"rd_star":9,"variant":"mystery"})");
  CHECK_THROWS_AS(read_coefficients(bad_variant), ParseError);
}

TEST_CASE("defaults documents") {
  const CoefficientsDoc full =
      CoefficientsDoc::from_defaults(DecayVariant::ApproxExponential, false);
  CHECK(full.has_decay());
  CHECK(full.decay().rd_star == 15.387756);
  CHECK(full.base.tied);

  const CoefficientsDoc base_only =
      CoefficientsDoc::from_defaults(DecayVariant::ApproxExponential, true);
  CHECK(!base_only.has_decay());
  CHECK_THROWS_AS(base_only.decay(), DomainError);

  const CoefficientsDoc ab =
      CoefficientsDoc::from_defaults(DecayVariant::AlphaBetaDecay, false);
  CHECK(ab.decay().rd_star == 26530.611);
  CHECK(ab.decay().rn_star == 2040.8163);
  CHECK(ab.variant == DecayVariant::AlphaBetaDecay);
}

TEST_CASE("fnv1a64 matches reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}
