#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "cutpoint/report.hpp"
#include "support/mini_schema.hpp"

using namespace cutpoint;
using nlohmann::json;

namespace {

const mini_schema::Validator& validator() {
  static const mini_schema::Validator v = [] {
    std::ifstream f(CUTPOINT_SCHEMA_FILE);
    REQUIRE(f.good());
    return mini_schema::Validator(json::parse(f));
  }();
  return v;
}

std::string joined(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) out += e + "\n";
  return out;
}

bool same_to_12_digits(double a, double b) { return format_sig12(a) == format_sig12(b); }

}  // namespace

TEST_CASE("sig12 formatting") {
  CHECK(format_sig12(ucp()) == "0.38196601125");
  CHECK(format_sig12(0.30779937244511) == "0.307799372445");
  CHECK(format_sig12(2.0) == "2");
  CHECK(round_sig12(1.0 / 3.0) == 0.333333333333);
  CHECK(round_sig12(0.0) == 0.0);
  CHECK(std::isinf(round_sig12(INFINITY)));
}

TEST_CASE("curve csv round trip") {
  const BifurcationCurve curve = trace_curve(find_procedure("a2"), 3.01, 500.0, 300);
  std::stringstream buf;
  write_curve_csv(buf, curve.points);
  const std::string text = buf.str();
  CHECK(text.rfind("# ucp=0.38196601125\n", 0) == 0);
  CHECK(text.find("n,p_n,dp_dn,residual\n") != std::string::npos);
  const auto back = read_curve_csv(buf);
  REQUIRE(back.size() == curve.points.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(same_to_12_digits(back[i].n, curve.points[i].n));
    CHECK(same_to_12_digits(back[i].p_n, curve.points[i].p_n));
    CHECK(same_to_12_digits(back[i].dp_dn, curve.points[i].dp_dn));
    CHECK(same_to_12_digits(back[i].residual, curve.points[i].residual));
    // half a unit in the 12th digit
    CHECK(std::abs(back[i].p_n - curve.points[i].p_n) <= 5e-12 * curve.points[i].p_n);
  }
}

TEST_CASE("csv round trip on random values") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-20, 20);
  std::vector<CurvePoint> pts(500);
  for (auto& pt : pts) {
    pt = {std::ldexp(std::abs(mant(gen)) + 1.0, expo(gen)), std::abs(mant(gen)),
          std::ldexp(mant(gen), expo(gen)), std::ldexp(std::abs(mant(gen)), -40)};
  }
  std::stringstream buf;
  write_curve_csv(buf, pts);
  const auto back = read_curve_csv(buf);
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].n == round_sig12(pts[i].n));
    CHECK(back[i].p_n == round_sig12(pts[i].p_n));
    CHECK(back[i].dp_dn == round_sig12(pts[i].dp_dn));
    CHECK(back[i].residual == round_sig12(pts[i].residual));
  }
}

TEST_CASE("csv reader rejects malformed input") {
  std::istringstream bad_header("x,y\n1,2\n");
  CHECK_THROWS(read_curve_csv(bad_header));
  std::istringstream short_row("n,p_n,dp_dn,residual\n1,2,3\n");
  CHECK_THROWS(read_curve_csv(short_row));
}

TEST_CASE("svg preview") {
  const BifurcationCurve curve = trace_curve(find_procedure("dorfman"), 2.01, 60.0, 64);
  std::ostringstream out;
  write_curve_svg(out, curve.points, "dorfman");
  const std::string svg = out.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("procedure reports") {
  const ProcedureReport d = build_procedure_report(find_procedure("dorfman"));
  CHECK(d.applicable);
  CHECK(d.message == "ok");
  CHECK(d.docp_method == "remark1");
  REQUIRE(d.docp_achieving_n.has_value());
  CHECK(*d.docp_achieving_n == 3);
  CHECK(d.bruteforce_tail_decreasing);

  const ProcedureReport s = build_procedure_report(find_procedure("sterrett"));
  CHECK(s.applicable);
  REQUIRE(s.cut.has_value());
  CHECK(s.cut->type == BifurcationType::b1);
  CHECK(s.docp_method == "cocp");
  REQUIRE(s.docp.has_value());
  CHECK(*s.docp == s.cut->cocp);
  CHECK_FALSE(s.remark1.has_value());

  const ProcedureReport pt = build_procedure_report(find_procedure("pt"));
  CHECK_FALSE(pt.applicable);
  CHECK(pt.message == "assumptions violated, OCP method inapplicable: (M1),(M3) violated");
  CHECK_FALSE(pt.cut.has_value());
  const json doc = to_json(pt, true);
  CHECK(doc["status"] == "assumptions_violated");
  CHECK(doc["cocp"].is_null());
}

TEST_CASE("every document validates against the shipped schema") {
  for (const auto& proc : registry()) {
    const ProcedureReport rep = build_procedure_report(proc);
    for (bool discrete : {false, true}) {
      const json doc = to_json(rep, discrete);
      const auto errors = validator().validate(doc);
      INFO(std::string(proc.name) << "\n" << joined(errors));
      CHECK(errors.empty());
      CHECK(validator().validate(doc, "procedure_report").empty());
    }
    const json audit = to_json(rep.assumptions);
    CHECK(validator().validate(audit, "assumption_report").empty());
    CHECK(validator().validate(audit).empty());
  }
  const SimResult sim = simulate_a2(3, Prevalence(0.1), {5000, 7, 512});
  const json sdoc = simulation_json(sim, mean_a2(3, 0.1));
  CHECK(validator().validate(sdoc, "simulation_result").empty());
  CHECK(validator().validate(sdoc).empty());
}

TEST_CASE("schema rejects broken documents") {
  const SimResult sim = simulate_md(3, Prevalence(0.1), {100, 1, 64});
  json doc = simulation_json(sim, mean_md(3, 0.1));
  json missing = doc;
  missing.erase("mean");
  CHECK_FALSE(validator().validate(missing, "simulation_result").empty());
  json extra = doc;
  extra["bogus"] = 1;
  CHECK_FALSE(validator().validate(extra, "simulation_result").empty());
  json wrong = doc;
  wrong["trials"] = "many";
  CHECK_FALSE(validator().validate(wrong, "simulation_result").empty());
  json negative = doc;
  negative["std_error"] = -1.0;
  CHECK_FALSE(validator().validate(negative, "simulation_result").empty());

  json rep = to_json(build_procedure_report(find_procedure("dorfman")), false);
  rep["bifurcation_type"] = "b9";
  CHECK_FALSE(validator().validate(rep).empty());
}

TEST_CASE("simulation json") {
  SimResult r;
  r.procedure = "dorfman";
  r.n = 5;
  r.p = 0.1;
  r.trials = 100;
  r.mean_tests = 3.1;
  r.std_error = 0.05;
  const json doc = simulation_json(r, 3.0);
  CHECK(doc["z_score"].get<double>() == doctest::Approx(2.0));
  CHECK(doc["closed_form"] == 3.0);
  r.std_error = 0.0;
  CHECK(simulation_json(r, 3.0)["z_score"].is_null());
  r.mean_tests = 3.0;
  CHECK(simulation_json(r, 3.0)["z_score"] == 0.0);
}

TEST_CASE("json numbers keep 12 significant digits") {
  const ProcedureReport d = build_procedure_report(find_procedure("dorfman"));
  const json doc = to_json(d, true);
  const double cocp = doc["cocp"].get<double>();
  CHECK(std::abs(cocp - (1.0 - std::exp(-std::exp(-1.0)))) < 1e-11);
  const double docp = doc["discrete"]["bruteforce"]["docp"].get<double>();
  CHECK(std::abs(docp - (1.0 - std::pow(3.0, -1.0 / 3.0))) < 1e-11);
}
