#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cutpoint/cli.hpp"
#include "cutpoint/report.hpp"
#include "support/mini_schema.hpp"

using namespace cutpoint;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cutpoint_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const mini_schema::Validator& validator() {
  static const mini_schema::Validator v = [] {
    std::ifstream f(CUTPOINT_SCHEMA_FILE);
    return mini_schema::Validator(json::parse(f));
  }();
  return v;
}

}  // namespace

TEST_CASE("list") {
  const Run r = run({"list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("dorfman c=2 N(n)=n simulatable") != std::string::npos);
  CHECK(r.out.find("a2 c=3 N(n)=n^2 simulatable") != std::string::npos);
  CHECK(r.out.find("halving c=2 N(n)=2^n integer-only") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"check", "nope"}).code == 2);
  CHECK(run({"simulate", "dorfman", "--n", "5"}).code == 2);
  CHECK(run({"simulate", "dorfman", "--n", "5", "--p", "1.5"}).code == 2);
  CHECK(run({"curve", "dorfman", "--n-lo", "1", "--n-hi", "10", "--steps", "8", "--out",
             scratch("bad.csv").string()})
            .code == 2);
}

TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("check reports and exit codes") {
  const Run d = run({"check", "dorfman"});
  CHECK(d.code == 0);
  const json doc = json::parse(d.out);
  CHECK(doc["all_pass"] == true);
  CHECK(validator().validate(doc, "assumption_report").empty());

  const Run pt = run({"check", "pt"});
  CHECK(pt.code == 3);
  const json pdoc = json::parse(pt.out);
  CHECK(pdoc["violated"] == json::array({"(M1)", "(M3)"}));
}

TEST_CASE("ocp text output") {
  const Run d = run({"ocp", "dorfman", "--discrete"});
  CHECK(d.code == 0);
  CHECK(d.out.find("bifurcation_type: b2") != std::string::npos);
  CHECK(d.out.find("cocp: 0.307799372445") != std::string::npos);
  CHECK(d.out.find("remark1: 0.306638725649 at n=3") != std::string::npos);
  CHECK(d.out.find("bruteforce: 0.306638725649 at n=3") != std::string::npos);

  const Run s = run({"ocp", "sterrett", "--discrete"});
  CHECK(s.code == 0);
  CHECK(s.out.find("bifurcation_type: b1") != std::string::npos);
  CHECK(s.out.find("remark1: inapplicable (b1)") != std::string::npos);
  CHECK(s.out.find("docp: 0.38196601125 (cocp)") != std::string::npos);
}

TEST_CASE("ocp json and violation document") {
  const Run a2 = run({"ocp", "a2", "--json", "--discrete"});
  CHECK(a2.code == 0);
  const json doc = json::parse(a2.out);
  CHECK(validator().validate(doc, "procedure_report").empty());
  CHECK(doc["docp_achieving_n"] == 5);
  CHECK(doc["discrete"]["agreement"].get<double>() < 1e-10);

  const Run pt = run({"ocp", "pt", "--json"});
  CHECK(pt.code == 3);
  const json pdoc = json::parse(pt.out);
  CHECK(pdoc["message"] == "assumptions violated, OCP method inapplicable: (M1),(M3) violated");
  CHECK(validator().validate(pdoc).empty());

  const Run h = run({"ocp", "halving"});
  CHECK(h.code == 3);
  CHECK(h.out.find("(M1) violated") != std::string::npos);
}

TEST_CASE("ocp writes the curve when asked") {
  const fs::path csv = scratch("ocp_curve.csv");
  fs::remove(csv);
  const Run r = run({"ocp", "md", "--json", "--curve-out", csv.string()});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["curve_file"] == csv.string());
  std::ifstream f(csv);
  CHECK(read_curve_csv(f).size() == 256);
}

TEST_CASE("curve command writes csv and svg") {
  const fs::path csv = scratch("dorfman.csv");
  const fs::path svg = scratch("dorfman.svg");
  const Run r = run({"curve", "dorfman", "--n-lo", "2.01", "--n-hi", "100", "--steps", "256",
                     "--out", csv.string(), "--svg", svg.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("wrote 256 rows") != std::string::npos);
  std::ifstream f(csv);
  const auto pts = read_curve_csv(f);
  REQUIRE(pts.size() == 256);
  for (const auto& pt : pts) {
    CHECK(std::abs(pt.p_n - (1.0 - std::pow(1.0 / pt.n, 1.0 / pt.n))) < 1e-11);
  }
  CHECK(fs::file_size(svg) > 100);
}

TEST_CASE("extended curve reaches below c") {
  const fs::path csv = scratch("a2_extended.csv");
  const Run r = run({"curve", "a2", "--n-lo", "0.5", "--n-hi", "20", "--steps", "64",
                     "--extended", "--p-hi", "0.9", "--out", csv.string()});
  CHECK(r.code == 0);
  std::ifstream f(csv);
  const auto pts = read_curve_csv(f);
  CHECK_FALSE(pts.empty());
  for (const auto& pt : pts) CHECK(pt.residual < 1e-10);
}

TEST_CASE("unwritable output exits 1") {
  const Run r = run({"curve", "dorfman", "--n-lo", "2.01", "--n-hi", "10", "--steps", "4", "--out",
                     "/nonexistent-dir/x.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("simulate") {
  const Run d = run({"simulate", "dorfman", "--n", "5", "--p", "0.1", "--trials", "1000000",
                     "--seed", "42"});
  CHECK(d.code == 0);
  const json doc = json::parse(d.out);
  CHECK(validator().validate(doc, "simulation_result").empty());
  CHECK(doc["closed_form"] == 3.04755);
  CHECK(std::abs(doc["z_score"].get<double>()) < 4.0);

  const Run again = run({"simulate", "dorfman", "--n", "5", "--p", "0.1", "--trials", "1000000",
                         "--seed", "42"});
  CHECK(again.out == d.out);

  const Run h = run({"simulate", "halving", "--n", "3", "--p", "0.1"});
  CHECK(h.code == 2);
  CHECK(h.err.find("not simulatable") != std::string::npos);
  CHECK(run({"simulate", "pt", "--n", "3", "--p", "0.1"}).code == 2);
}
