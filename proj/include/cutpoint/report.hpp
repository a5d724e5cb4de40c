#pragma once

// Serialization: curve CSV (12 significant digits), JSON documents, and a
// minimal SVG preview of a curve.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cutpoint/assumptions.hpp"
#include "cutpoint/bifurcation.hpp"
#include "cutpoint/discrete.hpp"
#include "cutpoint/simulation.hpp"

namespace cutpoint {

/// Everything `ocp` reports for one procedure.
struct ProcedureReport {
  std::string name;
  double c = 0.0;
  double ucp = 0.0;
  AssumptionReport assumptions;
  bool applicable = false;
  std::string message;
  std::optional<CutPointResult> cut;
  std::optional<double> docp;
  std::optional<long> docp_achieving_n;
  std::string docp_method;  // "remark1", "bruteforce" or "cocp"
  std::optional<DiscreteCutPoint> remark1;
  std::optional<DiscreteCutPoint> bruteforce;
  bool bruteforce_tail_decreasing = false;
  std::optional<std::string> curve_file;
};

/// Runs the assumption audit and, when it passes, the cut-point engine and
/// both discrete methods. Violations are recorded, never thrown.
ProcedureReport build_procedure_report(const ProcedureSpec& proc,
                                       Execution exec = Execution::parallel());

/// x rounded to 12 significant digits (non-finite values pass through).
double round_sig12(double x);
std::string format_sig12(double x);

nlohmann::json to_json(const AssumptionReport& report);
nlohmann::json to_json(const ProcedureReport& report, bool include_discrete);
nlohmann::json simulation_json(const SimResult& result, double closed_form);

/// Writes `# ucp=<value>`, the header `n,p_n,dp_dn,residual` and one row
/// per point.
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points);
/// Inverse of write_curve_csv; lines starting with '#' are skipped.
std::vector<CurvePoint> read_curve_csv(std::istream& in);

/// Polyline of (n, p_n) with a dashed horizontal line at UCP.
void write_curve_svg(std::ostream& out, std::span<const CurvePoint> points,
                     std::string_view title);

}  // namespace cutpoint
