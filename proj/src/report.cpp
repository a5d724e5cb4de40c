#include "cutpoint/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cutpoint {

using nlohmann::json;

namespace {

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig12(x);
}

template <class T>
json opt_num(const std::optional<T>& x) {
  if (!x) return nullptr;
  if constexpr (std::is_integral_v<T>) {
    return *x;
  } else {
    return num(*x);
  }
}

std::string_view kind_text(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::inflection: return "inflection";
  }
  return "?";
}

json to_json(const CriticalPoint& cp) {
  return {{"n", num(cp.n)}, {"rate", num(cp.rate)}, {"slope", num(cp.slope)},
          {"kind", kind_text(cp.kind)}};
}

json to_json(const DiscreteCutPoint& d) {
  return {{"docp", num(d.docp)},
          {"achieving_n", d.achieving_n},
          {"method", to_string(d.method)},
          {"cocp_gap", opt_num(d.cocp_gap)}};
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

double round_sig12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::strtod(format_sig12(x).c_str(), nullptr);
}

std::string format_sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ProcedureReport build_procedure_report(const ProcedureSpec& proc, Execution exec) {
  ProcedureReport rep;
  rep.name = std::string(proc.name);
  rep.c = proc.c;
  rep.ucp = ucp();
  rep.assumptions = check_assumptions(proc, exec);
  rep.applicable = rep.assumptions.all_pass();
  if (!rep.applicable) {
    rep.message = "assumptions violated, OCP method inapplicable: " +
                  join(rep.assumptions.violated(), ",") + " violated";
    return rep;
  }

  rep.cut = classify_and_find_cocp(proc, {}, exec);
  const IntegerScan scan = integer_scan(proc, 512, true, exec);
  rep.bruteforce = docp_bruteforce(proc, 512, true, exec);
  rep.bruteforce->cocp_gap = rep.cut->cocp - rep.bruteforce->docp;
  rep.bruteforce_tail_decreasing = tail_decreasing(scan);
  rep.remark1 = docp_remark1(proc, *rep.cut);

  if (rep.remark1) {
    rep.docp = rep.remark1->docp;
    rep.docp_achieving_n = rep.remark1->achieving_n;
    rep.docp_method = "remark1";
    rep.message = "ok";
  } else {
    // b1: the recipe does not apply; the discrete cut-point is taken as the cocp.
    rep.docp = rep.cut->cocp;
    rep.docp_method = "cocp";
    if (std::abs(rep.bruteforce->docp - rep.cut->cocp) <= 1e-10) {
      rep.docp_achieving_n = rep.bruteforce->achieving_n;
    }
    rep.message = "ok (b1: docp reported as cocp)";
  }
  return rep;
}

json to_json(const AssumptionReport& r) {
  json m2 = {{"pass", r.m2.pass}, {"saturated_pairs", r.m2.saturated_pairs}, {"violation", nullptr}};
  if (r.m2.violation) {
    const auto& v = *r.m2.violation;
    m2["violation"] = {{"n", num(v.n)},
                       {"p_lo", num(v.p_lo)},
                       {"p_hi", num(v.p_hi)},
                       {"mean_lo", num(v.mean_lo)},
                       {"mean_hi", num(v.mean_hi)}};
  }
  json extrema = json::array();
  for (const auto& e : r.m3.extrema) extrema.push_back(to_json(e));
  json witnesses = json::array();
  for (const auto& w : r.m4.witnesses) witnesses.push_back({{"n", num(w.n)}, {"p", opt_num(w.p)}});

  return {{"procedure", r.procedure},
          {"m0", {{"c", num(r.m0.c)}, {"pass", r.m0.pass}}},
          {"m1", {{"trusted", r.m1.trusted}}},
          {"m2", std::move(m2)},
          {"m3",
           {{"pass", r.m3.pass},
            {"min_rate_at_ucp", num(r.m3.min_rate_at_ucp)},
            {"argmin_n", num(r.m3.argmin_n)},
            {"violation_n", opt_num(r.m3.violation_n)},
            {"extrema", std::move(extrema)}}},
          {"m4",
           {{"pass", r.m4.pass},
            {"violation_n", opt_num(r.m4.violation_n)},
            {"witnesses", std::move(witnesses)}}},
          {"all_pass", r.all_pass()},
          {"violated", r.violated()}};
}

json to_json(const ProcedureReport& r, bool include_discrete) {
  json doc = {{"name", r.name},
              {"c", num(r.c)},
              {"ucp", num(r.ucp)},
              {"status", r.applicable ? "ok" : "assumptions_violated"},
              {"message", r.message},
              {"assumption_report", to_json(r.assumptions)},
              {"cocp", nullptr},
              {"bifurcation_type", nullptr},
              {"n_star", nullptr},
              {"limit_at_c", nullptr},
              {"limit_at_infinity", nullptr},
              {"system_solutions", json::array()},
              {"docp", opt_num(r.docp)},
              {"docp_achieving_n", opt_num(r.docp_achieving_n)},
              {"docp_method", r.docp_method.empty() ? json(nullptr) : json(r.docp_method)},
              {"curve_file", r.curve_file ? json(*r.curve_file) : json(nullptr)}};
  if (r.cut) {
    doc["cocp"] = num(r.cut->cocp);
    doc["bifurcation_type"] = to_string(r.cut->type);
    doc["n_star"] = opt_num(r.cut->n_star);
    doc["limit_at_c"] = num(r.cut->limit_at_c);
    doc["limit_at_infinity"] = num(r.cut->limit_at_infinity);
    for (const auto& s : r.cut->system_solutions) {
      doc["system_solutions"].push_back({{"n", num(s.n)},
                                         {"p", num(s.p)},
                                         {"rate_residual", num(s.rate_residual)},
                                         {"slope_residual", num(s.slope_residual)}});
    }
  }
  if (include_discrete) {
    json agreement = nullptr;
    if (r.remark1 && r.bruteforce) agreement = num(std::abs(r.remark1->docp - r.bruteforce->docp));
    doc["discrete"] = {{"remark1", r.remark1 ? to_json(*r.remark1) : json(nullptr)},
                       {"bruteforce", r.bruteforce ? to_json(*r.bruteforce) : json(nullptr)},
                       {"agreement", agreement},
                       {"tail_decreasing", r.bruteforce_tail_decreasing}};
  }
  return doc;
}

json simulation_json(const SimResult& r, double closed_form) {
  json z = nullptr;
  if (r.std_error > 0.0) {
    z = num((r.mean_tests - closed_form) / r.std_error);
  } else if (r.mean_tests == closed_form) {
    z = 0.0;
  }
  return {{"procedure", r.procedure},
          {"n", r.n},
          {"p", num(r.p)},
          {"trials", r.trials},
          {"seed", r.seed},
          {"mean", num(r.mean_tests)},
          {"std_error", num(r.std_error)},
          {"closed_form", num(closed_form)},
          {"z_score", z}};
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
  out << "# ucp=" << format_sig12(ucp()) << '\n';
  out << "n,p_n,dp_dn,residual\n";
  for (const auto& pt : points) {
    out << format_sig12(pt.n) << ',' << format_sig12(pt.p_n) << ',' << format_sig12(pt.dp_dn)
        << ',' << format_sig12(pt.residual) << '\n';
  }
}

std::vector<CurvePoint> read_curve_csv(std::istream& in) {
  std::vector<CurvePoint> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "n,p_n,dp_dn,residual") throw std::runtime_error("unexpected CSV header: " + line);
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (double& x : v) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("short CSV row: " + line);
      x = std::strtod(cell.c_str(), nullptr);
    }
    out.push_back(CurvePoint{v[0], v[1], v[2], v[3]});
  }
  return out;
}

void write_curve_svg(std::ostream& out, std::span<const CurvePoint> points,
                     std::string_view title) {
  constexpr double width = 640.0;
  constexpr double height = 480.0;
  constexpr double margin = 48.0;
  double n_lo = 0.0;
  double n_hi = 1.0;
  if (!points.empty()) {
    const auto [lo, hi] = std::ranges::minmax_element(points, {}, &CurvePoint::n);
    n_lo = lo->n;
    n_hi = hi->n > lo->n ? hi->n : lo->n + 1.0;
  }
  double p_hi = ucp();
  for (const auto& pt : points) p_hi = std::max(p_hi, pt.p_n);
  p_hi *= 1.05;
  const auto sx = [&](double n) { return margin + (n - n_lo) / (n_hi - n_lo) * (width - 2 * margin); };
  const auto sy = [&](double p) { return height - margin - p / p_hi * (height - 2 * margin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << sy(0) << "\" x2=\"" << width - margin
      << "\" y2=\"" << sy(0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << sy(0) << "\" x2=\"" << margin << "\" y2=\""
      << margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << sy(ucp()) << "\" x2=\"" << width - margin
      << "\" y2=\"" << sy(ucp()) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& pt : points) out << sx(pt.n) << ',' << sy(pt.p_n) << ' ';
  out << "\"/>\n";
  out << "<text x=\"" << margin << "\" y=\"" << margin / 2 << "\" font-size=\"14\">" << title
      << "</text>\n";
  out << "</svg>\n";
}

}  // namespace cutpoint
