#include "cutpoint/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cutpoint/errors.hpp"
#include "cutpoint/report.hpp"

namespace cutpoint {

namespace {

struct CurveArgs {
  std::string proc;
  double n_lo = 0.0;
  double n_hi = 0.0;
  int steps = 256;
  bool extended = false;
  double p_hi = 0.0;
  std::string out_path;
  std::string svg_path;
};

struct OcpArgs {
  std::string proc;
  bool discrete = false;
  bool json = false;
  std::string curve_out;
};

struct SimArgs {
  std::string proc;
  long n = 0;
  double p = 0.0;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 16384;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

int cmd_list(std::ostream& out) {
  for (const auto& proc : registry()) {
    out << proc.name << " c=" << format_sig12(proc.c) << " N(n)=" << cohort_law_text(proc.cohort_law)
        << (proc.integer_only ? " integer-only" : "") << (proc.simulatable ? " simulatable" : "")
        << '\n';
  }
  return kExitOk;
}

int cmd_check(const std::string& name, std::ostream& out) {
  const AssumptionReport report = check_assumptions(find_procedure(name));
  out << to_json(report).dump(2) << '\n';
  return report.all_pass() ? kExitOk : kExitViolation;
}

int cmd_curve(const CurveArgs& a, std::ostream& out) {
  const ProcedureSpec& proc = find_procedure(a.proc);
  std::vector<CurvePoint> points;
  if (a.extended) {
    points = trace_all_roots(proc, a.n_lo, a.n_hi, a.steps, a.p_hi > 0.0 ? a.p_hi : ucp());
  } else {
    points = trace_curve(proc, a.n_lo, a.n_hi, a.steps).points;
  }
  {
    std::ofstream f = open_out(a.out_path);
    write_curve_csv(f, points);
    if (!f) throw IoError("failed writing '" + a.out_path + "'");
  }
  if (!a.svg_path.empty()) {
    std::ofstream f = open_out(a.svg_path);
    write_curve_svg(f, points, proc.name);
  }
  out << "wrote " << points.size() << " rows to " << a.out_path << '\n';
  return kExitOk;
}

void print_text_report(const ProcedureReport& r, bool discrete, std::ostream& out) {
  out << "procedure: " << r.name << '\n';
  out << "c: " << format_sig12(r.c) << '\n';
  out << "ucp: " << format_sig12(r.ucp) << '\n';
  out << "status: " << r.message << '\n';
  if (!r.cut) return;
  out << "bifurcation_type: " << to_string(r.cut->type) << '\n';
  out << "cocp: " << format_sig12(r.cut->cocp) << '\n';
  if (r.cut->n_star) out << "n_star: " << format_sig12(*r.cut->n_star) << '\n';
  out << "limit_at_c: " << format_sig12(r.cut->limit_at_c) << '\n';
  out << "limit_at_infinity: " << format_sig12(r.cut->limit_at_infinity) << '\n';
  if (r.docp) out << "docp: " << format_sig12(*r.docp) << " (" << r.docp_method << ")\n";
  if (r.docp_achieving_n) out << "docp_achieving_n: " << *r.docp_achieving_n << '\n';
  if (discrete) {
    if (r.remark1) {
      out << "remark1: " << format_sig12(r.remark1->docp) << " at n=" << r.remark1->achieving_n
          << '\n';
    } else {
      out << "remark1: inapplicable (b1)\n";
    }
    if (r.bruteforce) {
      out << "bruteforce: " << format_sig12(r.bruteforce->docp)
          << " at n=" << r.bruteforce->achieving_n << '\n';
    }
  }
}

int cmd_ocp(const OcpArgs& a, std::ostream& out) {
  const ProcedureSpec& proc = find_procedure(a.proc);
  ProcedureReport report = build_procedure_report(proc);
  if (!a.curve_out.empty() && report.applicable) {
    const BifurcationCurve curve = trace_curve(proc, proc.c + 1e-3, 60.0, 256);
    std::ofstream f = open_out(a.curve_out);
    write_curve_csv(f, curve.points);
    report.curve_file = a.curve_out;
  }
  if (a.json) {
    out << to_json(report, a.discrete).dump(2) << '\n';
  } else {
    print_text_report(report, a.discrete, out);
  }
  return report.applicable ? kExitOk : kExitViolation;
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  const ProcedureSpec& proc = find_procedure(a.proc);
  if (!proc.simulatable) throw NotSimulatableError(std::string(proc.name));
  const SimConfig cfg{a.trials, a.seed, a.chunk_size};
  const SimResult res = simulate(proc, a.n, Prevalence(a.p), cfg);
  out << simulation_json(res, proc.mean(static_cast<double>(a.n), a.p)).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal cut-points of binomial group testing procedures", "cutpoint"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered procedures");

  std::string check_proc;
  auto* check = app.add_subcommand("check", "Audit assumptions (M0)-(M4); JSON report");
  check->add_option("proc", check_proc, "Procedure name")->required();

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Trace n -> p_n into a CSV file");
  curve->add_option("proc", curve_args.proc, "Procedure name")->required();
  curve->add_option("--n-lo", curve_args.n_lo, "Lower end of the n range")->required();
  curve->add_option("--n-hi", curve_args.n_hi, "Upper end of the n range")->required();
  curve->add_option("--steps", curve_args.steps, "Number of log-spaced samples")->required();
  curve->add_flag("--extended", curve_args.extended, "Emit every root per n (n may be below c)");
  curve->add_option("--p-hi", curve_args.p_hi, "Upper prevalence for --extended (default UCP)");
  curve->add_option("--out", curve_args.out_path, "CSV output file")->required();
  curve->add_option("--svg", curve_args.svg_path, "Optional SVG preview");

  OcpArgs ocp_args;
  auto* ocp = app.add_subcommand("ocp", "Compute continuous and discrete cut-points");
  ocp->add_option("proc", ocp_args.proc, "Procedure name")->required();
  ocp->add_flag("--discrete", ocp_args.discrete, "Include both discrete methods");
  ocp->add_flag("--json", ocp_args.json, "Emit JSON");
  ocp->add_option("--curve-out", ocp_args.curve_out, "Also write the curve CSV here");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimate of M(n,p)");
  sim->add_option("proc", sim_args.proc, "Procedure name")->required();
  sim->add_option("--n", sim_args.n, "Cohort parameter")->required();
  sim->add_option("--p", sim_args.p, "Prevalence")->required();
  sim->add_option("--trials", sim_args.trials, "Number of trials");
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim->add_option("--chunk-size", sim_args.chunk_size, "Trials per RNG chunk");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list) return cmd_list(out);
    if (*check) return cmd_check(check_proc, out);
    if (*curve) return cmd_curve(curve_args, out);
    if (*ocp) return cmd_ocp(ocp_args, out);
    if (*sim) return cmd_simulate(sim_args, out);
  } catch (const NotSimulatableError& e) {
    err << "error: " << e.what() << " (not simulatable)\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NoRootError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RootAboveUcpError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cutpoint
