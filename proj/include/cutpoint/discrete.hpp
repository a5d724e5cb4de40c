#pragma once

// Discrete-scale optimal cut-point: integer cohorts only.

#include <optional>
#include <string_view>
#include <vector>

#include "cutpoint/bifurcation.hpp"

namespace cutpoint {

enum class DocpMethod { remark1, bruteforce };

std::string_view to_string(DocpMethod method) noexcept;

struct DiscreteCutPoint {
  double docp = 0.0;
  long achieving_n = 0;
  DocpMethod method = DocpMethod::bruteforce;
  std::optional<double> cocp_gap;  // cocp - docp, when the cocp is known
};

/// max(p_floor(n*), p_ceil(n*)) around the stationary point. Returns nullopt
/// for b1 results, where the recipe does not apply and the caller should
/// report docp = cocp.
std::optional<DiscreteCutPoint> docp_remark1(const ProcedureSpec& proc,
                                             const CutPointResult& result);

/// p_n on every integer n in [first, n_max]; nullopt where the root is
/// missing or lies above UCP.
struct IntegerScan {
  long first_n = 0;
  std::vector<std::optional<double>> p_n;
};

/// first = ceil(c) when include_c, otherwise the smallest integer > c.
IntegerScan integer_scan(const ProcedureSpec& proc, long n_max, bool include_c = true,
                         Execution exec = Execution::parallel());

/// True when p_n is non-increasing on every integer n >= from in the scan.
bool tail_decreasing(const IntegerScan& scan, long from = 64);

/// Brute-force maximum of p_n over the integer scan; ties go to the
/// smallest n. Throws DomainError when n_max < first + 1 or when no integer
/// carries a root.
DiscreteCutPoint docp_bruteforce(const ProcedureSpec& proc, long n_max = 512,
                                 bool include_c = true, Execution exec = Execution::parallel());

}  // namespace cutpoint
