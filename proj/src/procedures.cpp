#include "cutpoint/procedures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cutpoint/errors.hpp"

namespace cutpoint {

namespace {

constexpr double kSterrettLimitBelow = 1e-12;

void require_positive_n(double n, const char* who) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError(std::string(who) + ": n must be positive, got " + std::to_string(n));
  }
}

void require_unit_p(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(who) + ": p must lie in [0,1], got " + std::to_string(p));
  }
}

void require_positive_integer(double n, const char* who) {
  if (!(n >= 1.0) || n != std::floor(n) || n > 1000.0) {
    throw DomainError(std::string(who) + ": n must be a positive integer, got " +
                      std::to_string(n));
  }
}

// q^e with q = 1 - p, via exp(e ln q) so that real exponents are exact.
double qpow(double e, double p) {
  if (e == 0.0) return 1.0;
  if (p == 1.0) return e > 0.0 ? 0.0 : INFINITY;
  return std::exp(e * std::log1p(-p));
}

// 1 - q^e without cancellation for small p.
double one_minus_qpow(double e, double p) {
  if (e == 0.0) return 0.0;
  if (p == 1.0) return e > 0.0 ? 1.0 : -INFINITY;
  return -std::expm1(e * std::log1p(-p));
}

double lnq(double p) { return std::log1p(-p); }

// ---- Dorfman --------------------------------------------------------------

double dorfman_dt_dn(double n, double p) {
  return -1.0 / (n * n) - qpow(n, p) * lnq(p);
}

double dorfman_dt_dp(double n, double p) { return n * qpow(n - 1.0, p); }

double dorfman_d2t_dn2(double n, double p) {
  const double l = lnq(p);
  return 2.0 / (n * n * n) - qpow(n, p) * l * l;
}

double dorfman_p_n(double n) { return -std::expm1(-std::log(n) / n); }

// ---- Squared array A2 -----------------------------------------------------

double a2_dt_dn(double n, double p) {
  return -2.0 / (n * n) - 2.0 * qpow(n, p) * lnq(p) * one_minus_qpow(n - 1.0, p);
}

double a2_dt_dp(double n, double p) {
  return 2.0 * n * qpow(n - 1.0, p) - (2.0 * n - 1.0) * qpow(2.0 * n - 2.0, p);
}

double a2_d2t_dn2(double n, double p) {
  const double l = lnq(p);
  return 4.0 / (n * n * n) - 2.0 * qpow(n, p) * l * l * (1.0 - 2.0 * qpow(n - 1.0, p));
}

// ---- Modified Dorfman -----------------------------------------------------

double md_dt_dn(double n, double p) {
  const double l = lnq(p);
  const double pq = p * qpow(n - 1.0, p);
  return -qpow(n, p) * l - pq * l / n - (1.0 - pq) / (n * n);
}

double md_dt_dp(double n, double p) {
  double tail = 0.0;
  if (p > 0.0) tail = (n - 1.0) / n * p * qpow(n - 2.0, p);
  return qpow(n - 1.0, p) * (n - 1.0 / n) + tail;
}

constexpr std::array<ProcedureSpec, 6> kRegistry{{
    {.name = "dorfman",
     .c = 2.0,
     .cohort_law = CohortLaw::identity,
     .rate = rate_dorfman,
     .mean = mean_dorfman,
     .dt_dn = dorfman_dt_dn,
     .dt_dp = dorfman_dt_dp,
     .d2t_dn2 = dorfman_d2t_dn2,
     .analytic_p_n = dorfman_p_n,
     .satisfies_m1 = true,
     .integer_only = false,
     .simulatable = true},
    {.name = "md",
     .c = 2.0,
     .cohort_law = CohortLaw::identity,
     .rate = rate_md,
     .mean = mean_md,
     .dt_dn = md_dt_dn,
     .dt_dp = md_dt_dp,
     .satisfies_m1 = true,
     .integer_only = false,
     .simulatable = true},
    {.name = "sterrett",
     .c = 2.0,
     .cohort_law = CohortLaw::identity,
     .rate = rate_sterrett,
     .mean = mean_sterrett,
     .satisfies_m1 = true,
     .integer_only = false,
     .simulatable = true},
    {.name = "a2",
     .c = 3.0,
     .cohort_law = CohortLaw::square,
     .rate = rate_a2,
     .mean = mean_a2,
     .dt_dn = a2_dt_dn,
     .dt_dp = a2_dt_dp,
     .d2t_dn2 = a2_d2t_dn2,
     .satisfies_m1 = true,
     .integer_only = false,
     .simulatable = true},
    {.name = "pt",
     .c = 2.0,
     .cohort_law = CohortLaw::identity,
     .rate = rate_pt,
     .mean = mean_pt,
     .satisfies_m1 = false,
     .integer_only = true,
     .simulatable = false},
    {.name = "halving",
     .c = 2.0,
     .cohort_law = CohortLaw::power_of_two,
     .rate = rate_halving,
     .mean = mean_halving,
     .satisfies_m1 = false,
     .integer_only = true,
     .simulatable = false},
}};

}  // namespace

double ucp() noexcept { return (3.0 - std::sqrt(5.0)) / 2.0; }

Prevalence::Prevalence(double p) : p_(p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("prevalence must lie in (0,1), got " + std::to_string(p));
  }
}

std::string_view cohort_law_text(CohortLaw law) noexcept {
  switch (law) {
    case CohortLaw::identity: return "n";
    case CohortLaw::square: return "n^2";
    case CohortLaw::power_of_two: return "2^n";
  }
  return "?";
}

double ProcedureSpec::cohort_size(double n) const {
  switch (cohort_law) {
    case CohortLaw::identity: return n;
    case CohortLaw::square: return n * n;
    case CohortLaw::power_of_two: return std::exp2(n);
  }
  return n;
}

double rate_dorfman(double n, double p) {
  require_positive_n(n, "dorfman");
  require_unit_p(p, "dorfman");
  return 1.0 / n + one_minus_qpow(n, p);
}

double mean_dorfman(double n, double p) {
  require_positive_n(n, "dorfman");
  require_unit_p(p, "dorfman");
  return 1.0 + n * one_minus_qpow(n, p);
}

double rate_a2(double n, double p) {
  require_positive_n(n, "a2");
  require_unit_p(p, "a2");
  const double miss = one_minus_qpow(n, p);
  return 2.0 / n + miss * miss + p * qpow(2.0 * n - 1.0, p);
}

double mean_a2(double n, double p) {
  require_positive_n(n, "a2");
  require_unit_p(p, "a2");
  const double miss = one_minus_qpow(n, p);
  return 2.0 * n + n * n * (miss * miss + p * qpow(2.0 * n - 1.0, p));
}

double rate_md(double n, double p) {
  require_positive_n(n, "md");
  require_unit_p(p, "md");
  return one_minus_qpow(n, p) + (1.0 - p * qpow(n - 1.0, p)) / n;
}

double mean_md(double n, double p) {
  require_positive_n(n, "md");
  require_unit_p(p, "md");
  return n * one_minus_qpow(n, p) + 1.0 - p * qpow(n - 1.0, p);
}

double rate_sterrett(double n, double p) {
  require_positive_n(n, "sterrett");
  require_unit_p(p, "sterrett");
  if (p < kSterrettLimitBelow) return 1.0 / n;
  // (1 - q^{n+1}) / (1 - q)
  const double geometric = one_minus_qpow(n + 1.0, p) / p;
  return 1.0 + p + (2.0 * (1.0 - p) - geometric) / n;
}

double mean_sterrett(double n, double p) {
  require_positive_n(n, "sterrett");
  require_unit_p(p, "sterrett");
  if (p < kSterrettLimitBelow) return 1.0;
  const double geometric = one_minus_qpow(n + 1.0, p) / p;
  return n * (1.0 + p) + 2.0 * (1.0 - p) - geometric;
}

double mean_pt(double n, double p) {
  require_positive_integer(n, "pt");
  require_unit_p(p, "pt");
  const double q = 1.0 - p;
  const double alternating = (static_cast<long>(n) % 2 == 0 ? 1.0 : -1.0) * std::pow(q, n);
  return n * (2.0 - q * q) / (1.0 + q) +
         (q * q + q - 1.0) / ((1.0 + q) * (1.0 + q)) * (1.0 - alternating);
}

double rate_pt(double n, double p) { return mean_pt(n, p) / n; }

double mean_halving(double n, double p) {
  require_positive_integer(n, "halving");
  require_unit_p(p, "halving");
  const int levels = static_cast<int>(n);
  double sum = 0.0;
  for (int k = 1; k <= levels; ++k) {
    sum += std::ldexp(one_minus_qpow(std::ldexp(1.0, k), p), -k);
  }
  return 1.0 + std::ldexp(sum, levels + 1);
}

double rate_halving(double n, double p) {
  return mean_halving(n, p) / std::exp2(n);
}

std::span<const ProcedureSpec> registry() noexcept { return kRegistry; }

const ProcedureSpec& find_procedure(std::string_view name) {
  auto it = std::ranges::find(kRegistry, name, &ProcedureSpec::name);
  if (it == kRegistry.end()) {
    throw DomainError("unknown procedure '" + std::string(name) + "'");
  }
  return *it;
}

double partial_n(const ProcedureSpec& proc, double n, double p) {
  if (proc.dt_dn) return proc.dt_dn(n, p);
  const double h = 1e-6 * std::max(1.0, std::abs(n));
  return (proc.rate(n + h, p) - proc.rate(n - h, p)) / (2.0 * h);
}

double partial_p(const ProcedureSpec& proc, double n, double p) {
  if (proc.dt_dp) return proc.dt_dp(n, p);
  const double h = 1e-6 * std::min(p, 1.0 - p);
  return (proc.rate(n, p + h) - proc.rate(n, p - h)) / (2.0 * h);
}

double partial_nn(const ProcedureSpec& proc, double n, double p) {
  if (proc.d2t_dn2) return proc.d2t_dn2(n, p);
  if (proc.dt_dn) {
    const double h = 1e-5 * std::max(1.0, std::abs(n));
    return (proc.dt_dn(n + h, p) - proc.dt_dn(n - h, p)) / (2.0 * h);
  }
  const double h = 1e-4 * std::max(1.0, std::abs(n));
  return (proc.rate(n + h, p) - 2.0 * proc.rate(n, p) + proc.rate(n - h, p)) / (h * h);
}

double partial_np(const ProcedureSpec& proc, double n, double p) {
  const double h = 1e-5 * std::min(p, 1.0 - p);
  return (partial_n(proc, n, p + h) - partial_n(proc, n, p - h)) / (2.0 * h);
}

}  // namespace cutpoint
