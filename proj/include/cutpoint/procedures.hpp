#pragma once

// Binomial group testing procedures: per-item test rates t(n,p), cohort
// means M(n,p) and closed-form partial derivatives where they exist.

#include <cmath>
#include <span>
#include <string>
#include <string_view>

namespace cutpoint {

/// Universal cut-point (3 - sqrt 5)/2. Above it no BGT procedure beats
/// individual testing.
double ucp() noexcept;

/// Prevalence p in the open interval (0, 1).
class Prevalence {
public:
  explicit Prevalence(double p);
  double p() const noexcept { return p_; }
  double q() const noexcept { return 1.0 - p_; }

private:
  double p_;
};

/// How the cohort size N(n) depends on the parameter n.
enum class CohortLaw { identity, square, power_of_two };

std::string_view cohort_law_text(CohortLaw law) noexcept;

using Bivariate = double (*)(double n, double p);
using Univariate = double (*)(double n);

struct ProcedureSpec {
  std::string_view name;
  double c = 2.0;  // (M0) domain constant
  CohortLaw cohort_law = CohortLaw::identity;
  Bivariate rate = nullptr;
  Bivariate mean = nullptr;
  Bivariate dt_dn = nullptr;    // optional
  Bivariate dt_dp = nullptr;    // optional
  Bivariate d2t_dn2 = nullptr;  // optional
  Univariate analytic_p_n = nullptr;
  // (M1) cannot be checked numerically; this is the modelling claim.
  bool satisfies_m1 = true;
  // Parameter n must be a positive integer (no continuous extension).
  bool integer_only = false;
  bool simulatable = false;

  double cohort_size(double n) const;
};

// Individual formulas. n is real unless stated; p is accepted on [0, 1] so
// that the one-sided limits at the ends can be evaluated.
double rate_dorfman(double n, double p);
double mean_dorfman(double n, double p);
double rate_a2(double n, double p);
double mean_a2(double n, double p);
double rate_md(double n, double p);
double mean_md(double n, double p);
double rate_sterrett(double n, double p);
double mean_sterrett(double n, double p);
/// Integer n >= 1 only.
double mean_pt(double n, double p);
double rate_pt(double n, double p);
/// Integer n >= 1 only; cohort 2^n items.
double mean_halving(double n, double p);
double rate_halving(double n, double p);

/// Registered procedures: "dorfman", "md", "sterrett", "a2", "pt", "halving".
std::span<const ProcedureSpec> registry() noexcept;

/// Throws DomainError for unknown names.
const ProcedureSpec& find_procedure(std::string_view name);

// Partials that fall back to central differences when no closed form is
// registered. Step for n is 1e-6 * max(1, |n|).
double partial_n(const ProcedureSpec& proc, double n, double p);
double partial_p(const ProcedureSpec& proc, double n, double p);
double partial_nn(const ProcedureSpec& proc, double n, double p);
double partial_np(const ProcedureSpec& proc, double n, double p);

}  // namespace cutpoint
