#pragma once

#include <stdexcept>
#include <string>

namespace cutpoint {

/// Argument outside the domain where a procedure or operation is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// t(n, p) >= 1 on the whole prevalence scan at this n: (M4) fails locally.
class NoRootError : public std::runtime_error {
public:
  explicit NoRootError(double n)
      : std::runtime_error("no root of t(n,p)=1 in (0, UCP] at n=" + std::to_string(n)),
        n_(n) {}
  double n() const noexcept { return n_; }

private:
  double n_;
};

/// t(n, UCP) < 1, so the root lies above UCP: (M3) fails at this n.
class RootAboveUcpError : public std::runtime_error {
public:
  explicit RootAboveUcpError(double n)
      : std::runtime_error("t(n,UCP) < 1, root above UCP at n=" + std::to_string(n)),
        n_(n) {}
  double n() const noexcept { return n_; }

private:
  double n_;
};

class NotSimulatableError : public std::invalid_argument {
public:
  explicit NotSimulatableError(const std::string& name)
      : std::invalid_argument("procedure '" + name + "' is not simulatable") {}
};

}  // namespace cutpoint
