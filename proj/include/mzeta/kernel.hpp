#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzeta {

using cdouble = std::complex<double>;
using ctuple  = std::vector<cdouble>;

// Method tag describing which evaluation path produced a result.
enum class Method {
  Series,
  Explicit,
  Recursion,
  Newton,
  Mellin,
  DifferenceShift,
  Exact,
};

const char* to_string(Method m);

struct EvalResult {
  cdouble value{};
  double abs_error = 0.0;   // estimated absolute error of value
  Method method = Method::Exact;
  std::uint64_t work = 0;   // terms summed / nodes evaluated
};

// Thrown when a series or quadrature cannot certify the requested tolerance.
// Carries the best estimate obtained so far.
struct convergence_error : std::runtime_error {
  EvalResult best;
  convergence_error(const std::string& msg, EvalResult b)
      : std::runtime_error(msg), best(b) {}
};

// Thrown when cancellation makes every available path lose the target
// accuracy (e.g. a divided difference across a near-singular divisor).
struct conditioning_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// True if z lies on the branch cut R_{<=0} (including 0).
bool on_cut(cdouble z);

// log z with Im in (-pi, pi), cut along R_{<=0}.  Rejects the cut.
cdouble principal_log(cdouble z);

// z^s = exp(s log z) on the principal branch.  z^0 == 1 and z^1 == z exactly.
cdouble principal_power(cdouble z, cdouble s);

// Membership in U_d: every entry nonzero and every contiguous block sum of
// principal arguments arg q_i + ... + arg q_j strictly inside (-pi, pi).
// On U_d the principal power of a block product equals the product of the
// entries' principal powers, which is what every formula here relies on.
bool in_domain_Ud(const ctuple& q);

// First m entries x_[m] and the complement x^[m] (entries m+1..d).
ctuple tuple_prefix(const ctuple& x, std::size_t m);
ctuple tuple_suffix(const ctuple& x, std::size_t m);

// Comparison convention used throughout the tests and the verify suites:
// absolute when the reference is small (|expected| < 1), relative otherwise.
inline double deviation(cdouble got, cdouble expected) {
  double scale = std::abs(expected);
  double d = std::abs(got - expected);
  return scale < 1.0 ? d : d / scale;
}

inline bool close(cdouble got, cdouble expected, double tol = 1e-9) {
  return deviation(got, expected) <= tol;
}

}  // namespace mzeta
