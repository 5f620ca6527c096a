#include "mzeta/kernel.hpp"

#include <cmath>

namespace mzeta {

const char* to_string(Method m) {
  switch (m) {
    case Method::Series:          return "series";
    case Method::Explicit:        return "explicit";
    case Method::Recursion:       return "recursion";
    case Method::Newton:          return "newton";
    case Method::Mellin:          return "mellin";
    case Method::DifferenceShift: return "difference-shift";
    case Method::Exact:           return "exact";
  }
  return "?";
}

bool on_cut(cdouble z) {
  return z.imag() == 0.0 && z.real() <= 0.0;
}

cdouble principal_log(cdouble z) {
  if (on_cut(z))
    throw std::domain_error("principal_log: argument on the cut R_{<=0}");
  // std::log is principal-branch with Im in (-pi, pi]; the cut itself
  // (where Im would be pi or -inf) is excluded above.
  return std::log(z);
}

cdouble principal_power(cdouble z, cdouble s) {
  if (s == cdouble(0.0, 0.0)) return {1.0, 0.0};
  if (s == cdouble(1.0, 0.0)) return z;
  return std::exp(s * principal_log(z));
}

bool in_domain_Ud(const ctuple& q) {
  const double pi = M_PI;
  std::vector<double> arg(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == cdouble(0.0, 0.0)) return false;
    arg[i] = std::arg(q[i]);  // in (-pi, pi]
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = i; j < q.size(); ++j) {
      sum += arg[j];
      if (!(sum > -pi && sum < pi)) return false;
    }
  }
  return true;
}

ctuple tuple_prefix(const ctuple& x, std::size_t m) {
  if (m > x.size()) throw std::out_of_range("tuple_prefix: m > length");
  return ctuple(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m));
}

ctuple tuple_suffix(const ctuple& x, std::size_t m) {
  if (m > x.size()) throw std::out_of_range("tuple_suffix: m > length");
  return ctuple(x.begin() + static_cast<std::ptrdiff_t>(m), x.end());
}

}  // namespace mzeta
