#include "mzeta/gamma.hpp"

#include <cmath>

namespace mzeta {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's classic double set).
static const double lanczos_p[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

static bool is_nonpositive_integer(cdouble z) {
  return z.imag() == 0.0 && z.real() <= 0.0 &&
         z.real() == std::floor(z.real());
}

cdouble complex_gamma(cdouble z) {
  if (is_nonpositive_integer(z))
    throw std::domain_error("complex_gamma: pole at nonpositive integer");
  const double pi = M_PI;
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  }
  z -= 1.0;
  cdouble x = lanczos_p[0];
  for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (z + cdouble(i, 0.0));
  cdouble t = z + 7.5;  // g + 1/2
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cdouble complex_log_gamma(cdouble z) {
  if (z.real() <= 0.0)
    throw std::domain_error("complex_log_gamma: requires Re(z) > 0");
  z -= 1.0;
  cdouble x = lanczos_p[0];
  for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (z + cdouble(i, 0.0));
  cdouble t = z + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t +
         std::log(x);
}

}  // namespace mzeta
