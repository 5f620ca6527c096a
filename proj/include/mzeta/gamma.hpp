#pragma once

#include "mzeta/kernel.hpp"

namespace mzeta {

// Gamma(z) for complex z via the Lanczos approximation (g = 7, 9 terms),
// reflection formula for Re(z) < 0.5.  Relative accuracy ~1e-13 on the
// strips used here; poles at z in Z_{<=0} raise std::domain_error.
cdouble complex_gamma(cdouble z);

// log Gamma(z) on the principal branch for Re(z) > 0 (no reflection).
cdouble complex_log_gamma(cdouble z);

}  // namespace mzeta
