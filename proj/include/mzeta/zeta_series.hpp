#pragma once

#include <functional>

#include "mzeta/kernel.hpp"

namespace mzeta {

struct SeriesConfig {
  double tol = 1e-12;             // certified absolute error target
  std::uint64_t max_terms = 2'000'000;
};

// Truncated Euler–Zagier sum  zeta_N(s) = sum_{N >= j1 > ... > jd > 0}
// prod jm^(-sm).  Exact finite sum (0 when N < d, 1 for the empty tuple).
EvalResult zeta_truncated(const ctuple& s, std::uint64_t N);

// Euler–Zagier zeta(s), valid on Re(s1+...+sm) > m for all m.
EvalResult zeta(const ctuple& s, const SeriesConfig& cfg = {});

// Hurwitz-type non-strict sum
//   zeta*(s; w) = sum_{j1 >= ... >= jd > 0} prod (w+jm)^(-sm),
// requires Re of every entry > 1 and w off R_{<=-1}.  zeta*(empty; w) = 1.
EvalResult zeta_star_hurwitz(const ctuple& s, cdouble w,
                             const SeriesConfig& cfg = {});

// Strict variant Z_w(s) = sum_{j1 > ... > jd > 0} prod (w+jm)^(-sm),
// accepted on the full convergence region Re(s1+...+sm) > m (all m),
// w off R_{<=-1}.  Z_0 = zeta on this region.
EvalResult zeta_hurwitz_strict(const ctuple& s, cdouble w,
                               const SeriesConfig& cfg = {});

// Interpolant via the alternating closed form
//   Psi(s; w) = sum_{i=0}^{d} (-1)^i zeta*(si,...,s1; w) zeta(s_{i+1},...,sd).
// Requires Re of every entry > 1 and w off R_{<=-1}.  Psi(empty; w) = 1.
EvalResult psi_series(const ctuple& s, cdouble w,
                      const SeriesConfig& cfg = {});

// J-term partial sum of the defining series
//   Psi(s;w) = sum_{j>=1} { Psi(s';j-1)/j^{s1} - Psi(s';w+j-1)/(w+j)^{s1} },
// s' the tuple without its first entry.  Converges to psi_series(s,w) as
// J grows; exposed so tests can watch the trend.
EvalResult psi_defining_partial(const ctuple& s, cdouble w, std::uint64_t J,
                                const SeriesConfig& cfg = {});

// Evaluate Psi(s;w) for Re(w) <= -1/2 by unwinding the forward difference
// equation  Psi(s;w) = Psi(s;w+1) - (w+1)^(-s1) Psi(s';w)  k times, where
// k is minimal with Re(w+k) > -1/2; the value at the shifted point comes
// from `eval`.  Rejects shifts passing within 1e-8 of the cut R_{<=0}.
using PsiEvaluator = std::function<EvalResult(const ctuple&, cdouble)>;
EvalResult psi_shift_w(const ctuple& s, cdouble w, const PsiEvaluator& eval);

}  // namespace mzeta
