#pragma once

#include "mzeta/g_function.hpp"
#include "mzeta/kernel.hpp"

namespace mzeta {

// Controls for the tensor tanh-sinh quadrature behind psi_mellin.  level is
// the finest dyadic refinement allowed (>= 3); X truncates each axis of
// (0,inf)^d; target_tol drives the inter-level stopping test.  Zero fields
// mean pick automatically: X from the decay budget, tol 1e-8 through depth 2
// and 1e-6 beyond.
struct QuadratureSpec {
  int level = 7;
  double X = 0.0;
  double target_tol = 0.0;
};

// Psi(s; w) as the Gamma-normalised integral of G(e^{-x}; w) against
// prod x_m^{s_m-1} e^{-x_m} over (0,inf)^d.  Needs Re(s_m) > 0 for every m
// and Re(w) > -1; depth capped at 4.  abs_error combines the final
// inter-level difference (or its geometric extrapolation, when the ladder
// is dropping fast enough to trust one) with propagated kernel errors and
// both truncation tails -- honest, but a heuristic rather than a
// certificate.
EvalResult psi_mellin(const ctuple& s, cdouble w,
                      const QuadratureSpec& spec = {});

// Route picker: the alternating series when every Re(s_m) > 1 and w is off
// the cut, the integral while Re(w) > -1, otherwise the difference-equation
// shift feeding back into this function.  Needs Re(s_m) > 0 and w off the
// ray R_{<=-1}.
EvalResult psi_auto(const ctuple& s, cdouble w);

}  // namespace mzeta
