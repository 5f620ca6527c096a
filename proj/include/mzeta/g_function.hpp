#pragma once

#include "mzeta/kernel.hpp"

namespace mzeta {

// Tuning for the G dispatcher.  delta is the divisor-proximity threshold
// below which the closed form is considered unsafe.
struct GEvalStrategy {
  double delta = 1e-3;
  double series_tol = 1e-12;
  int max_newton_terms = 500;
};

// Distance to the removable divisor set: the smallest |1 - q_i...q_j| over
// contiguous blocks, with the block that attains it.
struct DivisorProximity {
  double min_gap = 0.0;
  int i = 0, j = 0;  // 1-based block [i..j]
};

DivisorProximity divisor_proximity(const ctuple& q);

// depth-one value (1 - q^w)/(1 - q); switches to the binomial series in
// powers of 1-q once the closed form starts cancelling
EvalResult g1(cdouble q, cdouble w);

// closed form as an alternating sum over split points; accurate while every
// block product stays away from 1
EvalResult g_explicit(const ctuple& q, cdouble w);

// divided difference across the last coordinate; when the last entry sits
// too close to 1 for direct differencing, the merged-endpoint quotient is
// read off a Cauchy ring around the midpoint instead
EvalResult g_recursive(const ctuple& q, cdouble w, const GEvalStrategy& st = {});

// the closed form as a divided difference of z^w over the prefix-product
// nodes c_0=1, c_l = q_1...q_l, times prod_{l<d} c_l.  Nodes are grouped by
// relative proximity; isolated nodes contribute plain residues, clustered or
// repeated ones a shared contour ring, so near-coincident and exactly equal
// prefixes cost no cancellation.  Runs in log scale throughout, which keeps
// tuples with widely split magnitudes inside double range.
EvalResult g_node_dd(const ctuple& q, cdouble w);

// direct summation of the defining double series; requires |q_i| < 1 for
// every entry.  Independent of the closed form, so useful as a cross-check.
EvalResult g_series_lt1(const ctuple& q, cdouble w, double tol = 1e-12);

// expansion in the prefix gaps z_l = 1 - q_1...q_l with binomial(w, d+j)
// coefficients; converges when every |z_l| < 1 and is immune to the divisor
// cancellation, so it is the route of choice near the all-ones point
EvalResult g_newton(const ctuple& q, cdouble w, double tol = 1e-12,
                    int max_terms = 500);

// d-1 leading ones followed by q: closed form away from q = 1, remainder
// series in powers of q-1 near it
EvalResult g_ones_prefix(int d, cdouble q, cdouble w);

// last entry exactly 1, reduced to lower-depth values.  Requires every
// suffix product S_m = q_m...q_{d-1} of the leading block to stay off 1;
// the thrown message names the first offending m.
EvalResult g_last_one(const ctuple& q, cdouble w, const GEvalStrategy& st = {});

// r >= 1 trailing ones after a head ending in p_k != 1: equals
// (p_k^r / r!) d^r/dt^r G(p_1..p_{k-1}, t; w) at t = p_k, with the
// derivative read off a Cauchy circle sized to clear every divisor point.
// Stays stable where the suffix reduction is unavailable.
EvalResult g_trailing_ones(const ctuple& q, cdouble w,
                           const GEvalStrategy& st = {});

// main entry point: picks the route by the shape of q
EvalResult g_eval(const ctuple& q, cdouble w, const GEvalStrategy& st = {});

// right-hand sides of the two functional equations, assembled from g_eval;
// the identities say these equal G(q; u+v) and G(q; u*v) respectively
cdouble g_additivity_rhs(const ctuple& q, cdouble u, cdouble v,
                         const GEvalStrategy& st = {});
cdouble g_multiplicativity_rhs(const ctuple& q, cdouble u, cdouble v,
                               const GEvalStrategy& st = {});

}  // namespace mzeta
