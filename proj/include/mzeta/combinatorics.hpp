#pragma once

#include <vector>

#include "mzeta/quasi_shuffle.hpp"

namespace mzeta {

// generalized binomial w(w-1)...(w-d+1)/d!; zero for d < 0
cdouble binomial_complex(cdouble w, int d);
rational binomial_rational(const rational& w, int d);

// Layered Delannoy numbers D^m(c,d): number of length-m terms in the
// harmonic product of all-ones tuples of lengths c and d.  Satisfies
//   D^m(c,d) = D^{m-1}(c-1,d) + D^{m-1}(c,d-1) + D^{m-1}(c-1,d-1)
// with D^0(c,d) = [c=0][d=0], D^m(c,0) = [m=c], D^m(0,d) = [m=d].
class DelannoyTable {
 public:
  DelannoyTable(int c_max, int d_max);
  // valid for 0 <= c <= c_max, 0 <= d <= d_max, any m >= 0
  const bigint& at(int m, int c, int d) const;
  std::vector<bigint> layers(int c, int d) const;  // indices m = 0..c+d
  int c_max() const { return cmax_; }
  int d_max() const { return dmax_; }

 private:
  int cmax_, dmax_, mmax_;
  bigint zero_;
  std::vector<bigint> data_;
};

// DP route (a fresh table per call; fine at desk scale)
std::vector<bigint> delannoy_layers(int c, int d);

// classical Delannoy number, the row sum over m
bigint delannoy_total(int c, int d);

// independent route through the tuple algebra; requires c + d <= cap
std::vector<bigint> delannoy_via_stuffle(int c, int d, int cap = 12);

}  // namespace mzeta
