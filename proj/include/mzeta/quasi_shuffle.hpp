#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mzeta/kernel.hpp"

namespace mzeta {

using bigint   = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using rtuple   = std::vector<rational>;

// The two semigroups the algebra is instantiated over: exponent tuples
// combine by +, argument tuples by * (restricted to positive values so the
// evaluation maps below stay single-valued).
enum class Flavor { Additive, MultiplicativePositive };

rational semigroup_combine(Flavor f, const rational& a, const rational& b);

// Orders tuples by (depth, then entrywise numeric comparison).  This is both
// the canonical term order of a formal sum and its rendering order.
struct TupleOrder {
  bool operator()(const rtuple& a, const rtuple& b) const;
};

// Finitely supported Z-linear combination of tuples over one semigroup.
class FormalTupleSum {
 public:
  explicit FormalTupleSum(Flavor f) : flavor_(f) {}

  static FormalTupleSum unit(Flavor f);  // 1 * (empty tuple)
  static FormalTupleSum single(Flavor f, rtuple t, bigint c = 1);

  Flavor flavor() const { return flavor_; }
  const std::map<rtuple, bigint, TupleOrder>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const rtuple& t, const bigint& c);
  FormalTupleSum& operator+=(const FormalTupleSum& o);
  FormalTupleSum& operator*=(const bigint& c);

 private:
  void check_entries(const rtuple& t) const;
  Flavor flavor_;
  std::map<rtuple, bigint, TupleOrder> terms_;
};

// Quasi-shuffle (stuffle) product:
//   t * s = (t1, t' * s) + (s1, t * s') + (t1·s1, t' * s')
// with the empty tuple as unit; extended bilinearly to sums.
FormalTupleSum harmonic_product(Flavor f, const rtuple& a, const rtuple& b);
FormalTupleSum harmonic_product(const FormalTupleSum& a,
                                const FormalTupleSum& b);

// Deconcatenation coproduct: the d+1 splits (x_[l], x^[l]), each with
// coefficient one.
std::vector<std::pair<rtuple, rtuple>> coproduct(const rtuple& x);

// Star closure: sum over the 2^(d-1) ways of either keeping a separator or
// merging adjacent entries with the semigroup operation.
FormalTupleSum star_closure(Flavor f, const rtuple& x);

// Antipode of the quasi-shuffle Hopf algebra:
//   R(x) = (-1)^d * star_closure(reverse(x)); extended linearly.
FormalTupleSum antipode(Flavor f, const rtuple& x);
FormalTupleSum antipode(const FormalTupleSum& s);

// "+1·(1/2,3) -2·(2)" — terms in TupleOrder, sign always written, the empty
// tuple rendered as ().
std::string render(const FormalTupleSum& s);

// Linear evaluation against a tuple-indexed functional.
using EvalFn = std::function<cdouble(const rtuple&)>;
cdouble evaluate(const EvalFn& F, const FormalTupleSum& s);

// Convolution product (F1 ⊙ F2)(x) = sum_l F1(x_[l]) F2(x^[l]).
EvalFn convolve(EvalFn F1, EvalFn F2);

// F ∘ R as a functional (used for the antipode axiom and the kernel/psi
// convolution identities).
EvalFn compose_antipode(Flavor f, EvalFn F);

// Closed nested-geometric evaluation of
//   H_w(q) = sum_{j1 > ... > jd >= 0} prod q_m^(jm + w)
//          = Q_d^w / (1 - Q_d) * prod_{i<d} Q_i / (1 - Q_i),
// where Q_i = q_1...q_i.  Requires every prefix product in (0,1); the empty
// tuple gives 1.
EvalResult eval_H(const rtuple& q, cdouble w);

// Strict Hurwitz-type sum Z_w(s) = sum_{j1>...>jd>0} prod (w+jm)^(-sm),
// delegated to the series engine.  Requires Re of every entry > 1 and
// w off R_{<=-1}.
EvalResult eval_Z(const rtuple& s, cdouble w);

}  // namespace mzeta
