#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mzeta/combinatorics.hpp"
#include "mzeta/g_function.hpp"
#include "mzeta/quasi_shuffle.hpp"

using namespace mzeta;

namespace {

cdouble intpow(cdouble z, int n) {
  cdouble r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// at nonnegative integer w the kernel is the truncated sum over
// w > j_1 > ... > j_d >= 0 of q_1^{j_1} ... q_d^{j_d}
cdouble brute_G(const ctuple& q, int N) {
  std::function<cdouble(std::size_t, int)> rec = [&](std::size_t i,
                                                     int cap) -> cdouble {
    if (i == q.size()) return 1.0;
    cdouble acc = 0.0;
    for (int j = int(q.size() - 1 - i); j < cap; ++j)
      acc += intpow(q[i], j) * rec(i + 1, j);
    return acc;
  };
  return rec(0, N);
}

const cdouble I(0.0, 1.0);

}  // namespace

TEST_SUITE_BEGIN("g_function");

TEST_CASE("depth zero and depth one") {
  CHECK(g_eval({}, cdouble(2.5, -1.0)).value == cdouble(1.0));
  CHECK(close(g_eval({0.5}, 2.0).value, 1.5, 1e-14));
  CHECK(g_eval({1.0}, cdouble(0.3, 0.7)).value == cdouble(0.3, 0.7));
  CHECK(close(g_eval({0.7}, -1.0).value, -1.0 / 0.7, 1e-13));
  // series branch near q = 1 agrees with the closed form
  for (cdouble w : {cdouble(2.0), cdouble(1.3, -0.8), cdouble(-0.4, 0.2)}) {
    EvalResult r = g1(0.97, w);
    CHECK(r.method == Method::Series);
    cdouble closed = (1.0 - std::pow(cdouble(0.97), w)) / cdouble(0.03);
    CHECK(close(r.value, closed, 1e-12));
    CHECK(r.abs_error < 1e-12 * (1.0 + std::abs(r.value)));
  }
  CHECK(g1(0.4, cdouble(0.0)).value == cdouble(0.0));  // w = 0 exactly
  CHECK_THROWS_AS(g_eval({0.0, 0.5}, 2.0), std::domain_error);
}

TEST_CASE("divisor proximity") {
  DivisorProximity p = divisor_proximity({0.5, 2.0});
  CHECK(p.min_gap == doctest::Approx(0.0));
  CHECK(p.i == 1);
  CHECK(p.j == 2);
  p = divisor_proximity({0.5, 0.9});
  CHECK(p.min_gap == doctest::Approx(0.1));
  CHECK(p.i == 2);
  CHECK(p.j == 2);
  p = divisor_proximity({1.0});
  CHECK(p.min_gap == 0.0);
  CHECK(p.i == 1);
  CHECK(p.j == 1);
}

TEST_CASE("closed form matches the depth-two display") {
  struct Case {
    cdouble q1, q2, w;
  };
  for (const Case& c : {Case{0.5, 3.0, 2.0}, Case{0.3, 0.7, cdouble(1.5, 0.5)},
                        Case{1.4, 0.6, -0.8},
                        Case{cdouble(0.2, 0.1), cdouble(0.8, -0.2), cdouble(2.5, -1.0)}}) {
    cdouble q12 = c.q1 * c.q2;
    cdouble hand = c.q1 / ((1.0 - c.q1) * (1.0 - q12)) -
                   std::pow(c.q1, c.w) / ((1.0 - c.q1) * (1.0 - c.q2)) +
                   std::pow(q12, c.w) / ((1.0 - q12) * (1.0 - c.q2));
    EvalResult r = g_explicit({c.q1, c.q2}, c.w);
    CHECK(close(r.value, hand, 1e-12));
  }
}

TEST_CASE("integer order reproduces truncated power sums") {
  std::vector<ctuple> tuples = {
      {0.5, 3.0},
      {0.7},
      {0.9, 1.1, 0.8},
      {cdouble(0.3, 0.2), 1.5},
      {0.6, 0.7, 0.8},
  };
  for (const auto& q : tuples) {
    for (int N = 0; N <= 6; ++N) {
      cdouble expect = brute_G(q, N);
      EvalResult r = g_eval(q, double(N));
      CHECK(close(r.value, expect, 1e-11));
    }
    // order one: empty sum unless depth one (closed form cancels to roundoff)
    if (q.size() >= 2) CHECK(std::abs(g_eval(q, 1.0).value) < 1e-10);
    CHECK(std::abs(g_eval(q, 0.0).value) < 1e-11);
  }
  CHECK(close(g_eval({0.5, 3.0}, 2.0).value, 0.5, 1e-13));
}

TEST_CASE("interior divisor point goes through the gap expansion") {
  ctuple q = {0.5, 2.0};  // q1 q2 = 1 exactly: removable
  EvalResult r = g_eval(q, 3.0);
  CHECK(r.method == Method::Newton);
  CHECK(close(r.value, brute_G(q, 3), 1e-12));
  CHECK(close(r.value, 1.25, 1e-12));
  cdouble w(2.5, -0.5);
  EvalResult rn = g_eval(q, w);
  EvalResult rr = g_recursive(q, w);
  CHECK(close(rn.value, rr.value, 1e-10));
}

TEST_CASE("routes agree away from the divisor set") {
  ctuple q = {0.9, 0.9, 0.9};
  for (cdouble w : {cdouble(2.5, -1.5), cdouble(0.3, 0.1), cdouble(-1.2, 0.4)}) {
    EvalResult e = g_explicit(q, w);
    EvalResult n = g_newton(q, w);
    EvalResult s = g_series_lt1(q, w);
    EvalResult r = g_recursive(q, w);
    CHECK(close(n.value, e.value, 1e-9));
    CHECK(close(s.value, e.value, 1e-9));
    CHECK(close(r.value, e.value, 1e-9));
    CHECK(e.method == Method::Explicit);
    CHECK(n.method == Method::Newton);
    CHECK(s.method == Method::Series);
    CHECK(r.method == Method::Recursion);
  }
}

TEST_CASE("ones prefix closed form and remainder series") {
  CHECK(close(g_eval({1.0, 3.0}, 2.0).value, 1.0, 1e-13));
  CHECK(g_eval({1.0, 3.0}, 2.0).method == Method::Explicit);
  // near q = 1 the remainder series takes over
  EvalResult r = g_eval({1.0, 1.0, 1.2}, 4.0);
  CHECK(r.method == Method::Series);
  CHECK(close(r.value, brute_G({1.0, 1.0, 1.2}, 4), 1e-12));
  CHECK(close(r.value, 4.2, 1e-12));
  // complex argument, both sides of the branch threshold
  cdouble w(1.7, 0.6);
  CHECK(close(g_ones_prefix(2, 1.45, w).value, g_newton({1.0, 1.45}, w).value, 1e-11));
  CHECK(close(g_ones_prefix(2, 1.55, w).value, g_newton({1.0, 1.55}, w).value, 1e-11));
  CHECK(close(g_eval({1.0, cdouble(0.4, 0.3)}, 3.0).value, cdouble(2.4, 0.3), 1e-12));
  // depth-one reduction consistency
  CHECK(close(g_ones_prefix(1, 0.6, w).value, g1(0.6, w).value, 1e-13));
}

TEST_CASE("last entry one reduces to lower depth") {
  cdouble w(1.7, -0.4);
  cdouble q1 = 0.6;
  cdouble hand = -w * std::pow(q1, w) / (1.0 - q1) +
                 q1 * g1(q1, w).value / (1.0 - q1);
  EvalResult r = g_eval({q1, 1.0}, w);
  CHECK(close(r.value, hand, 1e-12));

  ctuple q3 = {0.7, 0.8, 1.0};
  EvalResult rl = g_eval(q3, w);
  // independent: the gap expansion handles a trailing one natively
  EvalResult rn = g_newton(q3, w);
  CHECK(close(rl.value, rn.value, 1e-10));
  // numerical limit through the closed form on both sides
  auto avg = [&](double eps) {
    cdouble up = g_explicit({0.7, 0.8, 1.0 + eps}, w).value;
    cdouble dn = g_explicit({0.7, 0.8, 1.0 - eps}, w).value;
    return 0.5 * (up + dn);
  };
  cdouble lim = (4.0 * avg(1e-4) - avg(2e-4)) / 3.0;
  CHECK(close(rl.value, lim, 1e-9));

  // a unit block inside the head disables the reduction (it names the
  // offending block); the dispatcher then takes a divisor-robust route
  try {
    g_last_one({2.0, 0.5, 1.0}, w);
    CHECK(false);
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("q_1") != std::string::npos);
  }
  CHECK_THROWS_AS(g_last_one({0.5, 1.0, 1.0}, w), std::domain_error);
  CHECK(close(g_eval({2.0, 0.5, 1.0}, 4.0).value, brute_G({2.0, 0.5, 1.0}, 4),
              1e-8));
  CHECK(close(g_eval({0.5, 1.0, 1.0}, 4.0).value, brute_G({0.5, 1.0, 1.0}, 4),
              1e-10));
  CHECK(close(g_eval({0.05, 1.0, 1.0}, 4.0).value,
              brute_G({0.05, 1.0, 1.0}, 4), 1e-9));
}

TEST_CASE("trailing ones through the contour route") {
  cdouble w(0.8, 0.3);
  // depth two: the suffix reduction is available as an independent check
  for (cdouble p : {cdouble(0.3), cdouble(1e-6), cdouble(0.6, 0.2)}) {
    EvalResult a = g_trailing_ones({p, 1.0}, w);
    EvalResult b = g_last_one({p, 1.0}, w);
    CHECK(deviation(a.value, b.value) <= 1e-10);
  }
  // integer orders against the defining sum
  CHECK(close(g_eval({0.03, 1.0, 1.0, 1.0}, 5.0).value,
              brute_G({0.03, 1.0, 1.0, 1.0}, 5), 1e-9));
  CHECK(close(g_eval({0.05, 0.95, 1.0, 1.0}, 4.0).value,
              brute_G({0.05, 0.95, 1.0, 1.0}, 4), 1e-9));
  // a long gap-expansion run still converges at this z_max
  cdouble nv = g_newton({0.05, 1.0, 1.0}, w, 1e-13, 4000).value;
  CHECK(deviation(g_trailing_ones({0.05, 1.0, 1.0}, w).value, nv) <= 1e-9);
  // far outside the expansion's reach: only the contour gets this one
  EvalResult far = g_eval({1e-8, 1.0, 1.0}, w);
  CHECK(std::isfinite(far.value.real()));
  CHECK(std::isfinite(far.value.imag()));
  CHECK(far.abs_error < 1e-6 * std::max(1.0, std::abs(far.value)));
}

TEST_CASE("prefix-node divided difference") {
  // well separated nodes reduce to plain residues; closed form as reference
  for (cdouble w : {cdouble(3.7), cdouble(1.3, -0.4), cdouble(-0.9, 0.3)}) {
    for (const ctuple& q :
         {ctuple{0.3, 0.7}, ctuple{0.85, 0.2, 0.55},
          ctuple{cdouble(0.4, 0.2), cdouble(0.6, -0.1), cdouble(0.5)}}) {
      EvalResult a = g_node_dd(q, w);
      EvalResult b = g_explicit(q, w);
      CHECK(deviation(a.value, b.value) <= 1e-11);
      CHECK(a.abs_error <= 1e-9 * (1.0 + std::abs(a.value)));
    }
  }
  // fully repeated nodes: one ring around 1, and the value is the binomial
  for (cdouble w : {cdouble(2.6, 0.0), cdouble(0.4, 1.1)}) {
    cdouble b3 = binomial_complex(w, 3);
    CHECK(deviation(g_node_dd({1.0, 1.0, 1.0}, w).value, b3) <= 1e-11);
  }
  // interior exact one: duplicated interior node, ring plus residues
  {
    ctuple q = {0.5, 1.0, 0.25};
    CHECK(close(g_node_dd(q, 5.0).value, brute_G(q, 5), 1e-11));
    cdouble w(1.3, -0.4);
    EvalResult a = g_node_dd(q, w);
    EvalResult r = g_recursive(q, w);
    CHECK(deviation(a.value, r.value) <= 1e-9);
  }
  // shapes that defeat the coordinate recursion: a block hugging 1 next to
  // an entry far below the working scale
  {
    ctuple q = {1.0 - 1e-5, std::exp(-30.0), 0.5};
    CHECK(close(g_eval(q, 6.0).value, brute_G(q, 6), 1e-10));
    ctuple q4 = {0.999999, 1e-8, 0.3, 0.7};
    CHECK(close(g_eval(q4, 5.0).value, brute_G(q4, 5), 1e-10));
    // off the integers the functional equation is the available witness
    cdouble w(0.8, 0.3);
    EvalResult lhs = g_eval(q, w + 1.0);
    cdouble rhs = g_additivity_rhs(q, w, 1.0);
    CHECK(deviation(lhs.value, rhs) <= 1e-8);
    CHECK(lhs.abs_error <= 1e-8 * (1.0 + std::abs(lhs.value)));
  }
}

TEST_CASE("branch consistency as the last entry approaches one") {
  cdouble w(1.3, 0.2);
  // gap-expansion side
  {
    cdouble ref = g_eval({0.7, 0.8, 1.0}, w).value;
    for (int k = 4; k <= 8; ++k) {
      double eps = std::pow(10.0, -k);
      for (double sgn : {1.0, -1.0}) {
        EvalResult r = g_eval({0.7, 0.8, 1.0 + sgn * eps}, w);
        CHECK(std::abs(r.value - ref) <= 100.0 * eps);
      }
    }
  }
  // clustered side: big first gap keeps the expansion out, and the merged
  // prefix nodes go through the shared-ring closed form
  {
    cdouble ref = g_eval({0.1, 9.5, 1.0}, w).value;
    for (int k = 4; k <= 8; ++k) {
      double eps = std::pow(10.0, -k);
      for (double sgn : {1.0, -1.0}) {
        EvalResult r = g_eval({0.1, 9.5, 1.0 + sgn * eps}, w);
        CHECK(r.method == Method::Explicit);
        CHECK(std::abs(r.value - ref) <= 100.0 * eps * (1.0 + std::abs(ref)));
      }
    }
  }
}

TEST_CASE("all-ones point and the ones generating function") {
  for (int d = 1; d <= 6; ++d) {
    ctuple ones(d, 1.0);
    for (cdouble w : {cdouble(2.5, -1.5), cdouble(-0.7, 0.3), cdouble(3.0)}) {
      cdouble prod = 1.0;
      for (int j = 0; j < d; ++j) prod *= (w - double(j)) / double(j + 1);
      EvalResult r = g_eval(ones, w);
      CHECK(r.method == Method::Exact);
      CHECK(close(r.value, prod, 1e-12));
    }
  }
  // sum_d G(1,..,1,q; w) X^d = ((1+X)^w - q^w) X / (1 - q + X)
  const double X = 0.1;
  cdouble w(1.3, -0.7);
  for (double q : {0.5, 2.0}) {
    cdouble lhs = 0.0;
    for (int d = 1; d <= 12; ++d)
      lhs += g_ones_prefix(d, q, w).value * std::pow(X, d);
    cdouble rhs = (std::pow(cdouble(1.0 + X), w) - std::pow(cdouble(q), w)) * X /
                  (1.0 - q + X);
    CHECK(close(lhs, rhs, 1e-10));
  }
}

TEST_CASE("origin limit by depth") {
  cdouble w(2.5, 0.0);
  for (int d = 1; d <= 3; ++d) {
    double prev = 1e9;
    for (int k = 2; k <= 6; ++k) {
      double t = std::pow(10.0, -k);
      ctuple q(d, t);
      cdouble target = (d == 1) ? cdouble(1.0) : cdouble(0.0);
      double dev = std::abs(g_eval(q, w).value - target);
      CHECK(dev < prev);
      prev = dev;
      if (k == 6) CHECK(dev < 1e-5);
    }
  }
}

TEST_CASE("order-one vanishing above depth one") {
  for (const ctuple& q : {ctuple{0.5, 3.0}, ctuple{0.6, 0.7, 0.8},
                          ctuple{cdouble(0.3, 0.2), 1.5}})
    CHECK(std::abs(g_eval(q, 1.0).value) < 1e-12);
}

TEST_CASE("additivity in the order parameter") {
  std::vector<ctuple> tuples = {
      {0.7},
      {0.5, 3.0},
      {cdouble(0.3, 0.2), cdouble(0.8, -0.1)},
      {0.6, 0.7, 0.8},
      {0.9, 1.2, 0.7},
  };
  struct UV {
    cdouble u, v;
  };
  for (const auto& q : tuples)
    for (const UV& p : {UV{1.3, 2.2}, UV{cdouble(0.7, -0.4), cdouble(1.1, 0.6)},
                        UV{2.5, cdouble(-1.2, 0.3)}}) {
      cdouble lhs = g_eval(q, p.u + p.v).value;
      cdouble rhs = g_additivity_rhs(q, p.u, p.v);
      CHECK(deviation(lhs, rhs) <= 1e-9);
    }
  // one-step difference pulls off the first coordinate
  for (const auto& q : tuples) {
    if (q.size() < 2) continue;
    cdouble u(0.8, 0.3);
    cdouble lhs = g_eval(q, u + 1.0).value - g_eval(q, u).value;
    cdouble rhs = principal_power(q[0], u) * g_eval(tuple_suffix(q, 1), u).value;
    CHECK(deviation(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("multiplicativity in the order parameter") {
  std::vector<ctuple> tuples = {{0.7}, {0.5, 0.7}, {0.4, 0.6, 0.9}};
  struct UV {
    cdouble u, v;
  };
  for (const auto& q : tuples)
    for (const UV& p : {UV{1.7, 2.3}, UV{cdouble(1.5, -0.2), cdouble(1.2, 0.3)},
                        UV{0.8, 3.1}}) {
      cdouble lhs = g_eval(q, p.u * p.v).value;
      cdouble rhs = g_multiplicativity_rhs(q, p.u, p.v);
      CHECK(deviation(lhs, rhs) <= 1e-9);
      cdouble sym = g_multiplicativity_rhs(q, p.v, p.u);
      CHECK(deviation(rhs, sym) <= 1e-9);
    }
}

TEST_CASE("depth-three product decomposition pins the cross terms") {
  ctuple q = {0.4, 0.6, 0.9};
  cdouble u = 1.7, v = 2.3;
  auto G = [&](const ctuple& t, cdouble ord) { return g_eval(t, ord).value; };
  cdouble q12 = q[0] * q[1], q23 = q[1] * q[2], q123 = q[0] * q[1] * q[2];
  ctuple qu = {std::pow(q[0], u), std::pow(q[1], u), std::pow(q[2], u)};

  cdouble l1 = G(q, u) * G({qu[0]}, v);
  cdouble l3 = G({q123}, u) * G({q23}, u) * G({q[2]}, u) * G(qu, v);
  cdouble l2_direct = (G({q123}, u) * G({q[1], q[2]}, u) +
                       G({q12, q[2]}, u) * G({q[1]}, u)) *
                      G({qu[0], qu[1]}, v);
  cdouble l2_variant = (G({q12}, u) * G({q[1], q[2]}, u) +
                        G({q12, q[2]}, u) * G({q23}, u)) *
                       G({qu[0], qu[1]}, v);

  cdouble lhs = G(q, u * v);
  // the two groupings of the middle terms are algebraically the same sum:
  // [G1(abc)-G1(ab)] G2(b,c) == G2(ab,c) [G1(bc)-G1(b)] identically
  CHECK(deviation(lhs, l1 + l2_direct + l3) <= 1e-10);
  CHECK(deviation(lhs, l1 + l2_variant + l3) <= 1e-10);
  CHECK(deviation(l2_direct, l2_variant) <= 1e-12);
  CHECK(deviation(lhs, g_multiplicativity_rhs(q, u, v)) <= 1e-10);
}

TEST_CASE("series route on complex entries") {
  for (const ctuple& q : {ctuple{cdouble(0.3, 0.2), cdouble(0.5, -0.1)},
                          ctuple{0.5, cdouble(0.6, 0.2), 0.4}}) {
    cdouble w(1.8, -0.6);
    CHECK(close(g_series_lt1(q, w).value, g_explicit(q, w).value, 1e-10));
  }
  CHECK_THROWS_AS(g_series_lt1({1.2, 0.5}, 2.0), std::domain_error);
}

TEST_CASE("gap expansion rejections") {
  CHECK_THROWS_AS(g_newton({2.5, 0.5}, 2.0), std::domain_error);
  try {
    g_newton({0.03}, cdouble(1.5, 0.5));  // gap 0.97: cap hits first
    CHECK(false);
  } catch (const convergence_error& e) {
    CHECK(e.best.method == Method::Newton);
    cdouble truth = g1(0.03, cdouble(1.5, 0.5)).value;
    CHECK(std::abs(e.best.value - truth) <= 4.0 * e.best.abs_error + 1e-12);
  }
}

TEST_CASE("convolution of nested power sums reproduces the kernel") {
  Flavor f = Flavor::MultiplicativePositive;
  for (cdouble w : {cdouble(0.6), cdouble(0.6, 0.2)}) {
    EvalFn Hw = [w](const rtuple& t) { return eval_H(t, w).value; };
    EvalFn H0 = [](const rtuple& t) { return eval_H(t, 0.0).value; };
    EvalFn lhs = convolve(compose_antipode(f, Hw), H0);

    rtuple x1 = {rational(1, 2)};
    CHECK(close(lhs(x1), g_eval({0.5}, w).value, 1e-12));
    rtuple x2 = {rational(3, 10), rational(2, 5)};
    CHECK(close(lhs(x2), g_eval({0.3, 0.4}, w).value, 1e-11));
    rtuple x3 = {rational(1, 2), rational(3, 5), rational(1, 4)};
    CHECK(close(lhs(x3), g_eval({0.5, 0.6, 0.25}, w).value, 1e-10));
  }
}

TEST_SUITE_END();
