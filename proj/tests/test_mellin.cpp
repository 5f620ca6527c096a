#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mzeta/mellin.hpp"
#include "mzeta/zeta_series.hpp"

using namespace mzeta;

TEST_SUITE_BEGIN("mellin");

TEST_CASE("depth one at integer orders") {
  // kernel 1 integrates x e^{-x} to Gamma(2); normalised value exactly 1
  EvalResult r = psi_mellin({2.0}, 1.0);
  CHECK(r.method == Method::Mellin);
  CHECK(close(r.value, 1.0, 1e-9));
  CHECK(r.abs_error > 0.0);
  CHECK(r.abs_error < 1e-6);
  CHECK(r.work > 0);
  // kernel 1 + q adds the 2^{-2} term
  CHECK(close(psi_mellin({2.0}, 2.0).value, 1.25, 1e-9));
  for (int N : {0, 1, 2, 3, 5}) {
    cdouble tv = zeta_truncated({2.0}, N).value;
    CHECK(deviation(psi_mellin({2.0}, double(N)).value, tv) <= 1e-8);
  }
}

TEST_CASE("depth two matches truncated sums at integer orders") {
  for (int N : {0, 1, 2, 3}) {
    cdouble tv = zeta_truncated({2.0, 2.0}, N).value;
    CHECK(deviation(psi_mellin({2.0, 2.0}, double(N)).value, tv) <= 1e-8);
  }
  CHECK(close(psi_mellin({2.0, 2.0}, 3.0).value, 7.0 / 18.0, 1e-8));
  for (int N : {1, 3}) {
    ctuple s = {1.7, cdouble(1.4, 0.3)};
    cdouble tv = zeta_truncated(s, N).value;
    CHECK(deviation(psi_mellin(s, double(N)).value, tv) <= 1e-7);
  }
}

TEST_CASE("agreement with the alternating series off the integers") {
  for (cdouble w : {cdouble(0.5), cdouble(1.7, 0.3), cdouble(-0.4, 1.1)}) {
    cdouble a = psi_mellin({2.2}, w).value;
    cdouble b = psi_series({2.2}, w).value;
    CHECK(std::abs(a - b) <= 1e-6);
  }
  ctuple s = {1.8, 1.3};
  for (cdouble w : {cdouble(0.0), cdouble(2.0), cdouble(0.5),
                    cdouble(1.7, 0.3), cdouble(-0.4, 1.1)}) {
    cdouble a = psi_mellin(s, w).value;
    cdouble b = psi_series(s, w).value;
    CHECK(std::abs(a - b) <= 1e-6);
  }
}

TEST_CASE("depth three spot checks") {
  // at order 3 only the chain 3 > 2 > 1 contributes: 1/36
  CHECK(deviation(psi_mellin({2.0, 2.0, 2.0}, 3.0).value, 1.0 / 36.0) <= 1e-5);
  // at order 2 the depth-three kernel vanishes identically
  CHECK(std::abs(psi_mellin({2.0, 2.0, 2.0}, 2.0).value) <= 1e-8);
  cdouble w(1.3, -0.4);
  cdouble a = psi_mellin({2.0, 2.0, 2.0}, w).value;
  cdouble b = psi_series({2.0, 2.0, 2.0}, w).value;
  CHECK(std::abs(a - b) <= 1e-5);
}

TEST_CASE("depth four accepts and the order-one kernel vanishes") {
  EvalResult r = psi_mellin({1.5, 1.5, 1.5, 1.5}, 1.0);
  CHECK(std::abs(r.value) <= 1e-8);
}

TEST_CASE("difference equation inside the strip") {
  // Psi(s; w+1) - Psi(s; w) = (w+1)^{-s} at depth one
  for (double sv : {0.5, 0.8}) {
    for (double wv : {0.3, 0.7}) {
      cdouble lhs =
          psi_mellin({sv}, wv + 1.0).value - psi_mellin({sv}, wv).value;
      cdouble rhs = principal_power(cdouble(wv + 1.0), cdouble(-sv));
      CHECK(std::abs(lhs - rhs) <= 1e-6);
    }
  }
  // depth two, with the depth-one factor through the integral as well
  ctuple s = {0.8, 0.5};
  cdouble wv = 0.25;
  cdouble lhs = psi_mellin(s, wv + 1.0).value - psi_mellin(s, wv).value;
  cdouble rhs =
      principal_power(wv + 1.0, -s[0]) * psi_auto({0.5}, wv).value;
  CHECK(std::abs(lhs - rhs) <= 1e-6);
}

TEST_CASE("harmonic relation at a sub-unit exponent") {
  // Psi(t)Psi(t) = 2 Psi(t,t) + Psi(2t) at t = 0.8
  for (cdouble w : {cdouble(1.3), cdouble(0.4, 0.9)}) {
    cdouble one = psi_auto({0.8}, w).value;
    cdouble two = psi_auto({0.8, 0.8}, w).value;
    cdouble sum = psi_auto({1.6}, w).value;
    CHECK(std::abs(one * one - (2.0 * two + sum)) <= 1e-5);
  }
}

TEST_CASE("route selection") {
  // non-negative integer order: the interpolation property is exact
  EvalResult a = psi_auto({2.0, 1.5}, 4.0);
  CHECK(a.method == Method::Exact);
  CHECK(deviation(a.value, zeta_truncated({2.0, 1.5}, 4).value) <= 1e-12);

  EvalResult a2 = psi_auto({2.0, 1.5}, 4.0 + 1e-3);
  CHECK(a2.method == Method::Series);
  CHECK(deviation(a2.value, zeta_truncated({2.0, 1.5}, 4).value) <= 1e-2);

  EvalResult b = psi_auto({0.6}, 0.3);
  CHECK(b.method == Method::Mellin);

  cdouble w(-1.6, 0.5);
  EvalResult c = psi_auto({2.0}, w);
  CHECK(c.method == Method::DifferenceShift);
  // unwind by hand: Psi(2; w) = Psi(2; w+2) - (w+2)^{-2} - (w+1)^{-2}
  cdouble ref = psi_series({2.0}, w + 2.0).value -
                principal_power(w + 2.0, -2.0) -
                principal_power(w + 1.0, -2.0);
  CHECK(std::abs(c.value - ref) <= 1e-7);
}

TEST_CASE("repeated evaluation is bit-identical") {
  ctuple s = {0.9, cdouble(1.1, 0.2)};
  cdouble w(0.35, -0.6);
  EvalResult r1 = psi_mellin(s, w);
  EvalResult r2 = psi_mellin(s, w);
  CHECK(r1.value.real() == r2.value.real());
  CHECK(r1.value.imag() == r2.value.imag());
  CHECK(r1.abs_error == r2.abs_error);
  CHECK(r1.work == r2.work);
}

TEST_CASE("argument screening") {
  CHECK_THROWS_AS(psi_mellin({-0.5}, 2.0), std::domain_error);
  CHECK_THROWS_AS(psi_mellin({2.0}, cdouble(-1.5, 0.0)), std::domain_error);
  CHECK_THROWS_AS(psi_mellin({2.0, 2.0, 2.0, 2.0, 2.0}, 1.0),
                  std::invalid_argument);
  QuadratureSpec narrow;
  narrow.level = 2;
  CHECK_THROWS_AS(psi_mellin({2.0}, 1.0, narrow), std::invalid_argument);
  // the excluded ray: poles at the integers, cut-blocked shifts elsewhere
  CHECK_THROWS_AS(psi_auto({2.0}, cdouble(-2.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(psi_auto({2.0}, cdouble(-1.3, 0.0)), std::domain_error);
  CHECK_THROWS_AS(psi_auto({-1.0, 2.0}, 1.0), std::domain_error);
}

TEST_SUITE_END();
