#include "mzeta/g_function.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mzeta/combinatorics.hpp"

namespace mzeta {

namespace {

constexpr double kEps = 2.22e-16;
constexpr double kPi = 3.14159265358979323846;

bool is_one(cdouble z) { return z == cdouble(1.0, 0.0); }

cdouble ipow(cdouble z, int n) {
  cdouble r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

std::vector<cdouble> prefix_products(const ctuple& q) {
  std::vector<cdouble> c(q.size() + 1);
  c[0] = 1.0;
  for (std::size_t l = 0; l < q.size(); ++l) c[l + 1] = c[l] * q[l];
  return c;
}

void reject_zero_entries(const ctuple& q, const char* who) {
  for (const auto& v : q)
    if (v == cdouble(0.0, 0.0))
      throw std::domain_error(std::string(who) + ": zero entry");
}

}  // namespace

DivisorProximity divisor_proximity(const ctuple& q) {
  const int d = static_cast<int>(q.size());
  DivisorProximity out{std::numeric_limits<double>::infinity(), 0, 0};
  for (int i = 1; i <= d; ++i) {
    cdouble block = 1.0;
    for (int j = i; j <= d; ++j) {
      block *= q[j - 1];
      double gap = std::abs(1.0 - block);
      if (gap < out.min_gap) {
        out.min_gap = gap;
        out.i = i;
        out.j = j;
      }
    }
  }
  return out;
}

EvalResult g1(cdouble q, cdouble w) {
  if (is_one(q)) return {w, kEps * std::abs(w), Method::Exact, 1};
  cdouble z = 1.0 - q;
  if (std::abs(z) < 0.1) {
    // (1-q^w)/(1-q) = sum_{j>=0} C(w,j+1) (-1)^j (1-q)^j, no cancellation
    cdouble acc = 0.0, term = w;
    double magsum = 0.0;
    std::uint64_t work = 0;
    for (int j = 0; j < 2000; ++j) {
      acc += term;
      magsum += std::abs(term);
      ++work;
      term *= ((w - double(j + 1)) / double(j + 2)) * (-z);
      if (j >= 2 && std::abs(term) <= kEps * (magsum + 1e-300)) break;
    }
    return {acc, 2.0 * std::abs(term) + 4.0 * kEps * magsum, Method::Series, work};
  }
  cdouble qw = principal_power(q, w);
  cdouble val = (1.0 - qw) / z;
  double err = kEps * (2.0 + std::abs(w)) * (1.0 + std::abs(qw)) / std::abs(z);
  return {val, err, Method::Explicit, 1};
}

EvalResult g_explicit(const ctuple& q, cdouble w) {
  const int d = static_cast<int>(q.size());
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  reject_zero_entries(q, "g_explicit");
  std::vector<std::vector<cdouble>> P(d + 1, std::vector<cdouble>(d + 1));
  for (int i = 1; i <= d; ++i) {
    cdouble b = 1.0;
    for (int j = i; j <= d; ++j) {
      b *= q[j - 1];
      P[i][j] = b;
    }
  }
  cdouble acc = 0.0;
  double errsum = 0.0;
  for (int l = 0; l <= d; ++l) {
    cdouble term = (l % 2 ? -1.0 : 1.0);
    double cond = 2.0 + std::abs(w);
    if (l >= 1) term *= principal_power(P[1][l], w);
    if (l < d) term /= P[l + 1][d];
    for (int k = 1; k <= l; ++k) {
      cdouble gap = 1.0 - P[k][l];
      term /= gap;
      cond += std::abs(P[k][l] / gap);
    }
    for (int k = l + 1; k <= d; ++k) {
      cdouble blk = P[l + 1][k];
      cdouble gap = 1.0 - blk;
      term *= blk / gap;
      cond += 1.0 + std::abs(blk / gap);
    }
    acc += term;
    errsum += std::abs(term) * cond;
  }
  return {acc, kEps * errsum, Method::Explicit,
          std::uint64_t(d + 1) * std::uint64_t(d + 2) / 2};
}

EvalResult g_series_lt1(const ctuple& q, cdouble w, double tol) {
  const int d = static_cast<int>(q.size());
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  reject_zero_entries(q, "g_series_lt1");
  std::vector<double> mod(d);
  for (int i = 0; i < d; ++i) {
    mod[i] = std::abs(q[i]);
    if (mod[i] >= 1.0)
      throw std::domain_error("g_series_lt1: requires |q_i| < 1 for every entry");
  }
  auto c = prefix_products(q);
  std::vector<cdouble> pf(d + 1);
  for (int l = 0; l <= d; ++l)
    pf[l] = (l % 2 ? -1.0 : 1.0) * (l ? principal_power(c[l], w) : cdouble(1.0));

  // W_l: indices 0 <= j_1 <= ... <= j_l <= J, largest is j_l
  auto weak = [&](int l, std::size_t J) -> std::pair<cdouble, double> {
    if (l == 0) return {cdouble(1.0), 0.0};
    std::vector<cdouble> cum(J + 1);
    cdouble p = 1.0, run = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      run += p;
      cum[j] = run;
      p *= q[0];
    }
    for (int m = 2; m <= l; ++m) {
      p = 1.0;
      run = 0.0;
      for (std::size_t j = 0; j <= J; ++j) {
        run += p * cum[j];
        cum[j] = run;
        p *= q[m - 1];
      }
    }
    double tail = std::pow(mod[l - 1], double(J + 1)) / (1.0 - mod[l - 1]);
    for (int m = 1; m < l; ++m) tail /= (1.0 - mod[m - 1]);
    return {cum[J], tail};
  };
  // S_l: indices j_{l+1} > ... > j_d >= 0, capped j_{l+1} <= J
  auto strict = [&](int l, std::size_t J) -> std::pair<cdouble, double> {
    if (l == d) return {cdouble(1.0), 0.0};
    std::vector<cdouble> cum(J + 1);
    cdouble p = 1.0, run = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      run += p;
      cum[j] = run;
      p *= q[d - 1];
    }
    for (int m = d - 1; m >= l + 1; --m) {
      p = 1.0;
      run = 0.0;
      cdouble below = 0.0;  // cum_{m+1}(j-1)
      for (std::size_t j = 0; j <= J; ++j) {
        cdouble Fm = p * below;
        below = cum[j];
        run += Fm;
        cum[j] = run;
        p *= q[m - 1];
      }
    }
    double tail = std::pow(mod[l], double(J + 1)) / (1.0 - mod[l]);
    for (int m = l + 2; m <= d; ++m) tail /= (1.0 - mod[m - 1]);
    return {cum[J], tail};
  };

  std::uint64_t work = 0;
  EvalResult best{};
  for (std::size_t J = 64; J <= (std::size_t(1) << 20); J *= 2) {
    cdouble total = 0.0;
    double bound = 0.0, msum = 0.0;
    for (int l = 0; l <= d; ++l) {
      auto [W, tW] = weak(l, J);
      auto [S, tS] = strict(l, J);
      total += pf[l] * W * S;
      double apf = std::abs(pf[l]);
      bound += apf * (tW * std::abs(S) + std::abs(W) * tS + tW * tS);
      msum += std::abs(pf[l] * W * S);
      work += std::uint64_t(d) * (J + 1);
    }
    double err = bound + 32.0 * kEps * msum;
    best = {total, err, Method::Series, work};
    if (bound <= tol * std::max(1.0, std::abs(total))) return best;
  }
  throw convergence_error("g_series_lt1: tail bound did not reach tolerance", best);
}

EvalResult g_newton(const ctuple& q, cdouble w, double tol, int max_terms) {
  const int d = static_cast<int>(q.size());
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  reject_zero_entries(q, "g_newton");
  auto c = prefix_products(q);
  std::vector<cdouble> z(d);
  double zmax = 0.0;
  for (int l = 1; l <= d; ++l) {
    z[l - 1] = 1.0 - c[l];
    double m = std::abs(z[l - 1]);
    if (m >= 1.0)
      throw std::domain_error(
          "g_newton: a prefix gap |1 - q_1...q_l| is >= 1, the expansion diverges");
    zmax = std::max(zmax, m);
  }
  cdouble pref = 1.0;
  for (int l = 1; l <= d - 1; ++l) pref *= ipow(q[l - 1], d - l);

  const int J = std::max(max_terms, 4);
  // complete homogeneous sums of the gaps, plus the same on moduli
  std::vector<cdouble> H(J + 1, 0.0);
  std::vector<double> Hm(J + 1, 0.0);
  H[0] = 1.0;
  Hm[0] = 1.0;
  for (int l = 0; l < d; ++l) {
    double zm = std::abs(z[l]);
    for (int j = 1; j <= J; ++j) {
      H[j] += z[l] * H[j - 1];
      Hm[j] += zm * Hm[j - 1];
    }
  }
  cdouble b = binomial_complex(w, d);
  cdouble acc = 0.0;
  double magsum = 0.0;
  for (int j = 0; j <= J; ++j) {
    acc += (j % 2 ? -b : b) * H[j];
    magsum += std::abs(b) * Hm[j];
    double rho = zmax * (double(j + d) / double(j + 1)) *
                 (1.0 + std::abs(w) / double(d + j + 1));
    if (j >= 1 && rho < 1.0) {
      double tail = std::abs(b) * Hm[j] * rho / (1.0 - rho);
      if (tail <= 0.5 * tol * std::max(1.0, std::abs(acc)))
        return {pref * acc, std::abs(pref) * (tail + 8.0 * kEps * magsum),
                Method::Newton, std::uint64_t(d) * std::uint64_t(j + 1)};
    }
    b *= (w - double(d + j)) / double(d + j + 1);
  }
  double rho_end = zmax * (double(J + d) / double(J + 1)) *
                   (1.0 + std::abs(w) / double(d + J + 1));
  double tail_end = std::abs(b) * Hm[J] *
                    (rho_end < 1.0 ? rho_end / (1.0 - rho_end) : 1e3);
  EvalResult best{pref * acc, std::abs(pref) * (tail_end + 8.0 * kEps * magsum),
                  Method::Newton, std::uint64_t(d) * std::uint64_t(J + 1)};
  throw convergence_error("g_newton: term cap hit before the tail bound met tolerance",
                          best);
}

EvalResult g_ones_prefix(int d, cdouble q, cdouble w) {
  if (d <= 0) return {1.0, 0.0, Method::Exact, 1};
  if (q == cdouble(0.0, 0.0)) throw std::domain_error("g_ones_prefix: zero entry");
  if (is_one(q)) {
    cdouble b = binomial_complex(w, d);
    return {b, kEps * double(d + 1) * (1.0 + std::abs(b)), Method::Exact,
            std::uint64_t(d)};
  }
  cdouble z = q - 1.0;
  double zm = std::abs(z);
  if (zm >= 0.5) {
    // (q-1)^{-d} (q^w - sum_{l<d} C(w,l)(q-1)^l)
    cdouble qw = principal_power(q, w);
    cdouble sum = 0.0, zp = 1.0, b = 1.0;
    double mag = 0.0;
    for (int l = 0; l < d; ++l) {
      sum += b * zp;
      mag += std::abs(b * zp);
      b *= (w - double(l)) / double(l + 1);
      zp *= z;
    }
    cdouble val = (qw - sum) / ipow(z, d);
    double err =
        kEps * (2.0 + std::abs(w)) * (std::abs(qw) + mag) / std::pow(zm, double(d));
    return {val, err, Method::Explicit, std::uint64_t(d) + 1};
  }
  // remainder series sum_{j>=0} C(w, d+j) (q-1)^j
  cdouble b = binomial_complex(w, d), zp = 1.0, acc = 0.0;
  double magsum = 0.0;
  for (int j = 0; j <= 600; ++j) {
    cdouble term = b * zp;
    acc += term;
    magsum += std::abs(term);
    cdouble bn = b * (w - double(d + j)) / double(d + j + 1);
    double rho = zm * (1.0 + std::abs(w) / double(d + j + 1));
    double nt = std::abs(bn) * zm * std::abs(zp);
    if (j >= 1 && rho < 1.0 && nt / (1.0 - rho) <= 1e-15 * (1.0 + std::abs(acc)))
      return {acc, nt / (1.0 - rho) + 4.0 * kEps * magsum, Method::Series,
              std::uint64_t(j) + 1};
    b = bn;
    zp *= z;
  }
  throw convergence_error(
      "g_ones_prefix: remainder series cap hit",
      {acc, std::abs(b * zp) + 4.0 * kEps * magsum, Method::Series, 601});
}

EvalResult g_last_one(const ctuple& q, cdouble w, const GEvalStrategy& st) {
  const int d = static_cast<int>(q.size());
  if (d == 0 || !is_one(q.back()))
    throw std::invalid_argument("g_last_one: last entry must be exactly 1");
  if (d == 1) return {w, kEps * std::abs(w), Method::Exact, 1};
  reject_zero_entries(q, "g_last_one");
  const int n = d - 1;
  ctuple p(q.begin(), q.end() - 1);
  std::vector<cdouble> S(n + 2);  // S[m] = p_m ... p_n
  S[n + 1] = 1.0;
  for (int m = n; m >= 1; --m) S[m] = p[m - 1] * S[m + 1];
  for (int m = 1; m <= n; ++m)
    if (is_one(S[m]))
      throw std::domain_error("g_last_one: block product q_" + std::to_string(m) +
                              "...q_" + std::to_string(n) + " equals 1");
  std::vector<cdouble> R(n + 2);  // R[l] = prod_{m=l}^{n} (1 - S_m)
  R[n + 1] = 1.0;
  for (int m = n; m >= 1; --m) R[m] = (1.0 - S[m]) * R[m + 1];
  double condS = 0.0;
  for (int m = 1; m <= n; ++m) condS += std::abs(S[m] / (1.0 - S[m]));

  cdouble pw_prod = 1.0;
  for (int m = 1; m <= n; ++m) pw_prod *= principal_power(p[m - 1], w);
  cdouble acc = ((n % 2) ? -1.0 : 1.0) * w * pw_prod / R[1];
  double errsum = std::abs(acc) * (2.0 + std::abs(w)) * (1.0 + condS);
  double child_err = 0.0;
  std::uint64_t work = std::uint64_t(n) + 1;
  for (int l = 1; l <= n; ++l) {
    ctuple inner(p.begin(), p.begin() + (l - 1));
    inner.push_back(S[l]);
    EvalResult child = g_eval(inner, w, st);
    cdouble coef = (((n - l) % 2) ? -1.0 : 1.0) * S[l] / R[l];
    acc += coef * child.value;
    errsum += std::abs(coef * child.value) * (2.0 + condS);
    child_err += std::abs(coef) * child.abs_error;
    work += child.work;
  }
  return {acc, kEps * errsum + child_err, Method::Explicit, work};
}

EvalResult g_recursive(const ctuple& q, cdouble w, const GEvalStrategy& st) {
  const int d = static_cast<int>(q.size());
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  if (d == 1) return g1(q[0], w);
  reject_zero_entries(q, "g_recursive");
  const cdouble qd = q[d - 1];
  if (is_one(qd)) return g_last_one(q, w, st);
  const cdouble a = q[d - 2], b = a * qd;
  ctuple head(q.begin(), q.end() - 1);
  auto f = [&](cdouble t) {
    ctuple x = head;
    x[d - 2] = t;
    return g_eval(x, w, st);
  };
  double gap = std::abs(1.0 - qd);
  if (gap >= st.delta) {
    EvalResult fa = f(a), fb = f(b);
    cdouble val = (fa.value - fb.value) / (1.0 - qd);
    double fm = std::abs(fa.value) + std::abs(fb.value);
    double err =
        (fa.abs_error + fb.abs_error + 2.0 * kEps * fm) / gap + kEps * std::abs(val);
    if (err > 0.5 * std::max(1.0, std::abs(val)))
      throw conditioning_error("g_recursive: divided difference cancels to noise");
    return {val, err, Method::Recursion, fa.work + fb.work + 1};
  }
  // nearly merged endpoints: push the difference quotient onto a Cauchy ring
  // around the midpoint.  Both poles sit deep inside (|a-b| << rho), so the
  // two-pole kernel integrates to f[a,b] without subtractive cancellation;
  // the ring is sized against the cut on the nonpositive reals, divisor
  // points being removable for the child evaluations.
  const cdouble c = 0.5 * (a + b);
  const double cut = c.real() >= 0.0 ? std::abs(c) : std::abs(c.imag());
  if (cut == 0.0)
    throw conditioning_error("g_recursive: merged argument lands on the cut");
  const double rho = 0.5 * cut;
  const int M = 64;
  cdouble acc = 0.0;
  double fmax = 0.0, cherr = 0.0;
  std::uint64_t work = 1;
  for (int nu = 0; nu < M; ++nu) {
    double th = 2.0 * kPi * (nu + 0.5) / M;
    cdouble e = std::polar(1.0, th);
    cdouble z = c + rho * e;
    EvalResult fz = f(z);
    acc += fz.value * (rho * e) / ((z - a) * (z - b));
    fmax = std::max(fmax, std::abs(fz.value));
    cherr = std::max(cherr, fz.abs_error);
    work += fz.work;
  }
  cdouble val = a * acc / double(M);
  double err = std::abs(a) / rho *
                   (cherr + double(M) * kEps * fmax + fmax * std::ldexp(1.0, -50)) +
               kEps * std::abs(val);
  return {val, err, Method::Recursion, work};
}

EvalResult g_trailing_ones(const ctuple& q, cdouble w, const GEvalStrategy& st) {
  const std::size_t d = q.size();
  std::size_t k = d;
  while (k > 0 && is_one(q[k - 1])) --k;
  const std::size_t r = d - k;
  if (k == 0 || r == 0)
    throw std::invalid_argument(
        "g_trailing_ones: needs a non-one head entry followed by ones");
  const cdouble t = q[k - 1];
  // as a function of its last coordinate the depth-k value is analytic off
  // the ray R_{<=0} (divisor points are removable, and g_eval handles their
  // neighbourhoods); the circle only has to clear the cut
  const double cut_dist =
      t.real() >= 0.0 ? std::abs(t) : std::abs(t.imag());
  const double rho = 0.5 * cut_dist;
  if (rho == 0.0)
    throw std::domain_error("g_trailing_ones: head ends on the cut R_{<=0}");
  const int M = 64;
  ctuple head(q.begin(), q.begin() + k);
  cdouble acc = 0.0;
  double fmax = 0.0, cherr = 0.0;
  std::uint64_t work = 0;
  for (int nu = 0; nu < M; ++nu) {
    const double ang = 2.0 * kPi * double(nu) / double(M);
    head[k - 1] = t + rho * cdouble(std::cos(ang), std::sin(ang));
    EvalResult f = g_eval(head, w, st);
    work += f.work + 1;
    fmax = std::max(fmax, std::abs(f.value));
    cherr = std::max(cherr, f.abs_error);
    const double phi = -ang * double(r);
    acc += f.value * cdouble(std::cos(phi), std::sin(phi));
  }
  // trapezoid rule on the circle extracts the r-th Taylor coefficient; the
  // ratio to the nearest singularity bounds the aliasing tail
  const double amp = std::pow(std::abs(t) / rho, double(r));
  const cdouble val = ipow(t / rho, static_cast<int>(r)) * acc / double(M);
  const double err =
      amp * (cherr + double(M) * kEps * fmax + fmax * std::ldexp(1.0, -50)) +
      kEps * std::abs(val);
  return {val, err, Method::Recursion, work};
}

EvalResult g_node_dd(const ctuple& q, cdouble w) {
  const int d = static_cast<int>(q.size());
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  reject_zero_entries(q, "g_node_dd");
  const int n = d + 1;
  std::vector<cdouble> c(n), lc(n);
  c[0] = 1.0;
  lc[0] = 0.0;
  for (int l = 1; l < n; ++l) {
    c[l] = c[l - 1] * q[l - 1];
    if (c[l] == cdouble(0.0, 0.0))
      throw conditioning_error("g_node_dd: prefix product underflows");
    lc[l] = std::log(c[l]);
  }
  const double aw = std::abs(w);
  // nodes closer than z^w can resolve go into one component (transitively)
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    comp[i] = ncomp;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (comp[v] >= 0) continue;
        double thr =
            0.2 * std::min(std::abs(c[u]), std::abs(c[v])) / (1.0 + aw);
        if (std::abs(c[u] - c[v]) <= thr) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }
  cdouble lpi = 0.0;
  for (int l = 0; l < d; ++l) lpi += lc[l];

  // contributions as complex logs; absolute error bounds as real logs
  std::vector<cdouble> Ls;
  std::vector<double> lerrs;
  std::uint64_t work = 1;
  for (int g = 0; g < ncomp; ++g) {
    std::vector<int> mem;
    for (int l = 0; l < n; ++l)
      if (comp[l] == g) mem.push_back(l);
    if (mem.size() == 1) {
      // isolated node: plain residue, every difference in ratio form
      int l = mem[0];
      cdouble L = w * lc[l] + lpi;
      double cond = 2.0 + aw;
      for (int k = 0; k < n; ++k) {
        if (k == l) continue;
        cdouble r, om;
        if (lc[l].real() >= lc[k].real()) {
          r = std::exp(lc[k] - lc[l]);
          om = 1.0 - r;
          L -= lc[l] + std::log(om);
        } else {
          r = std::exp(lc[l] - lc[k]);
          om = r - 1.0;
          L -= lc[k] + std::log(om);
        }
        cond += std::abs(r / om) + 1.0;
      }
      Ls.push_back(L);
      lerrs.push_back(L.real() + std::log(kEps * cond));
      ++work;
      continue;
    }
    // clustered (possibly repeated) nodes: one shared ring.  The radius has
    // to clear the cut of z^w and the external nodes while staying wide
    // enough that the members sit deep inside, and shrinks with |w| so the
    // integrand's modulus variation along the ring stays bounded.
    cdouble mu = 0.0;
    for (int l : mem) mu += c[l];
    mu /= double(mem.size());
    double spread = 0.0;
    for (int l : mem) spread = std::max(spread, std::abs(c[l] - mu));
    double cutdist = mu.real() >= 0.0 ? std::abs(mu) : std::abs(mu.imag());
    double extdist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k)
      if (comp[k] != g) extdist = std::min(extdist, std::abs(c[k] - mu));
    double r = std::min(0.5 * cutdist,
                        std::abs(mu) * double(mem.size() + 1) / (1.0 + aw));
    if (std::isfinite(extdist)) r = std::min(r, 0.45 * extdist);
    if (!(r > 1.5 * spread))
      throw conditioning_error(
          "g_node_dd: no admissible ring separates the node cluster");
    const int M = 96;
    std::vector<cdouble> off(mem.size());
    for (std::size_t j = 0; j < mem.size(); ++j)
      off[j] = (mu - c[mem[j]]) / r;
    const double logr = std::log(r);
    std::vector<cdouble> Lnu(M);
    double Lmax = -std::numeric_limits<double>::infinity();
    double condring = 2.0 + aw;
    for (int nu = 0; nu < M; ++nu) {
      double th = 2.0 * kPi * (nu + 0.5) / M;
      cdouble e = std::polar(1.0, th);
      cdouble z = mu + r * e;
      cdouble lz = std::log(z);
      cdouble L = w * lz + lpi + cdouble(logr, th);
      double cond = 0.0;
      for (std::size_t j = 0; j < mem.size(); ++j)
        L -= logr + std::log(e + off[j]);
      cond += 4.0 * double(mem.size());
      for (int k = 0; k < n; ++k) {
        if (comp[k] == g) continue;
        cdouble rr, om;
        if (lz.real() >= lc[k].real()) {
          rr = std::exp(lc[k] - lz);
          om = 1.0 - rr;
          L -= lz + std::log(om);
        } else {
          rr = std::exp(lz - lc[k]);
          om = rr - 1.0;
          L -= lc[k] + std::log(om);
        }
        cond += std::abs(rr / om) + 1.0;
      }
      Lnu[nu] = L;
      Lmax = std::max(Lmax, L.real());
      condring = std::max(condring, cond + 2.0 + aw);
    }
    cdouble S = 0.0;
    for (int nu = 0; nu < M; ++nu) S += std::exp(Lnu[nu] - Lmax);
    S /= double(M);
    Ls.push_back(Lmax + std::log(S));
    double alias = std::pow(spread / r, M) + std::pow(0.5, M);
    if (std::isfinite(extdist)) alias += std::pow(r / extdist, M);
    lerrs.push_back(Lmax + std::log(double(M) * kEps * condring + alias));
    work += M;
  }
  double Lglob = -std::numeric_limits<double>::infinity();
  for (const auto& L : Ls) Lglob = std::max(Lglob, L.real());
  for (double le : lerrs) Lglob = std::max(Lglob, le);
  cdouble acc = 0.0;
  double magsum = 0.0, errsc = 0.0;
  for (const auto& L : Ls) {
    cdouble t = std::exp(L - Lglob);
    acc += t;
    magsum += std::abs(t);
  }
  for (double le : lerrs) errsc += std::exp(le - Lglob);
  errsc += kEps * magsum * (2.0 + aw);
  if (Lglob + std::log(std::max(std::abs(acc), errsc) + 1e-300) > 709.0)
    throw conditioning_error("g_node_dd: magnitude exceeds double range");
  double scale = std::exp(Lglob);
  return {acc * scale, errsc * scale, Method::Explicit, work};
}

EvalResult g_eval(const ctuple& q, cdouble w, const GEvalStrategy& st) {
  const std::size_t d = q.size();
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  reject_zero_entries(q, "g_eval");
  if (std::all_of(q.begin(), q.end(), is_one)) {
    cdouble b = binomial_complex(w, static_cast<int>(d));
    return {b, kEps * double(d + 1) * (1.0 + std::abs(b)), Method::Exact, d};
  }
  if (d == 1) return g1(q[0], w);
  if (std::all_of(q.begin(), q.end() - 1, is_one))
    return g_ones_prefix(static_cast<int>(d), q.back(), w);
  if (is_one(q.back())) {
    // the reduction needs every head suffix block off 1; otherwise fall
    // through to the divisor-robust routes below
    bool reducible = true;
    cdouble Sm = 1.0;
    for (std::size_t m = d - 1; m-- > 0;) {
      Sm *= q[m];
      if (is_one(Sm)) {
        reducible = false;
        break;
      }
    }
    if (reducible) return g_last_one(q, w, st);
    // unit suffix block in the head: the gap expansion still converges as
    // long as every prefix product stays inside the unit disk, just slower
    // the closer z_max sits to 1; past 0.9 the contour route wins
    double zmax = 0.0;
    cdouble P = 1.0;
    for (std::size_t m = 0; m < d; ++m) {
      P *= q[m];
      zmax = std::max(zmax, std::abs(1.0 - P));
    }
    if (zmax <= 0.9) {
      double need = std::log(st.series_tol * (1.0 - zmax)) / std::log(zmax);
      int terms = st.max_newton_terms;
      if (need > double(terms)) terms = int(need) + 64;
      return g_newton(q, w, st.series_tol, terms);
    }
    return g_trailing_ones(q, w, st);
  }
  DivisorProximity prox = divisor_proximity(q);
  if (prox.min_gap >= st.delta) return g_explicit(q, w);
  bool newton_ok = true;
  cdouble c = 1.0;
  for (std::size_t l = 0; l < d; ++l) {
    c *= q[l];
    if (std::abs(1.0 - c) > 0.8) {
      newton_ok = false;
      break;
    }
  }
  if (newton_ok) return g_newton(q, w, st.series_tol, st.max_newton_terms);
  // divisor-adjacent leftovers: the clustered divided difference over the
  // prefix nodes handles them without recursive children; the coordinate
  // recursion stays as the last resort for geometries it cannot ring
  try {
    return g_node_dd(q, w);
  } catch (const conditioning_error&) {
    return g_recursive(q, w, st);
  }
}

cdouble g_additivity_rhs(const ctuple& q, cdouble u, cdouble v,
                         const GEvalStrategy& st) {
  const std::size_t d = q.size();
  if (d == 0) return 1.0;
  cdouble q1u = principal_power(q[0], u);
  cdouble acc = g_eval(q, u, st).value + q1u * g_eval(q, v, st).value;
  for (std::size_t l = 1; l + 1 <= d; ++l) {
    ctuple left;  // (q_2...q_{l+1}, q_{l+2}, ..., q_d)
    cdouble blk = 1.0;
    for (std::size_t m = 1; m <= l; ++m) blk *= q[m];
    left.push_back(blk);
    for (std::size_t m = l + 1; m < d; ++m) left.push_back(q[m]);
    ctuple right;  // (q_1 q_2, q_3, ..., q_{l+1})
    right.push_back(q[0] * q[1]);
    for (std::size_t m = 2; m <= l; ++m) right.push_back(q[m]);
    acc += q1u * g_eval(left, u, st).value * g_eval(right, v, st).value;
  }
  return acc;
}

cdouble g_multiplicativity_rhs(const ctuple& q, cdouble u, cdouble v,
                               const GEvalStrategy& st) {
  const int d = static_cast<int>(q.size());
  if (d == 0) return 1.0;
  ctuple qu(d);
  for (int i = 0; i < d; ++i) qu[i] = principal_power(q[i], u);
  if (!in_domain_Ud(qu))
    throw std::domain_error(
        "g_multiplicativity_rhs: (q_1^u, ..., q_d^u) leaves the domain");
  cdouble acc = 0.0;
  for (int l = 1; l <= d; ++l) {
    ctuple qul(qu.begin(), qu.begin() + l);
    cdouble Gv = g_eval(qul, v, st).value;
    cdouble chains = 0.0;
    // d = j_0 >= j_1 >= ... >= j_l = l; factor n covers (j_{n-1}, j_n)
    std::function<void(int, int, cdouble)> rec = [&](int n, int jprev,
                                                     cdouble partial) {
      if (n == l + 1) {
        chains += partial;
        return;
      }
      int lo = l, hi = (n == l) ? l : jprev;
      for (int jn = lo; jn <= hi; ++jn) {
        ctuple t;
        cdouble blk = 1.0;
        for (int m = n; m <= jn; ++m) blk *= q[m - 1];
        t.push_back(blk);
        for (int m = jn + 1; m <= jprev; ++m) t.push_back(q[m - 1]);
        rec(n + 1, jn, partial * g_eval(t, u, st).value);
      }
    };
    rec(1, d, 1.0);
    acc += chains * Gv;
  }
  return acc;
}

}  // namespace mzeta
