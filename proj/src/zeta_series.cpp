#include "mzeta/zeta_series.hpp"

#include <algorithm>
#include <cmath>

namespace mzeta {

namespace {

// ----------------------------------------------------------------------
// Asymptotic-series toolbox.
//
// Every nested layer's partial-sum function P(n) is represented near
// n = infinity as a finite combination of terms
//
//     c * u^(-beta) * log(u)^p,        u = w + n,
//
// composed upward through the layers: multiply by the layer weight
// u^(-s), re-expand at u-1 for strict ordering, and apply the
// Euler-Maclaurin antidifference term by term.  The one free constant per
// layer is fixed numerically from an exact partial sum at n = M.  Near
// the convergence boundary the exponents collide with 1 and integration
// produces log powers; keeping p as part of the basis makes inputs like
// (2,1) no different from generic ones.
// ----------------------------------------------------------------------

struct ATerm {
  cdouble beta;
  int p;
  cdouble coeff;
};
using ASeries = std::vector<ATerm>;

constexpr double kReCap = 18.0;  // drop u^(-beta) beyond Re(beta) = lead + cap
constexpr int kPCap = 6;
constexpr int kPolyLen = 20;     // 1/u expansion order for shifts
constexpr int kBernSteps = 9;    // Euler-Maclaurin through B_18

// B_2, B_4, ..., B_20
constexpr double kBernoulli[10] = {
    1.0 / 6,           -1.0 / 30,         1.0 / 42,        -1.0 / 30,
    5.0 / 66,          -691.0 / 2730,     7.0 / 6,         -3617.0 / 510,
    43867.0 / 798,     -174611.0 / 330};

struct AsymCtx {
  cdouble w;
  double u0;       // |w + M|: magnitude at which drop estimates are taken
  double log_u0;
  double re_floor; // smallest leading Re(beta) seen; cap is relative to it
  double dropped = 0.0;
};

double term_mag(const AsymCtx& c, cdouble beta, int p, cdouble coeff) {
  return std::abs(coeff) * std::pow(c.u0, -beta.real()) *
         std::pow(c.log_u0, p);
}

void push_term(AsymCtx& c, ASeries& s, cdouble beta, int p, cdouble coeff) {
  if (coeff == cdouble(0.0)) return;
  if (beta.real() > c.re_floor + kReCap || p > kPCap) {
    c.dropped += term_mag(c, beta, p, coeff);
    return;
  }
  s.push_back({beta, p, coeff});
}

void normalize(ASeries& s) {
  std::sort(s.begin(), s.end(), [](const ATerm& a, const ATerm& b) {
    if (a.beta.real() != b.beta.real()) return a.beta.real() < b.beta.real();
    if (a.beta.imag() != b.beta.imag()) return a.beta.imag() < b.beta.imag();
    return a.p < b.p;
  });
  ASeries out;
  for (const auto& t : s) {
    if (!out.empty() && out.back().p == t.p &&
        std::abs(out.back().beta - t.beta) <=
            1e-11 * (1.0 + std::abs(t.beta))) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const ATerm& t) {
    return std::abs(t.coeff) == 0.0;
  });
  s = std::move(out);
}

// expansion of A(u-1) in powers of u: (u-1)^(-beta) via the binomial
// series, log(u-1) = log(u) + lam with lam = -sum_{k>=1} u^(-k)/k.
ASeries shift_back(AsymCtx& c, const ASeries& a) {
  // powers of lam as polynomials in v = 1/u (index = power of v)
  static thread_local std::vector<std::vector<double>> lam_pows;
  if (lam_pows.empty()) {
    lam_pows.assign(kPCap + 1, std::vector<double>(kPolyLen + 1, 0.0));
    lam_pows[0][0] = 1.0;
    std::vector<double> lam(kPolyLen + 1, 0.0);
    for (int k = 1; k <= kPolyLen; ++k) lam[k] = -1.0 / k;
    for (int m = 1; m <= kPCap; ++m) {
      for (int i = 0; i <= kPolyLen; ++i) {
        double acc = 0.0;
        for (int k = 1; k <= i; ++k) acc += lam[k] * lam_pows[m - 1][i - k];
        lam_pows[m][i] = acc;
      }
    }
  }
  ASeries out;
  std::vector<cdouble> binom(kPolyLen + 1);
  for (const auto& t : a) {
    // (1 - v)^(-beta) = sum_k poch(beta,k)/k! v^k
    binom[0] = 1.0;
    for (int k = 1; k <= kPolyLen; ++k)
      binom[k] = binom[k - 1] * (t.beta + cdouble(k - 1, 0)) / double(k);
    double fact = 1.0;  // binom(p, j), walked from j = p downward
    for (int j = t.p; j >= 0; --j) {
      // contribution binom(p,j) log^j(u) * (1-v)^(-beta) * lam^(p-j)
      const auto& lp = lam_pows[t.p - j];
      for (int i = 0; i <= kPolyLen; ++i) {
        cdouble conv = 0.0;
        for (int k = 0; k <= i; ++k) conv += binom[k] * lp[i - k];
        push_term(c, out, t.beta + cdouble(i, 0), j, t.coeff * fact * conv);
      }
      if (j > 0) fact = fact * double(j) / double(t.p - j + 1);
    }
  }
  normalize(out);
  return out;
}

ASeries mul_upow(const ASeries& a, cdouble s) {
  ASeries out = a;
  for (auto& t : out) t.beta += s;
  return out;
}

ASeries derivative(AsymCtx& c, const ASeries& a) {
  ASeries out;
  out.reserve(2 * a.size());
  for (const auto& t : a) {
    push_term(c, out, t.beta + 1.0, t.p, -t.beta * t.coeff);
    if (t.p > 0) push_term(c, out, t.beta + 1.0, t.p - 1, double(t.p) * t.coeff);
  }
  normalize(out);
  return out;
}

// indefinite integral of u^(-beta) log^p(u); beta == 1 produces the log
// power bump, otherwise repeated integration by parts.
void integral_term(AsymCtx& c, ASeries& out, const ATerm& t) {
  if (std::abs(t.beta - 1.0) <= 1e-10) {
    push_term(c, out, 0.0, t.p + 1, t.coeff / double(t.p + 1));
    return;
  }
  cdouble mu = 1.0 / (1.0 - t.beta);
  cdouble factor = mu;
  double fact_ratio = 1.0;  // p!/k!
  for (int k = t.p; k >= 0; --k) {
    push_term(c, out, t.beta - 1.0, k, t.coeff * factor * fact_ratio);
    factor *= -mu;
    fact_ratio *= double(k);
  }
}

// Euler-Maclaurin antidifference: S(n) with S(n) - S(n-1) = f(n)
// asymptotically, S = int f + f/2 + sum_r B_2r/(2r)! f^(2r-1).
ASeries em_antidifference(AsymCtx& c, const ASeries& f) {
  ASeries s;
  for (const auto& t : f) integral_term(c, s, t);
  for (const auto& t : f) push_term(c, s, t.beta, t.p, 0.5 * t.coeff);
  ASeries der = derivative(c, f);
  double fact = 2.0;  // (2r)! running
  for (int r = 1; r <= kBernSteps; ++r) {
    double coef = kBernoulli[r - 1] / fact;
    for (const auto& t : der)
      push_term(c, s, t.beta, t.p, coef * t.coeff);
    if (r < kBernSteps) {
      der = derivative(c, derivative(c, der));
      fact *= (2.0 * r + 1.0) * (2.0 * r + 2.0);
    } else {
      // account the first omitted correction as error
      der = derivative(c, derivative(c, der));
      fact *= (2.0 * r + 1.0) * (2.0 * r + 2.0);
      double coef2 = std::abs(kBernoulli[kBernSteps] / fact);
      for (const auto& t : der) c.dropped += coef2 * term_mag(c, t.beta, t.p, t.coeff);
    }
  }
  normalize(s);
  return s;
}

cdouble eval_series(const ASeries& a, cdouble u, double* magsum = nullptr) {
  cdouble lg = std::log(u);
  cdouble acc = 0.0;
  double mags = 0.0;
  for (const auto& t : a) {
    cdouble v = t.coeff * std::exp(-t.beta * lg);
    for (int i = 0; i < t.p; ++i) v *= lg;
    acc += v;
    mags += std::abs(v);
  }
  if (magsum) *magsum += mags;
  return acc;
}

struct EngineOut {
  cdouble value;
  double err;
  std::uint64_t work;
};

// Nested Hurwitz-type sum over j1 </<= j2 ... with weights (w+j)^(-s_m).
// `strict` selects j_{m} > j_{m+1} (vs >=).
EngineOut nested_sum(const ctuple& s, cdouble w, bool strict,
                     const SeriesConfig& cfg) {
  const int d = static_cast<int>(s.size());
  if (d == 0) return {cdouble(1.0), 0.0, 0};

  const int M = 48;
  if (std::uint64_t(M) * d > cfg.max_terms) {
    throw convergence_error("nested_sum: max_terms too small for cutoff",
                            {cdouble(0.0), 1.0, Method::Series, 0});
  }
  AsymCtx ctx;
  ctx.w = w;
  ctx.u0 = std::abs(w + cdouble(M, 0));
  ctx.log_u0 = std::log(ctx.u0);
  ctx.re_floor = 0.0;
  const cdouble uM = w + cdouble(M, 0);

  // exact prefix values P_{m}(n), n = 0..M, rolled layer by layer
  std::vector<cdouble> Pnext(M + 1, cdouble(1.0)), Pcur(M + 1);
  // powers (w+n)^(-s_m) recomputed per layer
  std::vector<cdouble> pw(M + 1);

  ASeries E{{cdouble(0.0), 0, cdouble(1.0)}};  // P_{d+1} == 1
  double magsum = 0.0;
  std::uint64_t work = 0;

  for (int m = d; m >= 1; --m) {
    for (int n = 1; n <= M; ++n)
      pw[n] = std::exp(-s[m - 1] * std::log(w + cdouble(n, 0)));
    Pcur[0] = 0.0;
    for (int n = 1; n <= M; ++n) {
      Pcur[n] = Pcur[n - 1] + pw[n] * (strict ? Pnext[n - 1] : Pnext[n]);
      work++;
    }
    ctx.re_floor = 0.0;
    for (const auto& t : E)
      ctx.re_floor = std::min(ctx.re_floor, t.beta.real());
    ASeries B = strict ? shift_back(ctx, E) : E;
    ASeries G = mul_upow(B, s[m - 1]);
    ctx.re_floor = 0.0;
    for (const auto& t : G)
      ctx.re_floor = std::min(ctx.re_floor, t.beta.real());
    ASeries Sexp = em_antidifference(ctx, G);
    cdouble SM = eval_series(Sexp, uM, &magsum);
    cdouble C = Pcur[M] - SM;
    magsum += std::abs(Pcur[M]);
    E = std::move(Sexp);
    E.push_back({cdouble(0.0), 0, C});
    normalize(E);
    work += E.size();
    std::swap(Pnext, Pcur);
  }

  // limit n -> infinity: the constant survives, decaying terms vanish;
  // anything else means the defining sum diverges.
  cdouble value = 0.0;
  double err = ctx.dropped + 64.0 * 1e-16 * magsum;
  for (const auto& t : E) {
    if (t.beta == cdouble(0.0) && t.p == 0) {
      value += t.coeff;
    } else if (t.beta.real() <= 1e-12) {
      if (term_mag(ctx, t.beta, t.p, t.coeff) > 1e-12)
        throw std::domain_error(
            "nested_sum: series diverges (non-decaying asymptotic term)");
      err += term_mag(ctx, t.beta, t.p, t.coeff);
    }
  }
  return {value, err, work};
}

void check_w_off_ray(cdouble w, const char* who) {
  if (w.imag() == 0.0 && w.real() <= -1.0)
    throw std::domain_error(std::string(who) + ": w on R_{<=-1}");
}

// convergence region of the nested sums: Re(s_1 + ... + s_m) > m for every
// prefix.  Merging adjacent entries preserves it, so it covers the non-strict
// sum as well.
void check_prefix_region(const ctuple& s, const char* who) {
  cdouble partial = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    partial += s[m];
    if (!(partial.real() > double(m + 1)))
      throw std::domain_error(
          std::string(who) +
          ": outside the convergence region Re(s1+...+sm) > m");
  }
}

void check_entrywise_region(const ctuple& s, cdouble w, const char* who) {
  for (const auto& e : s)
    if (!(e.real() > 1.0))
      throw std::domain_error(std::string(who) +
                              ": requires Re of every entry > 1");
  check_w_off_ray(w, who);
}

}  // namespace

EvalResult zeta_truncated(const ctuple& s, std::uint64_t N) {
  const std::size_t d = s.size();
  if (d == 0) return {cdouble(1.0), 0.0, Method::Exact, 0};
  if (N < d) return {cdouble(0.0), 0.0, Method::Exact, 0};
  std::vector<cdouble> Pnext(N + 1, cdouble(1.0)), Pcur(N + 1);
  double magsum = 0.0;
  std::uint64_t work = 0;
  for (std::size_t m = d; m >= 1; --m) {
    Pcur[0] = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
      cdouble p = std::exp(-s[m - 1] * std::log(double(n)));
      Pcur[n] = Pcur[n - 1] + p * Pnext[n - 1];
      magsum += std::abs(p * Pnext[n - 1]);
      work++;
    }
    std::swap(Pnext, Pcur);
  }
  return {Pnext[N], 8.0 * 1e-16 * magsum, Method::Exact, work};
}

EvalResult zeta(const ctuple& s, const SeriesConfig& cfg) {
  check_prefix_region(s, "zeta");
  auto r = nested_sum(s, cdouble(0.0), /*strict=*/true, cfg);
  if (r.err > cfg.tol)
    throw convergence_error("zeta: tolerance not certified",
                            {r.value, r.err, Method::Series, r.work});
  return {r.value, r.err, Method::Series, r.work};
}

EvalResult zeta_star_hurwitz(const ctuple& s, cdouble w,
                             const SeriesConfig& cfg) {
  if (s.empty()) return {cdouble(1.0), 0.0, Method::Exact, 0};
  check_entrywise_region(s, w, "zeta_star_hurwitz");
  auto r = nested_sum(s, w, /*strict=*/false, cfg);
  if (r.err > cfg.tol)
    throw convergence_error("zeta_star_hurwitz: tolerance not certified",
                            {r.value, r.err, Method::Series, r.work});
  return {r.value, r.err, Method::Series, r.work};
}

EvalResult zeta_hurwitz_strict(const ctuple& s, cdouble w,
                               const SeriesConfig& cfg) {
  if (s.empty()) return {cdouble(1.0), 0.0, Method::Exact, 0};
  check_prefix_region(s, "zeta_hurwitz_strict");
  check_w_off_ray(w, "zeta_hurwitz_strict");
  auto r = nested_sum(s, w, /*strict=*/true, cfg);
  if (r.err > cfg.tol)
    throw convergence_error("zeta_hurwitz_strict: tolerance not certified",
                            {r.value, r.err, Method::Series, r.work});
  return {r.value, r.err, Method::Series, r.work};
}

EvalResult psi_series(const ctuple& s, cdouble w, const SeriesConfig& cfg) {
  const std::size_t d = s.size();
  if (d == 0) return {cdouble(1.0), 0.0, Method::Exact, 0};
  check_entrywise_region(s, w, "psi_series");
  cdouble acc = 0.0;
  double err = 0.0;
  std::uint64_t work = 0;
  for (std::size_t i = 0; i <= d; ++i) {
    EvalResult zs{cdouble(1.0), 0.0, Method::Exact, 0};
    if (i > 0) {
      ctuple rev(s.rend() - i, s.rend());  // (s_i, ..., s_1)
      zs = zeta_star_hurwitz(rev, w, cfg);
    }
    EvalResult z{cdouble(1.0), 0.0, Method::Exact, 0};
    if (i < d) z = zeta(tuple_suffix(s, i), cfg);
    double sign = (i % 2 == 0) ? 1.0 : -1.0;
    acc += sign * zs.value * z.value;
    err += std::abs(zs.value) * z.abs_error + std::abs(z.value) * zs.abs_error +
           zs.abs_error * z.abs_error + 1e-16 * std::abs(zs.value * z.value);
    work += zs.work + z.work;
  }
  return {acc, err, Method::Series, work};
}

EvalResult psi_defining_partial(const ctuple& s, cdouble w, std::uint64_t J,
                                const SeriesConfig& cfg) {
  const std::size_t d = s.size();
  if (d == 0) return {cdouble(1.0), 0.0, Method::Exact, 0};
  check_entrywise_region(s, w, "psi_defining_partial");
  const ctuple inner = tuple_suffix(s, 1);
  cdouble acc = 0.0;
  double err = 0.0;
  std::uint64_t work = 0;
  for (std::uint64_t j = 1; j <= J; ++j) {
    // at the integer shift the inner interpolant is the truncated sum
    EvalResult a = zeta_truncated(inner, j - 1);
    EvalResult b = psi_series(inner, w + cdouble(double(j) - 1.0, 0.0), cfg);
    cdouble pj = std::exp(-s[0] * std::log(cdouble(double(j), 0.0)));
    cdouble pwj = std::exp(-s[0] * principal_log(w + cdouble(double(j), 0.0)));
    acc += a.value * pj - b.value * pwj;
    err += a.abs_error * std::abs(pj) + b.abs_error * std::abs(pwj) +
           1e-16 * (std::abs(a.value * pj) + std::abs(b.value * pwj));
    work += a.work + b.work + 1;
  }
  return {acc, err, Method::Series, work};
}

EvalResult psi_shift_w(const ctuple& s, cdouble w, const PsiEvaluator& eval) {
  const std::size_t d = s.size();
  if (d == 0) return {cdouble(1.0), 0.0, Method::Exact, 0};
  long k = 0;
  while (w.real() + double(k) <= -0.5) ++k;
  if (k == 0) return eval(s, w);
  // every power base w+j, j = 1..k, must stay clear of the cut
  for (long j = 1; j <= k; ++j) {
    cdouble z = w + cdouble(double(j), 0.0);
    double dist = z.real() > 0.0 ? std::abs(z) : std::abs(z.imag());
    if (dist < 1e-8)
      throw std::domain_error(
          "psi_shift_w: shift path passes within 1e-8 of the cut R_{<=0}");
  }
  EvalResult top = eval(s, w + cdouble(double(k), 0.0));
  cdouble acc = top.value;
  double err = top.abs_error;
  std::uint64_t work = top.work;
  const ctuple inner = tuple_suffix(s, 1);
  for (long j = 1; j <= k; ++j) {
    EvalResult in = psi_shift_w(inner, w + cdouble(double(j) - 1.0, 0.0), eval);
    cdouble p = principal_power(w + cdouble(double(j), 0.0), -s[0]);
    acc -= p * in.value;
    err += std::abs(p) * in.abs_error + 1e-16 * std::abs(p * in.value);
    work += in.work + 1;
  }
  return {acc, err, Method::DifferenceShift, work};
}

}  // namespace mzeta
