#include "mzeta/mellin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mzeta/gamma.hpp"
#include "mzeta/zeta_series.hpp"

namespace mzeta {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.69314718055994530942;

// kernel value + its reported error at one grid node
struct GNode {
  cdouble v;
  double e = -1.0;  // negative marks "not computed"
};

// streaming pairwise reduction: slot[r] holds a pending partial over 2^r
// consecutive terms, merged by binary carries.  The tree shape depends only
// on the push order, so totals are bit-identical run to run.
struct PairwiseAcc {
  std::array<cdouble, 64> slot{};
  std::uint64_t cnt = 0;
  void push(cdouble t) {
    std::uint64_t m = cnt++;
    int r = 0;
    while (m & 1) {
      t = slot[r] + t;
      m >>= 1;
      ++r;
    }
    slot[r] = t;
  }
  cdouble total() const {
    cdouble s = 0.0;
    std::uint64_t m = cnt;
    for (int r = 0; m; ++r, m >>= 1)
      if (m & 1) s = slot[r] + s;
    return s;
  }
};

}  // namespace

EvalResult psi_mellin(const ctuple& s, cdouble w, const QuadratureSpec& spec) {
  const std::size_t d = s.size();
  if (d == 0) return {1.0, 0.0, Method::Exact, 1};
  if (d > 4) throw std::invalid_argument("psi_mellin: depth capped at 4");
  for (const cdouble& sm : s)
    if (sm.real() <= 0.0)
      throw std::domain_error("psi_mellin: requires Re(s_m) > 0");
  if (w.real() <= -1.0)
    throw std::domain_error("psi_mellin: requires Re(w) > -1");
  if (spec.level < 3 || spec.level > 12)
    throw std::invalid_argument("psi_mellin: level must be in [3, 12]");
  if (spec.X < 0.0 || spec.target_tol < 0.0)
    throw std::invalid_argument("psi_mellin: X and target_tol must be >= 0");

  const double tol =
      spec.target_tol > 0.0 ? spec.target_tol : (d <= 2 ? 1e-8 : 1e-6);
  // the kernel grows at most like (q_1...q_d)^{-sigma} towards the far
  // corner, so e^{-(1-sigma)x} decay sizes the cutoff
  const double sigma = std::min(std::max(0.0, -w.real()) + 0.05, 0.9);
  const double X =
      spec.X > 0.0 ? spec.X
                   : std::min(400.0, (-std::log(tol) + 5.0 * d) / (1.0 - sigma));
  double smin = s[0].real();
  for (const cdouble& sm : s) smin = std::min(smin, sm.real());
  // stretch the transformed axis until the skipped left mass ~ delta^smin
  // drops below the budget; delta = X exp(-pi sinh t_max)
  const double need =
      (std::log(6.0 * double(d) / (tol * smin)) / smin +
       std::log(std::max(X, 1.0))) /
      kPi;
  const double tmax =
      std::min(7.5, std::asinh(std::max(std::sinh(3.4), need)));

  const int L = spec.level;
  // low depths get twice the per-axis density at each level: oscillatory w
  // (Im w != 0) needs the headroom to certify at the default cap, and the
  // tensor cost only bites for d >= 3, which keeps the coarser ladder
  const int boost = d <= 2 ? 1 : 0;
  const std::size_t nfine = (std::size_t(1) << (L + boost)) + 1;
  const double hfine = 2.0 * tmax / double(nfine - 1);

  // per-axis tables on the finest grid; coarse levels subsample them
  std::vector<cdouble> qg(nfine);
  std::vector<std::vector<cdouble>> axisf(d, std::vector<cdouble>(nfine));
  for (std::size_t f = 0; f < nfine; ++f) {
    const double t = (double(f) - 0.5 * double(nfine - 1)) * hfine;
    const double u = 0.5 * kPi * std::sinh(t);
    // x = X/(1 + e^{-2u}), kept in log form so the ends stay clean
    const double logx =
        std::log(X) + (u <= 0.0 ? 2.0 * u - std::log1p(std::exp(2.0 * u))
                                : -std::log1p(std::exp(-2.0 * u)));
    const double x = std::exp(logx);
    const double au = std::abs(u);
    const double logcosh_u = au + std::log1p(std::exp(-2.0 * au)) - kLog2;
    const double logxp =
        std::log(X * 0.25 * kPi * std::cosh(t)) - 2.0 * logcosh_u;
    qg[f] = cdouble(std::exp(-x), 0.0);
    for (std::size_t m = 0; m < d; ++m)
      axisf[m][f] = std::exp((s[m] - 1.0) * logx + cdouble(logxp - x, 0.0));
  }

  cdouble gam = 1.0;
  for (const cdouble& sm : s) gam *= complex_gamma(sm);
  const double agam = std::abs(gam);

  const double cache_cap = 2.0e6;
  std::vector<GNode> prev;
  std::size_t prev_n = 0;
  cdouble Ik = 0.0;
  cdouble val = 0.0;
  double diff_scaled = 0.0;
  double diff_prev = 0.0;
  double werr = 0.0;
  std::uint64_t work = 0;
  bool converged = false;
  const int kstop = std::min(4, L);
  const GEvalStrategy gst;

  for (int k = 2; k <= L && !converged; ++k) {
    const std::size_t nk = (std::size_t(1) << (k + boost)) + 1;
    const std::size_t stride = std::size_t(1) << (L - k);
    const double h = 2.0 * tmax / double(nk - 1);
    double npow = 1.0;
    for (std::size_t m = 0; m < d; ++m) npow *= double(nk);
    const bool keep = npow <= cache_cap;
    std::vector<GNode> cur;
    if (keep) cur.assign(std::size_t(npow + 0.5), GNode{});

    PairwiseAcc acc;
    double we = 0.0;
    std::array<std::size_t, 4> idx{};
    ctuple qs(d);
    std::size_t flat = 0;
    bool done = false;
    while (!done) {
      cdouble prod = axisf[0][idx[0] * stride];
      for (std::size_t m = 1; m < d; ++m) prod *= axisf[m][idx[m] * stride];
      cdouble term = 0.0;
      if (std::abs(prod.real()) + std::abs(prod.imag()) > 1e-280) {
        GNode gn;
        if (prev_n) {
          bool alleven = true;
          for (std::size_t m = 0; m < d; ++m)
            if (idx[m] & 1) {
              alleven = false;
              break;
            }
          if (alleven) {
            std::size_t pf = 0;
            for (std::size_t m = 0; m < d; ++m)
              pf = pf * prev_n + idx[m] / 2;
            if (prev[pf].e >= 0.0) gn = prev[pf];
          }
        }
        if (gn.e < 0.0) {
          for (std::size_t m = 0; m < d; ++m) qs[m] = qg[idx[m] * stride];
          EvalResult r = g_eval(qs, w, gst);
          gn.v = r.value;
          gn.e = r.abs_error;
          work += r.work + 1;
        }
        if (keep) cur[flat] = gn;
        term = gn.v * prod;
        we += std::abs(prod) * gn.e;
      }
      acc.push(term);
      ++flat;
      done = true;
      for (std::size_t m = d; m-- > 0;) {
        if (++idx[m] < nk) {
          done = false;
          break;
        }
        idx[m] = 0;
      }
    }

    double hd = 1.0;
    for (std::size_t m = 0; m < d; ++m) hd *= h;
    const cdouble Inew = acc.total() * hd;
    if (k > 2) {
      diff_prev = diff_scaled;
      diff_scaled = std::abs(Inew - Ik) / agam;
    }
    Ik = Inew;
    werr = we * hd;
    val = Ik / gam;
    if (k >= kstop && k > 2) {
      const double bar = 0.5 * tol * std::max(1.0, std::abs(val));
      if (diff_scaled <= bar) {
        converged = true;
      } else if (k > 3 && diff_prev > 0.0 &&
                 diff_scaled <= 0.02 * diff_prev) {
        // trapezoid doubling squares the error once the grid resolves the
        // integrand; a fifty-fold drop is the evidence, and the geometric
        // extrapolation of the last two diffs bounds the next one (it is
        // exact for a constant-ratio ladder and conservative for this one)
        const double est = diff_scaled * (diff_scaled / diff_prev);
        if (est <= bar) {
          converged = true;
          diff_scaled = est;
        }
      }
    }
    prev = std::move(cur);
    prev_n = keep ? nk : 0;
  }

  const double av = std::abs(val);
  // cutoff tails: the right end decays like e^{-(1-sigma)X} by construction
  // (or slower when Re(w)+1 undercuts it); the left end misses ~delta^smin
  const double decay = std::min(1.0 - sigma, 1.0 + w.real());
  const double tail_r = std::exp(-decay * X) * (1.0 + av);
  const double logdelta = std::log(X) - kPi * std::sinh(tmax);
  const double tail_l =
      double(d) * std::exp(smin * logdelta) / smin * (1.0 + av);
  const double err = diff_scaled + werr / agam + tail_r + tail_l;
  EvalResult out{val, err, Method::Mellin, work};
  if (!converged)
    throw convergence_error(
        "psi_mellin: inter-level difference above target at the level cap",
        out);
  return out;
}

EvalResult psi_auto(const ctuple& s, cdouble w) {
  if (s.empty()) return {1.0, 0.0, Method::Exact, 1};
  for (const cdouble& sm : s)
    if (sm.real() <= 0.0)
      throw std::domain_error("psi_auto: requires Re(s_m) > 0");
  const bool on_ray = w.imag() == 0.0 && w.real() <= -1.0 + 1e-12;
  if (on_ray && std::abs(w.real() - std::round(w.real())) < 1e-12)
    throw std::domain_error(
        "psi_auto: w at a negative-integer point of the excluded ray");
  // at a non-negative integer order the interpolant IS the truncated sum,
  // so take the exact finite route whenever its term count is affordable
  if (w.imag() == 0.0 && w.real() > -1e-12 &&
      std::abs(w.real() - std::round(w.real())) < 1e-12) {
    const double N = std::round(w.real());
    double terms = 1.0;
    for (std::size_t m = 0; m < s.size() && terms < 5e6; ++m)
      terms *= (N - double(m)) / double(m + 1);
    if (terms < 5e6) return zeta_truncated(s, std::uint64_t(N));
  }
  bool series_ok = w.real() > -1.0;
  for (const cdouble& sm : s)
    if (sm.real() <= 1.0) {
      series_ok = false;
      break;
    }
  if (series_ok) return psi_series(s, w);
  if (w.real() > -1.0) return psi_mellin(s, w);
  // left of the strip: unwind the difference equation until the integral
  // representation reaches
  return psi_shift_w(
      s, w, [](const ctuple& ss, cdouble ww) { return psi_mellin(ss, ww); });
}

}  // namespace mzeta
