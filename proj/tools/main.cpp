// mzeta -- command line front end for the interpolant library.
//
// Subcommands: psi, g, zeta, stuffle, delannoy, verify.  Numeric results are
// printed as JSON on stdout by default ({"value":{"re","im"},"abs_error",
// "method","work"}); errors go to stderr as {"error":{"type","message"}}.
// Exit codes: 0 ok, 1 domain/convergence failure, 2 usage error.

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mzeta/combinatorics.hpp"
#include "mzeta/g_function.hpp"
#include "mzeta/kernel.hpp"
#include "mzeta/mellin.hpp"
#include "mzeta/quasi_shuffle.hpp"
#include "mzeta/verify.hpp"
#include "mzeta/zeta_series.hpp"

using json = nlohmann::ordered_json;
using namespace mzeta;

namespace {

// bad literals and flag combinations CLI11 cannot see; mapped to exit 2
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const char* ws = " \t";
  auto a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& tok) {
  const std::string t = trim(tok);
  if (t.empty()) throw usage_error("empty numeric literal");
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw usage_error("bad numeric literal '" + tok + "'");
  return v;
}

// complex literals: RE, IMi, RE+IMi, RE-IMi.  The real/imaginary split is the
// last +/- that is neither leading nor an exponent sign; bare i, +i, -i are
// the unit imaginaries.
cdouble parse_complex(const std::string& tok) {
  std::string t = trim(tok);
  if (t.empty()) throw usage_error("empty complex literal");
  if (t.back() != 'i' && t.back() != 'I') return {parse_real(t), 0.0};
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t p = t.size(); p-- > 1;) {
    if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_part = [&](const std::string& u) {
    if (u.empty() || u == "+") return 1.0;
    if (u == "-") return -1.0;
    return parse_real(u);
  };
  if (split == std::string::npos) return {0.0, imag_part(t)};
  return {parse_real(t.substr(0, split)), imag_part(t.substr(split))};
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto p = s.find(',', start);
    if (p == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

ctuple parse_ctuple(const std::string& s) {
  ctuple out;
  for (const auto& piece : split_commas(s)) out.push_back(parse_complex(piece));
  return out;
}

// rational entries: p/q, integers, or finite decimals (1.25 -> 5/4)
rational parse_rational(const std::string& tok) {
  std::string t = trim(tok);
  if (t.empty()) throw usage_error("empty rational literal");
  bool neg = false;
  if (t[0] == '+' || t[0] == '-') {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  auto digits = [](const std::string& u) {
    return !u.empty() && u.find_first_not_of("0123456789") == std::string::npos;
  };
  rational r;
  if (auto slash = t.find('/'); slash != std::string::npos) {
    std::string p = t.substr(0, slash), q = t.substr(slash + 1);
    if (!digits(p) || !digits(q) || bigint(q) == 0)
      throw usage_error("bad rational literal '" + tok + "'");
    r = rational(bigint(p), bigint(q));
  } else if (auto dot = t.find('.'); dot != std::string::npos) {
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits(ip) || (!fp.empty() && !digits(fp)))
      throw usage_error("bad rational literal '" + tok + "'");
    bigint den = 1;
    for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
    r = rational(bigint(ip) * den + (fp.empty() ? bigint(0) : bigint(fp)), den);
  } else {
    if (!digits(t)) throw usage_error("bad rational literal '" + tok + "'");
    r = rational(bigint(t));
  }
  return neg ? -r : r;
}

rtuple parse_rtuple(const std::string& s) {
  rtuple out;
  for (const auto& piece : split_commas(s)) out.push_back(parse_rational(piece));
  return out;
}

void print_eval(const EvalResult& r, const std::string& format, bool timing,
                double ms) {
  if (format == "json") {
    json j;
    j["value"] = {{"re", r.value.real()}, {"im", r.value.imag()}};
    j["abs_error"] = r.abs_error;
    j["method"] = to_string(r.method);
    j["work"] = r.work;
    if (timing) j["elapsed_ms"] = ms;
    std::printf("%s\n", j.dump().c_str());
  } else if (format == "csv") {
    std::printf("re,im,abs_error,method,work%s\n", timing ? ",elapsed_ms" : "");
    std::printf("%.17g,%.17g,%.17g,%s,%llu", r.value.real(), r.value.imag(),
                r.abs_error, to_string(r.method),
                static_cast<unsigned long long>(r.work));
    if (timing) std::printf(",%.3f", ms);
    std::printf("\n");
  } else {
    std::printf("value     = %.17g %+.17gi\n", r.value.real(), r.value.imag());
    std::printf("abs_error = %.3e\n", r.abs_error);
    std::printf("method    = %s\n", to_string(r.method));
    std::printf("work      = %llu\n", static_cast<unsigned long long>(r.work));
    if (timing) std::printf("elapsed_ms = %.3f\n", ms);
  }
}

void emit_error(const char* type, const std::string& msg,
                const EvalResult* best) {
  json j;
  j["error"] = {{"type", type}, {"message", msg}};
  if (best) {
    j["error"]["best"] = {
        {"value", {{"re", best->value.real()}, {"im", best->value.imag()}}},
        {"abs_error", best->abs_error},
        {"method", to_string(best->method)},
        {"work", best->work}};
  }
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

// --tol wins; otherwise MZETA_TOL applies, and an unparsable value there is
// a hard usage error rather than a silent fallback.  0 means engine default.
double resolve_tol(bool flag_given, double flag_val) {
  if (flag_given) return flag_val;
  const char* e = std::getenv("MZETA_TOL");
  if (!e) return 0.0;
  std::string v = trim(e);
  char* end = nullptr;
  double t = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !(t > 0.0))
    throw usage_error("MZETA_TOL must be a positive number, got '" +
                      std::string(e) + "'");
  return t;
}

template <class F>
EvalResult timed(bool timing, double& ms, F&& f) {
  if (!timing) {
    ms = 0.0;
    return f();
  }
  auto t0 = std::chrono::steady_clock::now();
  EvalResult r = f();
  ms = std::chrono::duration<double, std::milli>(
           std::chrono::steady_clock::now() - t0)
           .count();
  return r;
}

struct PsiOpts {
  std::string s, w, method = "auto", format = "json";
  double tol = 0.0, X = 0.0;
  int level = 7;
  bool timing = false;
};

struct GOpts {
  std::string q, w, format = "json";
  double tol = 0.0;
  bool timing = false;
};

struct ZetaOpts {
  std::string s, w, format = "json";
  std::uint64_t N = 0;
  bool star = false, hurwitz = false, timing = false;
  double tol = 0.0;
};

struct StuffleOpts {
  std::string flavor = "additive", a, b, format = "plain";
};

struct DelannoyOpts {
  int c = 0, d = 0;
  std::string format = "csv";
};

struct VerifyOpts {
  std::string suite = "all", format = "plain";
  std::uint64_t seed = 0, samples = 20;
};

int run_psi(const PsiOpts& o) {
  ctuple s = parse_ctuple(o.s);
  cdouble w = parse_complex(o.w);
  double ms = 0.0;
  EvalResult r;
  if (o.method == "series") {
    SeriesConfig cfg;
    if (o.tol > 0) cfg.tol = o.tol;
    r = timed(o.timing, ms, [&] { return psi_series(s, w, cfg); });
  } else if (o.method == "mellin") {
    QuadratureSpec sp;
    sp.level = o.level;
    sp.X = o.X;
    if (o.tol > 0) sp.target_tol = o.tol;
    r = timed(o.timing, ms, [&] { return psi_mellin(s, w, sp); });
  } else {
    r = timed(o.timing, ms, [&] { return psi_auto(s, w); });
  }
  print_eval(r, o.format, o.timing, ms);
  return 0;
}

int run_g(const GOpts& o) {
  GEvalStrategy st;
  if (o.tol > 0) st.series_tol = o.tol;
  ctuple q = parse_ctuple(o.q);
  cdouble w = parse_complex(o.w);
  double ms = 0.0;
  EvalResult r = timed(o.timing, ms, [&] { return g_eval(q, w, st); });
  print_eval(r, o.format, o.timing, ms);
  return 0;
}

int run_zeta(const ZetaOpts& o, bool has_N, bool has_w) {
  if (o.star && o.hurwitz)
    throw usage_error("--star and --hurwitz are mutually exclusive");
  if ((o.star || o.hurwitz) && has_N)
    throw usage_error("--N does not combine with --star/--hurwitz");
  if ((o.star || o.hurwitz) && !has_w)
    throw usage_error("--star/--hurwitz need --w");
  if (has_w && !o.star && !o.hurwitz)
    throw usage_error("--w needs --star or --hurwitz");
  ctuple s = parse_ctuple(o.s);
  SeriesConfig cfg;
  if (o.tol > 0) cfg.tol = o.tol;
  double ms = 0.0;
  EvalResult r;
  if (has_N) {
    r = timed(o.timing, ms, [&] { return zeta_truncated(s, o.N); });
  } else if (o.star) {
    cdouble w = parse_complex(o.w);
    r = timed(o.timing, ms, [&] { return zeta_star_hurwitz(s, w, cfg); });
  } else if (o.hurwitz) {
    cdouble w = parse_complex(o.w);
    r = timed(o.timing, ms, [&] { return zeta_hurwitz_strict(s, w, cfg); });
  } else {
    r = timed(o.timing, ms, [&] { return zeta(s, cfg); });
  }
  print_eval(r, o.format, o.timing, ms);
  return 0;
}

int run_stuffle(const StuffleOpts& o) {
  if (o.format == "csv") throw usage_error("stuffle has no csv rendering");
  Flavor fl = o.flavor == "multiplicative" ? Flavor::MultiplicativePositive
                                           : Flavor::Additive;
  FormalTupleSum p = harmonic_product(fl, parse_rtuple(o.a), parse_rtuple(o.b));
  if (o.format == "json") {
    json terms = json::array();
    for (const auto& [t, c] : p.terms()) {
      json tup = json::array();
      for (const auto& e : t) tup.push_back(e.str());
      terms.push_back({{"coeff", c.str()}, {"tuple", tup}});
    }
    json j;
    j["flavor"] = o.flavor;
    j["terms"] = terms;
    std::printf("%s\n", j.dump().c_str());
  } else {
    std::printf("%s\n", render(p).c_str());
  }
  return 0;
}

int run_delannoy(const DelannoyOpts& o) {
  std::vector<bigint> layers = delannoy_layers(o.c, o.d);
  if (o.format == "json") {
    json rows = json::array();
    for (std::size_t m = 0; m < layers.size(); ++m)
      if (layers[m] != 0)
        rows.push_back({{"m", m}, {"D", layers[m].str()}});
    json j;
    j["c"] = o.c;
    j["d"] = o.d;
    j["layers"] = rows;
    std::printf("%s\n", j.dump().c_str());
  } else if (o.format == "plain") {
    for (std::size_t m = 0; m < layers.size(); ++m)
      if (layers[m] != 0)
        std::printf("m=%zu  D=%s\n", m, layers[m].str().c_str());
  } else {
    std::printf("c,d,m,D\n");
    for (std::size_t m = 0; m < layers.size(); ++m)
      if (layers[m] != 0)
        std::printf("%d,%d,%zu,%s\n", o.c, o.d, m, layers[m].str().c_str());
  }
  return 0;
}

int run_verify(const VerifyOpts& o) {
  if (o.format == "csv") throw usage_error("verify has no csv rendering");
  VerifyReport rep = verify_suite(o.suite, o.seed, o.samples);
  if (o.format == "json") {
    json lines = json::array();
    for (const auto& l : rep.lines) {
      lines.push_back({{"name", l.name},
                       {"samples", l.samples},
                       {"max_dev", l.max_dev},
                       {"tol", l.tol},
                       {"pass", l.pass}});
    }
    json j;
    j["suite"] = rep.suite;
    j["seed"] = rep.seed;
    j["lines"] = lines;
    j["max_dev"] = rep.max_dev;
    j["pass"] = rep.pass;
    std::printf("%s\n", j.dump().c_str());
  } else {
    std::fputs(render(rep).c_str(), stdout);
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated multiple zeta interpolant toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> formats = {"json", "csv", "plain"};

  PsiOpts po;
  auto* cpsi = app.add_subcommand("psi", "evaluate the interpolant Psi(s; w)");
  cpsi->add_option("--s", po.s, "exponent tuple (comma separated complex literals)")
      ->required();
  cpsi->add_option("--w", po.w, "interpolation order (complex literal)")
      ->required();
  cpsi->add_option("--method", po.method, "evaluation route")
      ->check(CLI::IsMember({"auto", "series", "mellin"}));
  cpsi->add_option("--tol", po.tol, "target tolerance (series/mellin routes)")
      ->check(CLI::PositiveNumber);
  cpsi->add_option("--level", po.level, "quadrature level cap (mellin route)")
      ->check(CLI::Range(3, 12));
  cpsi->add_option("--X", po.X, "integral cutoff override (mellin route)")
      ->check(CLI::PositiveNumber);
  cpsi->add_option("--format", po.format, "output format")
      ->check(CLI::IsMember(formats));
  cpsi->add_flag("--timing", po.timing, "append wall time to the output");

  GOpts go;
  auto* cg = app.add_subcommand("g", "evaluate the Mellin kernel G(q; w)");
  cg->add_option("--q", go.q, "node tuple (comma separated complex literals)")
      ->required();
  cg->add_option("--w", go.w, "order (complex literal)")->required();
  cg->add_option("--tol", go.tol, "target tolerance for series fallbacks")
      ->check(CLI::PositiveNumber);
  cg->add_option("--format", go.format, "output format")
      ->check(CLI::IsMember(formats));
  cg->add_flag("--timing", go.timing, "append wall time to the output");

  ZetaOpts zo;
  auto* cz = app.add_subcommand("zeta", "multiple zeta sums");
  cz->add_option("--s", zo.s, "exponent tuple (comma separated complex literals)")
      ->required();
  cz->add_option("--N", zo.N, "truncation order: finite sum zeta_N(s)");
  cz->add_flag("--star", zo.star, "non-strict Hurwitz sum zeta*(s; w)");
  cz->add_flag("--hurwitz", zo.hurwitz, "strict Hurwitz sum Z_w(s)");
  cz->add_option("--w", zo.w, "shift for --star/--hurwitz (complex literal)");
  cz->add_option("--tol", zo.tol, "target tolerance for infinite sums")
      ->check(CLI::PositiveNumber);
  cz->add_option("--format", zo.format, "output format")
      ->check(CLI::IsMember(formats));
  cz->add_flag("--timing", zo.timing, "append wall time to the output");

  StuffleOpts so;
  auto* cs = app.add_subcommand("stuffle", "harmonic (quasi-shuffle) product");
  cs->add_option("--flavor", so.flavor, "index algebra")
      ->check(CLI::IsMember({"additive", "multiplicative"}));
  cs->add_option("--a", so.a, "left tuple (comma separated rationals)")
      ->required();
  cs->add_option("--b", so.b, "right tuple (comma separated rationals)")
      ->required();
  cs->add_option("--format", so.format, "output format")
      ->check(CLI::IsMember(formats));

  DelannoyOpts dopt;
  auto* cd = app.add_subcommand("delannoy", "Delannoy numbers by layer");
  cd->add_option("--c", dopt.c, "grid width")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cd->add_option("--d", dopt.d, "grid height")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cd->add_option("--format", dopt.format, "output format")
      ->check(CLI::IsMember(formats));

  VerifyOpts vo;
  auto* cv = app.add_subcommand("verify", "randomized identity checks");
  cv->add_option("--suite", vo.suite, "which identities to exercise")
      ->check(CLI::IsMember({"harmonic", "mellin", "newton", "special-values",
                             "delannoy", "all"}));
  cv->add_option("--seed", vo.seed, "random seed");
  cv->add_option("--samples", vo.samples, "samples per identity")
      ->check(CLI::PositiveNumber);
  cv->add_option("--format", vo.format, "output format")
      ->check(CLI::IsMember(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cpsi->parsed()) {
      po.tol = resolve_tol(cpsi->count("--tol") > 0, po.tol);
      return run_psi(po);
    }
    if (cg->parsed()) {
      go.tol = resolve_tol(cg->count("--tol") > 0, go.tol);
      return run_g(go);
    }
    if (cz->parsed()) {
      zo.tol = resolve_tol(cz->count("--tol") > 0, zo.tol);
      return run_zeta(zo, cz->count("--N") > 0, cz->count("--w") > 0);
    }
    if (cs->parsed()) return run_stuffle(so);
    if (cd->parsed()) return run_delannoy(dopt);
    if (cv->parsed()) return run_verify(vo);
  } catch (const usage_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const convergence_error& e) {
    emit_error("convergence", e.what(), &e.best);
    return 1;
  } catch (const conditioning_error& e) {
    emit_error("conditioning", e.what(), nullptr);
    return 1;
  } catch (const std::domain_error& e) {
    emit_error("domain", e.what(), nullptr);
    return 1;
  } catch (const std::invalid_argument& e) {
    emit_error("invalid", e.what(), nullptr);
    return 1;
  } catch (const std::exception& e) {
    emit_error("internal", e.what(), nullptr);
    return 1;
  }
  return 0;
}
