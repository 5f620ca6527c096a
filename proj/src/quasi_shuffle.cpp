#include "mzeta/quasi_shuffle.hpp"

#include <algorithm>
#include <sstream>

#include "mzeta/zeta_series.hpp"

namespace mzeta {

rational semigroup_combine(Flavor f, const rational& a, const rational& b) {
  if (f == Flavor::Additive) return a + b;
  if (a <= 0 || b <= 0)
    throw std::invalid_argument(
        "semigroup_combine: multiplicative flavor requires positive values");
  return a * b;
}

bool TupleOrder::operator()(const rtuple& a, const rtuple& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

FormalTupleSum FormalTupleSum::unit(Flavor f) {
  FormalTupleSum s(f);
  s.add_term(rtuple{}, 1);
  return s;
}

FormalTupleSum FormalTupleSum::single(Flavor f, rtuple t, bigint c) {
  FormalTupleSum s(f);
  s.add_term(t, c);
  return s;
}

void FormalTupleSum::check_entries(const rtuple& t) const {
  if (flavor_ != Flavor::MultiplicativePositive) return;
  for (const auto& v : t)
    if (v <= 0)
      throw std::invalid_argument(
          "FormalTupleSum: multiplicative flavor requires positive entries");
}

void FormalTupleSum::add_term(const rtuple& t, const bigint& c) {
  if (c == 0) return;
  check_entries(t);
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    terms_.emplace(t, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

FormalTupleSum& FormalTupleSum::operator+=(const FormalTupleSum& o) {
  if (flavor_ != o.flavor_)
    throw std::invalid_argument("FormalTupleSum: flavor mismatch");
  for (const auto& [t, c] : o.terms_) add_term(t, c);
  return *this;
}

FormalTupleSum& FormalTupleSum::operator*=(const bigint& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [t, coeff] : terms_) coeff *= c;
  return *this;
}

// t * s = (t1, t' * s) + (s1, t * s') + (t1·s1, t' * s')
FormalTupleSum harmonic_product(Flavor f, const rtuple& a, const rtuple& b) {
  FormalTupleSum out(f);
  if (a.empty()) {
    out.add_term(b, 1);
    return out;
  }
  if (b.empty()) {
    out.add_term(a, 1);
    return out;
  }
  rtuple a_rest(a.begin() + 1, a.end());
  rtuple b_rest(b.begin() + 1, b.end());
  auto prepend = [&out](const rational& head, const FormalTupleSum& sub) {
    for (const auto& [t, c] : sub.terms()) {
      rtuple nt;
      nt.reserve(t.size() + 1);
      nt.push_back(head);
      nt.insert(nt.end(), t.begin(), t.end());
      out.add_term(nt, c);
    }
  };
  prepend(a[0], harmonic_product(f, a_rest, b));
  prepend(b[0], harmonic_product(f, a, b_rest));
  prepend(semigroup_combine(f, a[0], b[0]), harmonic_product(f, a_rest, b_rest));
  return out;
}

FormalTupleSum harmonic_product(const FormalTupleSum& a,
                                const FormalTupleSum& b) {
  if (a.flavor() != b.flavor())
    throw std::invalid_argument("harmonic_product: flavor mismatch");
  FormalTupleSum out(a.flavor());
  for (const auto& [ta, ca] : a.terms())
    for (const auto& [tb, cb] : b.terms()) {
      FormalTupleSum part = harmonic_product(a.flavor(), ta, tb);
      part *= ca * cb;
      out += part;
    }
  return out;
}

std::vector<std::pair<rtuple, rtuple>> coproduct(const rtuple& x) {
  std::vector<std::pair<rtuple, rtuple>> splits;
  splits.reserve(x.size() + 1);
  for (std::size_t l = 0; l <= x.size(); ++l)
    splits.emplace_back(rtuple(x.begin(), x.begin() + l),
                        rtuple(x.begin() + l, x.end()));
  return splits;
}

FormalTupleSum star_closure(Flavor f, const rtuple& x) {
  FormalTupleSum out(f);
  if (x.empty()) {
    out.add_term(rtuple{}, 1);
    return out;
  }
  std::size_t gaps = x.size() - 1;
  for (std::uint64_t mask = 0; mask < (1ull << gaps); ++mask) {
    // bit i set: merge entries i and i+1 into one semigroup product
    rtuple t;
    t.push_back(x[0]);
    for (std::size_t i = 0; i < gaps; ++i) {
      if (mask & (1ull << i))
        t.back() = semigroup_combine(f, t.back(), x[i + 1]);
      else
        t.push_back(x[i + 1]);
    }
    out.add_term(t, 1);
  }
  return out;
}

FormalTupleSum antipode(Flavor f, const rtuple& x) {
  rtuple rev(x.rbegin(), x.rend());
  FormalTupleSum s = star_closure(f, rev);
  if (x.size() % 2 == 1) s *= -1;
  return s;
}

FormalTupleSum antipode(const FormalTupleSum& s) {
  FormalTupleSum out(s.flavor());
  for (const auto& [t, c] : s.terms()) {
    FormalTupleSum part = antipode(s.flavor(), t);
    part *= c;
    out += part;
  }
  return out;
}

static std::string render_rational(const rational& v) {
  std::ostringstream os;
  os << v;  // p or p/q
  return os.str();
}

std::string render(const FormalTupleSum& s) {
  if (s.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, c] : s.terms()) {
    if (!first) os << ' ';
    first = false;
    os << (c < 0 ? "-" : "+") << boost::multiprecision::abs(c) << "·(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) os << ',';
      os << render_rational(t[i]);
    }
    os << ')';
  }
  return os.str();
}

cdouble evaluate(const EvalFn& F, const FormalTupleSum& s) {
  cdouble acc = 0.0;
  for (const auto& [t, c] : s.terms())
    acc += static_cast<double>(c) * F(t);
  return acc;
}

EvalFn convolve(EvalFn F1, EvalFn F2) {
  return [F1 = std::move(F1), F2 = std::move(F2)](const rtuple& x) {
    cdouble acc = 0.0;
    for (const auto& [lo, hi] : coproduct(x)) acc += F1(lo) * F2(hi);
    return acc;
  };
}

EvalFn compose_antipode(Flavor f, EvalFn F) {
  return [f, F = std::move(F)](const rtuple& x) {
    return evaluate(F, antipode(f, x));
  };
}

EvalResult eval_H(const rtuple& q, cdouble w) {
  if (q.empty()) return {cdouble(1.0), 0.0, Method::Exact, 1};
  rational prefix = 1;
  cdouble result = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0)
      throw std::domain_error("eval_H: entries must be positive");
    prefix *= q[i];
    if (prefix >= 1)
      throw std::domain_error(
          "eval_H: prefix product >= 1, nested geometric sum diverges");
    double Q = static_cast<double>(prefix);
    if (i + 1 < q.size())
      result *= Q / (1.0 - Q);
    else
      result *= principal_power(Q, w) / (1.0 - Q);
  }
  return {result, 1e-15 * std::abs(result) * static_cast<double>(q.size()),
          Method::Exact, q.size()};
}

EvalResult eval_Z(const rtuple& s, cdouble w) {
  ctuple sc;
  sc.reserve(s.size());
  for (const auto& v : s) sc.emplace_back(static_cast<double>(v), 0.0);
  return zeta_hurwitz_strict(sc, w);
}

}  // namespace mzeta
