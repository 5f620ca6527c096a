#include "mzeta/combinatorics.hpp"

#include <stdexcept>

namespace mzeta {

cdouble binomial_complex(cdouble w, int d) {
  if (d < 0) return 0.0;
  cdouble acc = 1.0;
  for (int j = 0; j < d; ++j) acc *= (w - double(j)) / double(j + 1);
  return acc;
}

rational binomial_rational(const rational& w, int d) {
  if (d < 0) return rational(0);
  rational acc(1);
  for (int j = 0; j < d; ++j) {
    acc *= (w - j);
    acc /= (j + 1);
  }
  return acc;
}

DelannoyTable::DelannoyTable(int c_max, int d_max)
    : cmax_(c_max), dmax_(d_max), mmax_(c_max + d_max), zero_(0) {
  if (c_max < 0 || d_max < 0) throw std::invalid_argument("DelannoyTable: negative extent");
  auto idx = [this](int m, int c, int d) {
    return (std::size_t(m) * (cmax_ + 1) + c) * (dmax_ + 1) + d;
  };
  data_.assign(std::size_t(mmax_ + 1) * (cmax_ + 1) * (dmax_ + 1), bigint(0));
  data_[idx(0, 0, 0)] = 1;
  for (int m = 1; m <= mmax_; ++m)
    for (int c = 0; c <= cmax_; ++c)
      for (int d = 0; d <= dmax_; ++d) {
        bigint v(0);
        if (c > 0) v += data_[idx(m - 1, c - 1, d)];
        if (d > 0) v += data_[idx(m - 1, c, d - 1)];
        if (c > 0 && d > 0) v += data_[idx(m - 1, c - 1, d - 1)];
        data_[idx(m, c, d)] = v;
      }
}

const bigint& DelannoyTable::at(int m, int c, int d) const {
  if (c < 0 || c > cmax_ || d < 0 || d > dmax_)
    throw std::out_of_range("DelannoyTable::at");
  if (m < 0 || m > mmax_) return zero_;
  return data_[(std::size_t(m) * (cmax_ + 1) + c) * (dmax_ + 1) + d];
}

std::vector<bigint> DelannoyTable::layers(int c, int d) const {
  std::vector<bigint> out;
  out.reserve(c + d + 1);
  for (int m = 0; m <= c + d; ++m) out.push_back(at(m, c, d));
  return out;
}

std::vector<bigint> delannoy_layers(int c, int d) {
  return DelannoyTable(c, d).layers(c, d);
}

bigint delannoy_total(int c, int d) {
  bigint total(0);
  for (const auto& v : delannoy_layers(c, d)) total += v;
  return total;
}

std::vector<bigint> delannoy_via_stuffle(int c, int d, int cap) {
  if (c < 0 || d < 0) throw std::invalid_argument("delannoy_via_stuffle: negative length");
  if (c + d > cap) throw std::invalid_argument("delannoy_via_stuffle: c + d exceeds cap");
  rtuple ones_c(c, rational(1)), ones_d(d, rational(1));
  FormalTupleSum prod =
      harmonic_product(Flavor::MultiplicativePositive, ones_c, ones_d);
  std::vector<bigint> out(std::size_t(c + d) + 1, bigint(0));
  for (const auto& [tup, coeff] : prod.terms()) {
    // products of ones are ones, so only the length matters
    for (const auto& e : tup)
      if (e != 1) throw std::logic_error("delannoy_via_stuffle: non-unit entry");
    out.at(tup.size()) += coeff;
  }
  return out;
}

}  // namespace mzeta
