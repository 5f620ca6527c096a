#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mzeta/kernel.hpp"

namespace mzeta {

// One identity family checked over a batch of sampled (or gridded) instances.
// max_dev is the worst deviation() seen -- exactly 0 for the exact-arithmetic
// lines unless something is broken.
struct CheckLine {
  std::string name;
  std::uint64_t samples = 0;
  double max_dev = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckLine> lines;
  bool pass = true;
  double max_dev = 0.0;
};

// suites: harmonic, mellin, newton, special-values, delannoy, all.
// Deterministic: the same (name, seed, samples) always produces the same
// report.  `samples` is the instance count per sampled line; the fixed
// exhaustive grids (e.g. the Delannoy table comparison) report their own
// counts.  Unknown names raise std::invalid_argument.
VerifyReport verify_suite(const std::string& name, std::uint64_t seed,
                          std::uint64_t samples);

// fixed-width text report, one line per identity plus an overall verdict
std::string render(const VerifyReport& r);

}  // namespace mzeta
