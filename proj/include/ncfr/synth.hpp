#pragma once

#include <cstdint>

#include "ncfr/symbol.hpp"

namespace ncfr {

struct SynthParams {
  int d = 1;
  int degree = 0;
  Index h_dim = 1;
  std::uint64_t seed = 0;
  /// Probability that a given word receives a nonzero coefficient.
  double density = 1.0;
};

/// Random analytic symbol. Words are visited in Fock order; for each word one
/// keep/drop draw is made, then h_dim^2 entries (row-major, real part then
/// imaginary part), each uniform in [0, 1). The generator is std::mt19937_64
/// seeded with `seed`, and a draw is (x >> 11) * 2^-53, so output is identical
/// on every platform.
AnalyticSymbol synth_analytic(const SynthParams& params);

}  // namespace ncfr
