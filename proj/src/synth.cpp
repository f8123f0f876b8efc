#include "ncfr/synth.hpp"

#include <random>

namespace ncfr {

AnalyticSymbol synth_analytic(const SynthParams& params) {
  if (params.d < 1 || params.degree < 0 || params.h_dim < 1) {
    throw Error(ErrorKind::Config, "synth needs d >= 1, n >= 0, h_dim >= 1");
  }
  if (!(params.density > 0.0 && params.density <= 1.0)) {
    throw Error(ErrorKind::Config, "density must lie in (0, 1]");
  }
  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  AnalyticSymbol F(params.d, params.degree, params.h_dim);
  for (int k = 0; k <= params.degree; ++k) {
    for (const Word& w : enumerate_level(params.d, k)) {
      const bool keep = uniform() < params.density;
      MatrixXc M(params.h_dim, params.h_dim);
      for (Index r = 0; r < params.h_dim; ++r) {
        for (Index c = 0; c < params.h_dim; ++c) {
          const double re = uniform();
          const double im = uniform();
          M(r, c) = cplx(re, im);
        }
      }
      if (keep) F.set(w, M);
    }
  }
  return F;
}

}  // namespace ncfr
