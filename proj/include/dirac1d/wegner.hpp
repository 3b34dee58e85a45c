#pragma once

// Probability that the finite-volume spectrum comes exponentially close to a
// fixed energy: P{ dist(E, sigma(D^{Lambda_L(0)})) <= exp(-tau * max(L,1)^theta) }.
// Lambda_L(0) = {|k| <= L/2}, i.e. 2*floor(L/2) + 1 sites around the origin.
// Small windows are enumerated exactly over all potential sign patterns;
// larger ones fall back to Monte Carlo over realizations.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eigen.hpp"
#include "operator.hpp"

namespace dirac1d {

inline LatticeWindow wegner_window(long L) {
  if (L < 0) throw std::invalid_argument("wegner_window: L must be >= 0");
  const long half = L / 2;
  return LatticeWindow(-half, half);
}

inline double wegner_threshold(long L, double theta, double tau) {
  return std::exp(-tau * std::pow(static_cast<double>(std::max(L, 1l)), theta));
}

struct WegnerResult {
  double probability = 0.0;
  double stderr_ = 0.0;  // binomial; 0 for exact enumeration
  long L = 0;
  double threshold = 0.0;
  bool exact = false;
  long samples = 0;
};

namespace detail {

inline double spectrum_distance(const OperatorMatrix& op, double E) {
  const EigenSystem sys = eigensolve(op);
  double best = std::abs(sys.values(0) - E);
  for (Eigen::Index j = 1; j < sys.values.size(); ++j)
    best = std::min(best, std::abs(sys.values(j) - E));
  return best;
}

}  // namespace detail

inline WegnerResult wegner_probability(double E, long L, double theta, double tau,
                                       const DiracParams& params, const PotentialSpec& spec,
                                       long n_realizations = 2000, std::uint64_t seed = 0) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("wegner: theta in (0,1) required");
  if (!(tau > 0.0)) throw std::invalid_argument("wegner: tau > 0 required");
  const LatticeWindow w = wegner_window(L);
  const long N = w.sites();

  WegnerResult out;
  out.L = L;
  out.threshold = wegner_threshold(L, theta, tau);

  if (spec.kind == PotentialKind::Bernoulli && N <= 16) {
    // exact enumeration over all 2^N sign patterns
    Realization r;
    r.window = w;
    r.values.assign(static_cast<std::size_t>(N), 0.0);
    double prob = 0.0;
    const std::uint64_t patterns = 1ull << N;
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      double weight = 1.0;
      for (long i = 0; i < N; ++i) {
        const bool up = (bits >> i) & 1u;
        r.values[static_cast<std::size_t>(i)] = up ? spec.amplitude : -spec.amplitude;
        weight *= up ? spec.p_plus : 1.0 - spec.p_plus;
      }
      if (weight == 0.0) continue;
      if (detail::spectrum_distance(build_dirac(params, r), E) <= out.threshold) prob += weight;
    }
    out.probability = prob;
    out.exact = true;
    out.samples = static_cast<long>(patterns);
    return out;
  }

  if (n_realizations < 1) throw std::invalid_argument("wegner: need realizations");
  long hits = 0;
  for (long k = 0; k < n_realizations; ++k) {
    const Realization r = sample_realization(spec, w, seed, static_cast<std::uint64_t>(k));
    if (detail::spectrum_distance(build_dirac(params, r), E) <= out.threshold) ++hits;
  }
  out.probability = static_cast<double>(hits) / static_cast<double>(n_realizations);
  out.samples = n_realizations;
  out.stderr_ = std::sqrt(out.probability * (1.0 - out.probability) /
                          static_cast<double>(n_realizations));
  return out;
}

}  // namespace dirac1d
