#pragma once

#include <cstdint>
#include <vector>

#include "harris/corrfn.hpp"
#include "harris/spectra.hpp"

namespace harris {

struct BoxCountCurve {
  std::vector<int> levels;         // dyadic level k: box size 2^-k
  std::vector<double> log_count;   // log of pooled box counts
  double slope = 0.0;              // box-counting dimension estimate
  double slope_stderr = 0.0;
};

struct DimensionResult {
  BoxCountCurve curve;
  std::size_t n_samples = 0;    // spectral-set samples drawn
  std::size_t n_nonempty = 0;   // samples contributing boxes
  double predicted = 0.0;       // (1 - alpha) / (2 - alpha)
};

double predicted_dimension(double alpha);

// Box-counting dimension of the spectral set: pools occupied dyadic boxes of
// S~ samples conditioned on being nonempty, then fits log N(2^-k) against
// k log 2 over levels [k_min, k_max].
DimensionResult box_dimension(const CorrelationFunction& b, std::size_t n_nonempty,
                              std::uint64_t seed, const SpectralParams& p, int k_min = 6,
                              int k_max = 16);

struct ResolventExponent {
  std::vector<double> lambda;
  std::vector<double> psi;      // Psi(lambda) = 1 / g_lambda(0,0)
  double exponent = 0.0;        // slope of log Psi vs log lambda
  double exponent_stderr = 0.0;
  double predicted = 0.0;       // (1 - alpha) / (2 - alpha)
};

// Spectral exponent via the resolvent of the reflecting Lhat diffusion on a
// log-spaced lambda window.
ResolventExponent exponent_via_resolvent(const CorrelationFunction& b, double lambda_lo = 10.0,
                                         double lambda_hi = 1e4, std::size_t n_points = 9);

}  // namespace harris
