#pragma once

#include <cstdint>
#include <vector>

#include "harris/chart.hpp"
#include "harris/corrfn.hpp"
#include "harris/estimate.hpp"
#include "harris/rng.hpp"
#include "harris/schedule.hpp"
#include "harris/sde.hpp"
#include "harris/semigroup.hpp"

namespace harris {

struct SpectralParams {
  SdeParams sde;
  double zero_res = 1e-4;  // dedupe resolution of recorded zero times
};

struct SpectralSample {
  double tau = 0.0;
  std::vector<double> times;  // elements of the spectral-set sample in [0, tau]
  bool nonempty() const { return !times.empty(); }
};

// One sample of the random closed set S~ = {t in [0,tau] : xihat+(tau-t) = 0}
// with tau ~ U(0,1) and xihat+(0) ~ mu(dx) = -db(x) mapped to the xi chart.
SpectralSample sample_spectral_set(const CorrelationFunction& b, const ScaleSpeedChart& chart,
                                   const ClockScales& cs, CounterRng& rng,
                                   const SpectralParams& p = {});

struct ThreeWayNonempty {
  Estimate direct;         // indicator that the Lhat path hits 0 before tau
  Estimate time_average;   // E int_0^1 (1 - b(xi+(t))) dt
  Estimate inverse_clock;  // (1/2) E A^{-1}(1)
};

ThreeWayNonempty prob_nonempty_three_ways(const CorrelationFunction& b, std::size_t n,
                                          std::uint64_t seed, const SpectralParams& p = {});

// Deterministic counterpart 1 - int_0^1 E[b(xi(t))] dt via the law evolution.
double prob_nonempty_pde(const SemigroupSolver& L);

struct AvoidResult {
  Estimate sampled;  // direct: P(S~ cap F = empty) over spectral-set samples
  Estimate joining;  // Monte Carlo of int_0^1 E[b(xi_F(t))] dt
  double pde;        // law-evolution value of the same integral
};

// P(S^acc cap F = empty) three ways; F = empty set gives probability 1.
AvoidResult prob_avoid(const CorrelationFunction& b, const RegimeSchedule& F,
                       const SemigroupSolver& L, std::size_t n, std::uint64_t seed,
                       const SpectralParams& p = {});

// G_F(rho) = E[rho^{|S cap F|}] = 1 - (1/2) E[xi(1)^2] over the (rho,F)-joining
// difference.
Estimate generating_function(const CorrelationFunction& b, const RegimeSchedule& F,
                             double rho, std::size_t n, std::uint64_t seed,
                             const SpectralParams& p = {});

struct MassFit {
  std::vector<double> rho;       // evaluation points
  std::vector<double> g;         // estimated G_F(rho)
  std::vector<double> g_stderr;
  std::vector<double> masses;    // fitted point masses of |S cap F| at 0..K
  double tail = 0.0;             // 1 - sum(masses): mass escaping to infinity
  double condition = 0.0;        // condition number of the normal matrix
};

// Fits G_F(rho) ~ sum_k m_k rho^k with m_k >= 0, sum m_k <= 1 (capped NNLS).
MassFit spectral_mass_fit(const CorrelationFunction& b, const RegimeSchedule& F,
                          std::size_t n, std::uint64_t seed, std::size_t max_order = 6,
                          const SpectralParams& p = {});

}  // namespace harris
