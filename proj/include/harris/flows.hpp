#pragma once

#include <cstdint>
#include <vector>

#include "harris/chart.hpp"
#include "harris/corrfn.hpp"
#include "harris/rng.hpp"
#include "harris/schedule.hpp"
#include "harris/sde.hpp"

namespace harris {

struct MergeEvent {
  double time;
  int absorbed;  // original particle index whose group was absorbed
  int into;      // surviving group representative (original index)
};

struct FlowSample {
  double dt;
  std::vector<double> points;                      // initial configuration
  std::vector<std::vector<double>> trajectories;   // [particle][step]
  std::vector<std::vector<int>> partition_trace;   // [step][particle] -> group rep
  std::vector<MergeEvent> merges;
};

// Euler scheme for the n-point motion of the Harris flow with correlation b:
// each step draws a Gaussian vector with covariance {b(x_i - x_j)} dt (Cholesky
// with a small diagonal jitter retry). Coalescence: order crossings merge, and
// near misses merge via the Brownian-bridge rule on the pair difference.
FlowSample simulate_npoint(const CorrelationFunction& b, std::vector<double> points,
                           double T, double dt, CounterRng& rng);

enum class JoiningKind { Rho, OneMinus, OnePlus };

struct JoiningSpec {
  JoiningKind kind = JoiningKind::OneMinus;
  double rho = 0.0;  // used when kind == Rho
  RegimeSchedule F;  // on-intervals of the joining
};

struct JoiningScales {
  FastScale on;   // clock scale of the difference during F
  FastScale off;  // coalescing L-diffusion clock off F
  bool identically_zero = false;  // (1+,F): difference vanishes
};

// Builds the pair of clock scales for the difference process of the joining.
JoiningScales make_joining_scales(const CorrelationFunction& b, const JoiningSpec& spec);

// Difference process xi(t) = X(t) - X'(t) of a (rho,F)- or (1-+,F)-joining of
// Harris flows, both copies started at the same point.
RegimeRun simulate_joining_difference(const CorrelationFunction& b, const JoiningSpec& spec,
                                      double T, const SdeParams& p, CounterRng& rng);

struct KsCheck {
  double ks = 0.0;
  std::size_t n = 0;
};

// Compares |X_t - X'_t| at t=1 between the direct two-point Euler scheme of a
// rho-joining and the one-dimensional difference diffusion.
KsCheck joint_vs_difference_check(const CorrelationFunction& b, double rho, std::size_t n,
                                  std::uint64_t seed, double dt_joint = 1e-3,
                                  const SdeParams& p = {});

}  // namespace harris
