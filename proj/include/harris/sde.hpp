#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "harris/chart.hpp"
#include "harris/path.hpp"
#include "harris/rng.hpp"
#include "harris/schedule.hpp"

namespace harris {

struct SdeParams {
  double dt_w = 1e-6;             // base Wiener-clock step
  double dt = 1e-4;               // flow-time grid step
  double max_wiener_time = 1e5;   // clock-stall guard
};

// Probability that a Brownian bridge between x1 >= 0 and x2 >= 0 over a
// Wiener-clock interval dt touches 0: exp(-2 x1 x2 / dt).
double bridge_zero_probability(double x1, double x2, double dt);

struct RegimeRun {
  Path path;  // x-coordinate, signed unless taken abs by the caller
  double wiener_elapsed = 0.0;               // Wiener time consumed up to flow horizon
  std::optional<double> first_absorption;    // first trap time during an off-F regime
};

// Difference process of a (rho,F)- or (1-,F)-joining on [0,T]: during F the
// diffusion runs with the on_scale clock (scale s(x)=x); outside F it is the
// coalescing L-diffusion with the off_scale clock, absorbed at 0 until the
// next F-interval. Closed F-intervals win endpoint ties. record_abs stores
// |x| on the flow grid.
RegimeRun simulate_regime_diffusion(const FastScale& on_scale, const FastScale& off_scale,
                                    const RegimeSchedule& F, double x0, double T,
                                    const SdeParams& p, CounterRng& rng,
                                    bool record_abs = false);

// Reflecting L-diffusion from 0: xi+(t) = |beta(A^{-1}(t))| with
// A(t) = (1/2) int (1-b(beta))^{-1} ds, resampled on the flow grid.
RegimeRun simulate_L_reflecting(const ClockScales& cs, double T, const SdeParams& p,
                                CounterRng& rng);

struct LhatRun {
  Path path;  // xi-coordinate, reflected (>= 0); empty if record_path=false
  std::vector<double> zero_times;  // flow times of detected zeros, increasing
  bool hit = false;
  double first_hit = std::numeric_limits<double>::infinity();
};

struct LhatOptions {
  double zero_res = 1e-4;        // dedupe resolution of the zero-time list
  bool stop_at_first_zero = false;
  bool record_path = true;
};

// Reflecting Lhat-diffusion in the xi coordinate from x0_xi >= 0:
// |eta + B(Ahat^{-1}(t))| with Ahat(u) = (1/2) int a(|eta+B(s)|) ds, so the
// generator is a(xi)^{-1} d^2/dxi^2. Zeros are detected on the Wiener clock
// by sign changes plus the Brownian-bridge rule.
LhatRun simulate_Lhat_reflecting(const ClockScales& cs, double x0_xi, double T,
                                 const SdeParams& p, CounterRng& rng,
                                 const LhatOptions& opt = {});

}  // namespace harris
