#include "harris/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "harris/errors.hpp"
#include "harris/flows.hpp"
#include "harris/parallel.hpp"

namespace harris {

namespace {

// time integral over the flow grid (trapezoid) of fn applied to path values
template <typename Fn>
double path_integral(const Path& path, Fn&& fn) {
  double s = 0.0;
  for (std::size_t j = 0; j < path.values.size(); ++j) {
    double w = (j == 0 || j + 1 == path.values.size()) ? 0.5 : 1.0;
    s += w * fn(path.values[j]);
  }
  return s * path.dt;
}

}  // namespace

SpectralSample sample_spectral_set(const CorrelationFunction& b, const ScaleSpeedChart& chart,
                                   const ClockScales& cs, CounterRng& rng,
                                   const SpectralParams& p) {
  SpectralSample s;
  s.tau = rng.uniform();
  double x0 = b.sample_mu(rng.uniform());
  double xi0 = chart.identity() ? x0 : chart.xi_of_x(x0);
  LhatOptions opt;
  opt.zero_res = p.zero_res;
  opt.record_path = false;
  auto run = simulate_Lhat_reflecting(cs, xi0, s.tau, p.sde, rng, opt);
  s.times.reserve(run.zero_times.size());
  for (auto it = run.zero_times.rbegin(); it != run.zero_times.rend(); ++it)
    s.times.push_back(std::clamp(s.tau - *it, 0.0, s.tau));
  return s;
}

ThreeWayNonempty prob_nonempty_three_ways(const CorrelationFunction& b, std::size_t n,
                                          std::uint64_t seed, const SpectralParams& p) {
  if (n == 0) throw ConfigError("empty sample");
  auto chart = ScaleSpeedChart::build(b);
  auto cs = make_clock_scales(chart);

  std::vector<double> hit(n), tavg(n), iclk(n);
  for_each_replica(n, [&](std::size_t i) {
    {
      auto rng = seed_stream(seed, 3 * i);
      double tau = rng.uniform();
      double xi0 = b.sample_mu(rng.uniform());
      if (!chart.identity()) xi0 = chart.xi_of_x(xi0);
      LhatOptions opt;
      opt.zero_res = p.zero_res;
      opt.stop_at_first_zero = true;
      opt.record_path = false;
      hit[i] = simulate_Lhat_reflecting(cs, xi0, tau, p.sde, rng, opt).hit ? 1.0 : 0.0;
    }
    {
      auto rng = seed_stream(seed, 3 * i + 1);
      auto run = simulate_L_reflecting(cs, 1.0, p.sde, rng);
      tavg[i] = path_integral(run.path, [&](double x) { return 1.0 - b.eval(x); });
    }
    {
      auto rng = seed_stream(seed, 3 * i + 2);
      auto run = simulate_L_reflecting(cs, 1.0, p.sde, rng);
      iclk[i] = 0.5 * run.wiener_elapsed;
    }
  });
  return {Estimate::from_samples(hit, seed, "spectral_sampling"),
          Estimate::from_samples(tavg, seed, "time_average"),
          Estimate::from_samples(iclk, seed, "inverse_clock")};
}

double prob_nonempty_pde(const SemigroupSolver& L) {
  return 1.0 - expected_b_time_integral(L, RegimeSchedule::full());
}

AvoidResult prob_avoid(const CorrelationFunction& b, const RegimeSchedule& F,
                       const SemigroupSolver& L, std::size_t n, std::uint64_t seed,
                       const SpectralParams& p) {
  if (F.empty()) {
    auto one = Estimate::deterministic(1.0, "empty_F");
    return {one, one, 1.0};
  }
  if (n == 0) throw ConfigError("empty sample");
  auto chart = ScaleSpeedChart::build(b);
  auto cs = make_clock_scales(chart);
  JoiningSpec spec{JoiningKind::OneMinus, 0.0, F};
  auto scales = make_joining_scales(b, spec);

  std::vector<double> avoid(n), joint(n);
  for_each_replica(n, [&](std::size_t i) {
    {
      auto rng = seed_stream(seed, 2 * i);
      auto s = sample_spectral_set(b, chart, cs, rng, p);
      bool hit = std::any_of(s.times.begin(), s.times.end(),
                             [&](double t) { return F.contains(t); });
      avoid[i] = hit ? 0.0 : 1.0;
    }
    {
      auto rng = seed_stream(seed, 2 * i + 1);
      auto run = simulate_regime_diffusion(scales.on, scales.off, F, 0.0, 1.0, p.sde, rng);
      joint[i] = path_integral(run.path, [&](double x) { return b.eval(x); });
    }
  });
  return {Estimate::from_samples(avoid, seed, "spectral_sampling"),
          Estimate::from_samples(joint, seed, "joining_difference"),
          expected_b_time_integral(L, F)};
}

Estimate generating_function(const CorrelationFunction& b, const RegimeSchedule& F,
                             double rho, std::size_t n, std::uint64_t seed,
                             const SpectralParams& p) {
  if (n == 0) throw ConfigError("empty sample");
  JoiningSpec spec{JoiningKind::Rho, rho, F};
  auto scales = make_joining_scales(b, spec);
  std::vector<double> xs(n);
  for_each_replica(n, [&](std::size_t i) {
    auto rng = seed_stream(seed, i);
    auto run = simulate_regime_diffusion(scales.on, scales.off, F, 0.0, 1.0, p.sde, rng);
    double xi1 = run.path.values.back();
    xs[i] = 1.0 - 0.5 * xi1 * xi1;
  });
  return Estimate::from_samples(xs, seed, "joining_difference");
}

MassFit spectral_mass_fit(const CorrelationFunction& b, const RegimeSchedule& F,
                          std::size_t n, std::uint64_t seed, std::size_t max_order,
                          const SpectralParams& p) {
  MassFit fit;
  for (std::size_t k = 0; k <= max_order; ++k)
    fit.rho.push_back(static_cast<double>(k) / (static_cast<double>(max_order) + 1.0));
  const auto np = fit.rho.size();
  for (std::size_t i = 0; i < np; ++i) {
    auto est = generating_function(b, F, fit.rho[i], n, seed + i, p);
    fit.g.push_back(est.value);
    fit.g_stderr.push_back(est.stderr_);
  }
  const auto pcols = max_order + 1;
  std::vector<double> A(np * pcols);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t k = 0; k < pcols; ++k)
      A[i * pcols + k] = k == 0 ? 1.0 : std::pow(fit.rho[i], static_cast<double>(k));
  fit.masses = nnls_capped(A, fit.g, np, pcols);
  double tot = 0.0;
  for (double m : fit.masses) tot += m;
  fit.tail = 1.0 - tot;
  fit.condition = normal_matrix_condition(A, np, pcols);
  return fit;
}

}  // namespace harris
