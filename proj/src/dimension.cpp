#include "harris/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "harris/errors.hpp"
#include "harris/math.hpp"
#include "harris/parallel.hpp"

namespace harris {

double predicted_dimension(double alpha) { return (1.0 - alpha) / (2.0 - alpha); }

DimensionResult box_dimension(const CorrelationFunction& b, std::size_t n_nonempty,
                              std::uint64_t seed, const SpectralParams& p, int k_min,
                              int k_max) {
  if (n_nonempty == 0) throw ConfigError("empty sample");
  if (k_min >= k_max) throw ConfigError("box_dimension: need k_min < k_max");
  auto chart = ScaleSpeedChart::build(b);
  auto cs = make_clock_scales(chart);

  const int nlev = k_max - k_min + 1;
  std::vector<std::uint64_t> pooled(static_cast<std::size_t>(nlev), 0);
  DimensionResult res;
  res.predicted = predicted_dimension(b.origin_exponent());

  // batches of replicas until enough nonempty samples accumulate; replica i
  // always uses stream i, so the result is independent of the batch layout
  std::size_t next_stream = 0;
  const std::size_t budget = 400 * n_nonempty + 10000;
  while (res.n_nonempty < n_nonempty) {
    std::size_t batch = std::max<std::size_t>(64, n_nonempty - res.n_nonempty);
    std::vector<std::vector<double>> times(batch);
    for_each_replica(batch, [&](std::size_t j) {
      auto rng = seed_stream(seed, next_stream + j);
      times[j] = sample_spectral_set(b, chart, cs, rng, p).times;
    });
    for (auto& ts : times) {
      if (ts.empty()) continue;
      ++res.n_nonempty;
      std::sort(ts.begin(), ts.end());
      for (int k = k_min; k <= k_max; ++k) {
        double scale = std::ldexp(1.0, k);  // 2^k boxes per unit
        std::uint64_t cnt = 0, last = ~0ull;
        for (double t : ts) {
          auto cell = static_cast<std::uint64_t>(t * scale);
          if (cell != last) {
            ++cnt;
            last = cell;
          }
        }
        pooled[static_cast<std::size_t>(k - k_min)] += cnt;
      }
      if (res.n_nonempty == n_nonempty) break;
    }
    next_stream += batch;
    res.n_samples = next_stream;
    if (next_stream > budget)
      throw NumericalError("box_dimension: nonempty-sample budget exhausted");
  }

  std::vector<double> xs, ys;
  for (int k = k_min; k <= k_max; ++k) {
    auto c = pooled[static_cast<std::size_t>(k - k_min)];
    if (c == 0) continue;
    res.curve.levels.push_back(k);
    xs.push_back(static_cast<double>(k) * std::log(2.0));
    ys.push_back(std::log(static_cast<double>(c)));
    res.curve.log_count.push_back(ys.back());
  }
  if (xs.size() < 3) throw NumericalError("box_dimension: too few occupied scales");
  auto fitres = linear_fit(xs, ys);
  res.curve.slope = fitres.slope;
  res.curve.slope_stderr = fitres.slope_stderr;
  return res;
}

ResolventExponent exponent_via_resolvent(const CorrelationFunction& b, double lambda_lo,
                                         double lambda_hi, std::size_t n_points) {
  if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
    throw ConfigError("resolvent exponent: need 0 < lambda_lo < lambda_hi");
  if (n_points < 2) throw ConfigError("resolvent exponent: need at least two points");
  auto chart = ScaleSpeedChart::build(b);
  ResolventExponent out;
  out.predicted = predicted_dimension(b.origin_exponent());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n_points; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
    double lam = lambda_lo * std::pow(lambda_hi / lambda_lo, t);
    double g = resolvent_at_origin(chart, lam);
    out.lambda.push_back(lam);
    out.psi.push_back(1.0 / g);
    lx.push_back(std::log(lam));
    ly.push_back(std::log(1.0 / g));
  }
  auto fitres = linear_fit(lx, ly);
  out.exponent = fitres.slope;
  out.exponent_stderr = fitres.slope_stderr;
  return out;
}

}  // namespace harris
