#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace harris {

// A scalar result with its provenance. stderr is the standard error of the
// mean for Monte Carlo methods and 0 for deterministic ones.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_replicas = 0;
  std::uint64_t master_seed = 0;
  std::string method;

  static Estimate from_samples(const std::vector<double>& xs, std::uint64_t seed,
                               std::string method) {
    Estimate e;
    e.n_replicas = xs.size();
    e.master_seed = seed;
    e.method = std::move(method);
    if (xs.empty()) return e;
    double s = 0.0;
    for (double x : xs) s += x;
    e.value = s / double(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - e.value) * (x - e.value);
    if (xs.size() > 1)
      e.stderr_ = std::sqrt(v / double(xs.size() - 1) / double(xs.size()));
    return e;
  }

  static Estimate deterministic(double value, std::string method) {
    Estimate e;
    e.value = value;
    e.method = std::move(method);
    return e;
  }
};

}  // namespace harris
