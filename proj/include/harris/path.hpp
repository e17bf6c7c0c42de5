#pragma once

#include <optional>
#include <vector>

namespace harris {

enum class Coordinate { X, Xi };

// Trajectory sampled on a uniform flow-time grid t_j = j*dt, j = 0..floor(T/dt).
struct Path {
  double dt = 1e-4;
  std::vector<double> values;
  std::optional<double> absorbed_at;  // first absorption time sigma_0, if any
  Coordinate coordinate = Coordinate::X;

  double horizon() const { return dt * double(values.size() - 1); }
  double at_index(std::size_t j) const { return values[j]; }
};

}  // namespace harris
