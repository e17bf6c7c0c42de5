#pragma once

#include <string>
#include <utility>
#include <vector>

#include "harris/errors.hpp"

namespace harris {

// Elementary set F in [0,1]: a finite union of disjoint closed intervals,
// kept sorted. Endpoint ties resolve in favor of F (closed intervals).
class RegimeSchedule {
public:
  RegimeSchedule() = default;  // empty set

  explicit RegimeSchedule(std::vector<std::pair<double, double>> intervals)
      : intervals_(std::move(intervals)) {
    double prev = -1.0;
    for (const auto& [a, b] : intervals_) {
      if (!(a >= 0.0 && b <= 1.0)) throw ConfigError("schedule: intervals must lie in [0,1]");
      if (!(a < b)) throw ConfigError("schedule: interval endpoints must increase");
      if (!(a > prev)) throw ConfigError("schedule: intervals must be disjoint and sorted");
      prev = b;
    }
  }

  static RegimeSchedule full() { return RegimeSchedule({{0.0, 1.0}}); }

  bool empty() const { return intervals_.empty(); }
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

  bool contains(double t) const {
    for (const auto& [a, b] : intervals_)
      if (t >= a && t <= b) return true;
    return false;
  }

  double measure() const {
    double m = 0.0;
    for (const auto& [a, b] : intervals_) m += b - a;
    return m;
  }

  // Alternating timeline of [0,T]: (start, end, inside_F) segments.
  struct Segment {
    double start, end;
    bool on;
  };
  std::vector<Segment> segments(double T = 1.0) const {
    std::vector<Segment> out;
    double t = 0.0;
    for (const auto& [a, b] : intervals_) {
      if (a >= T) break;
      if (a > t) out.push_back({t, a, false});
      out.push_back({a, std::min(b, T), true});
      t = std::min(b, T);
    }
    if (t < T) out.push_back({t, T, false});
    return out;
  }

  std::string describe() const {
    std::string s;
    for (const auto& [a, b] : intervals_) {
      if (!s.empty()) s += ";";
      s += std::to_string(a) + "," + std::to_string(b);
    }
    return s.empty() ? "(empty)" : s;
  }

private:
  std::vector<std::pair<double, double>> intervals_;
};

}  // namespace harris
