#include "harris/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "harris/errors.hpp"

namespace harris {


double bridge_zero_probability(double x1, double x2, double dt) {
  double a = std::fabs(x1), b = std::fabs(x2);
  if (a == 0.0 || b == 0.0) return 1.0;
  if (dt <= 0.0) return 0.0;
  return std::exp(-2.0 * a * b / dt);
}

namespace {

// Writes linearly interpolated values onto the flow grid for the clock
// interval [t1, t2] with endpoint states x1, x2.
struct GridRecorder {
  Path* path;
  bool take_abs;
  std::size_t next = 1;  // grid index to fill next (index 0 is the start state)

  void cover(double t1, double t2, double x1, double x2) {
    const double dt = path->dt;
    const double len = t2 - t1;
    while (true) {
      double tg = static_cast<double>(next) * dt;
      if (tg > t2 + 1e-12 * (1.0 + t2)) break;
      double v = (len > 0.0) ? x1 + (x2 - x1) * ((tg - t1) / len) : x2;
      path->values.push_back(take_abs ? std::fabs(v) : v);
      ++next;
    }
  }

  void finish(double T, double x_last) {
    auto want = static_cast<std::size_t>(std::floor(T / path->dt + 0.5)) + 1;
    while (path->values.size() < want)
      path->values.push_back(take_abs ? std::fabs(x_last) : x_last);
  }
};

// Wiener step size with near-zero refinement for singular clocks: the clock
// secant of (1-b)^{-1} through 0 is only first-order accurate, so steps are
// shrunk until the path resolves the singular layer.
inline double pick_step(const FastScale& scale, double x, double dt_w, double sqrt_dt_w) {
  if (!scale.singular_at_zero()) return dt_w;
  double band = 8.0 * sqrt_dt_w;
  double ax = std::fabs(x);
  if (ax >= band) return dt_w;
  double r = ax / band;
  return std::max(dt_w / 64.0, dt_w * r * r);
}

struct DiffuseResult {
  bool absorbed = false;
  double absorbed_at = 0.0;
};

// Runs the scale-coordinate Brownian state `x` from clock time A to t_end.
// Clock increments use the exact secant of the signed scale primitive, which
// integrates the rate along the linearly interpolated Wiener path. When
// `absorb` is set, the first zero (crossing or bridge touch) traps the state.
DiffuseResult diffuse(const FastScale& scale, double& x, double& A, double& s,
                      double t_end, const SdeParams& p, CounterRng& rng,
                      GridRecorder& rec, bool absorb,
                      std::vector<double>* zero_times, double zero_res,
                      bool stop_at_first_zero, bool* stopped) {
  const double sqrt_dt_w = std::sqrt(p.dt_w);
  double last_zero_cell = -1.0;
  if (zero_times && !zero_times->empty())
    last_zero_cell = std::floor(zero_times->back() / zero_res);
  DiffuseResult res;
  double xi1 = scale.eval_signed(x);  // carried across steps: one eval per step
  while (A < t_end - 1e-15 * (1.0 + t_end)) {
    if (s > p.max_wiener_time)
      throw NumericalError("clock stalled: Wiener-time budget exhausted before flow horizon");
    double h = pick_step(scale, x, p.dt_w, sqrt_dt_w);
    double dx = std::sqrt(h) * rng.normal();
    double x2 = x + dx;
    double xi2 = scale.eval_signed(x2);
    double dA = std::fabs(dx) > 1e-12 ? 0.5 * h * (xi2 - xi1) / dx
                                      : 0.5 * h * scale.secant(x, x2);
    if (!(dA > 0.0)) dA = 0.5 * h * 1e-12;
    // Clamp the step at the regime boundary; both the clock and the Wiener
    // position are interpolated linearly within the step.
    if (A + dA > t_end) {
      double theta = (t_end - A) / dA;
      h *= theta;
      x2 = x + dx * theta;
      xi2 = scale.eval_signed(x2);
      dA = t_end - A;
    }
    bool zero = false;
    double frac = 0.5;  // clock fraction of the step at the zero
    if (absorb || zero_times) {
      bool crossed = (x > 0.0) != (x2 > 0.0) || x2 == 0.0 || x == 0.0;
      if (crossed) {
        zero = true;
        double denom = std::fabs(x) + std::fabs(x2);
        frac = denom > 0.0 ? std::fabs(x) / denom : 0.5;
      } else if (rng.uniform() < bridge_zero_probability(x, x2, h)) {
        zero = true;
      }
    }
    double sigma = A + dA * frac;
    if (zero && absorb) {
      rec.cover(A, sigma, x, 0.0);
      rec.cover(sigma, t_end, 0.0, 0.0);
      s += h * frac;
      x = 0.0;
      A = t_end;
      res.absorbed = true;
      res.absorbed_at = sigma;
      return res;
    }
    if (zero && zero_times) {
      double cell = std::floor(sigma / zero_res);
      if (cell != last_zero_cell) {
        zero_times->push_back(sigma);
        last_zero_cell = cell;
      }
      if (stop_at_first_zero) {
        rec.cover(A, sigma, x, 0.0);
        s += h * frac;
        x = 0.0;
        A = sigma;
        *stopped = true;
        return res;
      }
    }
    rec.cover(A, A + dA, x, x2);
    s += h;
    x = x2;
    xi1 = xi2;
    A += dA;
  }
  A = t_end;
  return res;
}

}  // namespace

RegimeRun simulate_regime_diffusion(const FastScale& on_scale, const FastScale& off_scale,
                                    const RegimeSchedule& F, double x0, double T,
                                    const SdeParams& p, CounterRng& rng, bool record_abs) {
  RegimeRun run;
  run.path.dt = p.dt;
  run.path.coordinate = Coordinate::X;
  run.path.values.reserve(static_cast<std::size_t>(T / p.dt) + 2);
  run.path.values.push_back(record_abs ? std::fabs(x0) : x0);
  GridRecorder rec{&run.path, record_abs};

  double x = x0, A = 0.0, s = 0.0;
  for (const auto& seg : F.segments(T)) {
    if (seg.end <= seg.start) continue;
    if (seg.on) {
      diffuse(on_scale, x, A, s, seg.end, p, rng, rec, false, nullptr, 0.0, false, nullptr);
    } else if (x == 0.0) {
      // already trapped; 0 is absorbing off F
      if (!run.first_absorption) run.first_absorption = seg.start;
      rec.cover(A, seg.end, 0.0, 0.0);
      A = seg.end;
    } else {
      auto r = diffuse(off_scale, x, A, s, seg.end, p, rng, rec, true, nullptr, 0.0, false,
                       nullptr);
      if (r.absorbed && !run.first_absorption) run.first_absorption = r.absorbed_at;
    }
  }
  rec.finish(T, x);
  run.wiener_elapsed = s;
  if (run.first_absorption) run.path.absorbed_at = run.first_absorption;
  return run;
}

RegimeRun simulate_L_reflecting(const ClockScales& cs, double T, const SdeParams& p,
                                CounterRng& rng) {
  return simulate_regime_diffusion(cs.to_xi, cs.to_xi, RegimeSchedule::full(), 0.0, T, p,
                                   rng, /*record_abs=*/true);
}

LhatRun simulate_Lhat_reflecting(const ClockScales& cs, double x0_xi, double T,
                                 const SdeParams& p, CounterRng& rng,
                                 const LhatOptions& opt) {
  LhatRun run;
  run.path.dt = p.dt;
  run.path.coordinate = Coordinate::Xi;
  Path scratch;  // discarded when record_path is off
  scratch.dt = p.dt;
  Path* target = opt.record_path ? &run.path : &scratch;
  target->values.push_back(std::fabs(x0_xi));
  GridRecorder rec{target, /*take_abs=*/true};

  double x = x0_xi, A = 0.0, s = 0.0;
  bool stopped = false;
  diffuse(cs.to_x, x, A, s, T, p, rng, rec, false, &run.zero_times, opt.zero_res,
          opt.stop_at_first_zero, &stopped);
  if (!stopped) rec.finish(T, x);
  if (!run.zero_times.empty()) {
    run.hit = true;
    run.first_hit = run.zero_times.front();
  }
  return run;
}

}  // namespace harris
