#include "harris/flows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "harris/errors.hpp"
#include "harris/math.hpp"
#include "harris/parallel.hpp"

namespace harris {

namespace {

// In-place lower Cholesky; returns false on a non-positive pivot.
bool cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    double l = std::sqrt(d);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / l;
    }
  }
  return true;
}

}  // namespace

FlowSample simulate_npoint(const CorrelationFunction& b, std::vector<double> points,
                           double T, double dt, CounterRng& rng) {
  if (points.empty()) throw ConfigError("simulate_npoint: empty configuration");
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("simulate_npoint: T and dt must be positive");
  const auto n = points.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return points[i] < points[j]; });
  for (std::size_t k = 1; k < n; ++k)
    if (points[order[k]] == points[order[k - 1]])
      throw ConfigError("simulate_npoint: points must be distinct");

  FlowSample out;
  out.dt = dt;
  out.points = points;
  out.trajectories.assign(n, {});
  const auto nsteps = static_cast<std::size_t>(std::llround(T / dt));

  // position-sorted groups of coalesced particles
  std::vector<double> pos;
  std::vector<int> lead;                   // representative: original index
  std::vector<std::vector<int>> members;   // original indices per group
  std::vector<int> rep(n);                 // particle -> group slot
  for (std::size_t k = 0; k < n; ++k) {
    pos.push_back(points[order[k]]);
    lead.push_back(order[k]);
    members.push_back({order[k]});
    rep[order[k]] = static_cast<int>(k);
  }

  const bool indep = b.kind() == CorrKind::Indicator;
  std::vector<double> cov, z, g;
  const double sdt = std::sqrt(dt);

  for (std::size_t step = 0; step < nsteps; ++step) {
    const auto m = pos.size();
    z.assign(m, 0.0);
    if (indep || m == 1) {
      for (auto& v : z) v = rng.normal();
    } else {
      cov.assign(m * m, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j)
          cov[i * m + j] = cov[j * m + i] = b.eval(pos[i] - pos[j]);
      if (!cholesky(cov, m)) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j <= i; ++j)
            cov[i * m + j] = cov[j * m + i] = b.eval(pos[i] - pos[j]) + (i == j ? 1e-12 : 0.0);
        if (!cholesky(cov, m))
          throw NumericalError("correlation matrix not positive-definite at configuration");
      }
      g.assign(m, 0.0);
      for (auto& v : g) v = rng.normal();
      for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += cov[i * m + j] * g[j];
        z[i] = acc;
      }
    }
    std::vector<double> npos(m);
    for (std::size_t i = 0; i < m; ++i) npos[i] = pos[i] + sdt * z[i];

    // coalescence sweep over adjacent groups, repeated until stable
    bool merged = true;
    while (merged && npos.size() > 1) {
      merged = false;
      for (std::size_t gidx = 0; gidx + 1 < npos.size(); ++gidx) {
        double d1 = pos[gidx + 1] - pos[gidx];
        double d2 = npos[gidx + 1] - npos[gidx];
        bool hit = d2 <= 0.0;
        if (!hit && d1 > 0.0 && d2 > 0.0) {
          if (indep) {
            // exact Brownian-bridge touch rule for the independent pair
            hit = rng.uniform() < std::exp(-d1 * d2 / dt);
          } else if (d2 < 1e-5) {
            double v = 1.0 - b.eval(d1);
            double pbr = v > 1e-300 ? std::exp(-d1 * d2 / (v * dt)) : 1.0;
            hit = rng.uniform() < pbr;
          }
        }
        if (hit) {
          out.merges.push_back({(static_cast<double>(step) + 1.0) * dt,
                                lead[gidx + 1], lead[gidx]});
          npos[gidx] = 0.5 * (npos[gidx] + npos[gidx + 1]);
          for (int p2 : members[gidx + 1]) {
            rep[p2] = static_cast<int>(gidx);
            members[gidx].push_back(p2);
          }
          npos.erase(npos.begin() + gidx + 1);
          pos.erase(pos.begin() + gidx + 1);
          lead.erase(lead.begin() + gidx + 1);
          members.erase(members.begin() + gidx + 1);
          for (auto& r : rep)
            if (r > static_cast<int>(gidx)) --r;
          merged = true;
          break;
        }
      }
    }
    pos = npos;
    for (std::size_t i = 0; i < n; ++i) out.trajectories[i].push_back(pos[rep[i]]);
    std::vector<int> trace(n);
    for (std::size_t i = 0; i < n; ++i) trace[i] = lead[rep[i]];
    out.partition_trace.push_back(std::move(trace));
  }
  return out;
}

JoiningScales make_joining_scales(const CorrelationFunction& b, const JoiningSpec& spec) {
  JoiningScales s;
  if (spec.kind == JoiningKind::OnePlus) {
    s.identically_zero = true;
    return s;
  }
  auto chartL = ScaleSpeedChart::build(b);
  auto L = make_clock_scales(chartL);
  s.off = L.to_xi;
  if (spec.kind == JoiningKind::OneMinus) {
    s.on = L.to_xi;
  } else {
    if (spec.rho < 0.0 || spec.rho >= 1.0)
      throw ConfigError("joining: rho must lie in [0,1)");
    auto chartR = ScaleSpeedChart::build_rho(b, spec.rho);
    s.on = make_clock_scales(chartR).to_xi;
  }
  return s;
}

RegimeRun simulate_joining_difference(const CorrelationFunction& b, const JoiningSpec& spec,
                                      double T, const SdeParams& p, CounterRng& rng) {
  auto scales = make_joining_scales(b, spec);
  if (scales.identically_zero) {
    RegimeRun run;
    run.path.dt = p.dt;
    run.path.coordinate = Coordinate::X;
    run.path.values.assign(static_cast<std::size_t>(std::floor(T / p.dt + 0.5)) + 1, 0.0);
    return run;
  }
  return simulate_regime_diffusion(scales.on, scales.off, spec.F, 0.0, T, p, rng);
}

KsCheck joint_vs_difference_check(const CorrelationFunction& b, double rho, std::size_t n,
                                  std::uint64_t seed, double dt_joint, const SdeParams& p) {
  if (n == 0) throw ConfigError("empty sample");
  JoiningSpec spec{JoiningKind::Rho, rho, RegimeSchedule::full()};
  auto scales = make_joining_scales(b, spec);
  std::vector<double> joint(n), diff(n);
  const auto nsteps = static_cast<std::size_t>(std::llround(1.0 / dt_joint));
  const double sdt = std::sqrt(dt_joint);
  for_each_replica(n, [&](std::size_t i) {
    auto rj = seed_stream(seed, 2 * i);
    double x = 0.0, y = 0.0;
    for (std::size_t k = 0; k < nsteps; ++k) {
      double r = rho * b.eval(x - y);
      double z1 = rj.normal(), z2 = rj.normal();
      x += sdt * z1;
      y += sdt * (r * z1 + std::sqrt(std::max(0.0, 1.0 - r * r)) * z2);
    }
    joint[i] = std::fabs(x - y);
    auto rd = seed_stream(seed, 2 * i + 1);
    auto run = simulate_regime_diffusion(scales.on, scales.off, spec.F, 0.0, 1.0, p, rd);
    diff[i] = std::fabs(run.path.values.back());
  });
  return {ks_distance(joint, diff), n};
}

}  // namespace harris
