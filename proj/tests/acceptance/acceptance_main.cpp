// Acceptance harness: runs the nine acceptance criteria end to end and prints
// one PASS/FAIL line per criterion. Optional argv: a subset of criterion
// numbers to run (default all). Exit status 0 iff every selected criterion
// passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "harris/dimension.hpp"
#include "harris/flows.hpp"
#include "harris/math.hpp"
#include "harris/parallel.hpp"
#include "harris/sde.hpp"
#include "harris/semigroup.hpp"
#include "harris/spectra.hpp"

using namespace harris;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  FAILED: " << what << "\n";
    }
  }
  void note(const std::string& what) { detail << "  " << what << "\n"; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double q_tail(double z) { return 1.0 - norm_cdf(z); }

// ---------------------------------------------------------------------------
// 1. Classification (deterministic, < 1 s)

void criterion1(Check& c) {
  c.require(CorrelationFunction::exp_power(1.0, 1.0).classify() == NoiseClass::Classical,
            "ExpPower alpha=1 should be Classical");
  for (double a : {0.25, 0.5, 0.75}) {
    c.require(CorrelationFunction::exp_power(1.0, a).classify() == NoiseClass::Nonclassical,
              "ExpPower alpha=" + fmt(a) + " should be Nonclassical");
  }
  c.require(CorrelationFunction::indicator().classify() == NoiseClass::Nonclassical,
            "Indicator should be Nonclassical");
}

// ---------------------------------------------------------------------------
// 2. Single-step duality: Gaussian closed form (Indicator) and grid
//    convergence (ExpPower alpha = 0.5)

struct Triple {
  double t, x, y;
};

const std::vector<Triple> kTriples = {
    {0.1, 0.2, 0.5},  {0.1, 0.5, 0.3},  {0.1, 0.4, 0.4},
    {0.25, 0.2, 0.5}, {0.25, 0.5, 0.3}, {0.25, 0.4, 0.4},
    {0.5, 0.2, 0.5},  {0.5, 0.5, 0.3},  {0.5, 0.4, 0.4},
};

void criterion2(Check& c) {
  // Arratia: every semigroup in the duality has a reflected/killed Gaussian
  // closed form (the difference of coalescing paths is Brownian, var 2t).
  {
    auto chart = ScaleSpeedChart::build(CorrelationFunction::indicator());
    SemigroupSolver L(make_L_grid(chart)), Lh(make_Lhat_grid(chart));
    double worst = 0.0;
    for (const auto& tr : kTriples) {
      const double s = std::sqrt(2.0 * tr.t);
      auto up = L.apply(Boundary::Plus, L.grid().indicator_leq(tr.y), tr.t);
      auto um = L.apply(Boundary::Minus, L.grid().indicator_leq(tr.y), tr.t);
      auto hz = Lh.apply(Boundary::Zero, Lh.grid().indicator_geq(tr.x), tr.t);
      auto hp = Lh.apply(Boundary::Plus, Lh.grid().indicator_geq(tr.x), tr.t);
      double ref_p = norm_cdf((tr.y - tr.x) / s) - norm_cdf((-tr.y - tr.x) / s);
      double ref_0 = (norm_cdf((tr.y - tr.x) / s) - norm_cdf(-tr.x / s)) -
                     (norm_cdf((tr.y + tr.x) / s) - norm_cdf(tr.x / s));
      double ref_m = ref_0 + 2.0 * q_tail(tr.x / s);
      double ref_hz = q_tail((tr.x - tr.y) / s) - q_tail((tr.x + tr.y) / s);
      double ref_hp = q_tail((tr.x - tr.y) / s) + q_tail((tr.x + tr.y) / s);
      double r = std::fabs(L.grid().eval(up, tr.x) - ref_p);
      r = std::max(r, std::fabs(L.grid().eval(um, tr.x) - ref_m));
      r = std::max(r, std::fabs(Lh.grid().eval(hz, tr.y) - ref_hz));
      r = std::max(r, std::fabs(Lh.grid().eval(hp, tr.y) - ref_hp));
      worst = std::max(worst, r);
    }
    c.note("indicator worst closed-form residual " + fmt(worst));
    c.require(worst <= 1e-3, "indicator duality residual " + fmt(worst) + " > 1e-3");
  }

  // ExpPower: left/right duality residual on the default grid, then once more
  // on a grid with all resolutions halved; first-order scheme, so the
  // residual should shrink by roughly the refinement factor.
  {
    auto b = CorrelationFunction::exp_power(1.0, 0.5);
    auto chart = ScaleSpeedChart::build(b);
    auto residual = [&](double h0, double hmax, double dts) {
      SemigroupSolver L(make_L_grid(chart, h0, 1.04, hmax), dts);
      SemigroupSolver Lh(make_Lhat_grid(chart, h0, 1.04, hmax), dts);
      double worst = 0.0;
      for (const auto& tr : kTriples) {
        auto [r1, r2] = check_duality_single(L, Lh, chart, tr.t, tr.x, tr.y);
        worst = std::max(worst, std::max(r1, r2));
      }
      return worst;
    };
    double coarse = residual(2e-4, 1e-2, 1e-4);
    double fine = residual(1e-4, 5e-3, 5e-5);
    c.note("exp_power residuals: coarse " + fmt(coarse) + ", refined " + fmt(fine));
    c.require(coarse <= 1e-2, "exp_power duality residual " + fmt(coarse) + " > 1e-2");
    c.require(fine <= 0.75 * coarse,
              "residual did not shrink first-order under refinement (ratio " +
                  fmt(fine / coarse) + ")");
  }
}

// ---------------------------------------------------------------------------
// 3. Alternating duality products, n = 1 and n = 2, with a Monte Carlo
//    regime-switching cross-check of the left product.

void criterion3(Check& c) {
  auto b = CorrelationFunction::exp_power(1.0, 0.5);
  auto chart = ScaleSpeedChart::build(b);
  auto cs = make_clock_scales(chart);
  const double x = 0.2, y = 0.5;
  const std::vector<std::vector<double>> timelines = {{0.0, 0.4}, {0.0, 0.3, 0.6}};

  SdeParams sde;
  sde.dt_w = 4e-5;
  const std::size_t n = 100000;

  for (const auto& times : timelines) {
    auto run_pde = [&](double h0, double hmax, double dts) {
      SemigroupSolver L(make_L_grid(chart, h0, 1.04, hmax), dts);
      SemigroupSolver Lh(make_Lhat_grid(chart, h0, 1.04, hmax), dts);
      return check_duality_alternating(L, Lh, chart, times, x, y);
    };
    auto [lc, rc] = run_pde(2e-4, 1e-2, 1e-4);
    auto [lf, rf] = run_pde(1e-4, 5e-3, 5e-5);
    const std::size_t m = times.size() - 1;
    double res_c = std::fabs(lc - rc), res_f = std::fabs(lf - rf);
    c.note("n=" + std::to_string(m) + ": left " + fmt(lc) + ", right " + fmt(rc) +
           ", residual " + fmt(res_c) + " -> refined " + fmt(res_f));
    c.require(res_c <= 1e-2, "alternating residual " + fmt(res_c) + " > 1e-2");
    c.require(res_f <= std::max(0.8 * res_c, 5e-7),
              "alternating residual not refinement-convergent (" + fmt(res_c) + " -> " +
                  fmt(res_f) + ")");

    // Monte Carlo: run the regime diffusion with reflecting behavior on the
    // odd gaps (in F) and absorption on the even gaps, started at x; the left
    // product equals P(|xi(t_m)| <= y).
    std::vector<std::pair<double, double>> on_gaps;
    for (std::size_t k = 1; k < times.size(); k += 2) on_gaps.push_back({times[k - 1], times[k]});
    RegimeSchedule F(on_gaps);
    std::vector<double> xs(n);
    for_each_replica(n, [&](std::size_t i) {
      auto rng = seed_stream(300 + m, i);
      auto run = simulate_regime_diffusion(cs.to_xi, cs.to_xi, F, x, times.back(), sde, rng);
      xs[i] = std::fabs(run.path.values.back()) <= y ? 1.0 : 0.0;
    });
    auto mc = Estimate::from_samples(xs, 300 + m, "regime_mc");
    c.note("n=" + std::to_string(m) + " MC " + fmt(mc.value) + " +- " + fmt(mc.stderr_));
    c.require(std::fabs(mc.value - lf) <= 3.0 * mc.stderr_,
              "MC cross-check off by " + fmt(std::fabs(mc.value - lf)) + " > 3 sigma (" +
                  fmt(3.0 * mc.stderr_) + ")");
  }
}

// ---------------------------------------------------------------------------
// 4. Three-way nonemptiness probability for ExpPower (c=1, alpha=0.5)

void criterion4(Check& c) {
  auto b = CorrelationFunction::exp_power(1.0, 0.5);
  SpectralParams p;
  p.sde.dt_w = 6e-5;  // clock bias ~4e-4 here, inside the 3-sigma margin ~1.1e-3
  auto r = prob_nonempty_three_ways(b, 100000, 42, p);

  auto chart = ScaleSpeedChart::build(b);
  SemigroupSolver L(make_L_grid(chart));
  double pde = prob_nonempty_pde(L);
  c.note("direct " + fmt(r.direct.value) + " +- " + fmt(r.direct.stderr_) + ", time-average " +
         fmt(r.time_average.value) + " +- " + fmt(r.time_average.stderr_) + ", inverse-clock " +
         fmt(r.inverse_clock.value) + " +- " + fmt(r.inverse_clock.stderr_) + ", PDE " +
         fmt(pde));

  const Estimate* es[3] = {&r.direct, &r.time_average, &r.inverse_clock};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double gap = std::fabs(es[i]->value - es[j]->value);
      double tol = 3.0 * std::hypot(es[i]->stderr_, es[j]->stderr_);
      c.require(gap <= tol, es[i]->method + " vs " + es[j]->method + ": gap " + fmt(gap) +
                                " > " + fmt(tol));
    }
    double gap = std::fabs(es[i]->value - pde);
    c.require(gap <= 3.0 * es[i]->stderr_,
              es[i]->method + " vs PDE: gap " + fmt(gap) + " > " + fmt(3.0 * es[i]->stderr_));
  }
}

// ---------------------------------------------------------------------------
// 5. Avoidance identity for two elementary sets F and alpha in {0, 0.5}

void criterion5(Check& c) {
  const double grid_tol = 0.01;  // law-evolution discretization allowance
  const std::vector<RegimeSchedule> sets = {
      RegimeSchedule({{0.25, 0.5}}), RegimeSchedule({{0.0, 0.25}, {0.5, 0.75}})};
  struct Case {
    CorrelationFunction b;
    double dt_w;
    const char* name;
  };
  const std::vector<Case> cases = {{CorrelationFunction::indicator(), 1e-4, "alpha=0"},
                                   {CorrelationFunction::exp_power(1.0, 0.5), 4e-5, "alpha=0.5"}};
  for (const auto& cs : cases) {
    auto chart = ScaleSpeedChart::build(cs.b);
    SemigroupSolver L(make_L_grid(chart));
    for (const auto& F : sets) {
      SpectralParams p;
      p.sde.dt_w = cs.dt_w;
      auto r = prob_avoid(cs.b, F, L, 20000, 77, p);
      std::string tag = std::string(cs.name) + " F={" + F.describe() + "}";
      c.note(tag + ": sampled " + fmt(r.sampled.value) + " +- " + fmt(r.sampled.stderr_) +
             ", joining " + fmt(r.joining.value) + " +- " + fmt(r.joining.stderr_) + ", PDE " +
             fmt(r.pde));
      c.require(std::fabs(r.sampled.value - r.pde) <= 3.0 * r.sampled.stderr_ + grid_tol,
                tag + ": sampled vs PDE");
      c.require(std::fabs(r.joining.value - r.pde) <= 3.0 * r.joining.stderr_ + grid_tol,
                tag + ": joining vs PDE");
      c.require(std::fabs(r.sampled.value - r.joining.value) <=
                    3.0 * std::hypot(r.sampled.stderr_, r.joining.stderr_) + grid_tol,
                tag + ": sampled vs joining");
    }
  }
}

// ---------------------------------------------------------------------------
// 6. Black noise: the Arratia spectral measure has no finite-order component

void criterion6(Check& c) {
  auto b = CorrelationFunction::indicator();
  SpectralParams p;
  p.sde.dt_w = 1e-4;  // identity chart: the clock is exact at any step size
  auto F = RegimeSchedule::full();

  for (double rho : {0.0, 0.5, 0.9}) {
    auto g = generating_function(b, F, rho, 20000, 606, p);
    c.note("G(" + fmt(rho) + ") = " + fmt(g.value) + " +- " + fmt(g.stderr_));
    c.require(std::fabs(g.value) <= 3.0 * g.stderr_,
              "G(" + fmt(rho) + ") = " + fmt(g.value) + " not 0 within 3 sigma");
  }

  auto fit = spectral_mass_fit(b, F, 10000, 607, 6, p);
  c.note("mass-fit tail " + fmt(fit.tail) + " (condition " + fmt(fit.condition) + ")");
  c.require(std::fabs(fit.tail - 1.0) <= 0.02, "mass-fit tail " + fmt(fit.tail) + " != 1 +- 0.02");

  auto chart = ScaleSpeedChart::build(b);
  SemigroupSolver L(make_L_grid(chart));
  auto avoid = prob_avoid(b, F, L, 2000, 608, p);
  c.note("avoid([0,1]): sampled " + fmt(avoid.sampled.value) + ", joining " +
         fmt(avoid.joining.value) + ", PDE " + fmt(avoid.pde));
  c.require(avoid.sampled.value <= 0.01, "sampled avoid probability above 0.01");
  c.require(std::fabs(avoid.joining.value) <= 0.01, "joining avoid probability above 0.01");
  c.require(std::fabs(avoid.pde) <= 0.01, "PDE avoid probability above 0.01");
}

// ---------------------------------------------------------------------------
// 7. Dimension of the spectral set: box counting and the resolvent exponent

void criterion7(Check& c) {
  {
    SpectralParams p;
    p.sde.dt_w = std::ldexp(1.0, -23);  // >= 2^22 Wiener steps per unit flow time
    p.zero_res = 1e-7;
    auto r = box_dimension(CorrelationFunction::indicator(), 500, 700, p);
    c.note("alpha=0 box dimension " + fmt(r.curve.slope) + " +- " + fmt(r.curve.slope_stderr) +
           " (" + std::to_string(r.n_nonempty) + " nonempty of " +
           std::to_string(r.n_samples) + ")");
    c.require(std::fabs(r.curve.slope - 0.5) <= 0.05,
              "alpha=0 box dimension " + fmt(r.curve.slope) + " != 0.50 +- 0.05");
  }
  {
    SpectralParams p;
    p.sde.dt_w = std::ldexp(1.0, -22);  // clock ratio ~1.3 keeps paths >= 2^22 steps
    p.zero_res = 1e-7;
    auto r = box_dimension(CorrelationFunction::exp_power(1.0, 0.5), 500, 701, p);
    c.note("alpha=0.5 box dimension " + fmt(r.curve.slope) + " +- " +
           fmt(r.curve.slope_stderr) + " (" + std::to_string(r.n_nonempty) + " nonempty of " +
           std::to_string(r.n_samples) + ")");
    c.require(std::fabs(r.curve.slope - 1.0 / 3.0) <= 0.05,
              "alpha=0.5 box dimension " + fmt(r.curve.slope) + " != 0.333 +- 0.05");
  }
  for (double a : {0.0, 0.25, 0.5}) {
    auto b = a == 0.0 ? CorrelationFunction::indicator() : CorrelationFunction::exp_power(1.0, a);
    auto r = exponent_via_resolvent(b);
    c.note("alpha=" + fmt(a) + " resolvent exponent " + fmt(r.exponent) + " (predicted " +
           fmt(r.predicted) + ")");
    c.require(std::fabs(r.exponent - r.predicted) <= 0.03,
              "alpha=" + fmt(a) + " resolvent exponent off by " +
                  fmt(std::fabs(r.exponent - r.predicted)));
    if (a == 0.0) {
      for (std::size_t i = 0; i < r.lambda.size(); ++i) {
        double ref = std::sqrt(r.lambda[i]);
        c.require(std::fabs(r.psi[i] - ref) <= 0.01 * ref,
                  "Psi(" + fmt(r.lambda[i]) + ") = " + fmt(r.psi[i]) + " != sqrt(lambda) to 1%");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 8. Reduction of the joint two-point motion to the difference diffusion

void criterion8(Check& c) {
  SdeParams p;
  p.dt_w = 1e-4;
  struct Case {
    CorrelationFunction b;
    double rho;
    const char* name;
  };
  const std::vector<Case> cases = {{CorrelationFunction::indicator(), 0.0, "indicator rho=0"},
                                   {CorrelationFunction::exp_power(1.0, 0.5), 0.5,
                                    "exp_power(0.5) rho=0.5"}};
  for (const auto& cs : cases) {
    auto r = joint_vs_difference_check(cs.b, cs.rho, 100000, 808, 1e-3, p);
    c.note(std::string(cs.name) + ": KS " + fmt(r.ks) + " at n=" + std::to_string(r.n));
    c.require(r.ks <= 0.02, std::string(cs.name) + ": KS " + fmt(r.ks) + " > 0.02");
  }
}

// ---------------------------------------------------------------------------
// 9. Property invariants under fixed seeds, bit-exact across thread counts

void criterion9(Check& c) {
  // pathwise invariants of the n-point motion
  for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
    auto rng = seed_stream(seed, 0);
    auto b = CorrelationFunction::exp_power(1.0, 0.5);
    auto flow = simulate_npoint(b, {-1.0, -0.3, 0.0, 0.4, 1.2}, 1.0, 1e-3, rng);
    bool ordered = true, coarsening = true;
    for (std::size_t s = 0; s < flow.partition_trace.size(); ++s) {
      for (std::size_t i = 1; i < flow.points.size(); ++i)
        ordered = ordered &&
                  flow.trajectories[i][s] >= flow.trajectories[i - 1][s] - 1e-12;
      if (s > 0)
        for (std::size_t i = 0; i < flow.points.size(); ++i)
          for (std::size_t j = 0; j < i; ++j)
            if (flow.partition_trace[s - 1][i] == flow.partition_trace[s - 1][j])
              coarsening = coarsening &&
                           flow.partition_trace[s][i] == flow.partition_trace[s][j];
    }
    c.require(ordered, "seed " + std::to_string(seed) + ": order not preserved");
    c.require(coarsening, "seed " + std::to_string(seed) + ": merged particles separated");

    // spectral-set samples live in [0, tau] and come out sorted
    auto chart = ScaleSpeedChart::build(b);
    auto cls = make_clock_scales(chart);
    SpectralParams sp;
    sp.sde.dt_w = 1e-4;
    auto rng2 = seed_stream(seed, 1);
    auto smp = sample_spectral_set(b, chart, cls, rng2, sp);
    bool in_range = std::is_sorted(smp.times.begin(), smp.times.end());
    for (double t : smp.times) in_range = in_range && t >= 0.0 && t <= smp.tau;
    c.require(in_range, "seed " + std::to_string(seed) + ": spectral sample malformed");
  }

  // bit-exact reproducibility across 1, 4, and 8 worker threads
  SpectralParams p;
  p.sde.dt_w = 1e-3;
  auto run_once = [&]() {
    auto g = generating_function(CorrelationFunction::exp_power(1.0, 0.5),
                                 RegimeSchedule::full(), 0.5, 512, 909, p);
    auto t = prob_nonempty_three_ways(CorrelationFunction::indicator(), 99, 910, p);
    return std::vector<double>{g.value, g.stderr_, t.direct.value, t.time_average.value,
                               t.inverse_clock.value};
  };
  const char* old = std::getenv("HARRIS_THREADS");
  std::string saved = old ? old : "";
  std::vector<std::vector<double>> results;
  for (const char* nt : {"1", "4", "8"}) {
    setenv("HARRIS_THREADS", nt, 1);
    results.push_back(run_once());
  }
  if (old)
    setenv("HARRIS_THREADS", saved.c_str(), 1);
  else
    unsetenv("HARRIS_THREADS");
  for (std::size_t k = 1; k < results.size(); ++k) {
    bool same = results[k].size() == results[0].size();
    for (std::size_t i = 0; same && i < results[0].size(); ++i)
      same = results[k][i] == results[0][i];  // bitwise-identical doubles
    c.require(same, "results differ between 1 and " + std::string(k == 1 ? "4" : "8") +
                        " threads");
  }
  c.note("thread counts 1/4/8 bit-exact over " + std::to_string(results[0].size()) +
         " statistics");
}

// ---------------------------------------------------------------------------

struct Criterion {
  int id;
  const char* name;
  void (*fn)(Check&);
};

const Criterion kCriteria[] = {
    {1, "classification (Th 1.1)", criterion1},
    {2, "duality, closed form and grid convergence", criterion2},
    {3, "alternating duality with MC cross-check", criterion3},
    {4, "three-way nonemptiness probability", criterion4},
    {5, "avoidance identity", criterion5},
    {6, "black noise (Arratia)", criterion6},
    {7, "spectral-set dimension", criterion7},
    {8, "joint vs difference reduction", criterion8},
    {9, "property invariants and thread reproducibility", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& cr : kCriteria) {
    if (!wanted.empty() && !wanted.count(cr.id)) continue;
    Check chk;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.fn(chk);
    } catch (const std::exception& e) {
      chk.pass = false;
      chk.detail << "  EXCEPTION: " << e.what() << "\n";
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", chk.pass ? "PASS" : "FAIL", cr.id, cr.name,
                dt);
    std::fputs(chk.detail.str().c_str(), stdout);
    std::fflush(stdout);
    if (!chk.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
