#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "harris/corrfn.hpp"
#include "harris/dimension.hpp"
#include "harris/errors.hpp"
#include "harris/flows.hpp"
#include "harris/semigroup.hpp"
#include "harris/spectra.hpp"

namespace py = pybind11;
using namespace harris;

namespace {

CorrelationFunction corr_from(const std::string& kind, double c, double alpha) {
  if (kind == "indicator") return CorrelationFunction::indicator();
  if (kind == "exp_power") return CorrelationFunction::exp_power(c, alpha);
  throw ConfigError("unknown correlation kind: " + kind);
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["method"] = e.method;
  d["value"] = e.value;
  d["stderr"] = e.stderr_;
  d["n"] = e.n_replicas;
  d["seed"] = e.master_seed;
  return d;
}

SpectralParams params_from(double dt_w, double dt) {
  SpectralParams p;
  p.sde.dt_w = dt_w;
  p.sde.dt = dt;
  return p;
}

}  // namespace

PYBIND11_MODULE(_harris, m) {
  m.doc() = "Harris-flow noises: classification, spectral sets and dimensions";

  py::register_exception<ConfigError>(m, "HarrisConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "HarrisNumericalError", PyExc_ArithmeticError);

  m.def(
      "classify",
      [](const std::string& kind, double c, double alpha) {
        auto b = corr_from(kind, c, alpha);
        return b.classify() == NoiseClass::Classical ? "Classical" : "Nonclassical";
      },
      py::arg("kind"), py::arg("c") = 1.0, py::arg("alpha") = 0.5);

  m.def(
      "classify_tabulated",
      [](std::vector<double> x, std::vector<double> bvals) {
        auto b = CorrelationFunction::tabulated(std::move(x), std::move(bvals));
        return b.classify() == NoiseClass::Classical ? "Classical" : "Nonclassical";
      },
      py::arg("x"), py::arg("b"));

  m.def(
      "eval_correlation",
      [](const std::string& kind, double x, double c, double alpha) {
        return corr_from(kind, c, alpha).eval(x);
      },
      py::arg("kind"), py::arg("x"), py::arg("c") = 1.0, py::arg("alpha") = 0.5);

  m.def(
      "simulate_npoint",
      [](const std::string& kind, double c, double alpha, std::vector<double> points,
         double T, double dt, std::uint64_t seed) {
        auto b = corr_from(kind, c, alpha);
        auto rng = seed_stream(seed, 0);
        auto s = simulate_npoint(b, std::move(points), T, dt, rng);
        py::dict d;
        d["dt"] = s.dt;
        d["points"] = s.points;
        d["trajectories"] = s.trajectories;
        py::list merges;
        for (const auto& mm : s.merges) {
          py::dict e;
          e["time"] = mm.time;
          e["absorbed"] = mm.absorbed;
          e["into"] = mm.into;
          merges.append(e);
        }
        d["merges"] = merges;
        return d;
      },
      py::arg("kind"), py::arg("c"), py::arg("alpha"), py::arg("points"), py::arg("T") = 1.0,
      py::arg("dt") = 1e-3, py::arg("seed") = 1);

  m.def(
      "prob_nonempty",
      [](const std::string& kind, double c, double alpha, std::size_t n, std::uint64_t seed,
         double dt_w, double dt) {
        auto b = corr_from(kind, c, alpha);
        auto r = prob_nonempty_three_ways(b, n, seed, params_from(dt_w, dt));
        auto chart = ScaleSpeedChart::build(b);
        SemigroupSolver L(make_L_grid(chart));
        py::dict d;
        d["direct"] = estimate_dict(r.direct);
        d["time_average"] = estimate_dict(r.time_average);
        d["inverse_clock"] = estimate_dict(r.inverse_clock);
        d["pde"] = prob_nonempty_pde(L);
        return d;
      },
      py::arg("kind"), py::arg("c") = 1.0, py::arg("alpha") = 0.5, py::arg("n") = 1000,
      py::arg("seed") = 1, py::arg("dt_w") = 4e-5, py::arg("dt") = 1e-4);

  m.def(
      "prob_avoid",
      [](const std::string& kind, double c, double alpha,
         std::vector<std::pair<double, double>> F, std::size_t n, std::uint64_t seed,
         double dt_w, double dt) {
        auto b = corr_from(kind, c, alpha);
        RegimeSchedule sched(std::move(F));
        auto chart = ScaleSpeedChart::build(b);
        SemigroupSolver L(make_L_grid(chart));
        auto r = prob_avoid(b, sched, L, n, seed, params_from(dt_w, dt));
        py::dict d;
        d["sampled"] = estimate_dict(r.sampled);
        d["joining"] = estimate_dict(r.joining);
        d["pde"] = r.pde;
        return d;
      },
      py::arg("kind"), py::arg("c"), py::arg("alpha"), py::arg("F"), py::arg("n") = 1000,
      py::arg("seed") = 1, py::arg("dt_w") = 4e-5, py::arg("dt") = 1e-4);

  m.def(
      "generating_function",
      [](const std::string& kind, double c, double alpha, double rho,
         std::vector<std::pair<double, double>> F, std::size_t n, std::uint64_t seed,
         double dt_w, double dt) {
        auto b = corr_from(kind, c, alpha);
        auto e = generating_function(b, RegimeSchedule(std::move(F)), rho, n, seed,
                                     params_from(dt_w, dt));
        return estimate_dict(e);
      },
      py::arg("kind"), py::arg("c"), py::arg("alpha"), py::arg("rho"), py::arg("F"),
      py::arg("n") = 1000, py::arg("seed") = 1, py::arg("dt_w") = 1e-4, py::arg("dt") = 1e-3);

  m.def(
      "box_dimension",
      [](const std::string& kind, double c, double alpha, std::size_t n_nonempty,
         std::uint64_t seed, double dt_w, int k_min, int k_max) {
        auto b = corr_from(kind, c, alpha);
        auto p = params_from(dt_w, 1e-3);
        p.zero_res = std::ldexp(1.0, -k_max);
        auto r = box_dimension(b, n_nonempty, seed, p, k_min, k_max);
        py::dict d;
        d["dimension"] = r.curve.slope;
        d["stderr"] = r.curve.slope_stderr;
        d["predicted"] = r.predicted;
        d["n_nonempty"] = r.n_nonempty;
        d["levels"] = r.curve.levels;
        d["log_count"] = r.curve.log_count;
        return d;
      },
      py::arg("kind"), py::arg("c") = 1.0, py::arg("alpha") = 0.5, py::arg("n_nonempty") = 100,
      py::arg("seed") = 1, py::arg("dt_w") = 1e-6, py::arg("k_min") = 6, py::arg("k_max") = 16);

  m.def(
      "resolvent_exponent",
      [](const std::string& kind, double c, double alpha, double lo, double hi,
         std::size_t pts) {
        auto b = corr_from(kind, c, alpha);
        auto r = exponent_via_resolvent(b, lo, hi, pts);
        py::dict d;
        d["exponent"] = r.exponent;
        d["stderr"] = r.exponent_stderr;
        d["predicted"] = r.predicted;
        d["lambda"] = r.lambda;
        d["psi"] = r.psi;
        return d;
      },
      py::arg("kind"), py::arg("c") = 1.0, py::arg("alpha") = 0.5, py::arg("lambda_lo") = 10.0,
      py::arg("lambda_hi") = 1e4, py::arg("points") = 9);

  m.def(
      "joint_vs_difference_ks",
      [](const std::string& kind, double c, double alpha, double rho, std::size_t n,
         std::uint64_t seed, double dt_w) {
        auto b = corr_from(kind, c, alpha);
        SdeParams p;
        p.dt_w = dt_w;
        return joint_vs_difference_check(b, rho, n, seed, 1e-3, p).ks;
      },
      py::arg("kind"), py::arg("c"), py::arg("alpha"), py::arg("rho"), py::arg("n") = 1000,
      py::arg("seed") = 1, py::arg("dt_w") = 1e-4);
}
