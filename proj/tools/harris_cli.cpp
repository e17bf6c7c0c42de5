#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "harris/corrfn.hpp"
#include "harris/dimension.hpp"
#include "harris/errors.hpp"
#include "harris/flows.hpp"
#include "harris/semigroup.hpp"
#include "harris/spectra.hpp"

#ifndef HARRIS_VERSION
#define HARRIS_VERSION "0.0.0"
#endif

using nlohmann::json;

namespace {

struct CorrOpts {
  std::string kind = "exp_power";
  double c = 1.0;
  double alpha = 0.5;
  std::string table_path;
};

void add_corr_options(CLI::App* cmd, CorrOpts& o) {
  cmd->add_option("--b", o.kind, "correlation function: exp_power, indicator or tabulated")
      ->check(CLI::IsMember({"exp_power", "indicator", "tabulated"}))
      ->capture_default_str();
  cmd->add_option("--c", o.c, "scale of exp(-c|x|^alpha)")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "exponent of exp(-c|x|^alpha)")->capture_default_str();
  cmd->add_option("--table-path", o.table_path, "CSV of x,b(x) pairs for --b tabulated");
}

harris::CorrelationFunction make_corr(const CorrOpts& o) {
  if (o.kind == "indicator") return harris::CorrelationFunction::indicator();
  if (o.kind == "exp_power") return harris::CorrelationFunction::exp_power(o.c, o.alpha);
  if (o.table_path.empty())
    throw harris::ConfigError("tabulated correlation function requires --table-path");
  std::ifstream in(o.table_path);
  if (!in) throw harris::ConfigError("cannot open table: " + o.table_path);
  std::vector<double> xs, bs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, b;
    if (row >> x >> b) {
      xs.push_back(x);
      bs.push_back(b);
    }
  }
  return harris::CorrelationFunction::tabulated(std::move(xs), std::move(bs));
}

// "a,b;c,d" -> schedule; "none" -> empty set
harris::RegimeSchedule parse_schedule(const std::string& s) {
  if (s == "none") return harris::RegimeSchedule{};
  std::vector<std::pair<double, double>> iv;
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, ';')) {
    double a, b;
    char comma;
    std::istringstream p(part);
    if (!(p >> a >> comma >> b) || comma != ',')
      throw harris::ConfigError("cannot parse interval list: " + s);
    iv.emplace_back(a, b);
  }
  return harris::RegimeSchedule(iv);
}

std::pair<double, double> parse_window(const std::string& s) {
  double a, b;
  char comma;
  std::istringstream p(s);
  if (!(p >> a >> comma >> b) || comma != ',')
    throw harris::ConfigError("cannot parse window: " + s);
  return {a, b};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json to_json(const harris::Estimate& e) {
  return {{"method", e.method},
          {"value", e.value},
          {"stderr", e.stderr_},
          {"n", e.n_replicas},
          {"seed", e.master_seed}};
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw harris::ConfigError("cannot open output file: " + out);
    f << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harris-flow spectral toolbox"};
  app.set_version_flag("--version", std::string("harris ") + HARRIS_VERSION);
  app.set_config("--config", "", "read options from a key=value config file");
  bool show_config = false;
  app.add_flag("--show-config", show_config, "print the resolved configuration and exit");
  app.require_subcommand(0, 1);

  CorrOpts corr;
  std::uint64_t seed = 1;
  std::size_t n = 10000;
  double dt = 1e-4, dt_w = 1e-6;
  std::string fstr = "0,1";
  std::string out;
  double rho = 0.0;

  auto add_common = [&](CLI::App* cmd, bool with_mc) {
    add_corr_options(cmd, corr);
    cmd->add_option("--out", out, "write the JSON/CSV result to this path");
    if (with_mc) {
      cmd->add_option("--n", n, "number of Monte Carlo replicas")->capture_default_str();
      cmd->add_option("--seed", seed, "master seed")->capture_default_str();
      cmd->add_option("--dt", dt, "flow-time grid step")->capture_default_str();
      cmd->add_option("--dt-w", dt_w, "Wiener-clock step")->capture_default_str();
    }
  };

  auto* c_classify = app.add_subcommand("classify", "classical vs nonclassical noise");
  add_common(c_classify, false);

  auto* c_flow = app.add_subcommand("simulate-flow", "n-point motion of the Harris flow");
  add_common(c_flow, true);
  std::string points_str = "0,0.1,0.5";
  double T = 1.0;
  c_flow->add_option("--points", points_str, "comma-separated initial points")
      ->capture_default_str();
  c_flow->add_option("--T", T, "time horizon")->capture_default_str();

  auto* c_dual = app.add_subcommand("duality-check", "semigroup duality residuals");
  add_common(c_dual, false);
  double dx = 0.2, dy = 0.5, dtp = 0.25;
  std::string times_str;
  c_dual->add_option("--t", dtp, "time of the single-operator check")->capture_default_str();
  c_dual->add_option("--x", dx, "evaluation point x")->capture_default_str();
  c_dual->add_option("--y", dy, "level y of 1_{[0,y]}")->capture_default_str();
  c_dual->add_option("--times", times_str,
                     "comma-separated 0=t0<t1<...<tm for the alternating product");

  auto* c_res = app.add_subcommand("resolvent-exponent", "spectral exponent via Psi(lambda)");
  add_common(c_res, false);
  std::string lam_str = "10,10000";
  std::size_t lam_pts = 9;
  c_res->add_option("--lambda-window", lam_str, "lo,hi of the lambda sweep")
      ->capture_default_str();
  c_res->add_option("--points", lam_pts, "number of lambda points")->capture_default_str();

  auto* c_avoid = app.add_subcommand("spectral-avoid", "P(S cap F = empty), three routes");
  add_common(c_avoid, true);
  c_avoid->add_option("--F", fstr, "intervals a,b;c,d or 'none'")->capture_default_str();

  auto* c_nonempty = app.add_subcommand("nonempty-prob", "P(S~ nonempty), three routes + PDE");
  add_common(c_nonempty, true);

  auto* c_gen = app.add_subcommand("genfun", "generating function G_F(rho) and mass fit");
  add_common(c_gen, true);
  std::size_t fit_order = 0;
  c_gen->add_option("--rho", rho, "evaluation point rho in [0,1)")->capture_default_str();
  c_gen->add_option("--F", fstr, "intervals a,b;c,d or 'none'")->capture_default_str();
  c_gen->add_option("--fit-order", fit_order,
                    "if > 0, also fit point masses of |S cap F| up to this order");

  auto* c_dim = app.add_subcommand("dimension", "box-counting dimension of S~");
  add_common(c_dim, true);
  int kmin = 6, kmax = 16;
  c_dim->add_option("--kmin", kmin, "coarsest dyadic level")->capture_default_str();
  c_dim->add_option("--kmax", kmax, "finest dyadic level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // keep exit 0 for --help/--version; fold all usage errors into exit 2
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (show_config) {
    std::cout << app.config_to_str(true, false);
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 0;
  }

  try {
    json j;
    j["version"] = HARRIS_VERSION;
    j["config_hash"] = fnv1a(app.config_to_str(true, false));

    if (c_classify->parsed()) {
      auto b = make_corr(corr);
      j["method"] = "classify_noise";
      j["class"] = b.classify() == harris::NoiseClass::Classical ? "Classical" : "Nonclassical";
      j["correlation"] = b.describe();
      emit(j, out);
    } else if (c_flow->parsed()) {
      auto b = make_corr(corr);
      std::vector<double> pts;
      std::istringstream in(points_str);
      std::string tok;
      while (std::getline(in, tok, ',')) pts.push_back(std::stod(tok));
      auto rng = harris::seed_stream(seed, 0);
      auto sample = harris::simulate_npoint(b, pts, T, dt, rng);
      j["method"] = "simulate_npoint";
      j["n"] = pts.size();
      j["seed"] = seed;
      j["merges"] = json::array();
      for (const auto& m : sample.merges)
        j["merges"].push_back({{"time", m.time}, {"absorbed", m.absorbed}, {"into", m.into}});
      if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw harris::ConfigError("cannot open output file: " + out);
        f << "t";
        for (std::size_t i = 0; i < pts.size(); ++i) f << ",x" << i;
        f << "\n";
        for (std::size_t k = 0; k < sample.trajectories[0].size(); ++k) {
          f << (double(k + 1) * dt);
          for (std::size_t i = 0; i < pts.size(); ++i) f << "," << sample.trajectories[i][k];
          f << "\n";
        }
        j["csv"] = out;
      }
      std::cout << j.dump(2) << "\n";
    } else if (c_dual->parsed()) {
      auto b = make_corr(corr);
      auto chart = harris::ScaleSpeedChart::build(b);
      harris::SemigroupSolver L(harris::make_L_grid(chart));
      harris::SemigroupSolver Lh(harris::make_Lhat_grid(chart));
      if (times_str.empty()) {
        auto [r1, r2] = harris::check_duality_single(L, Lh, chart, dtp, dx, dy);
        j["method"] = "duality_single";
        j["value"] = std::max(r1, r2);
        j["residual_plus_zero"] = r1;
        j["residual_minus_plus"] = r2;
      } else {
        std::vector<double> ts;
        std::istringstream in(times_str);
        std::string tok;
        while (std::getline(in, tok, ',')) ts.push_back(std::stod(tok));
        auto [lv, rv] = harris::check_duality_alternating(L, Lh, chart, ts, dx, dy);
        j["method"] = "duality_alternating";
        j["left"] = lv;
        j["right"] = rv;
        j["value"] = std::fabs(lv - rv);
      }
      j["t"] = dtp;
      j["x"] = dx;
      j["y"] = dy;
      emit(j, out);
    } else if (c_res->parsed()) {
      auto b = make_corr(corr);
      auto [lo, hi] = parse_window(lam_str);
      auto r = harris::exponent_via_resolvent(b, lo, hi, lam_pts);
      j["method"] = "resolvent_exponent";
      j["value"] = r.exponent;
      j["stderr"] = r.exponent_stderr;
      j["predicted"] = r.predicted;
      j["lambda"] = r.lambda;
      j["psi"] = r.psi;
      emit(j, out);
    } else if (c_avoid->parsed()) {
      auto b = make_corr(corr);
      auto F = parse_schedule(fstr);
      harris::SpectralParams p;
      p.sde.dt = dt;
      p.sde.dt_w = dt_w;
      auto chart = harris::ScaleSpeedChart::build(b);
      harris::SemigroupSolver L(harris::make_L_grid(chart));
      auto r = harris::prob_avoid(b, F, L, n, seed, p);
      j["method"] = "prob_avoid";
      j["F"] = F.describe();
      j["sampled"] = to_json(r.sampled);
      j["joining"] = to_json(r.joining);
      j["pde"] = r.pde;
      j["value"] = r.sampled.value;
      emit(j, out);
    } else if (c_nonempty->parsed()) {
      auto b = make_corr(corr);
      harris::SpectralParams p;
      p.sde.dt = dt;
      p.sde.dt_w = dt_w;
      auto r = harris::prob_nonempty_three_ways(b, n, seed, p);
      auto chart = harris::ScaleSpeedChart::build(b);
      harris::SemigroupSolver L(harris::make_L_grid(chart));
      j["method"] = "prob_nonempty";
      j["direct"] = to_json(r.direct);
      j["time_average"] = to_json(r.time_average);
      j["inverse_clock"] = to_json(r.inverse_clock);
      j["pde"] = harris::prob_nonempty_pde(L);
      j["value"] = r.direct.value;
      emit(j, out);
    } else if (c_gen->parsed()) {
      auto b = make_corr(corr);
      auto F = parse_schedule(fstr);
      harris::SpectralParams p;
      p.sde.dt = dt;
      p.sde.dt_w = dt_w;
      if (fit_order > 0) {
        auto fit = harris::spectral_mass_fit(b, F, n, seed, fit_order, p);
        j["method"] = "spectral_mass_fit";
        j["rho"] = fit.rho;
        j["g"] = fit.g;
        j["g_stderr"] = fit.g_stderr;
        j["masses"] = fit.masses;
        j["tail"] = fit.tail;
        j["condition"] = fit.condition;
        j["value"] = fit.tail;
      } else {
        auto e = harris::generating_function(b, F, rho, n, seed, p);
        j["method"] = "generating_function";
        j["rho"] = rho;
        j.update(to_json(e));
        j["method"] = "generating_function";
      }
      j["F"] = F.describe();
      emit(j, out);
    } else if (c_dim->parsed()) {
      auto b = make_corr(corr);
      harris::SpectralParams p;
      p.sde.dt = dt;
      p.sde.dt_w = dt_w;
      auto r = harris::box_dimension(b, n, seed, p, kmin, kmax);
      j["method"] = "box_dimension";
      j["value"] = r.curve.slope;
      j["stderr"] = r.curve.slope_stderr;
      j["predicted"] = r.predicted;
      j["n"] = r.n_nonempty;
      j["n_samples"] = r.n_samples;
      j["seed"] = seed;
      j["levels"] = r.curve.levels;
      j["log_count"] = r.curve.log_count;
      emit(j, out);
    }
  } catch (const harris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const harris::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
