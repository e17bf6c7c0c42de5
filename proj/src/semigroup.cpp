#include "harris/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "harris/errors.hpp"

namespace harris {

namespace {

std::vector<double> geometric_nodes(double h0, double ratio, double h_max, double x_max) {
  std::vector<double> node{0.0};
  double h = h0;
  while (node.back() < x_max) {
    node.push_back(node.back() + h);
    h = std::min(h * ratio, h_max);
  }
  return node;
}

std::vector<double> cell_edges(const std::vector<double>& node) {
  std::vector<double> edge(node.size() + 1);
  edge[0] = 0.0;
  for (std::size_t i = 1; i < node.size(); ++i) edge[i] = 0.5 * (node[i - 1] + node[i]);
  edge[node.size()] = node.back();
  return edge;
}

// overlap length of [a,b] with [lo,hi]
inline double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

}  // namespace

double Grid1D::eval(const std::vector<double>& u, double x) const {
  if (x <= node.front()) return u.front();
  if (x >= node.back()) return u.back();
  auto it = std::upper_bound(node.begin(), node.end(), x);
  std::size_t i = static_cast<std::size_t>(it - node.begin()) - 1;
  double w = (x - node[i]) / (node[i + 1] - node[i]);
  return u[i] * (1.0 - w) + u[i + 1] * w;
}

std::vector<double> Grid1D::indicator_leq(double y) const {
  std::vector<double> f(size());
  for (std::size_t i = 0; i < size(); ++i)
    f[i] = overlap(edge[i], edge[i + 1], 0.0, y) / (edge[i + 1] - edge[i]);
  return f;
}

std::vector<double> Grid1D::indicator_geq(double x) const {
  std::vector<double> f(size());
  for (std::size_t i = 0; i < size(); ++i)
    f[i] = overlap(edge[i], edge[i + 1], x, edge.back() + 1.0) / (edge[i + 1] - edge[i]);
  return f;
}

Grid1D make_L_grid(const ScaleSpeedChart& chart, double h0, double ratio, double h_max,
                   double x_max) {
  Grid1D g;
  g.node = geometric_nodes(h0, ratio, h_max, x_max);
  g.edge = cell_edges(g.node);
  g.mass.resize(g.size());
  g.cell_b.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double dx = g.edge[i + 1] - g.edge[i];
    double dxi = chart.xi_of_x(g.edge[i + 1]) - chart.xi_of_x(g.edge[i]);
    if (!(dxi > 0.0)) dxi = dx;
    g.mass[i] = dxi;
    g.cell_b[i] = std::max(0.0, (dxi - dx) / dxi);
  }
  return g;
}

Grid1D make_Lhat_grid(const ScaleSpeedChart& chart, double h0, double ratio, double h_max,
                      double xi_max) {
  Grid1D g;
  g.node = geometric_nodes(h0, ratio, h_max, std::min(xi_max, chart.xi_max()));
  g.edge = cell_edges(g.node);
  g.mass.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double dx = chart.x_of_xi(g.edge[i + 1]) - chart.x_of_xi(g.edge[i]);
    double dxi = g.edge[i + 1] - g.edge[i];
    g.mass[i] = dx > 0.0 ? dx : dxi;
  }
  return g;
}

SemigroupSolver::SemigroupSolver(Grid1D grid, double dt_step)
    : grid_(std::move(grid)), dt_step_(dt_step) {
  if (grid_.size() < 3) throw ConfigError("semigroup grid too small");
  cond_.resize(grid_.size() - 1);
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
    cond_[i] = 1.0 / (grid_.node[i + 1] - grid_.node[i]);
}

// Thomas solve of (I - h G) u_new = u; G is the finite-volume operator with a
// reflecting far boundary and either a reflecting or killing boundary at 0.
void SemigroupSolver::step(std::vector<double>& u, double h, bool dirichlet) const {
  const auto n = grid_.size();
  static thread_local std::vector<double> cp, dp;
  cp.assign(n, 0.0);
  dp.assign(n, 0.0);

  auto lower = [&](std::size_t i) { return -h * cond_[i - 1] / grid_.mass[i]; };
  auto upper = [&](std::size_t i) { return -h * cond_[i] / grid_.mass[i]; };
  auto diag = [&](std::size_t i) {
    double left = i > 0 ? cond_[i - 1] : 0.0;
    double right = i + 1 < n ? cond_[i] : 0.0;
    return 1.0 + h * (left + right) / grid_.mass[i];
  };

  if (dirichlet) {
    cp[0] = 0.0;
    dp[0] = 0.0;
  } else {
    cp[0] = upper(0) / diag(0);
    dp[0] = u[0] / diag(0);
  }
  // when dirichlet, row 0 is the identity with value 0; the killing flux of
  // row 1 is retained through diag(1), and cp[0]=dp[0]=0 zero its coupling
  for (std::size_t i = 1; i < n; ++i) {
    double a = lower(i);
    double den = diag(i) - a * cp[i - 1];
    cp[i] = (i + 1 < n ? upper(i) : 0.0) / den;
    dp[i] = (u[i] - a * dp[i - 1]) / den;
  }
  u[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) u[i] = dp[i] - cp[i] * u[i + 1];
}

std::vector<double> SemigroupSolver::apply(Boundary bc, std::vector<double> f,
                                           double t) const {
  if (f.size() != grid_.size()) throw ConfigError("semigroup: data size mismatch");
  if (t <= 0.0) return f;
  auto nsteps = static_cast<std::size_t>(std::ceil(t / dt_step_ - 1e-9));
  if (nsteps == 0) nsteps = 1;
  double h = t / static_cast<double>(nsteps);

  if (bc == Boundary::Plus) {
    for (std::size_t k = 0; k < nsteps; ++k) step(f, h, false);
    return f;
  }
  if (bc == Boundary::Zero) {
    f[0] = 0.0;
    for (std::size_t k = 0; k < nsteps; ++k) step(f, h, true);
    return f;
  }
  // T^- f = T^0 f + f(0) (1 - T^0 1)
  double f0 = f[0];
  f[0] = 0.0;
  std::vector<double> ones(grid_.size(), 1.0);
  ones[0] = 0.0;
  for (std::size_t k = 0; k < nsteps; ++k) {
    step(f, h, true);
    step(ones, h, true);
  }
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += f0 * (1.0 - ones[i]);
  return f;
}

double SemigroupSolver::step_density(std::vector<double>& p, double h, bool dirichlet) const {
  // self-adjoint w.r.t. the speed measure, so densities evolve with the same
  // tridiagonal system as observables
  double before = total_mass(p);
  step(p, h, dirichlet);
  if (dirichlet) p[0] = 0.0;
  return before - total_mass(p);
}

double SemigroupSolver::total_mass(const std::vector<double>& p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * grid_.mass[i];
  return s;
}

double SemigroupSolver::mean_cell_b(const std::vector<double>& p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * grid_.mass[i] * grid_.cell_b[i];
  return s;
}

std::pair<double, double> check_duality_single(const SemigroupSolver& L,
                                               const SemigroupSolver& Lhat,
                                               const ScaleSpeedChart& chart, double t,
                                               double x, double y) {
  double xx = chart.xi_of_x(x), xy = chart.xi_of_x(y);
  double lp = L.grid().eval(L.apply(Boundary::Plus, L.grid().indicator_leq(y), t), x);
  double r0 = Lhat.grid().eval(Lhat.apply(Boundary::Zero, Lhat.grid().indicator_geq(xx), t), xy);
  double lm = L.grid().eval(L.apply(Boundary::Minus, L.grid().indicator_leq(y), t), x);
  double rp = Lhat.grid().eval(Lhat.apply(Boundary::Plus, Lhat.grid().indicator_geq(xx), t), xy);
  return {std::fabs(lp - r0), std::fabs(lm - rp)};
}

std::pair<double, double> check_duality_alternating(const SemigroupSolver& L,
                                                    const SemigroupSolver& Lhat,
                                                    const ScaleSpeedChart& chart,
                                                    const std::vector<double>& times,
                                                    double x, double y) {
  if (times.size() < 2 || times.front() != 0.0)
    throw ConfigError("alternating duality: times must start at 0 with at least one gap");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw ConfigError("alternating duality: times must be strictly increasing");
  const std::size_t m = times.size() - 1;

  auto u = L.grid().indicator_leq(y);
  for (std::size_t k = m; k >= 1; --k) {
    Boundary bc = (k % 2 == 1) ? Boundary::Plus : Boundary::Minus;
    u = L.apply(bc, std::move(u), times[k] - times[k - 1]);
  }
  double left = L.grid().eval(u, x);

  auto v = Lhat.grid().indicator_geq(chart.xi_of_x(x));
  for (std::size_t k = 1; k <= m; ++k) {
    Boundary bc = (k % 2 == 1) ? Boundary::Zero : Boundary::Plus;
    v = Lhat.apply(bc, std::move(v), times[k] - times[k - 1]);
  }
  double right = Lhat.grid().eval(v, chart.xi_of_x(y));
  return {left, right};
}

double resolvent_at_origin(const ScaleSpeedChart& chart, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("resolvent: lambda must be positive");
  // pick the start of the backward integration: past the point where a ~ 1,
  // plus enough decay lengths that the WKB initial condition is forgotten
  double xi95 = 0.0;
  if (!chart.identity()) {
    double xi = 1e-3;
    while (xi < chart.xi_max() && chart.a_of_xi(xi) < 0.95) xi *= 1.25;
    if (chart.a_of_xi(xi) < 0.95)
      throw NumericalError("resolvent: speed coefficient never saturates on the chart");
    xi95 = xi;
  }
  double xi_hi = xi95 + 20.0 / std::sqrt(lambda) + 1.0;
  if (xi_hi > chart.xi_max())
    throw NumericalError("resolvent: chart horizon too small for this lambda");

  auto a = [&](double xi) { return chart.identity() ? 1.0 : chart.a_of_xi(xi); };
  double xi = xi_hi;
  double psi = 1.0;
  double phi = -std::sqrt(lambda * a(xi_hi));
  const double xi_floor = 1e-8;
  auto rhs = [&](double z, double p, double q, double& dp, double& dq) {
    dp = q;
    dq = lambda * a(std::max(z, xi_floor)) * p;
  };
  std::size_t guard = 0;
  while (xi > xi_floor) {
    double k = std::sqrt(lambda * a(xi)) + 1e-30;
    double h = std::min(0.05 / k, std::max(xi / 8.0, 1e-8));
    h = std::min(h, xi - xi_floor > 0.0 ? xi - xi_floor : h);
    double s = -h;  // backward
    double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
    rhs(xi, psi, phi, k1p, k1q);
    rhs(xi + 0.5 * s, psi + 0.5 * s * k1p, phi + 0.5 * s * k1q, k2p, k2q);
    rhs(xi + 0.5 * s, psi + 0.5 * s * k2p, phi + 0.5 * s * k2q, k3p, k3q);
    rhs(xi + s, psi + s * k3p, phi + s * k3q, k4p, k4q);
    psi += s / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    phi += s / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    xi += s;
    if (std::fabs(psi) > 1e100) {
      psi *= 1e-100;
      phi *= 1e-100;
    }
    if (++guard > 50'000'000)
      throw NumericalError("resolvent: integration step budget exhausted");
  }
  // a ~ 0 below the floor, so psi is linear there
  double psi0 = psi - xi * phi;
  double phi0 = phi;
  if (!(psi0 > 0.0) || !(phi0 < 0.0))
    throw NumericalError("resolvent: lost the decaying solution");
  return -psi0 / phi0;
}

double expected_b_time_integral(const SemigroupSolver& L, const RegimeSchedule& F, double T) {
  const auto& g = L.grid();
  std::vector<double> p(g.size(), 0.0);
  double atom = 1.0;  // difference starts at 0
  double integral = 0.0;
  const double dts = L.dt_step();
  for (const auto& seg : F.segments(T)) {
    double len = seg.end - seg.start;
    if (len <= 0.0) continue;
    if (seg.on && atom > 0.0) {
      p[0] += atom / g.mass[0];
      atom = 0.0;
    }
    auto nst = static_cast<std::size_t>(std::ceil(len / dts - 1e-9));
    if (nst == 0) nst = 1;
    double h = len / static_cast<double>(nst);
    for (std::size_t k = 0; k < nst; ++k) {
      double e1 = atom + L.mean_cell_b(p);
      double loss = L.step_density(p, h, !seg.on);
      if (!seg.on) atom += loss;
      double e2 = atom + L.mean_cell_b(p);
      integral += 0.5 * h * (e1 + e2);
    }
  }
  return integral;
}

}  // namespace harris
