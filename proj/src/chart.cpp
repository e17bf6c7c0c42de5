#include "harris/chart.hpp"

#include <algorithm>
#include <cmath>

#include "harris/errors.hpp"

namespace harris {

ScaleSpeedChart ScaleSpeedChart::build(const CorrelationFunction& f, double xi_max,
                                       std::size_t n_nodes) {
  return build_rho(f, 1.0, xi_max, n_nodes);
}

ScaleSpeedChart ScaleSpeedChart::build_rho(const CorrelationFunction& f, double rho,
                                           double xi_max, std::size_t n_nodes) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("chart: rho must be in [0,1]");
  if (!(xi_max > 0.0) || n_nodes < 64) throw ConfigError("chart: bad xi_max or n_nodes");
  ScaleSpeedChart ch;
  ch.corr_ = f;
  ch.rho_ = rho;
  ch.xi_cap_ = xi_max;
  if (f.is_indicator()) {
    // 1 - rho*b == 1 off the origin: identity chart, a == 1
    ch.identity_ = true;
    return ch;
  }
  if (rho == 1.0 && f.classify() == NoiseClass::Classical)
    throw ConfigError("scale coordinate degenerate: xi(0+) diverges");
  ch.identity_ = false;

  const double x0 = 1e-12;
  // local exponent kappa of u at the origin (alpha for rho=1, 0 for rho<1)
  const double u0 = ch.u(x0);
  const double kappa = std::log(ch.u(2.0 * x0) / u0) / std::log(2.0);
  if (!(kappa < 1.0)) throw ConfigError("scale coordinate degenerate: xi(0+) diverges");
  ch.head_exp_ = 1.0 - kappa;

  // geometric node layout; extend until xi_max is covered
  const double x_guess = std::max(1.5 * xi_max, 10.0);
  const double ratio = std::pow(x_guess / x0, 1.0 / double(n_nodes - 1));
  ch.x_nodes_.reserve(n_nodes + 256);
  ch.xi_nodes_.reserve(n_nodes + 256);
  double x = x0;
  double xi = x0 / (u0 * (1.0 - kappa));  // analytic power-law head on [0, x0]
  ch.x_nodes_.push_back(x);
  ch.xi_nodes_.push_back(xi);
  auto integrand = [&](double y) { return 1.0 / ch.u(y); };
  while (xi < xi_max || ch.x_nodes_.size() < n_nodes) {
    const double xn = x * ratio;
    xi += gauss16(integrand, x, xn);
    x = xn;
    ch.x_nodes_.push_back(x);
    ch.xi_nodes_.push_back(xi);
    if (ch.x_nodes_.size() > 8 * n_nodes)
      throw NumericalError("chart: xi_max not reached; correlation decays too slowly");
  }
  ch.lx_.resize(ch.x_nodes_.size());
  ch.lxi_.resize(ch.x_nodes_.size());
  for (std::size_t i = 0; i < ch.x_nodes_.size(); ++i) {
    ch.lx_[i] = std::log(ch.x_nodes_[i]);
    ch.lxi_[i] = std::log(ch.xi_nodes_[i]);
  }
  ch.tail_slope_ = 1.0 / ch.u(ch.x_nodes_.back());
  return ch;
}

double ScaleSpeedChart::xi_of_x(double x) const {
  if (identity_) return x;
  if (x <= 0.0) return 0.0;
  if (x <= x_nodes_.front())
    return xi_nodes_.front() * std::pow(x / x_nodes_.front(), head_exp_);
  if (x >= x_nodes_.back())
    return xi_nodes_.back() + tail_slope_ * (x - x_nodes_.back());
  const double lx = std::log(x);
  const std::size_t i = std::upper_bound(lx_.begin(), lx_.end(), lx) - lx_.begin() - 1;
  const double w = (lx - lx_[i]) / (lx_[i + 1] - lx_[i]);
  return std::exp(lxi_[i] * (1.0 - w) + lxi_[i + 1] * w);
}

double ScaleSpeedChart::x_of_xi(double xi) const {
  if (identity_) return xi;
  if (xi <= 0.0) return 0.0;
  if (xi <= xi_nodes_.front())
    return x_nodes_.front() * std::pow(xi / xi_nodes_.front(), 1.0 / head_exp_);
  if (xi >= xi_nodes_.back())
    return x_nodes_.back() + (xi - xi_nodes_.back()) / tail_slope_;
  const double lxi = std::log(xi);
  const std::size_t i = std::upper_bound(lxi_.begin(), lxi_.end(), lxi) - lxi_.begin() - 1;
  const double w = (lxi - lxi_[i]) / (lxi_[i + 1] - lxi_[i]);
  return std::exp(lx_[i] * (1.0 - w) + lx_[i + 1] * w);
}

double ScaleSpeedChart::a_of_xi(double xi) const {
  if (identity_) return 1.0;
  if (xi <= 0.0) return 0.0;
  return u(x_of_xi(xi));
}

double ScaleSpeedChart::local_exponent_at_zero() const {
  if (identity_) return 0.0;
  std::vector<double> lx, la;
  for (double xi = 1e-7; xi <= 1.0001e-4; xi *= std::pow(10.0, 0.25)) {
    lx.push_back(std::log(xi));
    la.push_back(std::log(a_of_xi(xi)));
  }
  return linear_fit(lx, la).slope;
}

FastScale::FastScale(const std::function<double(double)>& fn, double head_exp, double cap) {
  identity_ = false;
  head_exp_ = head_exp;
  cap_ = cap;
  head_ = 1e-9;
  mid_ = 1e-2;
  f_head_ = fn(head_);
  lhead_ = std::log(head_);
  const std::size_t nl = 768;
  const double dl = (std::log(mid_) - lhead_) / double(nl - 1);
  inv_dl_ = 1.0 / dl;
  tab_l_.resize(nl + 1);
  for (std::size_t i = 0; i < nl; ++i) tab_l_[i] = fn(std::exp(lhead_ + dl * double(i)));
  tab_l_[nl] = tab_l_[nl - 1];
  const double du = 5e-4;
  inv_du_ = 1.0 / du;
  const std::size_t nu = static_cast<std::size_t>((cap_ - mid_) / du) + 2;
  tab_u_.resize(nu + 1);
  for (std::size_t i = 0; i <= nu; ++i) tab_u_[i] = fn(mid_ + du * double(i));
  cap_ = mid_ + du * double(nu - 1);
  tab_u_.resize(nu);
  // derivative at the cap from the last table interval
  tail_slope_ = (tab_u_[nu - 1] - tab_u_[nu - 2]) * inv_du_;
}

ClockScales make_clock_scales(const ScaleSpeedChart& chart) {
  ClockScales cs;
  if (chart.identity()) return cs;  // both identity
  const double cap_x = std::min(chart.x_max(), chart.x_of_xi(chart.xi_max()));
  const double cap_xi = chart.xi_max();
  cs.to_xi = FastScale([&](double x) { return chart.xi_of_x(x); }, chart.head_exponent(),
                       std::max(cap_x, 1.0));
  cs.to_x = FastScale([&](double xi) { return chart.x_of_xi(xi); }, 1.0 / chart.head_exponent(),
                      std::max(cap_xi, 1.0));
  return cs;
}

}  // namespace harris
