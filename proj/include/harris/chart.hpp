#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "harris/corrfn.hpp"

namespace harris {

// Scale chart of a one-dimensional diffusion with canonical scale s(x)=x and
// speed density u(x)^{-1}, u(x) = 1 - rho*b(x). The chart tabulates
//   xi(x) = int_0^x u(y)^{-1} dy
// on a geometric grid, with power-law head below the first node and a linear
// tail above the last. xi_of_x and x_of_xi are piecewise linear in log-log
// coordinates over the same node set, so the round trip is exact up to
// floating point.
class ScaleSpeedChart {
public:
  // rho = 1 gives the L / Lhat chart (speed (1-b)^{-1}); requires a
  // Nonclassical correlation function so that xi(0+) = 0 is finite.
  static ScaleSpeedChart build(const CorrelationFunction& f, double xi_max = 100.0,
                               std::size_t n_nodes = 4096);
  static ScaleSpeedChart build_rho(const CorrelationFunction& f, double rho,
                                   double xi_max = 100.0, std::size_t n_nodes = 4096);

  bool identity() const { return identity_; }
  double rho() const { return rho_; }
  const CorrelationFunction& corr() const { return corr_; }

  double xi_of_x(double x) const;
  double x_of_xi(double xi) const;
  // speed density a(xi) = u(x(xi)); a == 1 for the identity chart.
  double a_of_xi(double xi) const;

  double x_max() const { return identity_ ? xi_cap_ : x_nodes_.back(); }
  double xi_max() const { return identity_ ? xi_cap_ : xi_nodes_.back(); }

  // Local exponent of a(xi) near 0 fitted by log-log regression; equals
  // alpha/(1-alpha) for exp-power correlation functions.
  double local_exponent_at_zero() const;

  double head_exponent() const { return head_exp_; }  // xi ~ x^{head_exp_} at 0

private:
  ScaleSpeedChart() = default;
  double u(double x) const {
    return rho_ == 1.0 ? corr_.one_minus(x) : 1.0 - rho_ * corr_.eval(x);
  }

  CorrelationFunction corr_ = CorrelationFunction::indicator();
  double rho_ = 1.0;
  bool identity_ = true;
  double xi_cap_ = 100.0;
  std::vector<double> x_nodes_, xi_nodes_;  // strictly increasing, same length
  std::vector<double> lx_, lxi_;            // logs of the above
  double head_exp_ = 1.0;                   // d ln xi / d ln x below first node
  double tail_slope_ = 1.0;                 // d xi / d x above last node
};

// Piecewise-linear lookup of a monotone map F with F(0)=0, power-law head and
// linear tail, laid out for the simulation inner loops. Also provides the
// signed odd extension used by clock secants.
class FastScale {
public:
  FastScale() = default;  // identity

  // fn must be increasing with fn(0)=0; head_exp is the power-law exponent
  // of fn at 0; cap ends the table, beyond it fn is extended linearly.
  FastScale(const std::function<double(double)>& fn, double head_exp, double cap);

  static FastScale identity() { return FastScale(); }

  bool is_identity() const { return identity_; }
  // true if the derivative of fn blows up at 0 (head_exp < 1); the sde loop
  // then refines its step near the origin.
  bool singular_at_zero() const { return head_exp_ < 1.0 - 1e-9; }

  double eval(double y) const {
    if (identity_) return y;
    if (y <= 0.0) return 0.0;
    if (y >= cap_) return tab_u_.back() + tail_slope_ * (y - cap_);
    if (y >= mid_) {
      const double t = (y - mid_) * inv_du_;
      const std::size_t i = static_cast<std::size_t>(t);
      const double w = t - double(i);
      return tab_u_[i] * (1.0 - w) + tab_u_[i + 1] * w;
    }
    if (y >= head_) {
      const double t = (std::log(y) - lhead_) * inv_dl_;
      const std::size_t i = static_cast<std::size_t>(t);
      const double w = t - double(i);
      return tab_l_[i] * (1.0 - w) + tab_l_[i + 1] * w;
    }
    return f_head_ * std::pow(y / head_, head_exp_);
  }

  // odd extension: sign(y) * eval(|y|)
  double eval_signed(double y) const { return y >= 0.0 ? eval(y) : -eval(-y); }

  // secant slope (F(y2)-F(y1))/(y2-y1) of the odd extension, with a centered
  // difference fallback for nearly equal arguments.
  double secant(double y1, double y2) const {
    const double dy = y2 - y1;
    if (std::fabs(dy) > 1e-12) return (eval_signed(y2) - eval_signed(y1)) / dy;
    const double ym = std::fabs(0.5 * (y1 + y2));
    const double e = 1e-9 + 1e-6 * ym;
    return (eval(ym + e) - eval(ym > e ? ym - e : 0.0)) / (ym > e ? 2.0 * e : ym + e);
  }

private:
  bool identity_ = true;
  double head_ = 1e-9, mid_ = 1e-2, cap_ = 50.0;
  double lhead_ = 0.0, inv_dl_ = 0.0, inv_du_ = 0.0;
  double head_exp_ = 1.0, f_head_ = 1e-9, tail_slope_ = 1.0;
  std::vector<double> tab_l_, tab_u_;
};

// Fast maps derived from a chart for the simulation loops.
struct ClockScales {
  FastScale to_xi;  // x -> xi; clock integrand of the L-type diffusion
  FastScale to_x;   // xi -> x; clock integrand of the Lhat diffusion
};

ClockScales make_clock_scales(const ScaleSpeedChart& chart);

}  // namespace harris
