#include "harris/corrfn.hpp"

#include <cmath>
#include <sstream>

#include "harris/errors.hpp"

namespace harris {

CorrelationFunction CorrelationFunction::exp_power(double c, double alpha) {
  if (!(c > 0.0)) throw ConfigError("exp_power: c must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("exp_power: alpha must be in (0,1]");
  CorrelationFunction f;
  f.kind_ = CorrKind::ExpPower;
  f.c_ = c;
  f.alpha_ = alpha;
  return f;
}

CorrelationFunction CorrelationFunction::indicator() {
  CorrelationFunction f;
  f.kind_ = CorrKind::Indicator;
  return f;
}

CorrelationFunction CorrelationFunction::tabulated(std::vector<double> x, std::vector<double> b) {
  if (x.size() != b.size() || x.size() < 3)
    throw ConfigError("tabulated: need >= 3 (x, b) pairs");
  if (x.front() != 0.0 || b.front() != 1.0)
    throw ConfigError("tabulated: table must start at (0, 1)");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw ConfigError("tabulated: x must be strictly increasing");
    if (b[i] > b[i - 1]) throw ConfigError("tabulated: b must be nonincreasing");
    if (b[i] < 0.0 || b[i] > 1.0) throw ConfigError("tabulated: b must lie in [0,1]");
  }
  CorrelationFunction f;
  f.kind_ = CorrKind::Tabulated;
  f.table_xmax_ = x.back();
  f.table_xmin_ = x[1];
  // origin exponent from the head of the table (used for chart tails)
  double se = 0.0;
  int ne = 0;
  for (std::size_t i = 1; i + 1 < x.size() && i <= 4; ++i) {
    const double d0 = 1.0 - b[i], d1 = 1.0 - b[i + 1];
    if (d0 > 0.0 && d1 > d0) {
      se += std::log(d1 / d0) / std::log(x[i + 1] / x[i]);
      ++ne;
    }
  }
  f.table_origin_exponent_ = ne > 0 ? se / ne : 1.0;
  f.table_ = std::make_shared<Pchip>(std::move(x), std::move(b));
  return f;
}

double CorrelationFunction::eval(double x) const {
  x = std::fabs(x);
  switch (kind_) {
    case CorrKind::Indicator:
      return x == 0.0 ? 1.0 : 0.0;
    case CorrKind::ExpPower:
      return x == 0.0 ? 1.0 : std::exp(-c_ * std::pow(x, alpha_));
    case CorrKind::Tabulated:
      if (x == 0.0) return 1.0;
      if (x >= table_xmax_) return (*table_)(table_xmax_);
      return (*table_)(x);
  }
  return 0.0;
}

double CorrelationFunction::one_minus(double x) const {
  x = std::fabs(x);
  if (x == 0.0) return 0.0;
  // expm1 keeps full precision where 1 - exp(-c x^a) would round to 0
  if (kind_ == CorrKind::ExpPower) return -std::expm1(-c_ * std::pow(x, alpha_));
  return 1.0 - eval(x);
}

double CorrelationFunction::origin_exponent() const {
  switch (kind_) {
    case CorrKind::Indicator:
      return 0.0;
    case CorrKind::ExpPower:
      return alpha_;
    case CorrKind::Tabulated:
      return table_origin_exponent_;
  }
  return 0.0;
}

NoiseClass CorrelationFunction::classify() const {
  if (kind_ == CorrKind::Indicator) return NoiseClass::Nonclassical;
  if (kind_ == CorrKind::ExpPower)
    return alpha_ >= 1.0 ? NoiseClass::Classical : NoiseClass::Nonclassical;

  // Tabulated: dyadic-shell quadrature of (1-b)^{-1} toward 0. Shell k covers
  // [2^{-k-1}, 2^{-k}]; if 1-b ~ x^a near 0 the shell contributions form a
  // geometric sequence with ratio 2^{a-1}, so a stabilized ratio below 1
  // certifies a convergent integral (Nonclassical) and a ratio at 1 a
  // divergent one (Classical).
  const double x_head = table_xmin_;  // smallest positive table node
  double prev = -1.0;
  std::vector<double> ratios;
  for (int k = 0; k < 1200; ++k) {
    const double hi = std::ldexp(1.0, -k);
    const double lo = 0.5 * hi;
    if (lo < x_head)
      throw NumericalError("classify_noise: table resolution near 0 is insufficient");
    bool flat = false;
    const double contrib = gauss16(
        [&](double x) {
          const double d = 1.0 - eval(x);
          if (d <= 0.0) {
            flat = true;
            return 0.0;
          }
          return 1.0 / d;
        },
        lo, hi);
    if (flat) return NoiseClass::Classical;  // 1-b vanishes on a shell
    if (prev > 0.0) ratios.push_back(contrib / prev);
    prev = contrib;
    if (ratios.size() >= 8) {
      const auto* tail = &ratios[ratios.size() - 8];
      double rmin = tail[0], rmax = tail[0], rsum = 0.0;
      for (int i = 0; i < 8; ++i) {
        rmin = std::min(rmin, tail[i]);
        rmax = std::max(rmax, tail[i]);
        rsum += tail[i];
      }
      if (rmax - rmin < 0.005)
        return rsum / 8.0 >= 0.995 ? NoiseClass::Classical : NoiseClass::Nonclassical;
    }
  }
  throw NumericalError("classify_noise: shell iteration did not decide");
}

double CorrelationFunction::sample_mu(double u) const {
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  switch (kind_) {
    case CorrKind::Indicator:
      return 0.0;
    case CorrKind::ExpPower: {
      if (u == 0.0) return 0.0;
      const double t = -std::log1p(-u) / c_;  // x^alpha
      return std::pow(t, 1.0 / alpha_);
    }
    case CorrKind::Tabulated: {
      const double target = 1.0 - u;
      if (target >= 1.0) return 0.0;
      if (target <= eval(table_xmax_)) return table_xmax_;
      double lo = 0.0, hi = table_xmax_;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) > target)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

std::string CorrelationFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case CorrKind::Indicator:
      os << "indicator";
      break;
    case CorrKind::ExpPower:
      os << "exp_power(c=" << c_ << ",alpha=" << alpha_ << ")";
      break;
    case CorrKind::Tabulated:
      os << "tabulated(xmax=" << table_xmax_ << ")";
      break;
  }
  return os.str();
}

}  // namespace harris
