#pragma once

#include <memory>
#include <string>
#include <vector>

#include "harris/math.hpp"

namespace harris {

enum class CorrKind { ExpPower, Indicator, Tabulated };
enum class NoiseClass { Classical, Nonclassical };

// Correlation function b(x) of a Harris flow: even, b(0)=1, nonincreasing on
// (0,inf) with b(x)->0 at infinity. Immutable after construction.
class CorrelationFunction {
public:
  static CorrelationFunction exp_power(double c, double alpha);
  static CorrelationFunction indicator();
  // table: sorted (x, b) pairs, x >= 0 ascending starting at x=0 with b=1.
  static CorrelationFunction tabulated(std::vector<double> x, std::vector<double> b);

  CorrKind kind() const { return kind_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }
  bool is_indicator() const { return kind_ == CorrKind::Indicator; }

  // b(|x|); exact 1 at x=0.
  double eval(double x) const;

  // 1 - b(|x|) without cancellation for small x.
  double one_minus(double x) const;

  // Holder exponent of 1-b at the origin. Exact for ExpPower, 0 for
  // Indicator, fitted from the table head for Tabulated.
  double origin_exponent() const;

  // Theorem 1.1 classifier: Classical iff the scale integral of (1-b)^{-1}
  // diverges at 0.
  NoiseClass classify() const;

  // Inverse-CDF draw from mu(dx) = -db(x) on [0,inf): mu([0,x]) = 1-b(x).
  double sample_mu(double u) const;

  std::string describe() const;

private:
  CorrelationFunction() = default;
  CorrKind kind_ = CorrKind::Indicator;
  double c_ = 1.0;
  double alpha_ = 0.5;
  std::shared_ptr<const Pchip> table_;  // shared: the object stays copyable
  double table_xmax_ = 0.0;
  double table_xmin_ = 0.0;
  double table_origin_exponent_ = 0.0;
};

}  // namespace harris
