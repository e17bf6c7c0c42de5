#pragma once

#include <cstddef>
#include <vector>

namespace harris {

// Standard normal CDF.
double norm_cdf(double x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Ordinary least squares y = a + b x with the usual slope standard error.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Two-sample Kolmogorov-Smirnov distance. Both inputs are sorted in place.
double ks_distance(std::vector<double> a, std::vector<double> b);

// One-sample KS distance of a sorted sample against a CDF given at the sample points.
double ks_distance_cdf(std::vector<double> sample, const std::vector<double>& cdf_at_sample);

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant on strictly
// increasing nodes. Preserves monotonicity of the data.
class Pchip {
public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }

private:
  std::vector<double> x_, y_, d_;  // nodes, values, node derivatives
};

// 16-point Gauss-Legendre quadrature of f over [a, b].
template <typename F>
double gauss16(F&& f, double a, double b) {
  static const double xs[8] = {
      0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
      0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static const double ws[8] = {
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    s += ws[i] * (f(c - h * xs[i]) + f(c + h * xs[i]));
  return s * h;
}

// Nonnegative least squares min ||A m - g|| subject to m >= 0 and sum(m) <= 1,
// by projected gradient descent. A is row-major n x p. Returns m (size p).
std::vector<double> nnls_capped(const std::vector<double>& A, const std::vector<double>& g,
                                std::size_t n, std::size_t p);

// Condition number estimate of A^T A (ratio of extreme eigenvalues, power iteration).
double normal_matrix_condition(const std::vector<double>& A, std::size_t n, std::size_t p);

}  // namespace harris
