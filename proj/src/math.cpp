#include "harris/math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "harris/errors.hpp"

namespace harris {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ConfigError("linear_fit: need >= 2 paired points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / double(n - 2) / sxx);
  }
  return fit;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // advance past all points at the current value on both sides, so the
    // ECDFs are compared only where they are right-continuous (tie-safe)
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
  }
  return d;
}

double ks_distance_cdf(std::vector<double> sample, const std::vector<double>& cdf_at_sample) {
  if (sample.empty()) throw ConfigError("empty sample");
  // cdf_at_sample must correspond to the sorted sample
  const std::size_t n = sample.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf_at_sample[i];
    d = std::max(d, std::fabs(f - double(i) / n));
    d = std::max(d, std::fabs(f - double(i + 1) / n));
  }
  return d;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw ConfigError("pchip: need >= 2 nodes");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw ConfigError("pchip: nodes must be strictly increasing");
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] > 0.0) {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
  // one-sided endpoint derivatives, clipped to preserve monotonicity
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0)
      d = 0.0;
    else if (d0 * d1 <= 0.0 && std::fabs(d) > 3.0 * std::fabs(d0))
      d = 3.0 * d0;
    return d;
  };
  if (n == 2) {
    d_[0] = d_[1] = del[0];
  } else {
    d_[0] = endpoint(h[0], h[1], del[0], del[1]);
    d_[n - 1] = endpoint(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  }
}

double Pchip::operator()(double x) const {
  const std::size_t n = x_.size();
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

namespace {

// project v onto { m >= 0, sum m <= 1 }
void project_capped_simplex(std::vector<double>& v) {
  double s = 0.0;
  for (double& m : v) {
    if (m < 0.0) m = 0.0;
    s += m;
  }
  if (s <= 1.0) return;
  // project onto the simplex {m >= 0, sum = 1}
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / double(k + 1);
    if (k + 1 == u.size() || u[k + 1] <= t) {
      theta = t;
      // ensure theta taken at the last k satisfying u[k] > t
      if (u[k] > t) {
        theta = t;
        break;
      }
    }
  }
  for (double& m : v) m = std::max(0.0, m - theta);
}

}  // namespace

std::vector<double> nnls_capped(const std::vector<double>& A, const std::vector<double>& g,
                                std::size_t n, std::size_t p) {
  if (A.size() != n * p || g.size() != n) throw ConfigError("nnls_capped: shape mismatch");
  // Lipschitz constant of the gradient: bound by trace of A^T A
  double lip = 0.0;
  for (double a : A) lip += a * a;
  if (lip <= 0.0) lip = 1.0;
  std::vector<double> m(p, 1.0 / double(p + 1));
  std::vector<double> grad(p), r(n);
  const double step = 1.0 / lip;
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j) s += A[i * p + j] * m[j];
      r[i] = s - g[i];
    }
    double gn = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += A[i * p + j] * r[i];
      grad[j] = s;
      gn += s * s;
    }
    for (std::size_t j = 0; j < p; ++j) m[j] -= step * grad[j];
    project_capped_simplex(m);
    if (gn < 1e-24 * lip * lip) break;
  }
  return m;
}

double normal_matrix_condition(const std::vector<double>& A, std::size_t n, std::size_t p) {
  // B = A^T A (p x p); power iteration for lambda_max, inverse iteration via
  // Gaussian elimination for lambda_min.
  std::vector<double> B(p * p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) B[j * p + k] += A[i * p + j] * A[i * p + k];
  auto matvec = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += B[j * p + k] * v[k];
      out[j] = s;
    }
  };
  std::vector<double> v(p, 1.0), w(p);
  double lmax = 0.0;
  for (int it = 0; it < 200; ++it) {
    matvec(v, w);
    double nm = 0.0;
    for (double x : w) nm += x * x;
    nm = std::sqrt(nm);
    if (nm == 0.0) return std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p; ++j) v[j] = w[j] / nm;
    lmax = nm;
  }
  // smallest eigenvalue via inverse power iteration with dense LU each call
  auto solve = [&](std::vector<double> M, std::vector<double> rhs) {
    const std::size_t m = p;
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t piv = c;
      for (std::size_t r2 = c + 1; r2 < m; ++r2)
        if (std::fabs(M[r2 * m + c]) > std::fabs(M[piv * m + c])) piv = r2;
      if (std::fabs(M[piv * m + c]) < 1e-300) throw NumericalError("singular normal matrix");
      if (piv != c) {
        for (std::size_t k = 0; k < m; ++k) std::swap(M[c * m + k], M[piv * m + k]);
        std::swap(rhs[c], rhs[piv]);
      }
      for (std::size_t r2 = c + 1; r2 < m; ++r2) {
        const double f = M[r2 * m + c] / M[c * m + c];
        for (std::size_t k = c; k < m; ++k) M[r2 * m + k] -= f * M[c * m + k];
        rhs[r2] -= f * rhs[c];
      }
    }
    std::vector<double> sol(m);
    for (std::size_t c = m; c-- > 0;) {
      double s = rhs[c];
      for (std::size_t k = c + 1; k < m; ++k) s -= M[c * m + k] * sol[k];
      sol[c] = s / M[c * m + c];
    }
    return sol;
  };
  std::vector<double> u(p, 1.0);
  double lmin_inv = 0.0;
  for (int it = 0; it < 100; ++it) {
    auto s = solve(B, u);
    double nm = 0.0;
    for (double x : s) nm += x * x;
    nm = std::sqrt(nm);
    for (std::size_t j = 0; j < p; ++j) u[j] = s[j] / nm;
    lmin_inv = nm;
  }
  return lmax * lmin_inv;
}

}  // namespace harris
