#pragma once

#include <utility>
#include <vector>

#include "harris/chart.hpp"
#include "harris/corrfn.hpp"
#include "harris/schedule.hpp"

namespace harris {

// Finite-volume grid on [0, x_max] for a Sturm-Liouville operator
// d/dm d/ds with scale s(x) = x. Cell i is [edge[i], edge[i+1]] around
// node[i]; mass[i] is the speed-measure mass of the cell, computed exactly
// from the scale/speed chart.
struct Grid1D {
  std::vector<double> node;    // node[0] == 0
  std::vector<double> edge;    // size node.size()+1, edge[0] == 0
  std::vector<double> mass;    // speed measure of each cell
  std::vector<double> cell_b;  // speed-weighted cell average of b (L grids)

  std::size_t size() const { return node.size(); }
  // linear interpolation in the node coordinate
  double eval(const std::vector<double>& u, double x) const;
  // cell-overlap discretization of 1_{[0,y]}
  std::vector<double> indicator_leq(double y) const;
  // cell-overlap discretization of 1_{[x,inf)}
  std::vector<double> indicator_geq(double x) const;
};

// Grid for L = (1-b) d^2/dx^2 in the x coordinate: mass of a cell equals the
// xi-length of its image, and cell_b[i] = (dxi - dx)/dxi is the exact speed
// average of b over the cell.
Grid1D make_L_grid(const ScaleSpeedChart& chart, double h0 = 2e-4, double ratio = 1.04,
                   double h_max = 0.01, double x_max = 12.0);

// Grid for Lhat = a(xi)^{-1} d^2/dxi^2 in the xi coordinate: cell mass equals
// the x-length of its image.
Grid1D make_Lhat_grid(const ScaleSpeedChart& chart, double h0 = 2e-4, double ratio = 1.04,
                      double h_max = 0.01, double xi_max = 14.0);

enum class Boundary { Plus, Minus, Zero };

// Implicit-Euler semigroup for the finite-volume operator on a Grid1D.
// Plus: reflecting at 0. Zero: killed at 0. Minus is assembled from Zero via
// T^- f = T^0 f + f(0) (1 - T^0 1). The far boundary reflects.
class SemigroupSolver {
 public:
  explicit SemigroupSolver(Grid1D grid, double dt_step = 1e-4);

  const Grid1D& grid() const { return grid_; }
  double dt_step() const { return dt_step_; }

  std::vector<double> apply(Boundary bc, std::vector<double> f, double t) const;

  // One implicit step of duration h on a density w.r.t. the speed measure;
  // dirichlet kills at 0. Returns the speed-mass lost through the boundary.
  double step_density(std::vector<double>& p, double h, bool dirichlet) const;

  double total_mass(const std::vector<double>& p) const;
  double mean_cell_b(const std::vector<double>& p) const;  // sum p_i m_i cell_b_i

 private:
  void step(std::vector<double>& u, double h, bool dirichlet) const;

  Grid1D grid_;
  double dt_step_;
  std::vector<double> cond_;  // face conductances 1/(node[i+1]-node[i])
};

// |T_t^+ 1_{[0,y]}(x) - That_t^0 1_{[xi(x),inf)}(xi(y))| and the T^-/That^+
// counterpart, for one (t,x,y) triple.
std::pair<double, double> check_duality_single(const SemigroupSolver& L,
                                               const SemigroupSolver& Lhat,
                                               const ScaleSpeedChart& chart, double t,
                                               double x, double y);

// Alternating products: times 0 = t0 < t1 < ... < tm, left pattern
// T^+ , T^- , ... applied right-to-left over the gaps, dual pattern
// That^0, That^+, ... applied left-to-right. Returns (left, right) values.
std::pair<double, double> check_duality_alternating(const SemigroupSolver& L,
                                                    const SemigroupSolver& Lhat,
                                                    const ScaleSpeedChart& chart,
                                                    const std::vector<double>& times,
                                                    double x, double y);

// g_lambda(0,0) of the reflecting Lhat diffusion via a backward WKB-initialized
// integration of psi'' = lambda a(xi) psi; Psi(lambda) = 1/g_lambda(0,0).
double resolvent_at_origin(const ScaleSpeedChart& chart, double lambda);

// int_0^T E[b(xi(t))] dt for the (1-,F)-joining difference started at 0,
// computed by evolving the law (atom at 0 plus a density) on an L grid.
double expected_b_time_integral(const SemigroupSolver& L, const RegimeSchedule& F,
                                double T = 1.0);

}  // namespace harris
