#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ct/numeric.hpp"

namespace ct {

// A scalar function on the torus. `grad` is optional: when present it is
// trusted as the analytic gradient, otherwise callers fall back to central
// differences. `label` survives into artifacts and error messages.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;  // may be empty
  std::string label;

  bool has_grad() const { return static_cast<bool>(grad); }
  double operator()(const Vec& x) const { return value(x); }
};

// A vector field (components in the coordinate frame). `jac` optional, same
// contract as ScalarField::grad with J(i,j) = d V_i / d x_j.
struct VectorField {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jac;  // may be empty
  std::string label;
  // Set only by the zero() factory: marks the mathematical zero section, so
  // derivative code may skip stencils whose every evaluation would be 0.
  bool identically_zero = false;

  bool has_jac() const { return static_cast<bool>(jac); }
  Vec operator()(const Vec& x) const { return value(x); }

  static VectorField zero(int dim);
};

// A 1-form given through its coefficient covector A, so that the form is
// sum_i A_i(x) dx_i. Same optional-Jacobian contract as VectorField.
struct OneForm {
  std::function<Vec(const Vec&)> coeff;
  std::function<Mat(const Vec&)> jac;  // J(i,j) = d A_i / d x_j, may be empty
  std::string label;

  bool has_jac() const { return static_cast<bool>(jac); }
};

ScalarField constant_field(double c, int dim);

// --- finite-difference calculus -------------------------------------------
//
// Steps are fractions of the per-axis period (see FdSteps). Gradients use a
// second-order central stencil, Jacobians and everything built on them a
// fourth-order one: brackets and divergences get differentiated again
// downstream, so they need the extra headroom.

Vec gradient(const ScalarField& f, const Vec& x, const Vec& periods, const FdSteps& fd);

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, const Vec& periods,
                double step_fraction);

// Second-order variant, for expensive maps (numerical flows) whose output
// does not get differentiated a second time.
Mat fd_jacobian2(const std::function<Vec(const Vec&)>& f, const Vec& x, const Vec& periods,
                 double step_fraction);

Mat jacobian(const VectorField& v, const Vec& x, const Vec& periods, const FdSteps& fd);
Mat jacobian(const OneForm& a, const Vec& x, const Vec& periods, const FdSteps& fd);

// [X, Y] = (DY) X - (DX) Y at x.
Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& x, const Vec& periods,
                const FdSteps& fd);

// Divergence of Y with respect to the measure rho(x) dx:
//   div_rho(Y) = (1/rho) sum_i d_i (rho Y_i),
// evaluated with fourth-order stencils applied to the products rho * Y_i.
double divergence(const VectorField& Y, const ScalarField& rho, const Vec& x, const Vec& periods,
                  const FdSteps& fd);

// --- grids and quadrature ---------------------------------------------------

// Uniform periodic grid: axis i carries res[i] nodes at k * period_i / res[i].
// For periodic smooth integrands this trapezoid rule converges spectrally.
// Flat indices run with the last axis fastest.
class Grid {
 public:
  Grid(Vec periods, std::vector<int> res);

  std::size_t count() const { return count_; }
  int dim() const { return static_cast<int>(res_.size()); }
  const Vec& periods() const { return periods_; }
  const std::vector<int>& res() const { return res_; }
  double cell_volume() const { return cell_volume_; }

  Vec node(std::size_t flat) const;

  // Flat index of the node nearest to x (coordinates wrapped first).
  std::size_t nearest_node(const Vec& x) const;

 private:
  Vec periods_;
  std::vector<int> res_;
  std::size_t count_;
  double cell_volume_;
};

Grid make_grid(const Vec& periods, int resolution);

// Integral of fn over the torus with the grid's trapezoid weights.
// Every node value must be finite; otherwise NonFiniteValue.
double integrate(const Grid& grid, const std::function<double(const Vec&)>& fn, int threads = 0);

// Same, but fn also receives the flat node index so callers can use
// precomputed per-node tables.
double integrate_indexed(const Grid& grid,
                         const std::function<double(std::size_t, const Vec&)>& fn,
                         int threads = 0);

}  // namespace ct
