#include "ct/fields.hpp"

#include <cmath>

#include "ct/errors.hpp"

namespace ct {

VectorField VectorField::zero(int dim) {
  VectorField z;
  z.value = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
  z.jac = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
  z.label = "0";
  z.identically_zero = true;
  return z;
}

ScalarField constant_field(double c, int dim) {
  ScalarField f;
  f.value = [c](const Vec&) { return c; };
  f.grad = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
  f.label = std::to_string(c);
  return f;
}

Vec gradient(const ScalarField& f, const Vec& x, const Vec& periods, const FdSteps& fd) {
  if (f.has_grad()) return f.grad(x);
  const Eigen::Index d = x.size();
  Vec g(d);
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double h = fd.grad_step * periods[i];
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  if (!g.allFinite()) throw DerivativeFailure("gradient stencil produced a non-finite value");
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, const Vec& periods,
                double step_fraction) {
  const Eigen::Index d = x.size();
  Mat J;
  Vec y = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = step_fraction * periods[j];
    y[j] = x[j] + 2.0 * h;
    Vec fpp = f(y);
    y[j] = x[j] + h;
    Vec fp = f(y);
    y[j] = x[j] - h;
    Vec fm = f(y);
    y[j] = x[j] - 2.0 * h;
    Vec fmm = f(y);
    y[j] = x[j];
    if (J.size() == 0) J.resize(fp.size(), d);
    // fourth-order central difference
    J.col(j) = (-fpp + 8.0 * fp - 8.0 * fm + fmm) / (12.0 * h);
  }
  if (!J.allFinite()) throw DerivativeFailure("jacobian stencil produced a non-finite value");
  return J;
}

Mat fd_jacobian2(const std::function<Vec(const Vec&)>& f, const Vec& x, const Vec& periods,
                 double step_fraction) {
  const Eigen::Index d = x.size();
  Mat J;
  Vec y = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = step_fraction * periods[j];
    y[j] = x[j] + h;
    Vec fp = f(y);
    y[j] = x[j] - h;
    Vec fm = f(y);
    y[j] = x[j];
    if (J.size() == 0) J.resize(fp.size(), d);
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  if (!J.allFinite()) throw DerivativeFailure("jacobian stencil produced a non-finite value");
  return J;
}

Mat jacobian(const VectorField& v, const Vec& x, const Vec& periods, const FdSteps& fd) {
  if (v.has_jac()) return v.jac(x);
  return fd_jacobian(v.value, x, periods, fd.jac_step);
}

Mat jacobian(const OneForm& a, const Vec& x, const Vec& periods, const FdSteps& fd) {
  if (a.has_jac()) return a.jac(x);
  return fd_jacobian(a.coeff, x, periods, fd.jac_step);
}

Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& x, const Vec& periods,
                const FdSteps& fd) {
  // Brackets against the literal zero section vanish identically; skipping
  // the stencils only skips evaluations that would all return exact zeros.
  if (X.identically_zero || Y.identically_zero) return Vec::Zero(x.size());
  return jacobian(Y, x, periods, fd) * X.value(x) - jacobian(X, x, periods, fd) * Y.value(x);
}

double divergence(const VectorField& Y, const ScalarField& rho, const Vec& x, const Vec& periods,
                  const FdSteps& fd) {
  if (Y.identically_zero) return 0.0;
  const Eigen::Index d = x.size();
  const double r0 = rho.value(x);
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw NonFiniteValue("divergence: reference density is not positive at the base point");
  double acc = 0.0;
  Vec y = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double h = fd.jac_step * periods[i];
    auto flux = [&](double xi) {
      y[i] = xi;
      double v = rho.value(y) * Y.value(y)[i];
      y[i] = x[i];
      return v;
    };
    const double fpp = flux(x[i] + 2.0 * h);
    const double fp = flux(x[i] + h);
    const double fm = flux(x[i] - h);
    const double fmm = flux(x[i] - 2.0 * h);
    acc += (-fpp + 8.0 * fp - 8.0 * fm + fmm) / (12.0 * h);
  }
  const double out = acc / r0;
  if (!std::isfinite(out)) throw DerivativeFailure("divergence stencil produced a non-finite value");
  return out;
}

Grid::Grid(Vec periods, std::vector<int> res) : periods_(std::move(periods)), res_(std::move(res)) {
  if (static_cast<std::size_t>(periods_.size()) != res_.size())
    throw ConfigInvalid("grid: periods and resolutions disagree in dimension");
  count_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t i = 0; i < res_.size(); ++i) {
    if (res_[i] < 16) throw ConfigInvalid("grid: resolution below 16 nodes per axis");
    count_ *= static_cast<std::size_t>(res_[i]);
    cell_volume_ *= periods_[static_cast<Eigen::Index>(i)] / res_[i];
  }
}

Vec Grid::node(std::size_t flat) const {
  const int d = dim();
  Vec x(d);
  for (int i = d - 1; i >= 0; --i) {
    const std::size_t r = static_cast<std::size_t>(res_[static_cast<std::size_t>(i)]);
    const std::size_t k = flat % r;
    flat /= r;
    x[i] = periods_[i] * (static_cast<double>(k) / static_cast<double>(r));
  }
  return x;
}

std::size_t Grid::nearest_node(const Vec& x) const {
  const int d = dim();
  std::size_t flat = 0;
  for (int i = 0; i < d; ++i) {
    const int r = res_[static_cast<std::size_t>(i)];
    const double u = wrap_coord(x[i], periods_[i]) / periods_[i] * r;
    int k = static_cast<int>(std::lround(u)) % r;
    if (k < 0) k += r;
    flat = flat * static_cast<std::size_t>(r) + static_cast<std::size_t>(k);
  }
  return flat;
}

Grid make_grid(const Vec& periods, int resolution) {
  return Grid(periods, std::vector<int>(static_cast<std::size_t>(periods.size()), resolution));
}

double integrate(const Grid& grid, const std::function<double(const Vec&)>& fn, int threads) {
  return integrate_indexed(
      grid, [&fn](std::size_t, const Vec& x) { return fn(x); }, threads);
}

double integrate_indexed(const Grid& grid,
                         const std::function<double(std::size_t, const Vec&)>& fn, int threads) {
  const double w = grid.cell_volume();
  const double total = deterministic_sum(
      grid.count(),
      [&](std::size_t i) {
        const double v = fn(i, grid.node(i));
        if (!std::isfinite(v)) throw NonFiniteValue("integrate: non-finite integrand at a node");
        return v;
      },
      threads);
  return w * total;
}

}  // namespace ct
