#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ct {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Numerical knobs shared across modules. Values are the library defaults;
// the CLI layer may override any of them from a config file.
struct Tolerances {
  double lin_tol = 1e-8;        // frame solve residual (analytic derivatives)
  double lin_tol_fd = 1e-6;     // frame solve residual (finite differences)
  double degeneracy_tol = 1e-12;  // |top-wedge density| must exceed this
  double density_floor = 1e-300;  // densities below this are treated as 0
  double conf_tol = 1e-5;       // contact-hyperplane defect of a pullback
  double newton_tol = 1e-10;    // sup-norm of the moment residual
  double gram_tol = 1e-10;      // smallest acceptable Gram eigenvalue
};

// Finite-difference step sizes, expressed as fractions of the per-axis
// period. grad_step drives second-order central stencils for scalar
// gradients; jac_step drives fourth-order stencils for Jacobians and
// Lie brackets, where the extra order pays for the nested use.
struct FdSteps {
  double grad_step = 1e-5;
  double jac_step = 1e-4;
};

// Canonicalize one coordinate into [0, period).
double wrap_coord(double x, double period);

// Canonicalize all coordinates into [0, period_i).
Vec wrap_point(const Vec& x, const Vec& periods);

// Distance between two angles on a circle of the given circumference.
double circle_distance(double a, double b, double period);

// Euclidean distance on the flat torus with the given periods.
double torus_distance(const Vec& a, const Vec& b, const Vec& periods);

// Sum of v[0..n) with a fixed pairwise reduction tree. The tree depends only
// on n, so the result is reproducible bit for bit.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

// Number of worker threads: the CONTACT_THERMO_THREADS environment variable
// if set and positive, else `configured` if positive, else the hardware
// concurrency. Always at least 1.
int worker_count(int configured = 0);

// Evaluate fn(i) for i in [0, count) and sum the results. Work is split into
// fixed-size chunks; each chunk is pairwise-summed on its own, and the chunk
// totals are pairwise-combined in index order. The summation tree therefore
// never depends on the thread count or on scheduling, only on `count`, so
// runs with different worker counts agree exactly. Exceptions thrown by fn
// are rethrown on the calling thread.
double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& fn,
                         int threads = 0);

// Mersenne twister wrapper used everywhere randomness is needed, so that a
// seed in the config pins every sample the tool draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
  }

  // Uniform point in the box [0, periods_i).
  Vec point(const Vec& periods) {
    Vec x(periods.size());
    for (Eigen::Index i = 0; i < periods.size(); ++i) x[i] = uniform(0.0, periods[i]);
    return x;
  }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ct
