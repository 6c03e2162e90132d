#pragma once

#include "ct/entropy.hpp"
#include "ct/geometry.hpp"

namespace ct {

// Moment-matching problem over a unit-mass reference form: tilt the
// reference measure by exp(sum_i p_i F_i), normalized through the log
// partition function, until the observable means hit their targets.
// Observable values are tabulated on the grid once; every later evaluation
// is a weighted sum over the same fixed node order.
class MaxEntProblem {
 public:
  // lam0n must have unit mass on `grid` (checked to 1e-8).
  MaxEntProblem(const ContactForm& lam0n, std::vector<ScalarField> obs, const Grid& grid);

  int n_obs() const { return static_cast<int>(obs_.size()); }
  const ContactForm& base() const { return lam0n_; }
  const Grid& grid() const { return grid_; }
  const std::vector<ScalarField>& observables() const { return obs_; }
  const Mat& table() const { return F_; }            // n_obs x nodes
  const Eigen::VectorXd& weights() const { return w_; }  // reference masses per node

  // Smallest eigenvalue of the observable Gram matrix in L2 of the
  // reference measure (constant prepended).
  double gram_min_eig() const;

 private:
  ContactForm lam0n_;
  std::vector<ScalarField> obs_;
  Grid grid_;
  Mat F_;
  Vec w_;
};

// Log partition function w(p) = log integral exp(sum p_i F_i) d mu0, its
// gradient q = E[F] under the tilted density, and the covariance of F.
// Exponents are max-shifted; Overflow if even the shift cannot tame them.
struct LogPartition {
  double w = 0.0;
  Vec q;
  Mat cov;
};
LogPartition log_partition(const MaxEntProblem& prob, const Vec& p);

// Entropy of the tilted measure relative to the reference:
// integral (-w + p.F) exp(-w + p.F) d mu0 = p.q - w.
double tilted_entropy(const MaxEntProblem& prob, const Vec& p, const LogPartition& lp);

struct MaxEntSolution {
  Vec p;
  double w = 0.0;
  Vec q;
  Mat covariance;
  double entropy = 0.0;
  int iterations = 0;
  ScalarField density;           // exp(-w + p.F), analytic gradient
  ContactForm equilibrium_form;  // density^(1/(n+1)) times the reference form
};

// Damped Newton on the dual objective w(p) - p.targets. NotAttainable when
// the residual cannot be pushed below newton_tol within the iteration and
// backtracking budgets, or the covariance loses rank.
MaxEntSolution solve_maxent(const MaxEntProblem& prob, const Vec& targets,
                            double newton_tol = 1e-10, double gram_tol = 1e-10);

// Same fixed point through a different route: an augmented damped Newton in
// the joint unknowns (w, p) on the residuals
//   r_0 = integral exp(-w + p.F) d mu0 - 1,
//   r_j = integral F_j exp(-w + p.F) d mu0 - target_j,
// so normalization is enforced as an equation instead of a definition.
MaxEntSolution equilibrium_with_volume(const MaxEntProblem& prob, const Vec& targets,
                                       double newton_tol = 1e-10, double gram_tol = 1e-10);

// One evaluated point of the moment-entropy correspondence.
struct EquilibriumPoint {
  Vec p;
  Vec q;
  double z = 0.0;  // entropy at p
};

// Discrete contact-integrality residuals along a path p_0, ..., p_M:
//   r_k = | z_k - z_(k-1) - pbar . (q_k - q_(k-1)) |,  pbar the midpoint,
// third order in the step for an exact correspondence. Also counts segments
// whose moment change runs against the parameter change (none for a
// positive-definite covariance).
struct SweepReport {
  std::vector<EquilibriumPoint> points;
  std::vector<double> residuals;  // size points-1
  double max_residual = 0.0;
  int nonmonotone_segments = 0;
};
SweepReport legendrian_sweep(const MaxEntProblem& prob, const std::vector<Vec>& path,
                             double p_step_max = 0.5);

}  // namespace ct
