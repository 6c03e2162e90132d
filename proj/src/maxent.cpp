#include "ct/maxent.hpp"

#include <cmath>

#include "ct/errors.hpp"

namespace ct {

namespace {
constexpr double kExpGuard = 700.0;  // |exponent| ceiling after max-shift
constexpr int kMaxIter = 200;
constexpr int kMaxBacktrack = 60;
}  // namespace

MaxEntProblem::MaxEntProblem(const ContactForm& lam0n, std::vector<ScalarField> obs,
                             const Grid& grid)
    : lam0n_(lam0n), obs_(std::move(obs)), grid_(grid) {
  // An empty list is legal: the problem degenerates to pure normalization
  // (w = 0, equilibrium = the reference measure).
  const std::size_t K = grid_.count();
  const int N = static_cast<int>(obs_.size());
  F_.resize(N, static_cast<Eigen::Index>(K));
  w_.resize(static_cast<Eigen::Index>(K));
  const double cell = grid_.cell_volume();
  for (std::size_t i = 0; i < K; ++i) {
    const Vec x = grid_.node(i);
    w_[static_cast<Eigen::Index>(i)] = lam0n_.density(x) * cell;
    for (int j = 0; j < N; ++j) {
      const double v = obs_[static_cast<std::size_t>(j)].value(x);
      if (!std::isfinite(v)) throw NonFiniteValue("maxent: observable not finite at a node");
      F_(j, static_cast<Eigen::Index>(i)) = v;
    }
  }
  const double total = w_.sum();
  if (std::fabs(total - 1.0) > 1e-8)
    throw ConfigInvalid("maxent: reference form does not have unit mass on this grid");
}

double MaxEntProblem::gram_min_eig() const {
  const int N = n_obs();
  Mat G = Mat::Zero(N + 1, N + 1);
  // Row/column 0 is the constant observable.
  G(0, 0) = w_.sum();
  for (int i = 0; i < N; ++i) {
    const double fi = F_.row(i).dot(w_);
    G(0, i + 1) = fi;
    G(i + 1, 0) = fi;
    for (int j = i; j < N; ++j) {
      const double v = (F_.row(i).array() * F_.row(j).array() * w_.transpose().array()).sum();
      G(i + 1, j + 1) = v;
      G(j + 1, i + 1) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  return es.eigenvalues().minCoeff();
}

LogPartition log_partition(const MaxEntProblem& prob, const Vec& p) {
  if (p.size() != prob.n_obs()) throw ConfigInvalid("log_partition: wrong parameter dimension");
  const Mat& F = prob.table();
  const Vec& w = prob.weights();

  const Vec s = F.transpose() * p;  // exponents per node
  const double m = s.size() ? s.maxCoeff() : 0.0;
  if (!std::isfinite(m) || std::fabs(m) > kExpGuard)
    throw Overflow("log_partition: exponent escapes the guarded range");

  // Pairwise sums keep the evaluation noise at ulp scale; the line search
  // below compares objective values whose true differences shrink to zero,
  // so a linear-error accumulation over the nodes would drown them.
  const Eigen::ArrayXd r = (s.array() - m).exp() * w.array();
  const double Z = pairwise_sum(r.data(), static_cast<std::size_t>(r.size()));
  if (!(Z > 0.0) || !std::isfinite(Z))
    throw NonFiniteValue("log_partition: degenerate shifted partition sum");

  LogPartition out;
  out.w = m + std::log(Z);
  out.q.resize(prob.n_obs());
  for (int j = 0; j < prob.n_obs(); ++j) {
    const Eigen::ArrayXd t = F.row(j).transpose().array() * r;
    out.q[j] = pairwise_sum(t.data(), static_cast<std::size_t>(t.size())) / Z;
  }
  Mat second = F * r.matrix().asDiagonal() * F.transpose() / Z;
  out.cov = second - out.q * out.q.transpose();
  return out;
}

double tilted_entropy(const MaxEntProblem& prob, const Vec& p, const LogPartition& lp) {
  const Mat& F = prob.table();
  const Vec& w = prob.weights();
  const Vec s = F.transpose() * p;
  // (s_i - w) stays bounded: s_i - w <= s_i - max(s) <= 0 plus log of the
  // shifted sum, so the exponential cannot overflow.
  const Eigen::ArrayXd e = (s.array() - lp.w).exp() * w.array();
  const Eigen::ArrayXd t = (s.array() - lp.w) * e;
  return pairwise_sum(t.data(), static_cast<std::size_t>(t.size()));
}

namespace {

MaxEntSolution finish_solution(const MaxEntProblem& prob, const Vec& p, double w_val,
                               const LogPartition& lp, int iters) {
  // exp(-w + p.F) with analytic gradient density * sum p_i grad F_i.
  const std::vector<ScalarField> obs = prob.observables();
  const Vec pc = p;
  const double wc = w_val;
  bool all_grads = true;
  for (const auto& f : obs) all_grads = all_grads && f.has_grad();
  ScalarField dens;
  dens.value = [obs, pc, wc](const Vec& x) {
    double s = -wc;
    for (int i = 0; i < pc.size(); ++i) s += pc[i] * obs[static_cast<std::size_t>(i)].value(x);
    return std::exp(s);
  };
  if (all_grads) {
    auto val = dens.value;
    const int dim = prob.base().dim();
    dens.grad = [obs, pc, val, dim](const Vec& x) {
      Vec g = Vec::Zero(dim);
      for (int i = 0; i < pc.size(); ++i) g += pc[i] * obs[static_cast<std::size_t>(i)].grad(x);
      return Vec(val(x) * g);
    };
  }
  dens.label = "equilibrium density";

  // Equilibrium form: density^(1/(n+1)) scaling on top of the reference.
  const int n = prob.base().n();
  const ScalarField base_f = prob.base().scale_factor();
  ScalarField f;
  const double inv = 1.0 / (n + 1);
  auto bval = base_f.value;
  f.value = [obs, pc, wc, inv, bval](const Vec& x) {
    double s = -wc;
    for (int i = 0; i < pc.size(); ++i) s += pc[i] * obs[static_cast<std::size_t>(i)].value(x);
    return std::exp(inv * s) * bval(x);
  };
  if (all_grads && base_f.has_grad()) {
    auto bgrad = base_f.grad;
    const int dim = prob.base().dim();
    f.grad = [obs, pc, wc, inv, bval, bgrad, dim](const Vec& x) {
      double s = -wc;
      Vec g = Vec::Zero(dim);
      for (int i = 0; i < pc.size(); ++i) {
        s += pc[i] * obs[static_cast<std::size_t>(i)].value(x);
        g += pc[i] * obs[static_cast<std::size_t>(i)].grad(x);
      }
      const double e = std::exp(inv * s);
      return Vec(e * inv * g * bval(x) + e * bgrad(x));
    };
  }
  f.label = "equilibrium scale";
  ContactForm eq = ContactForm::scale(prob.base().model(), f)
                       .with_tolerances(prob.base().tol())
                       .with_fd(prob.base().fd());
  return MaxEntSolution{p,
                        w_val,
                        lp.q,
                        lp.cov,
                        tilted_entropy(prob, p, lp),
                        iters,
                        dens,
                        std::move(eq)};
}

void check_gram(const MaxEntProblem& prob, double gram_tol) {
  const double g = prob.gram_min_eig();
  if (!(g > gram_tol))
    throw NotAttainable("maxent: observables are linearly dependent (Gram eigenvalue " +
                        std::to_string(g) + ")");
}

}  // namespace

MaxEntSolution solve_maxent(const MaxEntProblem& prob, const Vec& targets, double newton_tol,
                            double gram_tol) {
  if (targets.size() != prob.n_obs())
    throw ConfigInvalid("maxent: target vector has the wrong dimension");
  check_gram(prob, gram_tol);

  Vec p = Vec::Zero(prob.n_obs());
  LogPartition lp = log_partition(prob, p);
  double phi = lp.w - p.dot(targets);  // dual objective, gradient q - targets

  for (int it = 1; it <= kMaxIter; ++it) {
    const Vec r = lp.q - targets;
    const double res_now = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    if (res_now < newton_tol) return finish_solution(prob, p, lp.w, lp, it - 1);

    Eigen::LDLT<Mat> ldlt(lp.cov);
    Vec step = -ldlt.solve(r);
    if (ldlt.info() != Eigen::Success || !step.allFinite())
      throw NotAttainable("maxent: covariance solve failed (targets may sit on the boundary "
                          "of the moment range)");

    const double slope = r.dot(step);  // negative along a descent direction
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktrack; ++bt) {
      const Vec cand = p + alpha * step;
      // Damped below representability: further halving cannot move p either,
      // so the search is over (the Armijo margin underflows at this scale and
      // would otherwise wave the no-op through forever).
      if ((cand.array() == p.array()).all()) break;
      LogPartition lpc;
      try {
        lpc = log_partition(prob, cand);
      } catch (const Overflow&) {
        alpha *= 0.5;
        continue;
      }
      const double phic = lpc.w - cand.dot(targets);
      const bool armijo = std::isfinite(phic) && phic <= phi + 1e-4 * alpha * slope;
      // Close to the minimum the objective flattens into a roundoff plateau
      // and the Armijo margin becomes unsatisfiable. There the moment
      // residual is the meaningful merit: accept steps that strictly shrink
      // it while leaving the objective unchanged up to an ulp-scale slack.
      const double phi_slack = 1e-14 * std::max(1.0, std::fabs(phi));
      const bool contraction = std::isfinite(phic) && phic <= phi + phi_slack &&
                               (lpc.q - targets).cwiseAbs().maxCoeff() < res_now;
      if (armijo || contraction) {
        p = cand;
        lp = lpc;
        phi = phic;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw NotAttainable("maxent: backtracking stalled; targets look unreachable");
  }
  throw NotAttainable("maxent: Newton did not converge within the iteration budget");
}

MaxEntSolution equilibrium_with_volume(const MaxEntProblem& prob, const Vec& targets,
                                       double newton_tol, double gram_tol) {
  if (targets.size() != prob.n_obs())
    throw ConfigInvalid("maxent: target vector has the wrong dimension");
  check_gram(prob, gram_tol);

  const int N = prob.n_obs();
  const Mat& F = prob.table();
  const Vec& wts = prob.weights();

  // State u = (w, p). Residuals and Jacobian of the moment system with the
  // normalization carried as an explicit equation.
  auto eval = [&](const Vec& u, Vec& r, Mat& J) {
    const double w = u[0];
    const Vec p = u.tail(N);
    const Vec s = F.transpose() * p;
    const double m = s.maxCoeff() - w;
    if (!std::isfinite(m) || std::fabs(m) > kExpGuard)
      throw Overflow("equilibrium_with_volume: exponent escapes the guarded range");
    const Eigen::ArrayXd e = (s.array() - w).exp() * wts.array();
    const double mass = pairwise_sum(e.data(), static_cast<std::size_t>(e.size()));
    r.resize(N + 1);
    r[0] = mass - 1.0;
    Vec fe(N);
    for (int j = 0; j < N; ++j) {
      const Eigen::ArrayXd t = F.row(j).transpose().array() * e;
      fe[j] = pairwise_sum(t.data(), static_cast<std::size_t>(t.size()));
    }
    r.tail(N) = fe - targets;
    J.resize(N + 1, N + 1);
    J(0, 0) = -mass;
    const Mat ffe = F * e.matrix().asDiagonal() * F.transpose();
    for (int j = 0; j < N; ++j) {
      J(0, j + 1) = fe[j];
      J(j + 1, 0) = -fe[j];
      for (int k = 0; k < N; ++k) J(j + 1, k + 1) = ffe(j, k);
    }
  };

  Vec u = Vec::Zero(N + 1);
  Vec r;
  Mat J;
  eval(u, r, J);
  double merit = r.squaredNorm();

  for (int it = 1; it <= kMaxIter; ++it) {
    if (r.cwiseAbs().maxCoeff() < newton_tol) {
      const Vec p = u.tail(N);
      const LogPartition lp = log_partition(prob, p);
      return finish_solution(prob, p, u[0], lp, it - 1);
    }
    Eigen::PartialPivLU<Mat> lu(J);
    Vec step = -lu.solve(r);
    if (!step.allFinite())
      throw NotAttainable("equilibrium_with_volume: Newton system is singular");

    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktrack; ++bt) {
      const Vec cand = u + alpha * step;
      if ((cand.array() == u.array()).all()) break;
      Vec rc;
      Mat Jc;
      try {
        eval(cand, rc, Jc);
      } catch (const Overflow&) {
        alpha *= 0.5;
        continue;
      }
      const double mc = rc.squaredNorm();
      if (std::isfinite(mc) && mc <= merit * (1.0 - 1e-4 * alpha) + 1e-300) {
        u = cand;
        r = rc;
        J = Jc;
        merit = mc;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw NotAttainable("equilibrium_with_volume: backtracking stalled");
  }
  throw NotAttainable("equilibrium_with_volume: Newton did not converge within the budget");
}

SweepReport legendrian_sweep(const MaxEntProblem& prob, const std::vector<Vec>& path,
                             double p_step_max) {
  if (path.size() < 2) throw ConfigInvalid("legendrian_sweep: need at least two path points");
  SweepReport rep;
  rep.points.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0 && (path[k] - path[k - 1]).norm() > p_step_max)
      throw StepTooLarge("legendrian_sweep: path step exceeds the configured maximum");
    const LogPartition lp = log_partition(prob, path[k]);
    EquilibriumPoint pt;
    pt.p = path[k];
    pt.q = lp.q;
    pt.z = tilted_entropy(prob, path[k], lp);
    rep.points.push_back(std::move(pt));
  }
  rep.residuals.reserve(path.size() - 1);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Vec pbar = 0.5 * (rep.points[k].p + rep.points[k - 1].p);
    const Vec dq = rep.points[k].q - rep.points[k - 1].q;
    const double dz = rep.points[k].z - rep.points[k - 1].z;
    const double res = std::fabs(dz - pbar.dot(dq));
    rep.residuals.push_back(res);
    rep.max_residual = std::max(rep.max_residual, res);
    const Vec dp = rep.points[k].p - rep.points[k - 1].p;
    if (dp.dot(dq) < 0.0) ++rep.nonmonotone_segments;
  }
  return rep;
}

}  // namespace ct
