#include "ct/geometry.hpp"

#include <cmath>
#include <numbers>

#include "ct/errors.hpp"

namespace ct {

namespace {
constexpr double kPi = std::numbers::pi;
}

ContactModel make_model(const std::string& name, int n, const Vec* periods) {
  if (name != "torus3" && name != "torus_2n1")
    throw ConfigInvalid("unknown model '" + name + "' (catalog: torus3, torus_2n1)");
  if (name == "torus3" && n != 1) throw ConfigInvalid("torus3 is three-dimensional: n must be 1");
  if (n < 1) throw ConfigInvalid("model parameter n must be at least 1");
  if (n > 1)
    throw ConfigInvalid(
        "torus_2n1: no verified catalog form ships for n >= 2. The coefficient pattern that "
        "works on the 3-torus has a rank-2 curvature matrix in higher dimension, so its top "
        "wedge vanishes identically and the form is not contact there.");

  ContactModel m;
  m.name = name;
  m.n = 1;
  if (periods) {
    if (periods->size() != 3) throw ConfigInvalid("model periods must have dimension 2n+1");
    if (periods->minCoeff() <= 0.0) throw ConfigInvalid("model periods must be positive");
    m.periods = *periods;
  } else {
    m.periods = Vec::Ones(3);
  }

  const double k = 2.0 * kPi / m.periods[2];
  m.A0 = [k](const Vec& x) {
    Vec a(3);
    a[0] = std::cos(k * x[2]);
    a[1] = std::sin(k * x[2]);
    a[2] = 0.0;
    return a;
  };
  m.J0 = [k](const Vec& x) {
    Mat j = Mat::Zero(3, 3);
    j(0, 2) = -k * std::sin(k * x[2]);
    j(1, 2) = k * std::cos(k * x[2]);
    return j;
  };
  // The top wedge evaluates to -2 pi / Pz for this coefficient pattern, so
  // flip the sign to make the reference density positive.
  m.orientation_sign = -1.0;
  m.base_density = [k](const Vec&) { return k; };
  return m;
}

double pfaffian(const Mat& B) {
  const Eigen::Index m = B.rows();
  if (m % 2 != 0) throw ConfigInvalid("pfaffian: matrix size must be even");
  if (m == 0) return 1.0;
  if (m == 2) return B(0, 1);
  // Expansion along the first row; minors are built by index masking.
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;

  std::function<double(const std::vector<Eigen::Index>&)> pf =
      [&](const std::vector<Eigen::Index>& rows) -> double {
    const std::size_t sz = rows.size();
    if (sz == 0) return 1.0;
    if (sz == 2) return B(rows[0], rows[1]);
    double acc = 0.0;
    double sign = 1.0;  // (-1)^(j+1) for j = 1, 2, ... below
    for (std::size_t j = 1; j < sz; ++j) {
      std::vector<Eigen::Index> rest;
      rest.reserve(sz - 2);
      for (std::size_t t = 1; t < sz; ++t)
        if (t != j) rest.push_back(rows[t]);
      acc += sign * B(rows[0], rows[j]) * pf(rest);
      sign = -sign;
    }
    return acc;
  };
  return pf(idx);
}

double wedge_top_coeff(const Vec& A, const Mat& Omega, int n) {
  const Eigen::Index d = A.size();
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  double acc = 0.0;
  std::vector<Eigen::Index> keep(static_cast<std::size_t>(d - 1));
  Mat minor(d - 1, d - 1);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (A[k] == 0.0) continue;
    std::size_t p = 0;
    for (Eigen::Index i = 0; i < d; ++i)
      if (i != k) keep[p++] = i;
    for (Eigen::Index r = 0; r < d - 1; ++r)
      for (Eigen::Index c = 0; c < d - 1; ++c)
        minor(r, c) = Omega(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * A[k] * pfaffian(minor);
  }
  return fact * acc;
}

ContactForm ContactForm::base(const ContactModel& m) {
  return scale(m, constant_field(1.0, m.dim()));
}

ContactForm ContactForm::scale(const ContactModel& m, ScalarField f) {
  ContactForm out;
  out.rep_ = Rep::Scale;
  out.model_ = std::make_shared<ContactModel>(m);
  out.f_ = std::move(f);
  return out;
}

ContactForm ContactForm::general(const ContactModel& m, OneForm a) {
  ContactForm out;
  out.rep_ = Rep::General;
  out.model_ = std::make_shared<ContactModel>(m);
  out.a_ = std::move(a);
  return out;
}

Vec ContactForm::coeff(const Vec& x) const {
  const Vec y = wrap_point(x, periods());
  if (rep_ == Rep::Scale) return f_.value(y) * model_->A0(y);
  return a_.coeff(y);
}

Mat ContactForm::omega(const Vec& x) const {
  const Vec y = wrap_point(x, periods());
  if (rep_ == Rep::Scale) {
    // d(f lambda0) has coefficients grad f wedge A0 plus f * Omega0.
    const Vec a0 = model_->A0(y);
    const Mat j0 = model_->J0(y);
    const Vec g = gradient(f_, y, periods(), fd_);
    const double fv = f_.value(y);
    Mat omega0 = j0.transpose() - j0;
    return g * a0.transpose() - a0 * g.transpose() + fv * omega0;
  }
  const Mat j = jacobian(a_, y, periods(), fd_);
  return j.transpose() - j;
}

double ContactForm::density(const Vec& x) const {
  const Vec y = wrap_point(x, periods());
  const double s = model_->orientation_sign;
  double rho;
  if (rep_ == Rep::Scale) {
    const double fv = f_.value(y);
    if (!(fv > 0.0))
      throw SingularForm("scale factor is not positive at the evaluation point");
    double rho0;
    if (model_->base_density) {
      rho0 = model_->base_density(y);
    } else {
      const Vec a0 = model_->A0(y);
      const Mat j0 = model_->J0(y);
      rho0 = s * wedge_top_coeff(a0, j0.transpose() - j0, model_->n);
    }
    const int p = model_->n + 1;
    rho = (p == 2) ? fv * fv * rho0 : std::pow(fv, p) * rho0;
  } else {
    rho = s * wedge_top_coeff(coeff(y), omega(y), model_->n);
  }
  if (!std::isfinite(rho)) throw NonFiniteValue("density: non-finite top-wedge coefficient");
  if (std::fabs(rho) < tol_.degeneracy_tol)
    throw SingularForm("density: top wedge degenerates at the evaluation point");
  if (rho < 0.0)
    throw SingularForm("density: top wedge has the wrong orientation at the evaluation point");
  if (rho < tol_.density_floor) throw NonFiniteValue("density: underflow below the floor");
  return rho;
}

ScalarField ContactForm::density_field() const {
  ContactForm self = *this;
  ScalarField out;
  out.value = [self](const Vec& x) { return self.density(x); };
  out.label = "density";
  return out;
}

OneForm ContactForm::as_oneform() const {
  ContactForm self = *this;
  OneForm a;
  a.coeff = [self](const Vec& x) { return self.coeff(x); };
  if (analytic()) {
    a.jac = [self](const Vec& x) {
      const Vec y = wrap_point(x, self.periods());
      if (self.rep_ == Rep::Scale) {
        const Vec a0 = self.model_->A0(y);
        const Mat j0 = self.model_->J0(y);
        const Vec g = self.f_.grad(y);
        return Mat(a0 * g.transpose() + self.f_.value(y) * j0);
      }
      return self.a_.jac(y);
    };
  }
  a.label = "lambda";
  return a;
}

const ScalarField& ContactForm::scale_factor() const {
  if (rep_ != Rep::Scale)
    throw RepresentationMismatch("operation requires the scale representation of the form");
  return f_;
}

double ContactForm::scale_value(const Vec& x) const {
  return scale_factor().value(wrap_point(x, periods()));
}

bool ContactForm::analytic() const {
  if (rep_ == Rep::Scale) return f_.has_grad();
  return a_.has_jac();
}

ContactForm ContactForm::with_tolerances(const Tolerances& t) const {
  ContactForm out = *this;
  out.tol_ = t;
  return out;
}

ContactForm ContactForm::with_fd(const FdSteps& s) const {
  ContactForm out = *this;
  out.fd_ = s;
  return out;
}

ContactForm ContactForm::rescaled(double c) const {
  if (!(c > 0.0)) throw ConfigInvalid("rescaled: constant must be positive");
  ContactForm out = *this;
  if (rep_ == Rep::Scale) {
    ScalarField f = f_;
    auto base_value = f_.value;
    f.value = [base_value, c](const Vec& x) { return c * base_value(x); };
    if (f_.has_grad()) {
      auto base_grad = f_.grad;
      f.grad = [base_grad, c](const Vec& x) { return Vec(c * base_grad(x)); };
    }
    f.label = f_.label.empty() ? "" : std::to_string(c) + "*(" + f_.label + ")";
    out.f_ = std::move(f);
    return out;
  }
  OneForm a = a_;
  auto base_coeff = a_.coeff;
  a.coeff = [base_coeff, c](const Vec& x) { return Vec(c * base_coeff(x)); };
  if (a_.has_jac()) {
    auto base_jac = a_.jac;
    a.jac = [base_jac, c](const Vec& x) { return Mat(c * base_jac(x)); };
  }
  out.a_ = std::move(a);
  return out;
}

void validate_contact(const ContactForm& lam, const Grid& grid) {
  for (std::size_t i = 0; i < grid.count(); ++i) {
    (void)lam.density(grid.node(i));  // throws on degeneracy
  }
}

namespace {

// Stacked frame matrix [Omega^T; A^T]: the first d rows express the interior
// product against d lambda (as a covector), the last row the pairing with
// lambda itself.
Mat frame_matrix(const Vec& A, const Mat& Omega) {
  const Eigen::Index d = A.size();
  Mat M(d + 1, d);
  M.topRows(d) = Omega.transpose();
  M.bottomRows(1) = A.transpose();
  return M;
}

void check_residual(const Mat& M, const Vec& sol, const Vec& rhs, double tol, const char* what) {
  const double res = (M * sol - rhs).cwiseAbs().maxCoeff();
  if (!(res < tol))
    throw SingularForm(std::string(what) + ": frame solve residual " + std::to_string(res) +
                       " exceeds tolerance");
}

}  // namespace

Vec reeb_field(const ContactForm& lam, const Vec& x) {
  const Vec A = lam.coeff(x);
  const Mat M = frame_matrix(A, lam.omega(x));
  Vec rhs = Vec::Zero(M.rows());
  rhs[M.rows() - 1] = 1.0;
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  const Vec R = qr.solve(rhs);
  check_residual(M, R, rhs, lam.frame_tol(), "reeb_field");
  return R;
}

HamFrame ham_frame(const ContactForm& lam, const ScalarField& H, const Vec& x) {
  const Vec A = lam.coeff(x);
  const Mat M = frame_matrix(A, lam.omega(x));
  const Eigen::Index d = A.size();
  Eigen::ColPivHouseholderQR<Mat> qr(M);

  Vec rhs_r = Vec::Zero(d + 1);
  rhs_r[d] = 1.0;
  HamFrame out;
  out.R = qr.solve(rhs_r);
  check_residual(M, out.R, rhs_r, lam.frame_tol(), "ham_frame (reeb)");

  const Vec gH = gradient(H, wrap_point(x, lam.periods()), lam.periods(), lam.fd());
  out.rH = out.R.dot(gH);
  Vec rhs_x(d + 1);
  rhs_x.head(d) = gH - out.rH * A;
  rhs_x[d] = -H.value(wrap_point(x, lam.periods()));
  out.X = qr.solve(rhs_x);
  check_residual(M, out.X, rhs_x, lam.frame_tol(), "ham_frame (hamiltonian)");
  return out;
}

Vec contact_hamiltonian_field(const ContactForm& lam, const ScalarField& H, const Vec& x) {
  return ham_frame(lam, H, x).X;
}

VectorSplit decompose_vector(const ContactForm& lam, const Vec& x, const Vec& X) {
  VectorSplit out;
  out.reeb_coeff = lam.coeff(x).dot(X);
  out.xi_part = X - out.reeb_coeff * reeb_field(lam, x);
  return out;
}

OneFormSplit decompose_oneform(const ContactForm& lam, const Vec& x, const Vec& alpha) {
  const Vec A = lam.coeff(x);
  const Mat Omega = lam.omega(x);
  const Eigen::Index d = A.size();
  // Unknowns (h, Y): h A + Omega^T Y = alpha and A . Y = 0.
  Mat M = Mat::Zero(d + 1, d + 1);
  M.block(0, 0, d, 1) = A;
  M.block(0, 1, d, d) = Omega.transpose();
  M.block(d, 1, 1, d) = A.transpose();
  Vec rhs = Vec::Zero(d + 1);
  rhs.head(d) = alpha;
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  const Vec sol = qr.solve(rhs);
  check_residual(M, sol, rhs, lam.frame_tol(), "decompose_oneform");
  OneFormSplit out;
  out.h = sol[0];
  out.y_pi = sol.tail(d);
  return out;
}

std::vector<Vec> xi_basis(const ContactForm& lam, const Vec& x) {
  const Vec A = lam.coeff(x);
  const Vec R = reeb_field(lam, x);
  const Eigen::Index d = A.size();
  std::vector<Vec> basis;
  for (Eigen::Index i = 0; i < d; ++i) {
    Vec w = Vec::Zero(d);
    w[i] = 1.0;
    w -= A[i] * R;  // lambda(w) = 0 up to solve accuracy
    // Gram-Schmidt against what we already kept.
    for (const Vec& b : basis) w -= b.dot(w) * b;
    const double nrm = w.norm();
    if (nrm > 1e-6) basis.push_back(w / nrm);
    if (static_cast<int>(basis.size()) == 2 * lam.n()) break;
  }
  if (static_cast<int>(basis.size()) != 2 * lam.n())
    throw SingularForm("xi_basis: contact hyperplane basis is rank-deficient");
  return basis;
}

Diffeomorphism identity_map(int dim) {
  Diffeomorphism psi;
  psi.map = [](const Vec& x) { return x; };
  psi.jac = [dim](const Vec&) { return Mat(Mat::Identity(dim, dim)); };
  psi.label = "id";
  return psi;
}

Diffeomorphism translation_map(const Vec& shift) {
  Diffeomorphism psi;
  const Vec v = shift;
  const Eigen::Index d = shift.size();
  psi.map = [v](const Vec& x) { return Vec(x + v); };
  psi.jac = [d](const Vec&) { return Mat(Mat::Identity(d, d)); };
  psi.label = "translation";
  return psi;
}

Diffeomorphism compose_maps(const Diffeomorphism& outer, const Diffeomorphism& inner) {
  Diffeomorphism psi;
  auto om = outer.map;
  auto im = inner.map;
  psi.map = [om, im](const Vec& x) { return om(im(x)); };
  if (outer.has_jac() && inner.has_jac()) {
    auto oj = outer.jac;
    auto ij = inner.jac;
    psi.jac = [om, im, oj, ij](const Vec& x) { return Mat(oj(im(x)) * ij(x)); };
  }
  psi.label = outer.label + " o " + inner.label;
  return psi;
}

Diffeomorphism iterate_map(const Diffeomorphism& phi, int N) {
  if (N < 1) throw ConfigInvalid("iterate_map: N must be at least 1");
  Diffeomorphism out = phi;
  for (int k = 1; k < N; ++k) out = compose_maps(phi, out);
  out.label = phi.label + "^" + std::to_string(N);
  return out;
}

Mat map_jacobian(const Diffeomorphism& psi, const Vec& x, const Vec& periods,
                 double step_fraction) {
  if (psi.has_jac()) return psi.jac(x);
  return fd_jacobian2(psi.map, x, periods, step_fraction);
}

ContactForm pullback_form(const ContactForm& lam, const Diffeomorphism& psi) {
  OneForm a;
  ContactForm src = lam;
  Diffeomorphism map = psi;
  const Vec periods = lam.periods();
  // The covector transforms with the transposed Jacobian. The map Jacobian
  // uses the gradient-sized stencil: pullback coefficients get differentiated
  // again downstream, so the two stencil scales must stay separated.
  const double jac_step = lam.fd().grad_step;
  a.coeff = [src, map, periods, jac_step](const Vec& x) {
    const Mat J = map_jacobian(map, x, periods, jac_step);
    return Vec(J.transpose() * src.coeff(map.map(x)));
  };
  a.label = "pullback(" + (psi.label.empty() ? std::string("psi") : psi.label) + ")";
  return ContactForm::general(lam.model(), a).with_tolerances(lam.tol()).with_fd(lam.fd());
}

}  // namespace ct
