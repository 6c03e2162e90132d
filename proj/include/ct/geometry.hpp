#pragma once

#include <memory>
#include <string>

#include "ct/fields.hpp"
#include "ct/numeric.hpp"

namespace ct {

// A catalog manifold: a flat torus of dimension 2n+1 carrying a reference
// contact form, given through its coefficient covector A0 (the form is
// sum_i A0_i dx_i) and the analytic coefficient Jacobian J0(i,j) = dA0_i/dx_j.
// orientation_sign flips the top-wedge coefficient so the reference density
// is positive.
struct ContactModel {
  std::string name;
  int n = 1;
  Vec periods;                          // size 2n+1
  std::function<Vec(const Vec&)> A0;    // analytic coefficients
  std::function<Mat(const Vec&)> J0;    // analytic coefficient Jacobian
  double orientation_sign = 1.0;
  // Closed form of the reference density (orientation-corrected top-wedge
  // coefficient of the catalog form). Unit tests pin it against the generic
  // Pfaffian route; the cache keeps scale-form densities cheap.
  std::function<double(const Vec&)> base_density;

  int dim() const { return 2 * n + 1; }
};

// Catalog lookup. "torus3": the 3-torus with A0 = (cos(2 pi z / Pz),
// sin(2 pi z / Pz), 0). "torus_2n1": the same structure for n = 1 with
// configurable periods; higher n is rejected, because the obvious
// generalization of the 3-torus coefficients is degenerate there (its
// curvature 2-form has rank 2, so the top wedge vanishes identically) and
// no verified catalog form ships in dimension >= 5.
ContactModel make_model(const std::string& name, int n = 1, const Vec* periods = nullptr);

// Pfaffian of an antisymmetric matrix of even size (recursive expansion
// along the first row; sizes here are at most 2n, so this stays tiny).
double pfaffian(const Mat& B);

// Coefficient of lambda wedge (d lambda)^n relative to dx_0 ... dx_2n, from
// the coefficients A and the antisymmetrized Jacobian Omega = J^T - J:
//   n! * sum_k (-1)^k A_k Pf(Omega with row and column k deleted).
double wedge_top_coeff(const Vec& A, const Mat& Omega, int n);

// A contact form on a catalog model, in one of two representations:
//   Scale:   f * (reference form), f a positive scalar field;
//   General: an arbitrary coefficient covector field.
// Scale forms keep their density in the closed product form
// f^(n+1) * (reference density); General forms assemble it from the
// coefficient Jacobian through the top wedge.
class ContactForm {
 public:
  enum class Rep { Scale, General };

  static ContactForm base(const ContactModel& m);
  static ContactForm scale(const ContactModel& m, ScalarField f);
  static ContactForm general(const ContactModel& m, OneForm a);

  Rep rep() const { return rep_; }
  bool is_scale() const { return rep_ == Rep::Scale; }
  const ContactModel& model() const { return *model_; }
  int n() const { return model_->n; }
  int dim() const { return model_->dim(); }
  const Vec& periods() const { return model_->periods; }

  // Coefficient covector A(x) with x canonicalized into the box.
  Vec coeff(const Vec& x) const;
  // Omega(x) = J^T - J, the coefficient matrix of d lambda.
  Mat omega(const Vec& x) const;
  // Positive density of the volume form lambda wedge (d lambda)^n after
  // orientation correction; throws SingularForm when it degenerates or
  // comes out with the wrong sign.
  double density(const Vec& x) const;
  ScalarField density_field() const;
  OneForm as_oneform() const;

  // Scale representation only (RepresentationMismatch otherwise).
  const ScalarField& scale_factor() const;
  double scale_value(const Vec& x) const;

  // True when coefficient derivatives come from closed forms rather than
  // stencils; picks the tighter frame-solve residual tolerance.
  bool analytic() const;
  double frame_tol() const { return analytic() ? tol_.lin_tol : tol_.lin_tol_fd; }

  const Tolerances& tol() const { return tol_; }
  const FdSteps& fd() const { return fd_; }
  ContactForm with_tolerances(const Tolerances& t) const;
  ContactForm with_fd(const FdSteps& s) const;

  // c * lambda for constant c > 0 (stays within the representation).
  ContactForm rescaled(double c) const;

 private:
  ContactForm() = default;
  Rep rep_ = Rep::Scale;
  std::shared_ptr<const ContactModel> model_;
  ScalarField f_;   // Scale
  OneForm a_;       // General
  Tolerances tol_;
  FdSteps fd_;
};

// Checks |density| clears the degeneracy threshold at every grid node.
void validate_contact(const ContactForm& lam, const Grid& grid);

// Reeb field at x: the unique R with  R -| d lambda = 0 and lambda(R) = 1,
// from the stacked least-squares system [Omega^T; A^T] R = (0,...,0,1).
// Throws SingularForm when the solve residual exceeds the form's frame
// tolerance.
Vec reeb_field(const ContactForm& lam, const Vec& x);

// Contact Hamiltonian frame at x for energy H:
//   lambda(X) = -H,   X -| d lambda = dH - R[H] lambda.
// Shares one matrix factorization between the Reeb and Hamiltonian solves.
struct HamFrame {
  Vec X;        // contact Hamiltonian field
  Vec R;        // Reeb field
  double rH;    // R[H] = dH(R)
};
HamFrame ham_frame(const ContactForm& lam, const ScalarField& H, const Vec& x);
Vec contact_hamiltonian_field(const ContactForm& lam, const ScalarField& H, const Vec& x);

// Splitting of a tangent vector against the contact hyperplane:
// X = xi_part + reeb_coeff * R with lambda(xi_part) = 0.
struct VectorSplit {
  Vec xi_part;
  double reeb_coeff;
};
VectorSplit decompose_vector(const ContactForm& lam, const Vec& x, const Vec& X);

// Splitting of a covector alpha = h * lambda + Y -| d lambda with Y tangent
// to the contact hyperplane; unique by nondegeneracy.
struct OneFormSplit {
  double h;
  Vec y_pi;
};
OneFormSplit decompose_oneform(const ContactForm& lam, const Vec& x, const Vec& alpha);

// 2n orthonormal vectors spanning the contact hyperplane at x.
std::vector<Vec> xi_basis(const ContactForm& lam, const Vec& x);

// A smooth invertible map of the torus together with (optionally) its
// analytic Jacobian. When `jac` is absent callers differentiate the map
// with central stencils.
struct Diffeomorphism {
  std::function<Vec(const Vec&)> map;
  std::function<Mat(const Vec&)> jac;  // may be empty
  std::string label;

  bool has_jac() const { return static_cast<bool>(jac); }
};

Diffeomorphism identity_map(int dim);
Diffeomorphism translation_map(const Vec& shift);
Diffeomorphism compose_maps(const Diffeomorphism& outer, const Diffeomorphism& inner);
Diffeomorphism iterate_map(const Diffeomorphism& phi, int N);

Mat map_jacobian(const Diffeomorphism& psi, const Vec& x, const Vec& periods, double step_fraction);

// Pullback psi^* lambda as a General form: coefficients
// A'(x) = J_psi(x)^T A(psi(x)).
ContactForm pullback_form(const ContactForm& lam, const Diffeomorphism& psi);

}  // namespace ct
