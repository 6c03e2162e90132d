#pragma once

#include "ct/geometry.hpp"

namespace ct {

// Total mass V(lambda) of the orientation-corrected volume form.
double mass(const ContactForm& lam, const Grid& grid, int threads = 0);

// c * lambda with c = V^(-1/(n+1)), so the rescaled form has unit mass.
// When c_out is non-null the constant is reported.
ContactForm normalize(const ContactForm& lam, const Grid& grid, double* c_out = nullptr);

// Relative entropy S(lam1 | lam0) = integral log(rho1/rho0) rho1 dx.
// Both densities are taken against the coordinate volume; the integrand is
// evaluated node by node, so handing the same form twice gives exactly 0.
double relative_entropy(const ContactForm& lam1, const ContactForm& lam0, const Grid& grid,
                        int threads = 0);

// S(psi^* lambda | lambda): the pullback goes through the covector route
// (coefficients J^T A o psi), its density through the generic top wedge.
double entropy_of_map(const ContactForm& lam, const Diffeomorphism& psi, const Grid& grid,
                      int threads = 0);

// A tangent direction in the space of contact forms, split as
// alpha = h * lambda + Y -| d lambda with Y tangent to the hyperplane field.
struct Variation {
  ScalarField h;
  VectorField y_pi;

  // Pure rescaling direction (Y = 0); the zero section is flagged so that
  // downstream stencils may skip it.
  static Variation scale_only(ScalarField h, int dim);
};

// Coefficients of the covector alpha = h * lambda + Y -| d lambda.
OneForm variation_covector(const ContactForm& lam, const Variation& var);

// lambda + t * alpha as a General form.
ContactForm perturb(const ContactForm& lam, const OneForm& alpha, double t);

// Pointwise logarithmic derivative of the volume density along a variation:
//   (d/dt log rho_(lambda + t alpha))|_(t=0) = (n+1) h + div_mu(Y).
double first_variation_volume(const ContactForm& lam, const Variation& var, const Vec& x);

// Second derivative of S(. | lam0n) at a scale form lam in two pure
// rescaling directions h1, h2:
//   integral [ (n+1)(2n+1) + n(n+1) log(rho_lam / rho_lam0n) ] h1 h2 d mu_lam.
// RepresentationMismatch unless both forms carry the scale representation.
double hessian_small(const ContactForm& lam0n, const ContactForm& lam, const ScalarField& h1,
                     const ScalarField& h2, const Grid& grid, int threads = 0);

// Full second-variation evaluator plus its diagnostic report. The bilinear
// form extends hessian_small by the terms involving the hyperplane parts
// Y1, Y2; with Y1 = Y2 = 0 the integrand reduces term by term to the
// hessian_small integrand, bit for bit. The report carries a central
// second-difference reference of S(lam + s a1 + t a2 | lam0n) computed on
// the same grid, and the defect under swapping the two variations.
struct HessianReport {
  double value = 0.0;
  double value_swapped = 0.0;
  double symmetry_defect = 0.0;
  double fd_reference = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double fd_step = 0.0;
  int resolution = 0;
};
HessianReport hessian_big(const ContactForm& lam0n, const ContactForm& lam, const Variation& v1,
                          const Variation& v2, const Grid& grid, double fd_step = 1e-3,
                          int threads = 0);

// Gram matrix of observables in L2(mu_lam), its smallest eigenvalue, and
// whether it clears gram_tol. With include_constant the function 1 is
// prepended, which catches observable families that can only be matched
// trivially.
struct GramReport {
  Mat gram;
  double min_eig = 0.0;
  bool pass = false;
};
GramReport check_observables(const ContactForm& lam, const std::vector<ScalarField>& obs,
                             bool include_constant, const Grid& grid, double gram_tol = 1e-10,
                             int threads = 0);

}  // namespace ct
