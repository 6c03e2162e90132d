#include "ct/entropy.hpp"

#include <cmath>

#include "ct/errors.hpp"

namespace ct {

double mass(const ContactForm& lam, const Grid& grid, int threads) {
  const double v = integrate(
      grid, [&lam](const Vec& x) { return lam.density(x); }, threads);
  if (!(v > 0.0)) throw NonPositiveMass("mass: total volume is not positive");
  return v;
}

ContactForm normalize(const ContactForm& lam, const Grid& grid, double* c_out) {
  const double v = mass(lam, grid);
  const double c = std::pow(v, -1.0 / (lam.n() + 1));
  if (c_out) *c_out = c;
  return lam.rescaled(c);
}

double relative_entropy(const ContactForm& lam1, const ContactForm& lam0, const Grid& grid,
                        int threads) {
  return integrate(
      grid,
      [&](const Vec& x) {
        const double r1 = lam1.density(x);
        const double r0 = lam0.density(x);
        return std::log(r1 / r0) * r1;
      },
      threads);
}

double entropy_of_map(const ContactForm& lam, const Diffeomorphism& psi, const Grid& grid,
                      int threads) {
  const ContactForm pulled = pullback_form(lam, psi);
  return relative_entropy(pulled, lam, grid, threads);
}

Variation Variation::scale_only(ScalarField h, int dim) {
  Variation v;
  v.h = std::move(h);
  v.y_pi = VectorField::zero(dim);
  return v;
}

OneForm variation_covector(const ContactForm& lam, const Variation& var) {
  OneForm a;
  ContactForm form = lam;
  ScalarField h = var.h;
  VectorField y = var.y_pi;
  a.coeff = [form, h, y](const Vec& x) {
    Vec out = h.value(x) * form.coeff(x);
    if (!y.identically_zero) out += form.omega(x).transpose() * y.value(x);
    return out;
  };
  a.label = "h*lambda + Y -| dlambda";
  return a;
}

ContactForm perturb(const ContactForm& lam, const OneForm& alpha, double t) {
  OneForm a;
  ContactForm form = lam;
  OneForm al = alpha;
  a.coeff = [form, al, t](const Vec& x) { return Vec(form.coeff(x) + t * al.coeff(x)); };
  a.label = "perturbed";
  return ContactForm::general(lam.model(), a).with_tolerances(lam.tol()).with_fd(lam.fd());
}

double first_variation_volume(const ContactForm& lam, const Variation& var, const Vec& x) {
  const double hv = var.h.value(x);
  double div = 0.0;
  if (!var.y_pi.identically_zero)
    div = divergence(var.y_pi, lam.density_field(), x, lam.periods(), lam.fd());
  return (lam.n() + 1) * hv + div;
}

namespace {

// Integrand shared by hessian_small and the leading block of hessian_big:
//   [ (n+1)(2n+1) + n(n+1) log(rho/rho0) ] h1 h2 rho.
double small_integrand(const ContactForm& lam0n, const ContactForm& lam, const ScalarField& h1,
                       const ScalarField& h2, const Vec& x) {
  const int n = lam.n();
  const double rho = lam.density(x);
  const double lg = std::log(rho / lam0n.density(x));
  const double c = static_cast<double>((n + 1) * (2 * n + 1)) + static_cast<double>(n * (n + 1)) * lg;
  return c * h1.value(x) * h2.value(x) * rho;
}

void require_scale(const ContactForm& f, const char* who) {
  if (!f.is_scale())
    throw RepresentationMismatch(std::string(who) +
                                 ": requires the scale representation of the form");
}

}  // namespace

double hessian_small(const ContactForm& lam0n, const ContactForm& lam, const ScalarField& h1,
                     const ScalarField& h2, const Grid& grid, int threads) {
  require_scale(lam0n, "hessian_small");
  require_scale(lam, "hessian_small");
  return integrate(
      grid, [&](const Vec& x) { return small_integrand(lam0n, lam, h1, h2, x); }, threads);
}

HessianReport hessian_big(const ContactForm& lam0n, const ContactForm& lam, const Variation& v1,
                          const Variation& v2, const Grid& grid, double fd_step, int threads) {
  require_scale(lam0n, "hessian_big");
  require_scale(lam, "hessian_big");
  const int n = lam.n();
  const Vec periods = lam.periods();
  const FdSteps fd = lam.fd();

  // g = 1 + log of the density ratio; its contact Hamiltonian field enters
  // through the hyperplane part only.
  ScalarField gfield;
  {
    ContactForm l0 = lam0n, l = lam;
    gfield.value = [l0, l](const Vec& x) { return 1.0 + std::log(l.density(x) / l0.density(x)); };
    gfield.label = "1+log(rho/rho0)";
  }
  VectorField xg_pi;
  {
    ContactForm l = lam;
    ScalarField g = gfield;
    xg_pi.value = [l, g](const Vec& x) {
      const HamFrame fr = ham_frame(l, g, x);
      // lambda(X) = -g, so the hyperplane part is X + g R.
      return Vec(fr.X + g.value(x) * fr.R);
    };
    xg_pi.label = "Xg_pi";
  }
  VectorField reeb;
  {
    ContactForm l = lam;
    reeb.value = [l](const Vec& x) { return reeb_field(l, x); };
    reeb.label = "R";
  }

  const ScalarField rho_field = lam.density_field();

  auto directional = [&](const ScalarField& s, const VectorField& Y, const Vec& x) {
    if (Y.identically_zero) return 0.0;
    return gradient(s, x, periods, fd).dot(Y.value(x));
  };

  auto integrand = [&](const Variation& a, const Variation& b, const Vec& x) {
    const double base = small_integrand(lam0n, lam, a.h, b.h, x);
    const double rho = lam.density(x);
    const double h1v = a.h.value(x);
    const double h2v = b.h.value(x);
    const double d1 =
        a.y_pi.identically_zero ? 0.0 : divergence(a.y_pi, rho_field, x, periods, fd);
    const double d2 =
        b.y_pi.identically_zero ? 0.0 : divergence(b.y_pi, rho_field, x, periods, fd);
    const double gv = gfield.value(x);

    double extra = (n + 1) * (h1v * d2 + h2v * d1) + d1 * d2;
    extra += -(n + 1) * gv * (directional(a.h, b.y_pi, x) + directional(b.h, a.y_pi, x));
    extra += -n * (h1v * directional(gfield, b.y_pi, x) + h2v * directional(gfield, a.y_pi, x));

    // Bracket terms. Every bracket against a zero section short-circuits to
    // an exact zero, which keeps the Y = 0 path identical to small_integrand.
    if (!a.y_pi.identically_zero || !b.y_pi.identically_zero) {
      const Vec b1 = lie_bracket(a.y_pi, xg_pi, x, periods, fd);
      const Vec b2 = lie_bracket(b.y_pi, xg_pi, x, periods, fd);
      const Mat Om = lam.omega(x);
      const Vec A = lam.coeff(x);
      const Vec y1v = a.y_pi.value(x);
      const Vec y2v = b.y_pi.value(x);
      extra += y2v.dot(Om * b1) + 2.0 * y1v.dot(Om * b2);

      VectorField br1;
      {
        VectorField ya = a.y_pi;
        VectorField xg = xg_pi;
        br1.value = [ya, xg, periods, fd](const Vec& y) {
          return lie_bracket(ya, xg, y, periods, fd);
        };
        br1.identically_zero = a.y_pi.identically_zero;
      }
      VectorField br2;
      {
        VectorField yb = b.y_pi;
        VectorField xg = xg_pi;
        br2.value = [yb, xg, periods, fd](const Vec& y) {
          return lie_bracket(yb, xg, y, periods, fd);
        };
        br2.identically_zero = b.y_pi.identically_zero;
      }
      extra += A.dot(lie_bracket(b.y_pi, br1, x, periods, fd)) +
               A.dot(lie_bracket(a.y_pi, br2, x, periods, fd));

      VectorField br_r;
      {
        VectorField yb = b.y_pi;
        VectorField rf = reeb;
        br_r.value = [yb, rf, periods, fd](const Vec& y) {
          return lie_bracket(yb, rf, y, periods, fd);
        };
        br_r.identically_zero = b.y_pi.identically_zero;
      }
      extra += -(n + 1) * gv * A.dot(lie_bracket(a.y_pi, br_r, x, periods, fd));
    }
    return base + extra * rho;
  };

  HessianReport rep;
  rep.fd_step = fd_step;
  rep.resolution = grid.res().front();
  rep.value = integrate(
      grid, [&](const Vec& x) { return integrand(v1, v2, x); }, threads);
  rep.value_swapped = integrate(
      grid, [&](const Vec& x) { return integrand(v2, v1, x); }, threads);
  rep.symmetry_defect = std::fabs(rep.value - rep.value_swapped);

  // Reference: central second difference of the entropy functional along the
  // two covector directions, on the same grid.
  const OneForm a1 = variation_covector(lam, v1);
  const OneForm a2 = variation_covector(lam, v2);
  auto S = [&](double s, double t) {
    OneForm a;
    ContactForm form = lam;
    OneForm c1 = a1, c2 = a2;
    a.coeff = [form, c1, c2, s, t](const Vec& x) {
      return Vec(form.coeff(x) + s * c1.coeff(x) + t * c2.coeff(x));
    };
    ContactForm pert =
        ContactForm::general(lam.model(), a).with_tolerances(lam.tol()).with_fd(lam.fd());
    return relative_entropy(pert, lam0n, grid, threads);
  };
  const double d = fd_step;
  rep.fd_reference = (S(d, d) - S(d, -d) - S(-d, d) + S(-d, -d)) / (4.0 * d * d);
  rep.abs_err = std::fabs(rep.value - rep.fd_reference);
  rep.rel_err = rep.abs_err / std::max(1e-30, std::fabs(rep.fd_reference));
  return rep;
}

GramReport check_observables(const ContactForm& lam, const std::vector<ScalarField>& obs,
                             bool include_constant, const Grid& grid, double gram_tol,
                             int threads) {
  std::vector<ScalarField> fields;
  if (include_constant) fields.push_back(constant_field(1.0, lam.dim()));
  for (const auto& f : obs) fields.push_back(f);
  const int m = static_cast<int>(fields.size());
  if (m == 0) throw ConfigInvalid("check_observables: empty observable list");

  GramReport rep;
  rep.gram = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double v = integrate(
          grid,
          [&](const Vec& x) { return fields[i].value(x) * fields[j].value(x) * lam.density(x); },
          threads);
      rep.gram(i, j) = v;
      rep.gram(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Mat> es(rep.gram);
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.pass = rep.min_eig > gram_tol;
  return rep;
}

}  // namespace ct
