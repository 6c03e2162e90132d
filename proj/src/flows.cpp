#include "ct/flows.hpp"

#include <cmath>
#include <numbers>

#include "ct/errors.hpp"

namespace ct {

namespace {

constexpr double kMaxStep = 0.25;

// Steps for |t| at size dt; t/dt must be whole within 1e-9 relative.
long step_count(double t, double dt) {
  if (!(dt > 0.0)) throw ConfigInvalid("flow: dt must be positive");
  if (dt > kMaxStep) throw StepTooLarge("flow: dt exceeds the maximum step 0.25");
  const double ratio = std::fabs(t) / dt;
  const long steps = std::lround(ratio);
  if (std::fabs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio))
    throw ConfigInvalid("flow: t/dt is not a whole number of steps");
  return steps;
}

struct Rate {
  Vec dx;
  double dg;
};

Rate rate(const FlowSpec& spec, const Vec& x) {
  const HamFrame fr = ham_frame(spec.lam, spec.H, x);
  return {fr.X, -fr.rH};
}

// Jacobian of the time map by the variational equation: J' = DX(x(t)) J is
// integrated alongside the orbit with the same RK4 stages. Differencing the
// composite endpoint map instead would inherit the orbit's expansion rate in
// its truncation term, which is what blows past the hyperplane tolerance in
// strongly contracting regions.
Mat flow_jacobian(const FlowSpec& spec, const Vec& x0) {
  const long steps = step_count(spec.t, spec.dt);
  const double h = (spec.t < 0.0) ? -spec.dt : spec.dt;
  const Vec periods = spec.lam.periods();
  const double fdh = spec.lam.fd().jac_step;
  const auto field = [&spec](const Vec& y) { return ham_frame(spec.lam, spec.H, y).X; };
  const auto dfield = [&](const Vec& y) { return fd_jacobian(field, y, periods, fdh); };

  const Eigen::Index d = x0.size();
  Vec x = x0;
  Mat J = Mat::Identity(d, d);
  for (long s = 0; s < steps; ++s) {
    const Vec kx1 = field(x);
    const Mat kJ1 = dfield(x) * J;
    const Vec x2 = x + 0.5 * h * kx1;
    const Vec kx2 = field(x2);
    const Mat kJ2 = dfield(x2) * (J + 0.5 * h * kJ1);
    const Vec x3 = x + 0.5 * h * kx2;
    const Vec kx3 = field(x3);
    const Mat kJ3 = dfield(x3) * (J + 0.5 * h * kJ2);
    const Vec x4 = x + h * kx3;
    const Vec kx4 = field(x4);
    const Mat kJ4 = dfield(x4) * (J + h * kJ3);
    x += (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
    J += (h / 6.0) * (kJ1 + 2.0 * kJ2 + 2.0 * kJ3 + kJ4);
    if (!x.allFinite() || !J.allFinite())
      throw NonFiniteValue("flow: variational state became non-finite");
  }
  return J;
}

}  // namespace

FlowResult flow_point(const FlowSpec& spec, const Vec& x0) {
  const long steps = step_count(spec.t, spec.dt);
  const double h = (spec.t < 0.0) ? -spec.dt : spec.dt;
  Vec x = x0;
  double g = 0.0;
  for (long s = 0; s < steps; ++s) {
    const Rate k1 = rate(spec, x);
    const Rate k2 = rate(spec, x + 0.5 * h * k1.dx);
    const Rate k3 = rate(spec, x + 0.5 * h * k2.dx);
    const Rate k4 = rate(spec, x + h * k3.dx);
    x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    g += (h / 6.0) * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
    if (!x.allFinite() || !std::isfinite(g))
      throw NonFiniteValue("flow: state became non-finite");
  }
  return {x, g};
}

FlowTrace flow_trace(const FlowSpec& spec, const Vec& x0) {
  const long steps = step_count(spec.t, spec.dt);
  const double h = (spec.t < 0.0) ? -spec.dt : spec.dt;
  FlowTrace tr;
  tr.times.reserve(static_cast<std::size_t>(steps) + 1);
  tr.points.reserve(static_cast<std::size_t>(steps) + 1);
  tr.g.reserve(static_cast<std::size_t>(steps) + 1);
  Vec x = x0;
  double g = 0.0;
  tr.times.push_back(0.0);
  tr.points.push_back(x);
  tr.g.push_back(g);
  for (long s = 0; s < steps; ++s) {
    const Rate k1 = rate(spec, x);
    const Rate k2 = rate(spec, x + 0.5 * h * k1.dx);
    const Rate k3 = rate(spec, x + 0.5 * h * k2.dx);
    const Rate k4 = rate(spec, x + h * k3.dx);
    x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    g += (h / 6.0) * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
    if (!x.allFinite() || !std::isfinite(g))
      throw NonFiniteValue("flow: state became non-finite");
    tr.times.push_back(static_cast<double>(s + 1) * h);
    tr.points.push_back(x);
    tr.g.push_back(g);
  }
  return tr;
}

Diffeomorphism flow_map(const FlowSpec& spec) {
  Diffeomorphism psi;
  FlowSpec s = spec;
  psi.map = [s](const Vec& x) { return flow_point(s, x).endpoint; };
  // Shipping a per-map Jacobian matters for iterates: composing maps chains
  // these per-step Jacobians, which stays accurate, while a single stencil
  // across the composite map degrades with every extra step.
  psi.jac = [s](const Vec& x) { return flow_jacobian(s, x); };
  psi.label = "flow(" + (spec.H.label.empty() ? std::string("H") : spec.H.label) + ", t=" +
              std::to_string(spec.t) + ")";
  return psi;
}

Diffeomorphism base_reeb_time_map(const ContactModel& m, double t) {
  if (m.name != "torus3" && m.name != "torus_2n1")
    throw ConfigInvalid("base_reeb_time_map: no closed-form Reeb flow for model " + m.name);
  const double k = 2.0 * std::numbers::pi / m.periods[2];
  Diffeomorphism psi;
  psi.map = [t, k](const Vec& x) {
    Vec y = x;
    y[0] += t * std::cos(k * x[2]);
    y[1] += t * std::sin(k * x[2]);
    return y;
  };
  psi.jac = [t, k](const Vec& x) {
    Mat J = Mat::Identity(3, 3);
    J(0, 2) = -t * k * std::sin(k * x[2]);
    J(1, 2) = t * k * std::cos(k * x[2]);
    return J;
  };
  psi.label = "reeb_time(" + std::to_string(t) + ")";
  return psi;
}

Diffeomorphism reeb_time_map(const ContactForm& lam, double t, double dt) {
  // The Reeb field is the contact Hamiltonian field of H == -1.
  FlowSpec spec{lam, constant_field(-1.0, lam.dim()), t, dt};
  Diffeomorphism psi = flow_map(spec);
  psi.label = "reeb_time(" + std::to_string(t) + ")";
  return psi;
}

ConformalFactor conformal_factor_pullback(const ContactForm& lam, const Diffeomorphism& psi,
                                          const Vec& x) {
  const Vec periods = lam.periods();
  const Mat J = map_jacobian(psi, x, periods, lam.fd().grad_step);
  const Vec y = psi.map(x);
  const Vec Ay = lam.coeff(y);
  const Vec R = reeb_field(lam, x);
  const Vec P = J.transpose() * Ay;  // coefficients of the pullback at x

  ConformalFactor out;
  out.factor = P.dot(R);
  for (const Vec& b : xi_basis(lam, x)) {
    const double v = std::fabs(P.dot(b));
    if (v > out.defect) out.defect = v;
  }
  // The gate is relative to the size of the pairing that produced the
  // defect: iterates of expanding maps have Jacobian entries of order
  // exp(accumulated exponent), and their roundoff floor grows with them
  // even when the hyperplane is preserved exactly.
  const double scale = std::max(1.0, Ay.norm() * J.norm());
  if (out.defect > lam.tol().conf_tol * scale)
    throw NotContactomorphism("pullback does not preserve the contact hyperplane (defect " +
                              std::to_string(out.defect / scale) + ")");
  if (!(out.factor > 0.0))
    throw NotContactomorphism("pullback multiplier is not positive");
  return out;
}

double conformal_exponent(const ContactForm& lam, const Diffeomorphism& psi, const Vec& x) {
  return std::log(conformal_factor_pullback(lam, psi, x).factor);
}

CocycleReport cocycle_check(const ContactForm& lam, const Diffeomorphism& psi,
                            const Diffeomorphism& phi, int samples, int nfold, Rng& rng) {
  if (samples < 1) throw ConfigInvalid("cocycle_check: need at least one sample");
  if (nfold < 1) throw ConfigInvalid("cocycle_check: nfold must be at least 1");
  const Vec periods = lam.periods();
  const Diffeomorphism comp = compose_maps(psi, phi);

  CocycleReport rep;
  rep.samples = samples;
  rep.nfold = nfold;
  for (int s = 0; s < samples; ++s) {
    const Vec x = rng.point(periods);

    // Pair additivity.
    const double g_phi = conformal_exponent(lam, phi, x);
    const Vec phix = phi.map(x);
    const double g_psi_at = conformal_exponent(lam, psi, phix);
    const double g_comp = conformal_exponent(lam, comp, x);
    rep.max_pair_defect =
        std::max(rep.max_pair_defect, std::fabs(g_comp - g_psi_at - g_phi));

    // N-fold additivity along the orbit of phi, reusing one Jacobian per
    // orbit point: the chain rule gives the iterate's Jacobian as the
    // ordered product.
    Vec xk = x;
    Mat Jtot = Mat::Identity(x.size(), x.size());
    double sum_g = 0.0;
    double orbit_sup = 0.0;
    for (int k = 0; k < nfold; ++k) {
      const Mat Jk = map_jacobian(phi, xk, periods, lam.fd().grad_step);
      const double gk = std::log(lam.coeff(phi.map(xk)).dot(Jk * reeb_field(lam, xk)));
      sum_g += gk;
      orbit_sup = std::max(orbit_sup, std::fabs(gk));
      Jtot = Jk * Jtot;
      xk = phi.map(xk);
    }
    const double g_iter = std::log(lam.coeff(xk).dot(Jtot * reeb_field(lam, x)));
    rep.max_nfold_defect = std::max(rep.max_nfold_defect, std::fabs(g_iter - sum_g));
    rep.growth_lhs = std::max(rep.growth_lhs, std::fabs(g_iter) / nfold);
    rep.growth_rhs = std::max(rep.growth_rhs, orbit_sup);
  }
  return rep;
}

double dissipation_rate(const ContactForm& lam, const ScalarField& H, const Vec& x) {
  return -(lam.n() + 1) * ham_frame(lam, H, x).rH;
}

}  // namespace ct
