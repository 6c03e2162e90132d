#pragma once

#include "ct/geometry.hpp"

namespace ct {

// Fixed-step RK4 flow of the contact Hamiltonian field of H, integrated
// jointly with the scalar cocycle rate -R[H] along the orbit. t may be
// negative (the step is taken with the sign of t); |t|/dt must be a whole
// number of steps.
struct FlowSpec {
  ContactForm lam;
  ScalarField H;
  double t = 1.0;
  double dt = 1e-3;
};

struct FlowResult {
  Vec endpoint;
  double g = 0.0;  // integral of -R[H] over the orbit, the conformal exponent
};

struct FlowTrace {
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<double> g;  // accumulated exponent at each time
};

FlowResult flow_point(const FlowSpec& spec, const Vec& x0);
FlowTrace flow_trace(const FlowSpec& spec, const Vec& x0);

// The flow endpoint map as a Diffeomorphism. Its Jacobian integrates the
// variational equation along the orbit, so it stays sharp even where the
// flow contracts or expands hard.
Diffeomorphism flow_map(const FlowSpec& spec);

// Time-t map of the catalog reference form's Reeb field. For the 3-torus
// models the Reeb orbits are straight lines with constant velocity (the
// field depends only on the fixed coordinate z), so map and Jacobian are
// closed-form.
Diffeomorphism base_reeb_time_map(const ContactModel& m, double t);

// Time-t Reeb map of an arbitrary form: numeric flow of H == -1.
Diffeomorphism reeb_time_map(const ContactForm& lam, double t, double dt = 1e-3);

// Multiplier and hyperplane defect of psi at x: psi^* lambda = factor *
// lambda on the hyperplane when defect vanishes. The defect is the largest
// value of |(psi^* lambda)(b)| over an orthonormal hyperplane basis b.
// Throws NotContactomorphism when the defect exceeds conf_tol relative to
// the pairing scale |lambda o psi| |J| (iterates of expanding maps carry
// exponentially large Jacobians, and the defect floor grows with them), or
// when the multiplier fails to be positive.
struct ConformalFactor {
  double factor = 1.0;
  double defect = 0.0;
};
ConformalFactor conformal_factor_pullback(const ContactForm& lam, const Diffeomorphism& psi,
                                          const Vec& x);

// log of the pullback multiplier.
double conformal_exponent(const ContactForm& lam, const Diffeomorphism& psi, const Vec& x);

// Additivity of the exponent under composition and iteration, checked on
// random samples:
//   g_(psi o phi) = g_psi o phi + g_phi,
//   g_(phi^N)     = sum_k g_phi o phi^k,
//   (1/N) sup |g_(phi^N)| <= sup |g_phi| over the sampled orbits.
struct CocycleReport {
  double max_pair_defect = 0.0;
  double max_nfold_defect = 0.0;
  double growth_lhs = 0.0;
  double growth_rhs = 0.0;
  int samples = 0;
  int nfold = 0;
};
CocycleReport cocycle_check(const ContactForm& lam, const Diffeomorphism& psi,
                            const Diffeomorphism& phi, int samples, int nfold, Rng& rng);

// Instantaneous volume dissipation of the contact Hamiltonian flow:
// -(n+1) R[H] at x.
double dissipation_rate(const ContactForm& lam, const ScalarField& H, const Vec& x);

}  // namespace ct
