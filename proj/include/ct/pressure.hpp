#pragma once

#include "ct/flows.hpp"
#include "ct/geometry.hpp"

namespace ct {

// A contact form together with a contactomorphism and its conformal
// exponent g (log of the pullback multiplier). Construction validates the
// map on a fixed sample: hyperplane defect below conf_tol and finite g.
struct ContactPair {
  ContactForm lam;
  Diffeomorphism psi;
  ScalarField g;
  std::string label;
};

// Generic pair: g through the pullback-multiplier route.
ContactPair make_pair(const ContactForm& lam, const Diffeomorphism& psi,
                      int validation_samples = 12);

// Hamiltonian-flow pair: psi the time-t flow map, g the integrated cocycle
// rate along the orbit (one flow per evaluation).
ContactPair make_flow_pair(const ContactForm& lam, const ScalarField& H, double t, double dt);

// Orbit x, psi x, ..., psi^N x, wrapped into the fundamental box.
std::vector<Vec> orbit(const ContactPair& pair, const Vec& x, int N);

// S_N(g)(x) = sum_{k=0}^{N-1} g(psi^k x).
double birkhoff_sum(const ContactPair& pair, const Vec& x, int N);

// sup_{0<=k<=N} of the flat-torus distance between the two orbits.
double bowen_distance(const std::vector<Vec>& orbit_a, const std::vector<Vec>& orbit_b,
                      const Vec& periods);

// Greedy maximal (N, eps)-separated subset of `candidates`, scanned in the
// given order (deterministic lower-bound semantics): a candidate joins the
// set when its Bowen distance to every member exceeds eps.
struct SeparatedSet {
  std::vector<std::size_t> indices;   // into candidates
  std::vector<double> birkhoff;       // S_N(g) at the accepted points
};
SeparatedSet separated_set(const ContactPair& pair, int N, double eps,
                           const std::vector<Vec>& candidates);

// Z_N(beta, eps) = sum over the separated set of exp(-beta (n+1) S_N(g)).
// At beta = 0 every term is exactly 1, so Z equals the cardinality exactly.
struct PartitionValue {
  double Z = 0.0;
  double logZ = 0.0;  // max-shifted
  std::size_t count = 0;
};
PartitionValue partition_function(const ContactPair& pair, int N, double eps, double beta,
                                  const std::vector<Vec>& candidates);

// (1/N) log Z_N along a ladder of times, with the monotonicity of the
// estimates recorded.
struct PressureEstimate {
  struct Row {
    int N = 0;
    std::size_t count = 0;
    double logZ = 0.0;
    double estimate = 0.0;
  };
  double beta = 0.0;
  double eps = 0.0;
  std::vector<Row> rows;
  double value = 0.0;   // estimate at the largest N
  bool monotone = false;  // estimates nonincreasing along the ladder
};
PressureEstimate pressure_estimate(const ContactPair& pair, double beta, double eps,
                                   const std::vector<int>& N_list,
                                   const std::vector<Vec>& candidates);

// h_nu - beta (n+1) integral g d nu for a probability density nu dx that is
// invariant under the map. Invariance is spot-checked by transporting a few
// smooth test observables: NotInvariant when any moment moves by more than
// inv_tol. The entropy h_nu is an input, not something this library can
// compute.
double variational_bound(const ContactPair& pair, const ScalarField& nu_density, double h_nu,
                         double beta, const Grid& grid, double inv_tol = 1e-5, int threads = 0);

// mu(Bowen ball) against exp(-beta (n+1) S_N(g) - N P) at the given
// centers, where mu is the probability measure mu_density dx (normalization
// checked on the grid to 1e-8) and the ball is resolved through grid nodes.
// EmptyBall when no node lands inside.
struct GibbsRow {
  int N = 0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};
struct GibbsReport {
  double beta = 0.0;
  double eps = 0.0;
  double pressure = 0.0;
  std::vector<GibbsRow> rows;
};
GibbsReport gibbs_diagnostic(const ContactPair& pair, const ScalarField& mu_density, double beta,
                             double pressure_value, double eps, const std::vector<int>& N_list,
                             const std::vector<Vec>& centers, const Grid& grid);

// The 2^dim points with all coordinates at 1/4 or 3/4 of the period: the
// canonical small candidate/center sample for separated-set work.
std::vector<Vec> half_lattice(const Vec& periods);

// All grid nodes, in flat order.
std::vector<Vec> grid_points(const Grid& grid);

}  // namespace ct
