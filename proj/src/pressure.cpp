#include "ct/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ct/entropy.hpp"
#include "ct/errors.hpp"

namespace ct {

namespace {

// Fixed validation sample: a low-discrepancy style sweep through the box,
// deterministic so pair construction never depends on global state.
std::vector<Vec> validation_points(const Vec& periods, int count) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const int d = static_cast<int>(periods.size());
  for (int i = 0; i < count; ++i) {
    Vec x(d);
    for (int j = 0; j < d; ++j) {
      const double frac = std::fmod(0.137 + 0.61803398874989485 * (i + 1) * (j + 2), 1.0);
      x[j] = periods[j] * frac;
    }
    pts.push_back(x);
  }
  return pts;
}

void validate_pair(const ContactPair& pair, int samples) {
  for (const Vec& x : validation_points(pair.lam.periods(), samples)) {
    (void)conformal_factor_pullback(pair.lam, pair.psi, x);  // throws on defect
    const double gv = pair.g.value(x);
    if (!std::isfinite(gv))
      throw NonFiniteValue("contact pair: conformal exponent not finite at a sample point");
  }
}

}  // namespace

ContactPair make_pair(const ContactForm& lam, const Diffeomorphism& psi, int validation_samples) {
  ScalarField g;
  ContactForm l = lam;
  Diffeomorphism m = psi;
  g.value = [l, m](const Vec& x) { return conformal_exponent(l, m, x); };
  g.label = "log pullback multiplier";
  ContactPair pair{lam, psi, g, psi.label};
  validate_pair(pair, validation_samples);
  return pair;
}

ContactPair make_flow_pair(const ContactForm& lam, const ScalarField& H, double t, double dt) {
  FlowSpec spec{lam, H, t, dt};
  Diffeomorphism psi = flow_map(spec);
  ScalarField g;
  FlowSpec gspec = spec;
  g.value = [gspec](const Vec& x) { return flow_point(gspec, x).g; };
  g.label = "integrated cocycle rate";
  ContactPair pair{lam, psi, g, psi.label};
  validate_pair(pair, 6);
  return pair;
}

std::vector<Vec> orbit(const ContactPair& pair, const Vec& x, int N) {
  if (N < 0) throw ConfigInvalid("orbit: N must be nonnegative");
  const Vec& periods = pair.lam.periods();
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(N) + 1);
  Vec cur = wrap_point(x, periods);
  pts.push_back(cur);
  for (int k = 0; k < N; ++k) {
    cur = wrap_point(pair.psi.map(cur), periods);
    pts.push_back(cur);
  }
  return pts;
}

double birkhoff_sum(const ContactPair& pair, const Vec& x, int N) {
  if (N < 1) throw ConfigInvalid("birkhoff_sum: N must be at least 1");
  const Vec& periods = pair.lam.periods();
  double acc = 0.0;
  Vec cur = wrap_point(x, periods);
  for (int k = 0; k < N; ++k) {
    const double gv = pair.g.value(cur);
    if (!std::isfinite(gv)) throw NonFiniteValue("birkhoff_sum: non-finite exponent on orbit");
    acc += gv;
    cur = wrap_point(pair.psi.map(cur), periods);
  }
  return acc;
}

double bowen_distance(const std::vector<Vec>& orbit_a, const std::vector<Vec>& orbit_b,
                      const Vec& periods) {
  if (orbit_a.size() != orbit_b.size())
    throw ConfigInvalid("bowen_distance: orbits have different lengths");
  double d = 0.0;
  for (std::size_t k = 0; k < orbit_a.size(); ++k)
    d = std::max(d, torus_distance(orbit_a[k], orbit_b[k], periods));
  return d;
}

SeparatedSet separated_set(const ContactPair& pair, int N, double eps,
                           const std::vector<Vec>& candidates) {
  if (N < 1) throw ConfigInvalid("separated_set: N must be at least 1");
  if (!(eps > 0.0)) throw ConfigInvalid("separated_set: eps must be positive");
  if (candidates.empty()) throw ConfigInvalid("separated_set: empty candidate list");

  const Vec& periods = pair.lam.periods();
  std::vector<std::vector<Vec>> orbits;
  orbits.reserve(candidates.size());
  for (const Vec& c : candidates) orbits.push_back(orbit(pair, c, N));

  SeparatedSet out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool separated = true;
    for (std::size_t j : out.indices) {
      if (bowen_distance(orbits[i], orbits[j], periods) <= eps) {
        separated = false;
        break;
      }
    }
    if (separated) out.indices.push_back(i);
  }
  out.birkhoff.reserve(out.indices.size());
  for (std::size_t j : out.indices) out.birkhoff.push_back(birkhoff_sum(pair, candidates[j], N));
  return out;
}

PartitionValue partition_function(const ContactPair& pair, int N, double eps, double beta,
                                  const std::vector<Vec>& candidates) {
  const SeparatedSet set = separated_set(pair, N, eps, candidates);
  const double scale = -beta * (pair.lam.n() + 1);

  PartitionValue out;
  out.count = set.indices.size();
  std::vector<double> terms;
  terms.reserve(out.count);
  double m = -std::numeric_limits<double>::infinity();
  for (double s : set.birkhoff) {
    const double e = scale * s;
    terms.push_back(e);
    m = std::max(m, e);
  }
  std::vector<double> expd(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) expd[i] = std::exp(terms[i]);
  out.Z = pairwise_sum(expd);
  std::vector<double> shifted(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) shifted[i] = std::exp(terms[i] - m);
  out.logZ = m + std::log(pairwise_sum(shifted));
  if (!std::isfinite(out.logZ)) throw NonFiniteValue("partition_function: log Z not finite");
  return out;
}

PressureEstimate pressure_estimate(const ContactPair& pair, double beta, double eps,
                                   const std::vector<int>& N_list,
                                   const std::vector<Vec>& candidates) {
  if (N_list.empty()) throw ConfigInvalid("pressure_estimate: empty N ladder");
  PressureEstimate est;
  est.beta = beta;
  est.eps = eps;
  est.monotone = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    const int N = N_list[i];
    const PartitionValue pv = partition_function(pair, N, eps, beta, candidates);
    PressureEstimate::Row row;
    row.N = N;
    row.count = pv.count;
    row.logZ = pv.logZ;
    row.estimate = pv.logZ / N;
    if (i > 0 && row.estimate > prev + 1e-15) est.monotone = false;
    prev = row.estimate;
    est.rows.push_back(row);
    est.value = row.estimate;
  }
  return est;
}

double variational_bound(const ContactPair& pair, const ScalarField& nu_density, double h_nu,
                         double beta, const Grid& grid, double inv_tol, int threads) {
  const double total = integrate(
      grid, [&](const Vec& x) { return nu_density.value(x); }, threads);
  if (std::fabs(total - 1.0) > 1e-8)
    throw ConfigInvalid("variational_bound: nu is not a probability density on this grid");

  // Invariance spot-check with the coordinate trig moments.
  const Vec periods = pair.lam.periods();
  const int d = static_cast<int>(periods.size());
  for (int axis = 0; axis < 2 * d; ++axis) {
    const int a = axis / 2;
    const bool use_cos = (axis % 2) == 0;
    const double k = 2.0 * std::numbers::pi / periods[a];
    auto phi = [&](const Vec& x) {
      return use_cos ? std::cos(k * x[a]) : std::sin(k * x[a]);
    };
    const double before = integrate(
        grid, [&](const Vec& x) { return phi(x) * nu_density.value(x); }, threads);
    const double after = integrate(
        grid, [&](const Vec& x) { return phi(pair.psi.map(x)) * nu_density.value(x); }, threads);
    if (std::fabs(after - before) > inv_tol * std::max(1.0, std::fabs(before)))
      throw NotInvariant("variational_bound: test moment moved by " +
                         std::to_string(std::fabs(after - before)) + " under the map");
  }

  const double mean_g = integrate(
      grid, [&](const Vec& x) { return pair.g.value(x) * nu_density.value(x); }, threads);
  return h_nu - beta * (pair.lam.n() + 1) * mean_g;
}

GibbsReport gibbs_diagnostic(const ContactPair& pair, const ScalarField& mu_density, double beta,
                             double pressure_value, double eps, const std::vector<int>& N_list,
                             const std::vector<Vec>& centers, const Grid& grid) {
  if (centers.empty()) throw ConfigInvalid("gibbs_diagnostic: no centers");
  if (N_list.empty()) throw ConfigInvalid("gibbs_diagnostic: empty N list");
  const int maxN = *std::max_element(N_list.begin(), N_list.end());
  const Vec periods = pair.lam.periods();
  const std::size_t K = grid.count();

  // Node masses of mu; the density must already be normalized.
  std::vector<double> mu(K);
  {
    for (std::size_t i = 0; i < K; ++i) mu[i] = mu_density.value(grid.node(i));
    const double total = pairwise_sum(mu) * grid.cell_volume();
    if (std::fabs(total - 1.0) > 1e-8)
      throw ConfigInvalid("gibbs_diagnostic: mu is not a probability density on this grid");
    for (std::size_t i = 0; i < K; ++i) mu[i] *= grid.cell_volume();
  }

  // March every node orbit and all center orbits together, maintaining the
  // running Bowen distance to each center.
  std::vector<std::vector<Vec>> center_orbits;
  center_orbits.reserve(centers.size());
  for (const Vec& c : centers) center_orbits.push_back(orbit(pair, c, maxN));

  std::vector<Vec> pts(K);
  for (std::size_t i = 0; i < K; ++i) pts[i] = grid.node(i);
  Mat maxdist = Mat::Zero(static_cast<Eigen::Index>(centers.size()),
                          static_cast<Eigen::Index>(K));
  for (std::size_t c = 0; c < centers.size(); ++c)
    for (std::size_t i = 0; i < K; ++i)
      maxdist(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) =
          torus_distance(pts[i], center_orbits[c][0], periods);

  GibbsReport rep;
  rep.beta = beta;
  rep.eps = eps;
  rep.pressure = pressure_value;

  std::size_t next_row = 0;
  std::vector<int> sorted_N = N_list;
  std::sort(sorted_N.begin(), sorted_N.end());

  for (int k = 1; k <= maxN && next_row < sorted_N.size(); ++k) {
    for (std::size_t i = 0; i < K; ++i) pts[i] = wrap_point(pair.psi.map(pts[i]), periods);
    for (std::size_t c = 0; c < centers.size(); ++c)
      for (std::size_t i = 0; i < K; ++i) {
        const double d = torus_distance(pts[i], center_orbits[c][static_cast<std::size_t>(k)],
                                        periods);
        auto& cell = maxdist(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i));
        if (d > cell) cell = d;
      }
    while (next_row < sorted_N.size() && sorted_N[next_row] == k) {
      GibbsRow row;
      row.N = k;
      row.ratio_min = std::numeric_limits<double>::infinity();
      row.ratio_max = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        double ball_mass = 0.0;
        std::size_t inside = 0;
        for (std::size_t i = 0; i < K; ++i)
          if (maxdist(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) <= eps) {
            ball_mass += mu[i];
            ++inside;
          }
        if (inside == 0)
          throw EmptyBall("gibbs_diagnostic: dynamical ball holds no grid node (N=" +
                          std::to_string(k) + ")");
        const double sN = birkhoff_sum(pair, centers[c], k);
        const double denom = std::exp(-beta * (pair.lam.n() + 1) * sN - k * pressure_value);
        const double ratio = ball_mass / denom;
        row.ratio_min = std::min(row.ratio_min, ratio);
        row.ratio_max = std::max(row.ratio_max, ratio);
      }
      rep.rows.push_back(row);
      ++next_row;
    }
  }
  if (next_row != sorted_N.size())
    throw ConfigInvalid("gibbs_diagnostic: N list entries must be at least 1");
  return rep;
}

std::vector<Vec> half_lattice(const Vec& periods) {
  const int d = static_cast<int>(periods.size());
  const int count = 1 << d;
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int mask = 0; mask < count; ++mask) {
    Vec x(d);
    for (int j = 0; j < d; ++j) x[j] = periods[j] * (((mask >> j) & 1) ? 0.75 : 0.25);
    pts.push_back(x);
  }
  return pts;
}

std::vector<Vec> grid_points(const Grid& grid) {
  std::vector<Vec> pts;
  pts.reserve(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i) pts.push_back(grid.node(i));
  return pts;
}

}  // namespace ct
