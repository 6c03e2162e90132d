#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "ct/entropy.hpp"
#include "ct/errors.hpp"
#include "ct/expr.hpp"
#include "ct/pressure.hpp"
#include "doctest.h"

using namespace ct;

namespace {

Vec pt(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

struct Fixture {
  ContactModel model = make_model("torus3");
  ContactForm lam0 = ContactForm::base(model);

  ContactPair strict() const {
    // An x/y translation pulls the base form back to itself: g vanishes.
    return make_pair(lam0, translation_map(pt(0.33, 0.61, 0.0)));
  }
};

std::vector<Vec> lattice(const Vec& periods, int per_axis) {
  std::vector<Vec> out;
  const int d = static_cast<int>(periods.size());
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = periods[i] * idx[static_cast<std::size_t>(i)] / per_axis;
    out.push_back(x);
    int axis = d - 1;
    while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

// Reference greedy scan, written against the definition only: accept a
// candidate when its max-over-time torus distance to every accepted point
// exceeds eps.
std::vector<std::size_t> greedy_oracle(const ContactPair& pair, int N, double eps,
                                       const std::vector<Vec>& cands) {
  std::vector<std::vector<Vec>> orbits;
  for (const Vec& c : cands) orbits.push_back(orbit(pair, c, N));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool ok = true;
    for (std::size_t j : out) {
      double d = 0.0;
      for (int k = 0; k <= N; ++k)
        d = std::max(d, torus_distance(orbits[i][static_cast<std::size_t>(k)],
                                       orbits[j][static_cast<std::size_t>(k)],
                                       pair.lam.periods()));
      if (d <= eps) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("pair construction validates the map") {
  Fixture fx;
  Diffeomorphism swap;
  swap.label = "swap_xy";
  swap.map = [](const Vec& x) { return pt(x[1], x[0], x[2]); };
  CHECK_THROWS_AS(make_pair(fx.lam0, swap), NotContactomorphism);
  CHECK_NOTHROW(fx.strict());
}

TEST_CASE("identity orbits are constant and the Bowen distance is the plain one") {
  Fixture fx;
  const ContactPair id = make_pair(fx.lam0, identity_map(3));
  const std::vector<Vec> oa = orbit(id, pt(0.1, 0.2, 0.3), 4);
  REQUIRE(oa.size() == 5);
  for (const Vec& x : oa) CHECK((x - oa[0]).cwiseAbs().maxCoeff() == 0.0);
  const std::vector<Vec> ob = orbit(id, pt(0.6, 0.2, 0.3), 4);
  CHECK(bowen_distance(oa, ob, fx.model.periods) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("greedy separated set on a coarse lattice: the half-period sublattice") {
  Fixture fx;
  const ContactPair id = make_pair(fx.lam0, identity_map(3));
  const std::vector<Vec> cands = lattice(fx.model.periods, 4);
  REQUIRE(cands.size() == 64);
  const SeparatedSet set = separated_set(id, 1, 0.499, cands);
  // Only points with all coordinates in {0, 1/2} can clear 0.499 under the
  // flat Euclidean wraparound metric; greedy keeps exactly those eight.
  CHECK(set.indices.size() == 8);
  for (std::size_t i : set.indices) {
    const Vec& x = cands[i];
    for (int k = 0; k < 3; ++k) {
      const double frac = x[k] / fx.model.periods[k];
      CHECK((std::fabs(frac) < 1e-12 || std::fabs(frac - 0.5) < 1e-12));
    }
  }
  CHECK(set.indices == greedy_oracle(id, 1, 0.499, cands));
}

TEST_CASE("half lattice at just below half separation survives whole") {
  Fixture fx;
  const ContactPair id = make_pair(fx.lam0, identity_map(3));
  const std::vector<Vec> cands = half_lattice(fx.model.periods);
  REQUIRE(cands.size() == 8);
  const SeparatedSet set = separated_set(id, 1, 0.49, cands);
  CHECK(set.indices.size() == 8);
}

TEST_CASE("oversized radius collapses the separated set to a single point") {
  Fixture fx;
  const ContactPair id = make_pair(fx.lam0, identity_map(3));
  // Torus diameter under the flat metric is sqrt(3)/2 ~ 0.866.
  const SeparatedSet set = separated_set(id, 1, 0.9, lattice(fx.model.periods, 4));
  CHECK(set.indices.size() == 1);
}

TEST_CASE("greedy scan agrees with the definitional oracle on a flow pair") {
  Fixture fx;
  const ContactPair pair =
      make_flow_pair(fx.lam0, parse_scalar_field("cos2pix", fx.model), 1.0, 1e-2);
  const std::vector<Vec> cands = lattice(fx.model.periods, 3);
  for (int N : {1, 2, 3}) {
    const SeparatedSet set = separated_set(pair, N, 0.3, cands);
    CHECK(set.indices == greedy_oracle(pair, N, 0.3, cands));
  }
}

TEST_CASE("partition function at beta zero equals the cardinality exactly") {
  Fixture fx;
  const ContactPair pair =
      make_flow_pair(fx.lam0, parse_scalar_field("cos2pix", fx.model), 1.0, 1e-2);
  const std::vector<Vec> cands = lattice(fx.model.periods, 4);
  for (int N : {1, 2}) {
    const PartitionValue pv = partition_function(pair, N, 0.3, 0.0, cands);
    CHECK(pv.Z == static_cast<double>(pv.count));
    CHECK(pv.logZ == doctest::Approx(std::log(static_cast<double>(pv.count))).epsilon(1e-15));
    CHECK(pv.count > 1);
  }
}

TEST_CASE("strict pair: vanishing exponent, partition pinned at the count") {
  Fixture fx;
  const ContactPair strict = fx.strict();
  Rng rng(7);
  for (int N : {1, 4, 8}) {
    for (int i = 0; i < 5; ++i) {
      const Vec x = rng.point(fx.model.periods);
      CHECK(std::fabs(birkhoff_sum(strict, x, N)) < N * 1e-7);
    }
    const std::vector<Vec> cands = half_lattice(fx.model.periods);
    const PartitionValue pv = partition_function(strict, N, 0.45, 1.0, cands);
    const double card = static_cast<double>(pv.count);
    CHECK(std::fabs(pv.Z - card) < card * N * 1e-6);
  }
}

TEST_CASE("separated sets shrink as the radius grows and grow with the horizon") {
  Fixture fx;
  const ContactPair pair =
      make_flow_pair(fx.lam0, parse_scalar_field("cos2pix+0.4*sin2piy", fx.model), 1.0, 1e-2);
  const std::vector<Vec> cands = lattice(fx.model.periods, 4);
  std::size_t prev = cands.size() + 1;
  for (double eps : {0.2, 0.35, 0.5, 0.7}) {
    const std::size_t c = partition_function(pair, 2, eps, 0.0, cands).count;
    CHECK(c <= prev);
    prev = c;
  }
  std::size_t prev_n = 0;
  for (int N : {1, 2, 3, 4}) {
    const std::size_t c = partition_function(pair, N, 0.45, 0.0, cands).count;
    CHECK(c >= prev_n);
    prev_n = c;
  }
}

TEST_CASE("birkhoff sums of a flow pair track the iterated pullback multiplier") {
  Fixture fx;
  const ScalarField H = parse_scalar_field("cos2pix", fx.model);
  const ContactPair pair = make_flow_pair(fx.lam0, H, 1.0, 1e-3);
  // This flow is strongly dissipative: every orbit settles onto a sink where
  // the exponent accumulates -2 pi per step, so the N-fold pullback pairing
  // has to cancel down to exp(-2 pi N). Orbits that cross an expanding
  // stretch before settling freeze rounding noise at that stretch's scale,
  // which caps the exponent a double can recover near log(eps) + peak; the
  // first probe crosses such a stretch, so it is only compared while its
  // exponent stays inside that headroom. The cap is a precision floor, not
  // a step-size effect: it does not move when dt shrinks.
  const std::pair<Vec, int> probes[] = {
      {pt(0.15, 0.3, 0.7), 4}, {pt(0.8, 0.05, 0.4), 8}, {pt(0.5, 0.5, 0.1), 8}};
  for (int N : {2, 4, 8}) {
    const Diffeomorphism psiN = iterate_map(pair.psi, N);
    for (const auto& [x, maxN] : probes) {
      if (N > maxN) continue;
      const double sum = birkhoff_sum(pair, x, N);
      const double gN = conformal_exponent(fx.lam0, psiN, x);
      CHECK(std::fabs(sum - gN) < N * 1e-3);
    }
  }
}

TEST_CASE("pressure ladder for a strict pair decreases like log card over N") {
  Fixture fx;
  const ContactPair strict = fx.strict();
  const std::vector<Vec> cands = lattice(fx.model.periods, 4);
  const PressureEstimate est = pressure_estimate(strict, 1.0, 0.45, {1, 2, 4, 8}, cands);
  REQUIRE(est.rows.size() == 4);
  CHECK(est.monotone);
  CHECK(est.value == est.rows.back().estimate);
  for (std::size_t k = 1; k < est.rows.size(); ++k)
    CHECK(est.rows[k].estimate <= est.rows[k - 1].estimate + 1e-12);
  // Translations are isometries, so the count is N-independent here and the
  // estimate is exactly log(count)/N.
  for (const auto& row : est.rows)
    CHECK(std::fabs(row.estimate - row.logZ / row.N) < 1e-15);
}

TEST_CASE("log partition value is midpoint convex in beta") {
  Fixture fx;
  const ContactPair pair =
      make_flow_pair(fx.lam0, parse_scalar_field("cos2pix", fx.model), 1.0, 1e-2);
  const std::vector<Vec> cands = lattice(fx.model.periods, 4);
  for (double b1 : {-1.0, 0.0, 0.8}) {
    for (double db : {0.4, 1.0}) {
      const double b2 = b1 + db;
      const double la = partition_function(pair, 3, 0.3, b1, cands).logZ;
      const double lb = partition_function(pair, 3, 0.3, b2, cands).logZ;
      const double lm = partition_function(pair, 3, 0.3, 0.5 * (b1 + b2), cands).logZ;
      CHECK(lm <= 0.5 * (la + lb) + 1e-10);
    }
  }
}

TEST_CASE("variational bound: invariant measure in, entropy plus moment out") {
  Fixture fx;
  const Grid grid = make_grid(fx.model.periods, 16);
  const ContactPair strict = fx.strict();
  double c = 0.0;
  const ContactForm lam0n = normalize(fx.lam0, grid, &c);
  const ScalarField nu = lam0n.density_field();

  // g vanishes for the strict pair, so the bound is the entropy input alone.
  CHECK(std::fabs(variational_bound(strict, nu, 0.37, 2.0, grid) - 0.37) < 1e-9);
  // At beta 0 the moment term drops out for any pair.
  const ContactPair flow =
      make_flow_pair(fx.lam0, parse_scalar_field("cos2pix", fx.model), 1.0, 1e-2);
  CHECK(std::fabs(variational_bound(flow, nu, 0.12, 0.0, grid) - 0.12) < 1e-9);
}

TEST_CASE("variational bound rejects bad reference measures") {
  Fixture fx;
  const Grid grid = make_grid(fx.model.periods, 16);
  const ContactPair strict = fx.strict();

  ScalarField not_normalized = constant_field(2.0, 3);
  CHECK_THROWS_AS(variational_bound(strict, not_normalized, 0.0, 1.0, grid), ConfigInvalid);

  // Unit mass but visibly moved by the x-translation: fails the spot check.
  const ScalarField skew = parse_scalar_field("1+0.5*cos2pix", fx.model);
  CHECK_THROWS_AS(variational_bound(strict, skew, 0.0, 1.0, grid), NotInvariant);
}

TEST_CASE("gibbs diagnostic: homogeneous case gives equal ratios across centers") {
  Fixture fx;
  const Grid grid = make_grid(fx.model.periods, 16);
  const ContactPair strict = fx.strict();
  double c = 0.0;
  const ContactForm lam0n = normalize(fx.lam0, grid, &c);
  const ScalarField mu = lam0n.density_field();

  const std::vector<Vec> centers = half_lattice(fx.model.periods);
  const GibbsReport rep = gibbs_diagnostic(strict, mu, 1.0, 0.0, 0.2, {1, 2}, centers, grid);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.ratio_min > 0.0);
    // Translation orbits of a uniform measure: every center sees the same
    // ball mass, so the spread collapses.
    CHECK(row.ratio_max - row.ratio_min < 1e-9 * row.ratio_max);
  }
}

TEST_CASE("gibbs diagnostic flags unusable inputs") {
  Fixture fx;
  const Grid grid = make_grid(fx.model.periods, 16);
  const ContactPair strict = fx.strict();
  double c = 0.0;
  const ContactForm lam0n = normalize(fx.lam0, grid, &c);
  const ScalarField mu = lam0n.density_field();

  // A radius below the node spacing leaves the off-node ball empty.
  const std::vector<Vec> off = {pt(1.0 / 16 + 0.013, 0.27, 0.71)};
  CHECK_THROWS_AS(gibbs_diagnostic(strict, mu, 1.0, 0.0, 0.01, {1}, off, grid), EmptyBall);

  const ScalarField not_normalized = constant_field(3.0, 3);
  CHECK_THROWS_AS(gibbs_diagnostic(strict, not_normalized, 1.0, 0.0, 0.2,
                                   {1}, half_lattice(fx.model.periods), grid),
                  ConfigInvalid);
  CHECK_THROWS_AS(
      gibbs_diagnostic(strict, mu, 1.0, 0.0, 0.2, {}, half_lattice(fx.model.periods), grid),
      ConfigInvalid);
}

TEST_CASE("candidate helpers: half lattice coordinates and grid node order") {
  Fixture fx;
  const std::vector<Vec> half = half_lattice(fx.model.periods);
  REQUIRE(half.size() == 8);
  const Grid grid = make_grid(fx.model.periods, 16);
  const std::vector<Vec> nodes = grid_points(grid);
  REQUIRE(nodes.size() == grid.count());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    CHECK((nodes[i] - grid.node(i)).cwiseAbs().maxCoeff() == 0.0);
}
