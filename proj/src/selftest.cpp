#include "ct/selftest.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "ct/artifact.hpp"
#include "ct/entropy.hpp"
#include "ct/errors.hpp"
#include "ct/expr.hpp"
#include "ct/flows.hpp"
#include "ct/maxent.hpp"
#include "ct/pressure.hpp"

namespace ct {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec pt(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

}  // namespace

SelftestReport run_selftest(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  SelftestReport rep;
  auto stage = [&rep](bool pass, const std::string& text) {
    rep.lines.push_back(std::string(pass ? "ok   " : "FAIL ") + text);
    rep.ok = rep.ok && pass;
  };
  auto emit = [&](const std::string& name, const Table& t) {
    t.write_csv(out_dir + "/" + name, cfg);
    rep.artifacts.push_back(name);
  };

  const ContactModel model = make_model(cfg.model_name, cfg.model_n);
  const ContactForm lam0 = ContactForm::base(model)
                               .with_tolerances(cfg.tolerances())
                               .with_fd(cfg.fd_steps());
  const Grid grid = make_grid(model.periods, cfg.resolution);

  // Stage 1: reference mass and normalization.
  {
    const double v = mass(lam0, grid, cfg.threads);
    double c = 0.0;
    const ContactForm lam0n = normalize(lam0, grid, &c);
    const double v1 = mass(lam0n, grid, cfg.threads);
    Table t({"mass", "normalizing_constant", "normalized_mass"});
    t.add_row({v, c, v1});
    emit("mass.csv", t);
    stage(std::fabs(v - kTwoPi) < 1e-8 && std::fabs(v1 - 1.0) < 1e-10,
          "mass: V=" + format_double(v) + " normalized=" + format_double(v1));
  }

  // Stage 2: relative entropy of a constant rescaling, closed form
  // 2 c^2 V log c.
  {
    const double c = 2.0;
    const double s = relative_entropy(lam0.rescaled(c), lam0, grid, cfg.threads);
    const double expect = 2.0 * c * c * kTwoPi * std::log(c);
    Table t({"c", "entropy", "closed_form"});
    t.add_row({c, s, expect});
    emit("entropy.csv", t);
    stage(std::fabs(s - expect) < 1e-7, "entropy: S=" + format_double(s));
  }

  // Stage 3: Reeb field at fixed points.
  {
    Table t({"x", "y", "z", "R1", "R2", "R3"});
    bool pass = true;
    for (const Vec& x : {pt(0, 0, 0), pt(0.3, 0.7, 0.25)}) {
      const Vec R = reeb_field(lam0, x);
      t.add_row({x[0], x[1], x[2], R[0], R[1], R[2]});
      const double k = kTwoPi / model.periods[2];
      pass = pass && std::fabs(R[0] - std::cos(k * x[2])) < 1e-10 &&
             std::fabs(R[1] - std::sin(k * x[2])) < 1e-10 && std::fabs(R[2]) < 1e-10;
    }
    emit("reeb.csv", t);
    stage(pass, "reeb: catalog field reproduced at probe points");
  }

  // Stage 4: Hamiltonian flow trace plus the two exponent routes.
  {
    const ScalarField H = parse_scalar_field("cos2pix", model);
    FlowSpec spec{lam0, H, 0.25, cfg.dt};
    const Vec x0 = pt(0.15, 0.35, 0.6);
    const FlowTrace tr = flow_trace(spec, x0);
    Table t({"t", "x", "y", "z", "g"});
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      t.add_row({tr.times[i], tr.points[i][0], tr.points[i][1], tr.points[i][2], tr.g[i]});
    emit("flow_trace.csv", t);
    const double g_int = tr.g.back();
    const double g_pull = conformal_exponent(lam0, flow_map(spec), x0);
    stage(std::fabs(g_int - g_pull) < 1e-4,
          "flow: integrated exponent " + format_double(g_int) + " vs pullback " +
              format_double(g_pull));
  }

  // Stage 5: moment matching against the closed-form Bessel dual.
  {
    const ContactForm lam0n = normalize(lam0, grid);
    MaxEntProblem prob(lam0n, parse_observables("cos2pix", model), grid);
    Vec target(1);
    target << 0.3;
    const MaxEntSolution sol = solve_maxent(prob, target, cfg.newton_tol, cfg.gram_tol);
    std::ostringstream data;
    data << "{\"p\":[" << format_double(sol.p[0]) << "],\"q\":[" << format_double(sol.q[0])
         << "],\"w\":" << format_double(sol.w) << ",\"entropy\":" << format_double(sol.entropy)
         << ",\"iterations\":" << sol.iterations << "}";
    write_json_artifact(out_dir + "/maxent.json", cfg, data.str());
    rep.artifacts.push_back("maxent.json");
    stage(std::fabs(sol.q[0] - 0.3) < 1e-9,
          "maxent: moment matched, p=" + format_double(sol.p[0]));
  }

  // Stage 6: moment-entropy sweep residuals.
  {
    const ContactForm lam0n = normalize(lam0, grid);
    MaxEntProblem prob(lam0n, parse_observables("cos2pix", model), grid);
    std::vector<Vec> path;
    for (int k = 0; k <= 20; ++k) {
      Vec p(1);
      p << 1.0 * k / 20;
      path.push_back(p);
    }
    const SweepReport sw = legendrian_sweep(prob, path);
    Table t({"p_1", "q_1", "z", "residual"});
    for (std::size_t k = 0; k < sw.points.size(); ++k)
      t.add_row({sw.points[k].p[0], sw.points[k].q[0], sw.points[k].z,
                 k == 0 ? 0.0 : sw.residuals[k - 1]});
    emit("eq.csv", t);
    stage(sw.max_residual < 1e-4 && sw.nonmonotone_segments == 0,
          "sweep: max residual " + format_double(sw.max_residual));
  }

  // Stage 7: pressure ladder for the closed-form Reeb time-1 map.
  {
    const ContactPair pair = make_pair(lam0, base_reeb_time_map(model, 1.0));
    const std::vector<Vec> cands = half_lattice(model.periods);
    const PressureEstimate est = pressure_estimate(pair, 1.0, 0.1, {1, 2, 4}, cands);
    Table t({"N", "count", "logZ", "estimate"});
    for (const auto& row : est.rows)
      t.add_row({static_cast<double>(row.N), static_cast<double>(row.count), row.logZ,
                 row.estimate});
    emit("pressure.csv", t);
    stage(est.monotone, "pressure: estimates nonincreasing, final " + format_double(est.value));
  }

  // Stage 8: second-variation diagnostic in two pure rescaling directions.
  // The base point sits away from the reference form so the log-ratio term
  // contributes, and the directions coincide so the value is bounded away
  // from zero (a zero value would make the relative error meaningless).
  {
    const ContactForm lam0n = normalize(lam0, grid);
    const ContactForm lam = ContactForm::scale(model, parse_scalar_field("1+0.3*cos2pix", model))
                                .with_tolerances(cfg.tolerances())
                                .with_fd(cfg.fd_steps());
    const Variation v1 = Variation::scale_only(parse_scalar_field("cos2pix", model), 3);
    const Variation v2 = v1;
    const Grid small_grid = make_grid(model.periods, 16);
    const HessianReport hr = hessian_big(lam0n, lam, v1, v2, small_grid, 1e-3, cfg.threads);
    std::ostringstream data;
    data << "{\"value\":" << format_double(hr.value)
         << ",\"fd_reference\":" << format_double(hr.fd_reference)
         << ",\"abs_err\":" << format_double(hr.abs_err)
         << ",\"rel_err\":" << format_double(hr.rel_err)
         << ",\"symmetry_defect\":" << format_double(hr.symmetry_defect) << "}";
    write_json_artifact(out_dir + "/hessian.json", cfg, data.str());
    rep.artifacts.push_back("hessian.json");
    stage(hr.rel_err < 1e-4, "hessian: value " + format_double(hr.value) + " vs fd " +
                                 format_double(hr.fd_reference));
  }

  return rep;
}

}  // namespace ct
