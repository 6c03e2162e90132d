// contact-thermo: command-line front end for the contact thermodynamics
// library. Subcommands cover reference masses and entropies, Reeb and
// Hamiltonian frame evaluation, flows and cocycle checks, moment matching,
// moment-entropy sweeps, second-variation diagnostics, topological pressure
// ladders, and Gibbs ratio checks. Exit codes: 0 success, 2 for invalid
// requests (bad config, unreachable targets, non-contact maps), 1 for
// numerical failures inside a valid request.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ct/artifact.hpp"
#include "ct/config.hpp"
#include "ct/entropy.hpp"
#include "ct/errors.hpp"
#include "ct/expr.hpp"
#include "ct/flows.hpp"
#include "ct/maxent.hpp"
#include "ct/pressure.hpp"
#include "ct/selftest.hpp"

namespace {

using namespace ct;

struct Cli {
  RunConfig cfg;
  std::string config_file;
  std::vector<std::string> overrides;  // key=value

  void resolve() {
    if (!config_file.empty()) cfg = load_config_file(config_file);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigInvalid("--set expects key=value, got '" + kv + "'");
      config_set(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
  }
};

Vec parse_point(const std::string& text, int dim) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigInvalid("cannot parse coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(vals.size()) != dim)
    throw ConfigInvalid("expected " + std::to_string(dim) + " comma-separated values");
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = vals[static_cast<std::size_t>(i)];
  return x;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigInvalid("cannot parse number '" + item + "'");
    }
  }
  if (vals.empty()) throw ConfigInvalid("expected a comma-separated number list");
  return vals;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_doubles(text)) out.push_back(static_cast<int>(v));
  return out;
}

// Multiplier path from a CSV file: one p-vector per line, comma-separated.
// Blank lines and '#' comments are skipped; a leading non-numeric line is
// treated as a header.
std::vector<Vec> load_path_file(const std::string& path, int n_obs) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open path file '" + path + "'");
  std::vector<Vec> rows;
  std::string line;
  bool first_data = true;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::vector<double> vals;
    try {
      vals = parse_doubles(line);
    } catch (const ConfigInvalid&) {
      if (first_data) {
        first_data = false;  // header row
        continue;
      }
      throw;
    }
    first_data = false;
    if (static_cast<int>(vals.size()) != n_obs)
      throw ConfigInvalid("path file row has " + std::to_string(vals.size()) +
                          " columns, expected " + std::to_string(n_obs));
    Vec p(n_obs);
    for (int i = 0; i < n_obs; ++i) p[i] = vals[static_cast<std::size_t>(i)];
    rows.push_back(p);
  }
  if (rows.size() < 2) throw ConfigInvalid("path file needs at least two rows");
  return rows;
}

struct Env {
  ContactModel model;
  ContactForm lam0;
  Grid grid;
};

Env make_env(const RunConfig& cfg) {
  ContactModel model = make_model(cfg.model_name, cfg.model_n);
  ContactForm lam0 =
      ContactForm::base(model).with_tolerances(cfg.tolerances()).with_fd(cfg.fd_steps());
  Grid grid = make_grid(model.periods, cfg.resolution);
  return {model, lam0, grid};
}

ContactForm scaled_form(const Env& env, const std::string& scale_expr) {
  if (scale_expr.empty()) return env.lam0;
  ScalarField f = parse_scalar_field(scale_expr, env.model);
  return ContactForm::scale(env.model, f)
      .with_tolerances(env.lam0.tol())
      .with_fd(env.lam0.fd());
}

void print_value(const std::string& name, double v) {
  std::cout << name << " = " << format_double(v) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"thermodynamic invariants of contact flows on torus models"};
  app.require_subcommand(1);
  app.fallthrough();

  Cli cli;
  app.add_option("--config", cli.config_file, "config file (key=value lines)");
  app.add_option("--set", cli.overrides, "override a config key (key=value), repeatable");
  app.add_option("--model", cli.cfg.model_name, "catalog model name");
  app.add_option("--n", cli.cfg.model_n, "model dimension parameter");
  app.add_option("--resolution", cli.cfg.resolution, "quadrature nodes per axis");
  app.add_option("--seed", cli.cfg.seed, "random seed");
  app.add_option("--threads", cli.cfg.threads, "worker threads (0 = auto)");
  app.add_option("--dt", cli.cfg.dt, "flow integrator step");
  app.add_option("--format", cli.cfg.output_format, "artifact format: csv or json");

  // --- mass ---------------------------------------------------------------
  auto* c_mass = app.add_subcommand("mass", "total mass of the contact volume form");
  std::string mass_scale;
  std::string mass_emit;
  c_mass->add_option("--scale", mass_scale, "scale-factor expression for the form");
  c_mass->add_option("--emit", mass_emit, "write a CSV artifact");
  c_mass->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const double v = mass(scaled_form(env, mass_scale), env.grid, cli.cfg.threads);
    print_value("mass", v);
    if (!mass_emit.empty()) {
      Table t({"mass"});
      t.add_row({v});
      t.write_csv(mass_emit, cli.cfg);
    }
  });

  // --- entropy ------------------------------------------------------------
  auto* c_entropy =
      app.add_subcommand("entropy", "relative entropy S(f1 * lambda0 | f2 * lambda0)");
  std::string ent_f1 = "1", ent_f2 = "1";
  std::string ent_emit;
  c_entropy->add_option("--f1", ent_f1, "scale factor of the first form");
  c_entropy->add_option("--f2", ent_f2, "scale factor of the second form");
  c_entropy->add_option("--emit", ent_emit, "write a CSV artifact");
  c_entropy->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const double s = relative_entropy(scaled_form(env, ent_f1), scaled_form(env, ent_f2),
                                      env.grid, cli.cfg.threads);
    print_value("entropy", s);
    if (!ent_emit.empty()) {
      Table t({"entropy"});
      t.add_row({s});
      t.write_csv(ent_emit, cli.cfg);
    }
  });

  // --- reeb ---------------------------------------------------------------
  auto* c_reeb = app.add_subcommand("reeb", "Reeb field at a point");
  std::string reeb_x = "0,0,0";
  std::string reeb_scale;
  c_reeb->add_option("--x", reeb_x, "evaluation point (comma-separated)");
  c_reeb->add_option("--scale", reeb_scale, "scale-factor expression for the form");
  c_reeb->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const Vec x = parse_point(reeb_x, env.model.dim());
    const Vec R = reeb_field(scaled_form(env, reeb_scale), x);
    std::cout << "reeb =";
    for (int i = 0; i < R.size(); ++i) std::cout << ' ' << format_double(R[i]);
    std::cout << "\n";
  });

  // --- flow ---------------------------------------------------------------
  auto* c_flow = app.add_subcommand("flow", "contact Hamiltonian flow of a point");
  std::string flow_ham = "cos2pix";
  std::string flow_x = "0.15,0.35,0.6";
  double flow_t = 1.0;
  std::string flow_emit;
  c_flow->add_option("--ham", flow_ham, "Hamiltonian expression");
  c_flow->add_option("--x", flow_x, "initial point");
  c_flow->add_option("--t", flow_t, "flow time (may be negative)");
  c_flow->add_option("--emit", flow_emit, "write the trace as CSV (t,x,y,z,g)");
  c_flow->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    FlowSpec spec{env.lam0, parse_scalar_field(flow_ham, env.model), flow_t, cli.cfg.dt};
    const Vec x0 = parse_point(flow_x, env.model.dim());
    const FlowTrace tr = flow_trace(spec, x0);
    const Vec& xe = tr.points.back();
    std::cout << "endpoint =";
    for (int i = 0; i < xe.size(); ++i) std::cout << ' ' << format_double(xe[i]);
    std::cout << "\n";
    print_value("g", tr.g.back());
    if (!flow_emit.empty()) {
      Table t({"t", "x", "y", "z", "g"});
      for (std::size_t i = 0; i < tr.times.size(); ++i)
        t.add_row({tr.times[i], tr.points[i][0], tr.points[i][1], tr.points[i][2], tr.g[i]});
      t.write_csv(flow_emit, cli.cfg);
    }
  });

  // --- cocycle-check --------------------------------------------------------
  auto* c_coc = app.add_subcommand("cocycle-check",
                                   "additivity of the conformal exponent under composition");
  std::string coc_ham = "cos2pix";
  double coc_t1 = 1.0, coc_t2 = 0.5;
  int coc_samples = 50, coc_nfold = 4;
  c_coc->add_option("--ham", coc_ham, "Hamiltonian expression");
  c_coc->add_option("--t1", coc_t1, "flow time of the outer map");
  c_coc->add_option("--t2", coc_t2, "flow time of the inner map");
  c_coc->add_option("--samples", coc_samples, "sample count");
  c_coc->add_option("--nfold", coc_nfold, "iteration depth for the N-fold identity");
  c_coc->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const ScalarField H = parse_scalar_field(coc_ham, env.model);
    const Diffeomorphism psi = flow_map({env.lam0, H, coc_t1, cli.cfg.dt});
    const Diffeomorphism phi = flow_map({env.lam0, H, coc_t2, cli.cfg.dt});
    Rng rng(cli.cfg.seed);
    const CocycleReport rep =
        cocycle_check(env.lam0, psi, phi, coc_samples, coc_nfold, rng);
    print_value("pair_defect", rep.max_pair_defect);
    print_value("nfold_defect", rep.max_nfold_defect);
    print_value("growth_lhs", rep.growth_lhs);
    print_value("growth_rhs", rep.growth_rhs);
  });

  // --- maxent ---------------------------------------------------------------
  auto* c_max = app.add_subcommand("maxent", "constrained max-entropy equilibrium");
  std::string max_obs = "cos2pix";
  std::string max_targets = "0.3";
  bool max_volume = false;
  std::string max_emit;
  c_max->add_option("--obs", max_obs, "comma-separated observable expressions");
  c_max->add_option("--targets", max_targets, "target moments");
  c_max->add_flag("--volume", max_volume, "solve with the volume constraint explicit");
  c_max->add_option("--emit", max_emit, "write a JSON artifact");
  c_max->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const ContactForm lam0n = normalize(env.lam0, env.grid);
    MaxEntProblem prob(lam0n, parse_observables(max_obs, env.model), env.grid);
    const std::vector<double> tv = parse_doubles(max_targets);
    if (static_cast<int>(tv.size()) != prob.n_obs())
      throw ConfigInvalid("targets and observables disagree in count");
    Vec targets(prob.n_obs());
    for (int i = 0; i < targets.size(); ++i) targets[i] = tv[static_cast<std::size_t>(i)];
    const MaxEntSolution sol =
        max_volume ? equilibrium_with_volume(prob, targets, cli.cfg.newton_tol, cli.cfg.gram_tol)
                   : solve_maxent(prob, targets, cli.cfg.newton_tol, cli.cfg.gram_tol);
    for (int i = 0; i < sol.p.size(); ++i)
      print_value("p_" + std::to_string(i + 1), sol.p[i]);
    for (int i = 0; i < sol.q.size(); ++i)
      print_value("q_" + std::to_string(i + 1), sol.q[i]);
    print_value("w", sol.w);
    print_value("entropy", sol.entropy);
    std::cout << "iterations = " << sol.iterations << "\n";
    if (!max_emit.empty()) {
      std::ostringstream data;
      auto vec_json = [](const Vec& v) {
        std::string s = "[";
        for (int i = 0; i < v.size(); ++i) {
          if (i) s += ',';
          s += format_double(v[i]);
        }
        return s + "]";
      };
      data << "{\"p\":" << vec_json(sol.p) << ",\"q\":" << vec_json(sol.q)
           << ",\"w\":" << format_double(sol.w)
           << ",\"entropy\":" << format_double(sol.entropy)
           << ",\"iterations\":" << sol.iterations << "}";
      write_json_artifact(max_emit, cli.cfg, data.str());
    }
  });

  // --- legendrian-sweep ------------------------------------------------------
  auto* c_sweep = app.add_subcommand(
      "legendrian-sweep", "moment-entropy correspondence along a parameter path");
  std::string sw_obs = "cos2pix";
  std::string sw_start, sw_end = "2";
  int sw_steps = 200;
  std::string sw_path_file;
  std::string sw_emit;
  c_sweep->add_option("--obs", sw_obs, "comma-separated observable expressions");
  c_sweep->add_option("--p-start", sw_start, "path start (defaults to 0)");
  c_sweep->add_option("--p-end", sw_end, "path end");
  c_sweep->add_option("--steps", sw_steps, "number of segments");
  c_sweep->add_option("--path-file", sw_path_file,
                      "CSV of multiplier rows; overrides the linear path options");
  c_sweep->add_option("--emit", sw_emit, "write the sweep as CSV");
  c_sweep->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const ContactForm lam0n = normalize(env.lam0, env.grid);
    MaxEntProblem prob(lam0n, parse_observables(sw_obs, env.model), env.grid);
    const int N = prob.n_obs();
    std::vector<Vec> path;
    if (!sw_path_file.empty()) {
      path = load_path_file(sw_path_file, N);
    } else {
      Vec p0 = Vec::Zero(N), p1(N);
      if (!sw_start.empty()) {
        const auto v = parse_doubles(sw_start);
        if (static_cast<int>(v.size()) != N) throw ConfigInvalid("p-start has wrong dimension");
        for (int i = 0; i < N; ++i) p0[i] = v[static_cast<std::size_t>(i)];
      }
      const auto v1 = parse_doubles(sw_end);
      if (static_cast<int>(v1.size()) != N) throw ConfigInvalid("p-end has wrong dimension");
      for (int i = 0; i < N; ++i) p1[i] = v1[static_cast<std::size_t>(i)];
      if (sw_steps < 1) throw ConfigInvalid("steps must be positive");
      for (int k = 0; k <= sw_steps; ++k)
        path.push_back(p0 + (static_cast<double>(k) / sw_steps) * (p1 - p0));
    }
    const SweepReport rep = legendrian_sweep(prob, path);
    print_value("max_residual", rep.max_residual);
    std::cout << "nonmonotone_segments = " << rep.nonmonotone_segments << "\n";
    if (!sw_emit.empty()) {
      std::vector<std::string> cols;
      for (int i = 1; i <= N; ++i) cols.push_back("p_" + std::to_string(i));
      for (int i = 1; i <= N; ++i) cols.push_back("q_" + std::to_string(i));
      cols.push_back("z");
      cols.push_back("residual");
      Table t(cols);
      for (std::size_t k = 0; k < rep.points.size(); ++k) {
        std::vector<double> row;
        for (int i = 0; i < N; ++i) row.push_back(rep.points[k].p[i]);
        for (int i = 0; i < N; ++i) row.push_back(rep.points[k].q[i]);
        row.push_back(rep.points[k].z);
        row.push_back(k == 0 ? 0.0 : rep.residuals[k - 1]);
        t.add_row(row);
      }
      t.write_csv(sw_emit, cli.cfg);
    }
  });

  // --- hessian-check -----------------------------------------------------------
  auto* c_hess = app.add_subcommand(
      "hessian-check", "second variation of the entropy functional vs. finite differences");
  std::string hs_scale = "1";
  std::string hs_h1 = "cos2pix", hs_h2 = "cos2pix";
  std::string hs_y1, hs_y2;
  double hs_fd_step = 1e-3;
  std::string hs_emit;
  c_hess->add_option("--scale", hs_scale, "scale factor of the base point form");
  c_hess->add_option("--h1", hs_h1, "first rescaling direction");
  c_hess->add_option("--h2", hs_h2, "second rescaling direction");
  c_hess->add_option("--y1", hs_y1,
                     "energy whose Hamiltonian hyperplane part drives the first variation");
  c_hess->add_option("--y2", hs_y2, "same for the second variation");
  c_hess->add_option("--fd-step", hs_fd_step, "step of the second-difference reference");
  c_hess->add_option("--emit", hs_emit, "write the report as JSON");
  c_hess->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const ContactForm lam0n = normalize(env.lam0, env.grid);
    const ContactForm lam = (hs_scale == "1")
                                ? lam0n
                                : ContactForm::scale(env.model,
                                                     parse_scalar_field(hs_scale, env.model))
                                      .with_tolerances(env.lam0.tol())
                                      .with_fd(env.lam0.fd());
    auto make_var = [&](const std::string& h, const std::string& y) {
      Variation v = Variation::scale_only(parse_scalar_field(h, env.model), env.model.dim());
      if (!y.empty()) {
        const ScalarField E = parse_scalar_field(y, env.model);
        ContactForm form = lam;
        v.y_pi.identically_zero = false;
        v.y_pi.jac = nullptr;
        v.y_pi.value = [form, E](const Vec& x) {
          const HamFrame fr = ham_frame(form, E, x);
          return Vec(fr.X + E.value(x) * fr.R);
        };
        v.y_pi.label = "ham_xi(" + y + ")";
      }
      return v;
    };
    const Variation v1 = make_var(hs_h1, hs_y1);
    const Variation v2 = make_var(hs_h2, hs_y2);
    const HessianReport rep =
        hessian_big(lam0n, lam, v1, v2, env.grid, hs_fd_step, cli.cfg.threads);
    std::ostringstream data;
    data << "{\"value\":" << format_double(rep.value)
         << ",\"fd_reference\":" << format_double(rep.fd_reference)
         << ",\"abs_err\":" << format_double(rep.abs_err)
         << ",\"rel_err\":" << format_double(rep.rel_err)
         << ",\"symmetry_defect\":" << format_double(rep.symmetry_defect) << "}";
    std::cout << data.str() << "\n";
    if (!hs_emit.empty()) write_json_artifact(hs_emit, cli.cfg, data.str());
  });

  // --- pressure -----------------------------------------------------------------
  auto* c_press = app.add_subcommand("pressure", "topological pressure ladder");
  std::string pr_ham;
  bool pr_reeb = false;
  double pr_t = 1.0, pr_beta = 1.0, pr_eps = 0.1;
  std::string pr_N = "1,2,4,8";
  std::string pr_cand = "coarse";
  std::string pr_emit;
  c_press->add_option("--ham", pr_ham, "Hamiltonian expression for a flow pair");
  c_press->add_flag("--reeb", pr_reeb, "use the closed-form Reeb time map instead");
  c_press->add_option("--t", pr_t, "map time");
  c_press->add_option("--beta", pr_beta, "inverse-temperature weight");
  c_press->add_option("--eps", pr_eps, "separation scale");
  c_press->add_option("--N", pr_N, "comma-separated time ladder");
  c_press->add_option("--candidates", pr_cand,
                      "candidate set: 'coarse' (half lattice) or 'grid'");
  c_press->add_option("--emit", pr_emit, "write the ladder as CSV");
  c_press->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    ContactPair pair = pr_reeb
                           ? make_pair(env.lam0, base_reeb_time_map(env.model, pr_t))
                           : make_flow_pair(env.lam0,
                                            parse_scalar_field(
                                                pr_ham.empty() ? "cos2pix" : pr_ham, env.model),
                                            pr_t, cli.cfg.dt);
    std::vector<Vec> cands;
    if (pr_cand == "coarse") {
      cands = half_lattice(env.model.periods);
    } else if (pr_cand == "grid") {
      cands = grid_points(env.grid);
    } else {
      throw ConfigInvalid("--candidates must be 'coarse' or 'grid'");
    }
    const PressureEstimate est =
        pressure_estimate(pair, pr_beta, pr_eps, parse_ints(pr_N), cands);
    for (const auto& row : est.rows)
      std::cout << "N=" << row.N << " count=" << row.count
                << " logZ=" << format_double(row.logZ)
                << " estimate=" << format_double(row.estimate) << "\n";
    std::cout << "monotone = " << (est.monotone ? "yes" : "no") << "\n";
    print_value("pressure", est.value);
    if (!pr_emit.empty()) {
      Table t({"N", "count", "logZ", "estimate"});
      for (const auto& row : est.rows)
        t.add_row({static_cast<double>(row.N), static_cast<double>(row.count), row.logZ,
                   row.estimate});
      t.write_csv(pr_emit, cli.cfg);
    }
  });

  // --- gibbs-check ---------------------------------------------------------------
  auto* c_gibbs = app.add_subcommand(
      "gibbs-check", "Bowen-ball mass against the Gibbs weight for the Reeb time map");
  double gb_t = 1.0, gb_beta = 1.0, gb_eps = 0.2;
  std::string gb_N = "2,4";
  double gb_P = 0.0;
  c_gibbs->add_option("--t", gb_t, "map time");
  c_gibbs->add_option("--beta", gb_beta, "inverse-temperature weight");
  c_gibbs->add_option("--eps", gb_eps, "ball radius");
  c_gibbs->add_option("--N", gb_N, "comma-separated times");
  auto* gb_P_opt = c_gibbs->add_option("--P", gb_P, "pressure value (default: ladder estimate)");
  c_gibbs->callback([&] {
    cli.resolve();
    const Env env = make_env(cli.cfg);
    const ContactPair pair = make_pair(env.lam0, base_reeb_time_map(env.model, gb_t));
    const std::vector<Vec> centers = half_lattice(env.model.periods);
    const std::vector<int> Ns = parse_ints(gb_N);
    double P = gb_P;
    if (gb_P_opt->count() == 0) {
      const PressureEstimate est = pressure_estimate(pair, gb_beta, gb_eps, Ns, centers);
      P = est.value;
    }
    const ContactForm lam0n = normalize(env.lam0, env.grid);
    const GibbsReport rep = gibbs_diagnostic(pair, lam0n.density_field(), gb_beta, P, gb_eps,
                                             Ns, centers, env.grid);
    for (const auto& row : rep.rows)
      std::cout << "N=" << row.N << " ratio_min=" << format_double(row.ratio_min)
                << " ratio_max=" << format_double(row.ratio_max) << "\n";
  });

  // --- selftest --------------------------------------------------------------------
  auto* c_self = app.add_subcommand("selftest", "deterministic self-check battery");
  std::string self_out = "selftest_out";
  c_self->add_option("--out", self_out, "artifact directory");
  c_self->callback([&] {
    cli.resolve();
    const SelftestReport rep = run_selftest(cli.cfg, self_out);
    for (const auto& line : rep.lines) std::cout << line << "\n";
    std::cout << (rep.ok ? "selftest: all stages passed" : "selftest: FAILURES") << "\n";
    if (!rep.ok) throw NumericalError("selftest failed");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    // Unknown subcommands and malformed invocations are validation errors.
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ct::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
