#include "reactopt/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <json.hpp>

#include "reactopt/io.hpp"
#include "reactopt/relaxed.hpp"
#include "reactopt/state.hpp"
#include "reactopt/validation1d.hpp"

namespace reactopt {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string run_label(const std::map<std::string, double>& cell) {
  std::ostringstream name;
  bool first = true;
  for (const auto& [key, value] : cell) {
    if (!first) name << "__";
    name << key << '_' << format_float(value);
    first = false;
  }
  return name.str();
}

DesignField load_chi(const RunConfig& config, const Mesh& mesh) {
  DesignField chi;
  switch (config.chi.kind) {
    case ChiSource::Kind::Constant:
      chi.chi.assign(mesh.dof_count(), config.chi.constant);
      break;
    case ChiSource::Kind::Csv:
      chi.chi = sample_grid_on_mesh(read_csv_grid(config.chi.path), mesh);
      break;
    case ChiSource::Kind::Vtk: {
      const std::vector<double> nodal =
          read_vtk_point_scalars(config.chi.path, "chi");
      if (nodal.size() != mesh.nodes.size()) {
        throw std::runtime_error(config.chi.path + ": has " +
                                 std::to_string(nodal.size()) +
                                 " points, mesh has " +
                                 std::to_string(mesh.nodes.size()));
      }
      chi.chi.assign(mesh.dof_count(), 0.0);
      for (size_t i = 0; i < nodal.size(); ++i) {
        chi.chi[mesh.dof_of(static_cast<int>(i))] = nodal[i];
      }
      break;
    }
  }
  for (double c : chi.chi) {
    if (c < -1e-12 || c > 1.0 + 1e-12) {
      throw std::runtime_error("chi input leaves [0,1]: " + format_float(c));
    }
  }
  return chi;
}

ordered_json report_json(const ModelParams& params, const EnergyReport& rep) {
  ordered_json j;
  j["k11"] = params.k11;
  j["k12"] = params.k12;
  j["k21"] = params.k21;
  j["k22"] = params.k22;
  j["k_s"] = params.k_s;
  j["transport_energy"] = rep.transport_energy;
  j["reaction_energy"] = rep.reaction_energy;
  j["phase_field"] = rep.phase_field_energy;
  j["phase_field_well"] = rep.phase_field_well;
  j["phase_field_gradient"] = rep.phase_field_gradient;
  j["j1_in"] = rep.j1_in;
  j["j2_out"] = rep.j2_out;
  j["reaction"] = rep.total_reaction;
  j["objective"] = rep.objective;
  return j;
}

std::vector<double> reaction_density(const Mesh& mesh, const DesignField& chi,
                                     const StateField& state, double k_s) {
  std::vector<double> r(mesh.dof_count());
  for (int i = 0; i < mesh.dof_count(); ++i) {
    r[i] = chi.chi[i] * (1.0 - chi.chi[i]) * k_s * (state.u1[i] - state.u2[i]);
  }
  return r;
}

int optimize_one(const RunConfig& config, const ModelParams& params,
                 const fs::path& dir) {
  fs::create_directories(dir);
  const Mesh mesh = build_scenario_mesh(config);

  RunOptions opts;
  opts.perturbation = config.perturbation;
  opts.seed = config.seed;
  opts.coupled = config.coupled;
  opts.adapt_dt = config.adapt_dt;
  opts.snapshot_interval = config.snapshot_interval;
  if (config.snapshot_interval > 0) {
    opts.snapshot = [&](int step, const DesignField& chi, const StateField& state) {
      char name[40];
      std::snprintf(name, sizeof(name), "design_%06d.vtk", step);
      write_vtk((dir / name).string(), mesh, {{"chi", &chi.chi}});
    };
  }
  const DesignResult result = run_optimization(mesh, params, config.pf, opts);

  const std::vector<double> rden =
      reaction_density(mesh, result.chi, result.state, params.k_s);
  write_vtk((dir / "final.vtk").string(), mesh,
            {{"chi", &result.chi.chi},
             {"u1", &result.state.u1},
             {"u2", &result.state.u2},
             {"reaction", &rden}});

  std::vector<std::vector<double>> rows;
  rows.reserve(result.history.size());
  for (const HistoryEntry& h : result.history) {
    rows.push_back({static_cast<double>(h.step), h.residual, h.functional,
                    h.lambda, h.dt});
  }
  write_csv((dir / "history.csv").string(),
            {"step", "residual", "functional", "lambda", "dt"}, rows);

  ordered_json j = report_json(params, result.report);
  j["v"] = config.pf.v;
  j["alpha"] = config.pf.alpha;
  j["beta"] = config.pf.beta;
  j["converged"] = result.converged;
  j["steps"] = result.steps;
  j["final_residual"] =
      result.history.empty() ? 0.0 : result.history.back().residual;
  if (config.scenario == Scenario::Square) {
    const double pos = interface_position(mesh, result.chi);
    if (std::isfinite(pos)) j["interface_x"] = pos;
  }
  write_text_file((dir / "report.json").string(), j.dump(2) + "\n");

  return result.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int cmd_solve(const RunConfig& config) {
  if (config.mode != Mode::Solve) {
    throw std::invalid_argument("cmd_solve requires mode \"solve\"");
  }
  fs::create_directories(config.output_dir);
  const Mesh mesh = build_scenario_mesh(config);
  const ModelParams params = resolve_params(config);
  const DesignField chi = load_chi(config, mesh);
  const StateField state = solve_state(mesh, chi, params);
  const EnergyReport rep =
      energy_report(mesh, chi, state, params, config.pf.alpha, config.pf.beta);

  const fs::path dir(config.output_dir);
  const std::vector<double> rden = reaction_density(mesh, chi, state, params.k_s);
  write_vtk((dir / "state.vtk").string(), mesh,
            {{"chi", &chi.chi},
             {"u1", &state.u1},
             {"u2", &state.u2},
             {"reaction", &rden}});
  write_text_file((dir / "report.json").string(),
                  report_json(params, rep).dump(2) + "\n");
  return kExitOk;
}

int cmd_optimize(const RunConfig& config) {
  if (config.mode != Mode::Optimize) {
    throw std::invalid_argument("cmd_optimize requires mode \"optimize\"");
  }
  const fs::path root(config.output_dir);
  if (config.sweep.empty()) {
    return optimize_one(config, resolve_params(config), root);
  }

  // Cross product over the sorted sweep keys.
  std::vector<std::map<std::string, double>> cells(1);
  for (const auto& [key, values] : config.sweep) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& cell : cells) {
      for (double value : values) {
        auto extended = cell;
        extended[key] = value;
        next.push_back(std::move(extended));
      }
    }
    cells = std::move(next);
  }

  int worst = kExitOk;
  for (const auto& cell : cells) {
    RunConfig cc = config;
    cc.sweep.clear();
    for (const auto& [key, value] : cell) {
      if (key == "k11") cc.params.k11 = value;
      else if (key == "k22") cc.params.k22 = value;
      else if (key == "k_s") cc.params.k_s = value;
      else if (key == "alpha") cc.pf.alpha = value;
      else if (key == "beta") cc.pf.beta = value;
      else if (key == "d_chi") cc.pf.d_chi = value;
      else if (key == "d_u") cc.pf.d_u = value;
      else if (key == "v") cc.pf.v = value;
    }
    const int rc = optimize_one(cc, resolve_params(cc), root / run_label(cell));
    worst = std::max(worst, rc);
  }
  return worst;
}

int cmd_relaxed_map(const RunConfig& config) {
  if (config.mode != Mode::RelaxedMap) {
    throw std::invalid_argument("cmd_relaxed_map requires mode \"relaxed-map\"");
  }
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  // Reference parameter sets: (a) baseline, (b) k11 = 5, (c) lambda = 1,
  // (d) (v1 - v2)^2 = 10.
  struct MapCase {
    const char* name;
    double k11;
    double lambda;
    double dv2;  // (v1 - v2)^2
  };
  const MapCase cases[] = {
      {"a", 1.0, 0.0, 1.0},
      {"b", 5.0, 0.0, 1.0},
      {"c", 1.0, 1.0, 1.0},
      {"d", 1.0, 0.0, 10.0},
  };
  WbarMapOptions opts;
  opts.grid_points = config.grid_points;
  opts.xi_max = config.xi_max;
  for (const MapCase& mc : cases) {
    ModelParams p;
    p.k11 = mc.k11;
    p.k22 = 1.0;
    p.k12 = 0.1;
    p.k21 = 0.1;
    p.k_s = 1.0;
    const WbarGrid grid = wbar_map(p, std::sqrt(mc.dv2), 0.0, mc.lambda, opts);
    write_wbar_csv((dir / (std::string("wbar_") + mc.name + ".csv")).string(),
                   grid);
  }

  // Identity residuals over random samples.
  std::mt19937 rng(config.seed);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (rng() * (1.0 / 4294967296.0));
  };
  double worst[3] = {0.0, 0.0, 0.0};
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    ModelParams p;
    p.k11 = uniform(0.05, 10.0);
    p.k22 = uniform(0.05, 10.0);
    p.k12 = uniform(0.01, 1.0);
    p.k21 = uniform(0.01, 1.0);
    p.k_s = uniform(0.1, 10.0);
    RelaxedPoint q{uniform(-1, 1), uniform(-1, 1),
                   {uniform(-2, 2), uniform(-2, 2)},
                   {uniform(-2, 2), uniform(-2, 2)},
                   uniform(-2, 2)};
    if (reaction_curvature(p, q) <= 0.0) continue;
    const auto res = verify_identities(p, q);
    const double scale =
        std::max({1.0, std::abs(W_pointwise(p, q, chi_star(p, q))),
                  reaction_curvature(p, q)});
    for (int k = 0; k < 3; ++k) {
      worst[k] = std::max(worst[k], std::abs(res[k]) / scale);
    }
  }
  ordered_json j;
  j["samples"] = samples;
  j["max_scaled_residual_i"] = worst[0];
  j["max_scaled_residual_ii"] = worst[1];
  j["max_scaled_residual_iii"] = worst[2];
  write_text_file((dir / "identity_residuals.json").string(), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_validate1d(const RunConfig& config) {
  if (config.mode != Mode::Validate1d) {
    throw std::invalid_argument("cmd_validate1d requires mode \"validate1d\"");
  }
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  ModelParams base;
  base.k11 = 1.0;
  base.k22 = 1.0;
  base.k12 = 1e-6;
  base.k21 = 1e-6;
  base.u1_star = 1.0;
  base.u2_star = 0.0;

  std::vector<std::vector<double>> rows;
  bool pass_monotone = true;
  double previous_residual = 0.0;

  // Sharp step: the reaction support is empty, no transfer at all.
  {
    Profile1D p;
    p.kind = Profile1D::Kind::Step;
    p.n = config.n_1d;
    p.params = base;
    p.params.k_s = 300.0;
    const Diffuse1DResult r = diffuse_flux_1d(p);
    rows.push_back({0.0, static_cast<double>(p.n), p.kappa_eff(), r.flux_in,
                    r.flux_out, r.ubar1, r.ubar2, 0.0});
  }
  // Ramp widths at fixed kappa_eff = 1 (k_s = 6 / w).
  const double widths[] = {0.08, 0.04, 0.02};
  double j_ramp_002 = 0.0;
  for (int i = 0; i < 3; ++i) {
    Profile1D p;
    p.kind = Profile1D::Kind::Ramp;
    p.n = config.n_1d;
    p.w = widths[i];
    p.s = 0.5;
    p.params = base;
    p.params.k_s = 6.0 / widths[i];
    const Diffuse1DResult r = diffuse_flux_1d(p);
    const double residual = flux_condition_residual(p);
    rows.push_back({p.w, static_cast<double>(p.n), p.kappa_eff(), r.flux_in,
                    r.flux_out, r.ubar1, r.ubar2, residual});
    if (i > 0 && residual >= previous_residual) pass_monotone = false;
    previous_residual = residual;
    if (i == 2) j_ramp_002 = r.flux_in;
  }
  write_csv((dir / "flux_condition.csv").string(),
            {"w", "n", "kappa_eff", "J_in", "J_out", "ubar1", "ubar2",
             "residual"},
            rows);

  // Series-resistance reference values.
  std::vector<std::vector<double>> sharp_rows;
  const double cases[][4] = {
      {1.0, 1.0, 1.0, 0.5},
      {2.0, 1.0, 2.0, 0.25},
      {1.0, 1.0, 1e12, 0.5},
  };
  for (const auto& c : cases) {
    sharp_rows.push_back(
        {c[0], c[1], c[2], c[3], sharp_flux_analytic(c[0], c[1], c[2], c[3], 1.0, 0.0)});
  }
  write_csv((dir / "sharp_flux.csv").string(), {"K1", "K2", "k_s", "s", "J"},
            sharp_rows);

  // Conservation of the 1D flux at higher resolution.
  Profile1D pc;
  pc.kind = Profile1D::Kind::Ramp;
  pc.n = 4096;
  pc.w = 0.02;
  pc.params = base;
  pc.params.k_s = 300.0;
  const Diffuse1DResult rc = diffuse_flux_1d(pc);
  const double conservation = std::abs(rc.flux_in - rc.flux_out) / rc.flux_in;

  const bool pass_step = std::abs(rows[0][3]) <= 1e-9;
  const bool pass_half = std::abs(j_ramp_002 - 0.5) <= 0.05 * 0.5;
  const bool pass_conservation = conservation <= 1e-3;
  const bool all_pass =
      pass_step && pass_half && pass_monotone && pass_conservation;

  ordered_json j;
  j["step_flux_zero"] = pass_step;
  j["ramp_w002_flux_within_5pct_of_0.5"] = pass_half;
  j["residual_monotone_in_w"] = pass_monotone;
  j["flux_conservation_within_0.1pct"] = pass_conservation;
  j["J_ramp_w002"] = j_ramp_002;
  j["conservation_mismatch"] = conservation;
  j["pass"] = all_pass;
  write_text_file((dir / "summary.json").string(), j.dump(2) + "\n");
  return all_pass ? kExitOk : kExitNotConverged;
}

int run_command(const RunConfig& config) {
  switch (config.mode) {
    case Mode::Solve:
      return cmd_solve(config);
    case Mode::Optimize:
      return cmd_optimize(config);
    case Mode::RelaxedMap:
      return cmd_relaxed_map(config);
    case Mode::Validate1d:
      return cmd_validate1d(config);
  }
  throw std::logic_error("unreachable");
}

}  // namespace reactopt
