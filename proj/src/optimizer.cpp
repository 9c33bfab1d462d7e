#include "reactopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "reactopt/fem.hpp"

namespace reactopt {

double double_well(double chi) {
  const double a = chi * (1.0 - chi);
  return a * a;
}

double double_well_derivative(double chi) {
  return 2.0 * chi * (1.0 - chi) * (1.0 - 2.0 * chi);
}

std::vector<double> driving_force_load(const Mesh& mesh, const DesignField& chi,
                                       const StateField& state,
                                       const ModelParams& params, double alpha) {
  const double dk1 = params.k11 - params.k12;
  const double dk2 = params.k21 - params.k22;
  std::vector<double> g(mesh.dof_count(), 0.0);
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const P1Element el = p1_element(mesh, static_cast<int>(e));
    double g1x = 0.0, g1y = 0.0, g2x = 0.0, g2y = 0.0;
    for (int a = 0; a < 3; ++a) {
      g1x += state.u1[el.dofs[a]] * el.gx[a];
      g1y += state.u1[el.dofs[a]] * el.gy[a];
      g2x += state.u2[el.dofs[a]] * el.gx[a];
      g2y += state.u2[el.dofs[a]] * el.gy[a];
    }
    // Transport sensitivity: element-constant, chi enters through the
    // element-average, so each vertex carries a third.
    const double transport =
        0.5 * (dk1 * (g1x * g1x + g1y * g1y) + dk2 * (g2x * g2x + g2y * g2y));
    const double wq = el.area / 3.0;
    for (int a = 0; a < 3; ++a) g[el.dofs[a]] += wq * transport;

    // Reaction and well sensitivities at the edge midpoints, matching
    // the assembly quadrature of C and of int W(chi).
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3;
      const double cq = 0.5 * (chi.chi[el.dofs[a]] + chi.chi[el.dofs[b]]);
      const double dq =
          0.5 * (state.u1[el.dofs[a]] + state.u1[el.dofs[b]]) -
          0.5 * (state.u2[el.dofs[a]] + state.u2[el.dofs[b]]);
      const double force = 0.5 * params.k_s * dq * dq * (1.0 - 2.0 * cq) -
                           alpha * double_well_derivative(cq);
      g[el.dofs[a]] += wq * force * 0.5;
      g[el.dofs[b]] += wq * force * 0.5;
    }
  }
  return g;
}

double driving_force_functional(const Mesh& mesh, const DesignField& chi,
                                const StateField& state,
                                const ModelParams& params, double alpha) {
  const CoefficientField k1 = conductivity_field(mesh, chi, params.k11, params.k12);
  const CoefficientField k2 = conductivity_field(mesh, chi, params.k21, params.k22);
  double value = 0.0;
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const P1Element el = p1_element(mesh, static_cast<int>(e));
    double g1x = 0.0, g1y = 0.0, g2x = 0.0, g2y = 0.0;
    for (int a = 0; a < 3; ++a) {
      g1x += state.u1[el.dofs[a]] * el.gx[a];
      g1y += state.u1[el.dofs[a]] * el.gy[a];
      g2x += state.u2[el.dofs[a]] * el.gx[a];
      g2y += state.u2[el.dofs[a]] * el.gy[a];
    }
    value += 0.5 * el.area *
             (k1.per_element[e] * (g1x * g1x + g1y * g1y) +
              k2.per_element[e] * (g2x * g2x + g2y * g2y));
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3;
      const double cq = 0.5 * (chi.chi[el.dofs[a]] + chi.chi[el.dofs[b]]);
      const double dq =
          0.5 * (state.u1[el.dofs[a]] + state.u1[el.dofs[b]]) -
          0.5 * (state.u2[el.dofs[a]] + state.u2[el.dofs[b]]);
      value += (el.area / 3.0) * (0.5 * params.k_s * cq * (1.0 - cq) * dq * dq -
                                  alpha * double_well(cq));
    }
  }
  return value;
}

DesignField design_step(const Mesh& mesh, const DesignField& chi,
                        const StateField& state, const ModelParams& params,
                        const PhaseFieldParams& pf, double dt) {
  const int n = mesh.dof_count();
  const std::vector<double>& lumped = mesh.lumped_dof_areas();
  const double scale = pf.d_chi / dt;

  CoefficientField unit;
  unit.per_element.assign(mesh.elements.size(), 1.0);
  SparseOperator A = assemble_stiffness(mesh, unit);
  A.scale(pf.beta);
  A.add_diagonal(lumped, scale);

  std::vector<double> rhs = driving_force_load(mesh, chi, state, params, pf.alpha);
  for (int i = 0; i < n; ++i) rhs[i] += scale * lumped[i] * chi.chi[i];

  CgOptions opts;
  opts.initial = chi.chi;
  DesignField next;
  next.chi = solve_spd(A, rhs, opts);
  return next;
}

ProjectionResult project_volume(const Mesh& mesh, const DesignField& chi,
                                double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument("project_volume requires v in (0,1)");
  }
  const std::vector<double>& w = mesh.lumped_dof_areas();
  const double wsum = mesh.total_area();
  auto mean_shifted = [&](double c) {
    double m = 0.0;
    for (size_t i = 0; i < chi.chi.size(); ++i) {
      m += w[i] * std::clamp(chi.chi[i] + c, 0.0, 1.0);
    }
    return m / wsum;
  };
  // Bracket wide enough for unclamped gradient-step inputs: at lo every
  // value clamps to 0, at hi every value clamps to 1.
  const auto [min_it, max_it] = std::minmax_element(chi.chi.begin(), chi.chi.end());
  double lo = std::min(-1.0, -*max_it);
  double hi = std::max(1.0, 1.0 - *min_it);
  double c = 0.0, m = mean_shifted(0.0);
  if (std::abs(m - v) > 1e-10) {
    if (m > v) {
      hi = 0.0;
    } else {
      lo = 0.0;
    }
    for (int it = 0; it < 300; ++it) {
      c = 0.5 * (lo + hi);
      m = mean_shifted(c);
      if (std::abs(m - v) <= 1e-12 || hi - lo < 1e-16) break;
      if (m > v) {
        hi = c;
      } else {
        lo = c;
      }
    }
  }
  ProjectionResult out;
  out.shift = c;
  out.field.chi.resize(chi.chi.size());
  for (size_t i = 0; i < chi.chi.size(); ++i) {
    out.field.chi[i] = std::clamp(chi.chi[i] + c, 0.0, 1.0);
  }
  return out;
}

double reduced_functional(const EnergyReport& report) {
  return report.transport_energy + report.reaction_energy -
         report.phase_field_energy;
}

namespace {

double l2_norm_weighted(const std::vector<double>& w, const std::vector<double>& a,
                        const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += w[i] * d * d;
  }
  return std::sqrt(s);
}

}  // namespace

DesignResult run_optimization(const Mesh& mesh, const ModelParams& params,
                              const PhaseFieldParams& pf,
                              const RunOptions& options) {
  const int n = mesh.dof_count();
  const std::vector<double>& lumped = mesh.lumped_dof_areas();

  DesignField chi;
  if (options.initial) {
    chi = *options.initial;
  } else {
    chi.chi.assign(n, pf.v);
    if (options.perturbation > 0.0) {
      std::mt19937 rng(options.seed);
      for (double& c : chi.chi) {
        // Portable uniform in (-1,1); distributions are not identical
        // across standard library implementations.
        const double r = rng() * (1.0 / 4294967296.0);
        c += options.perturbation * (2.0 * r - 1.0);
        c = std::clamp(c, 0.0, 1.0);
      }
    }
  }
  chi = project_volume(mesh, chi, pf.v).field;

  DesignResult result;
  StateField state = solve_state(mesh, chi, params);
  EnergyReport report = energy_report(mesh, chi, state, params, pf.alpha, pf.beta);
  double functional = reduced_functional(report);

  if (options.snapshot && options.snapshot_interval > 0) {
    options.snapshot(0, chi, state);
  }

  double dt = pf.dt;
  bool converged = false;
  int step = 0;
  while (step < pf.max_steps) {
    ++step;
    DesignField chi_next;
    ProjectionResult proj;
    StateField state_next;
    EnergyReport report_next;
    double functional_next = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      proj = project_volume(mesh, design_step(mesh, chi, state, params, pf, dt), pf.v);
      chi_next = std::move(proj.field);
      if (options.coupled) {
        state_next = relax_state(mesh, chi_next, params, state, dt, 1, pf.d_u);
      } else {
        StateSolveOptions so;
        so.initial = &state;
        state_next = solve_state(mesh, chi_next, params, so);
      }
      report_next =
          energy_report(mesh, chi_next, state_next, params, pf.alpha, pf.beta);
      functional_next = reduced_functional(report_next);
      const double slack = 1e-10 * std::max(1.0, std::abs(functional));
      if (options.coupled || !options.adapt_dt ||
          functional_next >= functional - slack) {
        accepted = true;
        break;
      }
      dt *= 0.5;  // ascent safeguard
    }
    if (!accepted) break;  // dt exhausted; report as non-converged
    const double residual = l2_norm_weighted(lumped, chi_next.chi, chi.chi) / dt;
    result.history.push_back(
        {step, residual, functional_next, proj.shift * pf.d_chi / dt, dt});

    chi = std::move(chi_next);
    state = std::move(state_next);
    report = report_next;
    functional = functional_next;

    if (options.snapshot && options.snapshot_interval > 0 &&
        step % options.snapshot_interval == 0) {
      options.snapshot(step, chi, state);
    }
    if (residual <= pf.tol) {
      converged = true;
      break;
    }
    if (options.adapt_dt) dt = std::min(dt * 1.2, pf.dt);
  }

  result.chi = std::move(chi);
  result.state = std::move(state);
  result.report = report;
  result.converged = converged;
  result.steps = step;
  return result;
}

double interface_position(const Mesh& mesh, const DesignField& chi) {
  // Column means keyed by the x-coordinate of the structured grid lines.
  std::map<double, std::pair<double, int>> columns;
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    auto& [sum, count] = columns[mesh.nodes[i].x];
    sum += chi.chi[mesh.dof_of(static_cast<int>(i))];
    count += 1;
  }
  double prev_x = 0.0, prev_m = 0.0;
  bool have_prev = false;
  for (const auto& [x, sc] : columns) {
    const double m = sc.first / sc.second;
    if (have_prev && (prev_m - 0.5) * (m - 0.5) <= 0.0 && prev_m != m) {
      return prev_x + (0.5 - prev_m) / (m - prev_m) * (x - prev_x);
    }
    prev_x = x;
    prev_m = m;
    have_prev = true;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace reactopt
