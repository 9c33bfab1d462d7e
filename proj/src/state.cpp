#include "reactopt/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reactopt {

namespace {

struct CoupledSystem {
  SparseOperator K1, K2, C;
  std::vector<int> src, snk;  // Dirichlet dofs: species 1 / species 2
};

CoupledSystem assemble_coupled(const Mesh& mesh, const DesignField& chi,
                               const ModelParams& params) {
  CoupledSystem sys;
  sys.K1 = assemble_stiffness(mesh,
                              conductivity_field(mesh, chi, params.k11, params.k12));
  sys.K2 = assemble_stiffness(mesh,
                              conductivity_field(mesh, chi, params.k21, params.k22));
  sys.C = assemble_reaction(mesh, chi, params.k_s);
  sys.src = mesh.dirichlet_dofs(BoundaryTag::Source1);
  sys.snk = mesh.dirichlet_dofs(BoundaryTag::Sink2);
  if (sys.src.empty() || sys.snk.empty()) {
    throw std::invalid_argument(
        "solve_state: both Dirichlet sets must be nonempty (uniqueness)");
  }
  return sys;
}

}  // namespace

StateField solve_state(const Mesh& mesh, const DesignField& chi,
                       const ModelParams& params,
                       const StateSolveOptions& options) {
  const int n = mesh.dof_count();
  const CoupledSystem sys = assemble_coupled(mesh, chi, params);

  // Composite vector [u1; u2] with matrix-free block apply.
  std::vector<double> x(2 * n);
  if (options.initial) {
    std::copy(options.initial->u1.begin(), options.initial->u1.end(), x.begin());
    std::copy(options.initial->u2.begin(), options.initial->u2.end(), x.begin() + n);
  } else {
    std::fill(x.begin(), x.begin() + n, params.u1_star);
    std::fill(x.begin() + n, x.end(), params.u2_star);
  }
  std::vector<char> mask(2 * n, 0);
  for (int d : sys.src) {
    mask[d] = 1;
    x[d] = params.u1_star;
  }
  for (int d : sys.snk) {
    mask[n + d] = 1;
    x[n + d] = params.u2_star;
  }

  const std::vector<double> d1 = sys.K1.diagonal();
  const std::vector<double> d2 = sys.K2.diagonal();
  const std::vector<double> dc = sys.C.diagonal();
  std::vector<double> inv_diag(2 * n);
  for (int i = 0; i < n; ++i) {
    inv_diag[i] = 1.0 / (d1[i] + dc[i]);
    inv_diag[n + i] = 1.0 / (d2[i] + dc[i]);
  }

  std::vector<double> diff(n), cd(n);
  auto apply = [&](std::span<const double> in, std::span<double> out) {
    sys.K1.apply(in.subspan(0, n), out.subspan(0, n));
    sys.K2.apply(in.subspan(n, n), out.subspan(n, n));
    for (int i = 0; i < n; ++i) diff[i] = in[i] - in[n + i];
    sys.C.apply(diff, cd);
    for (int i = 0; i < n; ++i) {
      out[i] += cd[i];
      out[n + i] -= cd[i];
    }
  };

  const std::vector<double> zero_rhs(2 * n, 0.0);
  const int max_iter = options.max_iter > 0 ? options.max_iter : 40 * n;
  double achieved = 0.0;
  int iterations = 0;
  const bool ok = detail::cg_core(2 * n, apply, zero_rhs, inv_diag, mask, x,
                                  options.rtol, max_iter, achieved, iterations);
  if (!ok) {
    throw NonConvergence("state solve stalled at relative residual " +
                             std::to_string(achieved),
                         achieved, iterations);
  }

  StateField out;
  out.u1.assign(x.begin(), x.begin() + n);
  out.u2.assign(x.begin() + n, x.end());
  return out;
}

StateField relax_state(const Mesh& mesh, const DesignField& chi,
                       const ModelParams& params, const StateField& state0,
                       double dt, int n_steps, double d_u) {
  if (!(dt > 0.0)) throw std::invalid_argument("relax_state requires dt > 0");
  const int n = mesh.dof_count();
  const CoupledSystem sys = assemble_coupled(mesh, chi, params);
  const std::vector<double>& lumped = mesh.lumped_dof_areas();
  const double scale = d_u / dt;

  SparseOperator A1 = sys.K1;
  SparseOperator A2 = sys.K2;
  A1.add_diagonal(lumped, scale);
  A2.add_diagonal(lumped, scale);

  StateField state = state0;
  std::vector<double> diff(n), cd(n), rhs(n);
  for (int step = 0; step < n_steps; ++step) {
    for (int i = 0; i < n; ++i) diff[i] = state.u1[i] - state.u2[i];
    sys.C.apply(diff, cd);

    for (int i = 0; i < n; ++i) rhs[i] = scale * lumped[i] * state.u1[i] - cd[i];
    std::vector<double> fixed1(sys.src.size(), params.u1_star);
    CgOptions o1;
    o1.initial = state.u1;
    state.u1 = solve_spd_constrained(A1, rhs, sys.src, fixed1, o1);

    for (int i = 0; i < n; ++i) rhs[i] = scale * lumped[i] * state.u2[i] + cd[i];
    std::vector<double> fixed2(sys.snk.size(), params.u2_star);
    CgOptions o2;
    o2.initial = state.u2;
    state.u2 = solve_spd_constrained(A2, rhs, sys.snk, fixed2, o2);

    double maxabs = 0.0;
    for (int i = 0; i < n; ++i) {
      maxabs = std::max({maxabs, std::abs(state.u1[i]), std::abs(state.u2[i])});
    }
    if (maxabs > 1e6) {
      throw NonConvergence("relax_state diverged: max |u| = " +
                               std::to_string(maxabs),
                           maxabs, step + 1);
    }
  }
  return state;
}

EnergyReport energy_report(const Mesh& mesh, const DesignField& chi,
                           const StateField& state, const ModelParams& params,
                           double alpha, double beta) {
  const int n = mesh.dof_count();
  const CoupledSystem sys = assemble_coupled(mesh, chi, params);

  EnergyReport rep;
  const std::vector<double> k1u1 = sys.K1.multiply(state.u1);
  const std::vector<double> k2u2 = sys.K2.multiply(state.u2);
  std::vector<double> diff(n);
  for (int i = 0; i < n; ++i) diff[i] = state.u1[i] - state.u2[i];
  const std::vector<double> cd = sys.C.multiply(diff);

  for (int i = 0; i < n; ++i) {
    rep.transport_energy += 0.5 * (state.u1[i] * k1u1[i] + state.u2[i] * k2u2[i]);
    rep.reaction_energy += 0.5 * diff[i] * cd[i];
    rep.total_reaction += cd[i];
  }

  // Phase-field terms with the assembly quadrature: element-constant
  // gradients, edge-midpoint rule for the well density.
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const P1Element el = p1_element(mesh, static_cast<int>(e));
    double gx = 0.0, gy = 0.0;
    for (int a = 0; a < 3; ++a) {
      gx += chi.chi[el.dofs[a]] * el.gx[a];
      gy += chi.chi[el.dofs[a]] * el.gy[a];
    }
    rep.phase_field_gradient += beta * el.area * (gx * gx + gy * gy);
    for (int a = 0; a < 3; ++a) {
      const double cq =
          0.5 * (chi.chi[el.dofs[a]] + chi.chi[el.dofs[(a + 1) % 3]]);
      const double w = cq * (1.0 - cq);
      rep.phase_field_well += alpha * (el.area / 3.0) * w * w;
    }
  }
  rep.phase_field_energy = rep.phase_field_well + rep.phase_field_gradient;

  for (int d : mesh.dirichlet_dofs(BoundaryTag::Source1)) {
    rep.j1_in += k1u1[d] + cd[d];
  }
  for (int d : mesh.dirichlet_dofs(BoundaryTag::Sink2)) {
    rep.j2_out -= k2u2[d] - cd[d];
  }
  rep.objective = params.u1_star * rep.j1_in + params.u2_star * rep.j2_out;
  return rep;
}

}  // namespace reactopt
