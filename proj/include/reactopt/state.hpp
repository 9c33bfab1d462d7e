#pragma once

#include <span>
#include <vector>

#include "reactopt/fem.hpp"
#include "reactopt/mesh.hpp"
#include "reactopt/types.hpp"

namespace reactopt {

/// Nodal concentrations of the two species, one value per mesh dof.
struct StateField {
  std::vector<double> u1;
  std::vector<double> u2;
};

/// Contributions to the energy functional plus the boundary fluxes and
/// the design objective, all evaluated with the assembly quadrature.
struct EnergyReport {
  double transport_energy = 0.0;     // int 1/2 sum_i k_i |grad u_i|^2
  double reaction_energy = 0.0;      // int 1/2 chi(1-chi) u.Au
  double phase_field_well = 0.0;     // int alpha W(chi)
  double phase_field_gradient = 0.0; // int beta |grad chi|^2
  double phase_field_energy = 0.0;   // sum of the two parts
  double j1_in = 0.0;                // inward species-1 flux through Source1
  double j2_out = 0.0;               // outward species-2 flux through Sink2
  double total_reaction = 0.0;       // int chi(1-chi) k_s (u1-u2)
  double objective = 0.0;            // u1* J1_in + u2* J2_out
};

struct StateSolveOptions {
  double rtol = 1e-10;
  int max_iter = 0;  // 0 -> 20 * (2 * dofs)
  const StateField* initial = nullptr;
};

/// Solves the coupled steady two-species system for the given design:
/// both diffusion operators plus the reaction coupling, with u1 = u1*
/// on Source1 and u2 = u2* on Sink2. The discrete operator is symmetric
/// positive definite on the constrained space, so the solution is
/// unique. Throws std::invalid_argument if either Dirichlet set is
/// empty and propagates NonConvergence from the solver.
StateField solve_state(const Mesh& mesh, const DesignField& chi,
                       const ModelParams& params,
                       const StateSolveOptions& options = {});

/// Semi-implicit pseudo-time march (diffusion implicit, coupling
/// explicit): d_u du_i/dt = div(k_i grad u_i) - chi(1-chi) A_ij u_j.
/// Converges to the solve_state fixed point as n_steps grows. Throws
/// NonConvergence if the iterates blow up (max norm > 1e6).
StateField relax_state(const Mesh& mesh, const DesignField& chi,
                       const ModelParams& params, const StateField& state0,
                       double dt, int n_steps, double d_u = 1.0);

EnergyReport energy_report(const Mesh& mesh, const DesignField& chi,
                           const StateField& state, const ModelParams& params,
                           double alpha, double beta);

}  // namespace reactopt
