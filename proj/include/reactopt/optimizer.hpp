#pragma once

#include <functional>
#include <vector>

#include "reactopt/mesh.hpp"
#include "reactopt/state.hpp"
#include "reactopt/types.hpp"

namespace reactopt {

/// Phase-field regularization and gradient-flow parameters. The
/// interface width scales like sqrt(beta/alpha) and should be
/// resolvable by the mesh.
struct PhaseFieldParams {
  double alpha = 1.0;
  double beta = 2e-5;
  double d_chi = 2e-2;
  double d_u = 2e-3;
  double dt = 5e-2;
  double v = 0.5;      // target volume fraction of material 1
  double tol = 1e-6;   // threshold on ||dchi/dt||_L2
  int max_steps = 2000;
};

/// Double well W(chi) = chi^2 (1-chi)^2 and its derivative.
double double_well(double chi);
double double_well_derivative(double chi);

/// Assembled load vector g with g_a = dG/dchi_a for the chi-dependent
/// part of the discrete functional
///   G(chi) = transport + reaction - alpha int W(chi)
/// at frozen state u (the beta and lambda terms are handled by the
/// implicit step and the volume projection respectively).
std::vector<double> driving_force_load(const Mesh& mesh, const DesignField& chi,
                                       const StateField& state,
                                       const ModelParams& params, double alpha);

/// Value of G(chi) above; the finite-difference counterpart of
/// driving_force_load for the gradient check.
double driving_force_functional(const Mesh& mesh, const DesignField& chi,
                                const StateField& state,
                                const ModelParams& params, double alpha);

/// One semi-implicit gradient-flow step: explicit driving force at
/// chi^n, beta-Laplacian implicit, natural boundary conditions:
///   (d_chi/dt M + beta K) chi^{n+1} = d_chi/dt M chi^n + g.
/// No volume projection or clamping here.
DesignField design_step(const Mesh& mesh, const DesignField& chi,
                        const StateField& state, const ModelParams& params,
                        const PhaseFieldParams& pf, double dt);

struct ProjectionResult {
  DesignField field;
  double shift = 0.0;  // the scalar c with mean(clamp(chi + c)) = v
};

/// Shift-and-clamp projection onto {mean chi = v, 0 <= chi <= 1} in the
/// lumped-area inner product; the shift c is the discrete Lagrange
/// multiplier surrogate (lambda ~ c d_chi / dt).
ProjectionResult project_volume(const Mesh& mesh, const DesignField& chi,
                                double v);

struct HistoryEntry {
  int step = 0;
  double residual = 0.0;    // ||chi^{n+1} - chi^n||_L2 / dt
  double functional = 0.0;  // transport + reaction - phase-field energy
  double lambda = 0.0;      // shift * d_chi / dt
  double dt = 0.0;
};

struct RunOptions {
  double perturbation = 1e-3;  // seeded initial noise amplitude
  unsigned seed = 0;
  bool adapt_dt = true;   // halve dt on functional decrease, regrow slowly
  bool coupled = false;   // co-evolve u with relax_state instead of re-solving
  const DesignField* initial = nullptr;
  int snapshot_interval = 0;
  std::function<void(int, const DesignField&, const StateField&)> snapshot;
};

struct DesignResult {
  DesignField chi;
  StateField state;
  EnergyReport report;
  std::vector<HistoryEntry> history;
  bool converged = false;
  int steps = 0;
};

/// Runs the design evolution: {solve state; chi step; volume
/// projection} until ||dchi/dt|| <= tol or max_steps. In the default
/// segregated mode the state is re-solved exactly each iterate and an
/// ascent safeguard rejects steps that decrease the reduced functional
/// by more than 1e-10 (halving dt, restoring it slowly). Reports
/// non-convergence through the converged flag rather than throwing.
DesignResult run_optimization(const Mesh& mesh, const ModelParams& params,
                              const PhaseFieldParams& pf,
                              const RunOptions& options = {});

/// Reduced functional transport + reaction - phase-field energy (the
/// lambda term is constant under the volume constraint and omitted).
double reduced_functional(const EnergyReport& report);

/// x-coordinate where the column-averaged design crosses 1/2, scanning
/// left to right with linear interpolation; NaN if it never crosses.
double interface_position(const Mesh& mesh, const DesignField& chi);

}  // namespace reactopt
