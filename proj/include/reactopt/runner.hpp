#pragma once

#include <string>

#include "reactopt/config.hpp"

namespace reactopt {

/// Exit codes shared by the commands and the CLI: 0 success/converged,
/// 2 finished but not converged, 1 error (raised as exceptions here and
/// mapped by the caller).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Solves the state for a fixed design (constant, CSV grid, or prior
/// VTK) and writes state.vtk plus report.json into output_dir.
int cmd_solve(const RunConfig& config);

/// Runs the design evolution (or a sweep of them) writing per-run
/// final.vtk, history.csv, report.json, and optional snapshots.
int cmd_optimize(const RunConfig& config);

/// Emits the four reference relaxed-density maps (wbar_a..d.csv) plus a
/// random-sample identity-residual summary.
int cmd_relaxed_map(const RunConfig& config);

/// Emits the 1D flux-condition convergence table and a pass/fail
/// summary against the documented thresholds.
int cmd_validate1d(const RunConfig& config);

/// Dispatch on config.mode.
int run_command(const RunConfig& config);

}  // namespace reactopt
