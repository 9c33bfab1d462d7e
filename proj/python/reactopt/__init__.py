"""Two-species reactor transport and design optimization toolkit."""

from reactopt._core import (  # noqa: F401
    BoundaryTag,
    DegenerateReactionError,
    DesignResult,
    Diffuse1DResult,
    EnergyReport,
    HistoryEntry,
    Mesh,
    ModelParams,
    NonConvergenceError,
    PhaseFieldParams,
    Profile1D,
    Region,
    RelaxedPoint,
    W_bar,
    W_pointwise,
    build_annulus,
    build_periodic_cell,
    build_rectangle,
    chi_star,
    diffuse_flux_1d,
    double_well,
    double_well_derivative,
    energy_report,
    flux_condition_residual,
    interface_position,
    optimize,
    project_volume,
    region_classify,
    run_config_command,
    sharp_flux_analytic,
    solve_state,
    verify_identities,
    wbar_map,
    write_vtk,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
