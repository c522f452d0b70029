"""Python interface to the wentzell-lab numerical laboratory."""

from wentzell_lab._core import (  # noqa: F401
    DiscreteModel,
    DiskModel,
    WentzellError,
    WentzellProblem,
    __version__,
    build_disk_model,
    build_model,
    dirichlet_map,
    disk_wq_identity_check,
    dtn_operator,
    matrix_exponential,
    operator_norm,
    run_config,
    sector_angle,
    similarity_check,
    singular_values,
    solve_linear,
    theorem31_experiment,
    wentzell_generator,
)
