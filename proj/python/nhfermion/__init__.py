"""Pseudo-fermion model with a non-Hermitian su(1,1) Hamiltonian.

Thin re-export of the compiled core; matrices come back as numpy arrays.
"""

from ._core import (
    DEFAULT_TAIL_TOL,
    DomainError,
    ModelParams,
    NumericalError,
    PreconditionError,
    TruncationError,
    biorthogonal,
    check_fock,
    check_metric,
    check_spectrum,
    conjugate_generator,
    default_figure_config,
    dilog,
    em_log_z,
    exact_log_z,
    figure_csv,
    figure_json,
    filled_energy,
    generators,
    ground_vectors,
    hamiltonian,
    make_params,
    metric,
    metric_interior,
    mode_energy,
    run_acceptance,
    spectrum,
    t_operators,
    thermo,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
