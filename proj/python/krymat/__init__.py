"""Krylov solvers for large differential Sylvester and Lyapunov matrix equations."""

from ._core import (
    DLEProblem,
    GalerkinSolution,
    GenSylvesterProblem,
    KrymatError,
    LowRankSolution,
    dense_cap,
    dense_dle_exact,
    dense_dme_solve,
    egadl_solve,
    expm,
    expo_solve,
    galerkin_solve,
    laplacian2d,
    laplacian_dle,
    lyap_solve,
    random_stable,
    set_dense_cap,
    sylvester_q2,
    vanloan_gram,
)

__all__ = [
    "DLEProblem",
    "GalerkinSolution",
    "GenSylvesterProblem",
    "KrymatError",
    "LowRankSolution",
    "dense_cap",
    "dense_dle_exact",
    "dense_dme_solve",
    "egadl_solve",
    "expm",
    "expo_solve",
    "galerkin_solve",
    "laplacian2d",
    "laplacian_dle",
    "lyap_solve",
    "random_stable",
    "set_dense_cap",
    "sylvester_q2",
    "vanloan_gram",
]
