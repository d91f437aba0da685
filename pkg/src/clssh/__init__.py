"""Creutz-ladder x SSH lattice toolkit.

Builds static and periodically kicked versions of a two-leg ladder coupled
to a dimerized chain, diagonalizes them under any mix of boundary
conditions, evaluates conventional winding numbers and their zero/pole
generalization on critical manifolds, constructs closed-form edge and
corner modes, and checks that corner-mode counts match the bulk
invariants, including under perturbations and disorder.
"""

import os as _os

# Honor FLOQ_THREADS before the first numpy import anywhere in the package:
# BLAS pools read their environment once, at library load time.
_threads = _os.environ.get("FLOQ_THREADS")
if _threads:
    for _var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        _os.environ.setdefault(_var, _threads)

from .params import (
    KICKED_V1,
    KICKED_V2,
    PROTOCOLS,
    STATIC,
    ModelParams,
    chain_couplings_from_angle,
    ladder_couplings_from_angle,
    params_from_angles,
)

__version__ = "0.1.0"

__all__ = [
    "KICKED_V1",
    "KICKED_V2",
    "PROTOCOLS",
    "STATIC",
    "ModelParams",
    "chain_couplings_from_angle",
    "ladder_couplings_from_angle",
    "params_from_angles",
    "__version__",
]
