"""Reproducible test problems with known minimal-norm solutions.

Every catalog entry constructs the solution vector first and defines the
exact data as its image, so the constructed system is solvable by
construction.  When the computed singular system has a nontrivial null
space, the solution is projected onto the row space, making it the
minimal-norm representative of the data it generates.

Noise directions come from the Philox counter-based generator (64-bit,
keyed by the caller's seed), so noisy data is reproducible bit-for-bit
across runs and platforms; the perturbation is rescaled to hit the
requested level exactly rather than merely bounding it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    InvalidParameterError,
    SizeLimitError,
    UnknownProblemError,
)
from .operators import (
    DenseOperator,
    DiagonalOperator,
    LinearOperator,
    MAX_DENSE_DIM,
    SpectralDecomposition,
    _readonly,
    diagonal_decomposition,
    svd_decompose,
    write_dense_text,
)

__all__ = [
    "ProblemInstance",
    "NoisyData",
    "PROBLEM_NAMES",
    "PROBLEM_SUMMARIES",
    "make_problem",
    "add_noise",
    "problem_descriptor",
    "export_problem",
]


@dataclass(frozen=True)
class ProblemInstance:
    """An operator with its exact minimal-norm solution and exact data.

    Invariants: f = A y up to factorization accuracy, y is orthogonal to
    the computed null space of A, and f is nonzero.
    """

    name: str
    n: int
    params: dict
    op: LinearOperator
    y: np.ndarray
    f: np.ndarray
    decomp: SpectralDecomposition | None = None


@dataclass(frozen=True)
class NoisyData:
    """Perturbed data with ||f_delta - f|| equal to delta exactly."""

    f_delta: np.ndarray
    delta: float
    seed: int


def _grid(n, a, b):
    h = (b - a) / n
    return a + (np.arange(1, n + 1) - 0.5) * h, h


def _build_diagonal(n, p=2.0):
    p = float(p)
    idx = np.arange(1, n + 1, dtype=float)
    op = DiagonalOperator(idx ** (-p))
    return op, 1.0 / idx, {"p": p}


def _build_hilbert(n):
    return DenseOperator(sla.hilbert(n)), np.ones(n), {}


def _build_deriv2(n):
    # Midpoint discretization of the Green's-function kernel for the
    # second derivative on [0, 1] with zero boundary values.
    t, h = _grid(n, 0.0, 1.0)
    s_col, t_row = np.meshgrid(t, t, indexing="ij")
    kernel = np.where(s_col <= t_row, s_col * (t_row - 1.0), t_row * (s_col - 1.0))
    return DenseOperator(h * kernel), t * (1.0 - t), {}


def _build_phillips(n):
    # Classical first-kind convolution on [-6, 6]: the kernel, and the
    # solution profile, are 1 + cos(pi x / 3) supported on |x| < 3.
    t, h = _grid(n, -6.0, 6.0)
    diff = t[:, None] - t[None, :]
    kernel = np.where(np.abs(diff) < 3.0, 1.0 + np.cos(np.pi * diff / 3.0), 0.0)
    y = np.where(np.abs(t) < 3.0, 1.0 + np.cos(np.pi * t / 3.0), 0.0)
    return DenseOperator(h * kernel), y, {}


def _build_gradient_family(n):
    # Forward differences scaled by n: the discrete d/dt on (n-1) interior
    # steps.  The norm grows like 2n, while the null space stays the
    # constants, so the family probes bounds claimed uniform in ||A||.
    mat = np.zeros((n - 1, n))
    idx = np.arange(n - 1)
    mat[idx, idx] = -float(n)
    mat[idx, idx + 1] = float(n)
    t = (np.arange(1, n + 1) - 0.5) / n
    y = np.sin(2.0 * np.pi * t)
    y = y - y.mean()
    return DenseOperator(mat), y, {}


_CATALOG = {
    "diagonal": _build_diagonal,
    "hilbert": _build_hilbert,
    "deriv2": _build_deriv2,
    "phillips": _build_phillips,
    "gradient_family": _build_gradient_family,
}

PROBLEM_NAMES = tuple(sorted(_CATALOG))

PROBLEM_SUMMARIES = {
    "diagonal": "diag(i^-p) with solution 1/i; closed forms for everything (param p, default 2)",
    "hilbert": "Hilbert matrix 1/(i+j-1) with all-ones solution",
    "deriv2": "midpoint Galerkin kernel of the second-derivative boundary problem on [0,1]",
    "phillips": "classical first-kind convolution equation on [-6,6]",
    "gradient_family": "scaled forward differences; operator norm ~ 2n grows without bound",
}


def make_problem(name, n, decompose=True, **params):
    """Build a catalog problem of size n.

    Parameters
    ----------
    name : str
        One of ``PROBLEM_NAMES``.
    n : int
        Discretization size, at least 2 and at most ``MAX_DENSE_DIM``.
    decompose : bool
        Compute and attach the singular system (needed for spectral
        solves and for the null-space projection of the solution).
    **params
        Problem-specific parameters, e.g. ``p`` for ``diagonal``.

    Returns
    -------
    ProblemInstance
    """
    if name not in _CATALOG:
        raise UnknownProblemError(
            f"unknown problem {name!r}; available: {', '.join(PROBLEM_NAMES)}"
        )
    n = int(n)
    if n < 2:
        raise InvalidParameterError(f"problem size must be >= 2, got {n}")
    if n > MAX_DENSE_DIM:
        raise SizeLimitError(
            f"problem size {n} exceeds the dense-factorization cap {MAX_DENSE_DIM}"
        )
    try:
        op, y, kept_params = _CATALOG[name](n, **params)
    except TypeError as exc:
        raise InvalidParameterError(
            f"bad parameters for problem {name!r}: {exc}"
        ) from None
    decomp = None
    if decompose:
        if op.kind == "diagonal":
            decomp = diagonal_decomposition(op.values)
        else:
            decomp = svd_decompose(op)
        if decomp.rank < op.domain_dim:
            # Minimal-norm representative: drop the computed null component.
            y = decomp.right_vectors @ (decomp.right_vectors.T @ y)
    f = op.apply(y)
    if not np.linalg.norm(f) > 0:
        raise InvalidParameterError(
            f"problem {name!r} with n={n} degenerates to zero data"
        )
    return ProblemInstance(
        name=name,
        n=n,
        params=dict(kept_params),
        op=op,
        y=_readonly(y),
        f=_readonly(f),
        decomp=decomp,
    )


def add_noise(problem, delta, seed):
    """Perturb exact data along a seeded random direction.

    The direction is a standard-normal draw from ``Philox(seed)``; the
    same seed always reproduces the same data.  The perturbation is
    rescaled to the requested level and the *realized* level
    ``||f_delta - f||`` is stored as ``delta``, so the stored pair is
    exactly consistent.  Adding noise to data quantizes it at the
    floating-point grid of f, so the realized level can differ from the
    requested one by about ``eps * ||f|| / delta`` in relative terms.
    """
    delta = float(delta)
    if not np.isfinite(delta) or delta <= 0:
        raise InvalidParameterError(f"delta must be positive, got {delta}")
    rng = np.random.default_rng(np.random.Philox(int(seed)))
    direction = rng.standard_normal(problem.op.range_dim)
    direction /= np.linalg.norm(direction)
    f_delta = problem.f + delta * direction
    realized = f_delta - problem.f
    norm_realized = np.linalg.norm(realized)
    if norm_realized > 0:
        # One correction pass tightens the realized level toward the
        # requested one; the FP grid of f limits how close it can get.
        f_delta = problem.f + realized * (delta / norm_realized)
    return NoisyData(
        f_delta=_readonly(f_delta),
        delta=float(np.linalg.norm(f_delta - problem.f)),
        seed=int(seed),
    )


def problem_descriptor(problem):
    """JSON-ready descriptor {name, n, params, y, f} for cross-checks."""
    return {
        "name": problem.name,
        "n": problem.n,
        "params": dict(problem.params),
        "y": [float(v) for v in problem.y],
        "f": [float(v) for v in problem.f],
    }


def export_problem(problem, matrix_path, descriptor_path):
    """Write the operator in matrix text format plus the JSON descriptor."""
    write_dense_text(problem.op, matrix_path)
    with open(descriptor_path, "w", encoding="ascii") as fh:
        json.dump(problem_descriptor(problem), fh, indent=2)
        fh.write("\n")
