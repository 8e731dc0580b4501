"""Dense Hermitian eigensolver built on cyclic Jacobi rotations.

The matrices here are small (tens of rows), dominated by their diagonal,
and must decompose reproducibly, so a self-contained cyclic Jacobi sweep
is used instead of an external solver.  Each complex off-diagonal entry
is zeroed by a two-step plane transform: a diagonal phase absorbs the
entry's argument, then a real rotation (the stable small-angle root of
the usual quadratic) kills the remainder.  Sweeps repeat until the
off-diagonal mass is at machine level relative to the matrix norm.

``fix_phase`` standardises eigenvector phases, which otherwise float
freely and would spoil bitwise reproducibility of downstream output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_HERMITICITY_TOL = 1e-9
_MAX_SWEEPS = 50


class HermiticityViolation(ValueError):
    """Matrix differs from its conjugate transpose beyond tolerance."""


class NoConvergence(RuntimeError):
    """Jacobi sweeps failed to reduce the off-diagonal mass."""


@dataclass(frozen=True)
class HermitianMatrix:
    """A validated square complex matrix with A == A* up to tolerance.

    Construction copies the input and rejects non-square or
    non-Hermitian data, so downstream code can rely on both.
    """

    entries: np.ndarray
    hermiticity_tol: float = DEFAULT_HERMITICITY_TOL

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("matrix entries must be finite")
        drift = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
        if drift > self.hermiticity_tol:
            raise HermiticityViolation(
                f"max |A - A*| = {drift:.3e} exceeds tolerance {self.hermiticity_tol:.1e}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order; eigenvector i in column i."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _offdiag_norm(a):
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(np.abs(off) ** 2).real))


def _rotate(a, v, p, q):
    """Zero a[p, q] (and a[q, p]) with a unitary plane transform."""
    g = a[p, q]
    r = abs(g)
    if r == 0.0:
        return
    cd = np.conj(g) / r  # phase absorbed into column q
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if theta >= 0.0:
        t = -1.0 / (theta + math.hypot(theta, 1.0))
    else:
        t = 1.0 / (-theta + math.hypot(theta, 1.0))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    # U acts on columns p, q; U* on rows.  V accumulates the column action.
    ap, aq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * ap + s * cd * aq
    a[:, q] = -s * ap + c * cd * aq
    rp, rq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * rp + s * np.conj(cd) * rq
    a[q, :] = -s * rp + c * np.conj(cd) * rq
    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vp + s * cd * vq
    v[:, q] = -s * vp + c * cd * vq

    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def eigen_decompose(matrix, max_sweeps=_MAX_SWEEPS):
    """Full eigendecomposition of a HermitianMatrix by cyclic Jacobi.

    Returns
    -------
    EigenDecomposition
        Ascending real eigenvalues and the matching unitary column set.

    Raises
    ------
    NoConvergence
        If the off-diagonal mass is still above the stopping level after
        ``max_sweeps`` full sweeps (does not occur for valid input and
        default settings).
    """
    n = matrix.dim
    # Work on the exactly Hermitian average so tol-level noise cannot bias
    # the rotations.
    a = 0.5 * (matrix.entries + matrix.entries.conj().T)
    v = np.eye(n, dtype=complex)
    norm = math.sqrt(float(np.sum(np.abs(a) ** 2).real))
    stop = 1e-14 * norm

    if norm > 0.0:
        for _ in range(max_sweeps):
            if _offdiag_norm(a) <= stop:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(a, v, p, q)
        else:
            raise NoConvergence(
                f"off-diagonal norm {_offdiag_norm(a):.3e} above {stop:.3e} "
                f"after {max_sweeps} sweeps"
            )

    eigenvalues = np.diag(a).real.copy()
    order = np.argsort(eigenvalues, kind="stable")
    return EigenDecomposition(
        eigenvalues=eigenvalues[order], eigenvectors=v[:, order]
    )


def fix_phase(vectors):
    """Rotate each vector's global phase so its largest-magnitude
    component is real and positive (lowest index wins ties).

    Accepts a single vector or a matrix of column vectors; returns the
    same shape.  Raises ValueError on a zero vector.
    """
    arr = np.array(vectors, dtype=complex)
    single = arr.ndim == 1
    cols = arr[:, None] if single else arr
    for j in range(cols.shape[1]):
        col = cols[:, j]
        i = int(np.argmax(np.abs(col)))
        mag = abs(col[i])
        if mag == 0.0:
            raise ValueError("cannot fix the phase of a zero vector")
        cols[:, j] = col * (np.conj(col[i]) / mag)
    return cols[:, 0] if single else cols
