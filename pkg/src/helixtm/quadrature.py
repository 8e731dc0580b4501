"""Self-converging trapezoidal quadrature on [0, 2*pi) for periodic integrands.

For a smooth 2*pi-periodic function the equally spaced trapezoidal rule
converges geometrically, so doubling the node count until two successive
estimates agree gives both the value and a usable error estimate.  Node
doubling reuses every previously evaluated point: the refined grid is the
old grid interleaved with its midpoints.

Integrands are called once per grid with an ndarray of angles and must
return the values elementwise, so evaluation is a single vectorised pass.
Summation runs over ascending node index with numpy's pairwise algorithm,
making results bit-reproducible for a given spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid-refinement policy: start size, target accuracy, refinement cap."""

    initial_points: int = 64
    tolerance: float = 1e-10
    max_doublings: int = 8

    def __post_init__(self):
        if self.initial_points < 8:
            raise ValueError(f"initial_points must be >= 8, got {self.initial_points}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_doublings < 1:
            raise ValueError(f"max_doublings must be >= 1, got {self.max_doublings}")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    points_used: int


class QuadratureNotConverged(RuntimeError):
    """Doubling cap hit before two estimates agreed; carries the best result."""

    def __init__(self, result):
        super().__init__(
            f"no convergence after {result.points_used} points "
            f"(last change {result.error_estimate:.3e})"
        )
        self.result = result


def _eval(fn, nodes):
    vals = np.asarray(fn(nodes), dtype=complex)
    if vals.shape != nodes.shape:
        raise ValueError(
            f"integrand returned shape {vals.shape} for {nodes.shape[0]} nodes"
        )
    return vals


def integrate_periodic(fn, spec=None):
    """Integrate fn over [0, 2*pi) to the spec's tolerance.

    Parameters
    ----------
    fn : callable
        Maps an ndarray of angles to complex (or real) values elementwise.
    spec : QuadratureSpec, optional
        Defaults to QuadratureSpec().

    Returns
    -------
    QuadratureResult
        ``value`` is the converged estimate, ``error_estimate`` the last
        inter-grid change, ``points_used`` the final grid size.

    Raises
    ------
    QuadratureNotConverged
        If max_doublings refinements do not reach the tolerance.  The
        exception's ``result`` attribute holds the best estimate.
    """
    if spec is None:
        spec = QuadratureSpec()
    n = spec.initial_points
    nodes = 2.0 * math.pi * np.arange(n) / n
    vals = _eval(fn, nodes)
    estimate = 2.0 * math.pi * np.sum(vals) / n

    for _ in range(spec.max_doublings):
        mids = nodes + math.pi / n
        mid_vals = _eval(fn, mids)
        merged = np.empty(2 * n, dtype=complex)
        merged[0::2] = vals
        merged[1::2] = mid_vals
        merged_nodes = np.empty(2 * n)
        merged_nodes[0::2] = nodes
        merged_nodes[1::2] = mids
        nodes, vals, n = merged_nodes, merged, 2 * n

        refined = 2.0 * math.pi * np.sum(vals) / n
        change = abs(refined - estimate)
        estimate = refined
        if change <= spec.tolerance:
            return QuadratureResult(value=complex(estimate), error_estimate=change, points_used=n)

    raise QuadratureNotConverged(
        QuadratureResult(value=complex(estimate), error_estimate=change, points_used=n)
    )
