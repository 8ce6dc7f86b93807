"""Numpy fallback for the Bloch-sphere scan kernel."""

from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)


def bloch_margin_scan(mat: np.ndarray, points: np.ndarray) -> tuple[float, int]:
    """Scan ``val[g] = (q0 - |q_vec|) / sqrt(2)`` with ``q = mat @ points[g]``.

    ``points`` has shape (G, 4): rows are qubit pure-state coefficient
    vectors (1, n) / sqrt(2) for Bloch directions n.  ``mat`` is a real
    4 x 4 matrix.  The value at a grid point is the minimum eigenvalue of
    the qubit operator with coefficients ``q``, i.e. the exact minimum of
    the remaining rank-1 optimization.  Returns (minimum value, argmin);
    ties resolve to the first index.
    """
    q = points @ mat.T
    norms = np.sqrt(q[:, 1] ** 2 + q[:, 2] ** 2 + q[:, 3] ** 2)
    vals = (q[:, 0] - norms) / _SQRT2
    g = int(np.argmin(vals))
    return float(vals[g]), g
