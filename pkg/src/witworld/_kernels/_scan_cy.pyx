# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Bloch-sphere scan kernel; semantics match ``_scan_py``."""

from libc.math cimport sqrt, INFINITY


def bloch_margin_scan(const double[:, ::1] mat, const double[:, ::1] points):
    """Scan ``val[g] = (q0 - |q_vec|) / sqrt(2)`` with ``q = mat @ points[g]``.

    Same contract as the numpy fallback: returns (minimum value, argmin),
    ties resolving to the first index.
    """
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t g, best_idx = 0
    cdef double m00 = mat[0, 0], m01 = mat[0, 1], m02 = mat[0, 2], m03 = mat[0, 3]
    cdef double m10 = mat[1, 0], m11 = mat[1, 1], m12 = mat[1, 2], m13 = mat[1, 3]
    cdef double m20 = mat[2, 0], m21 = mat[2, 1], m22 = mat[2, 2], m23 = mat[2, 3]
    cdef double m30 = mat[3, 0], m31 = mat[3, 1], m32 = mat[3, 2], m33 = mat[3, 3]
    cdef double p0, p1, p2, p3, q0, q1, q2, q3, val
    cdef double best = INFINITY
    cdef double inv_sqrt2 = 1.0 / sqrt(2.0)
    if mat.shape[0] != 4 or mat.shape[1] != 4 or points.shape[1] != 4:
        raise ValueError("expected a 4x4 matrix and (G, 4) points")
    for g in range(n):
        p0 = points[g, 0]
        p1 = points[g, 1]
        p2 = points[g, 2]
        p3 = points[g, 3]
        q0 = m00 * p0 + m01 * p1 + m02 * p2 + m03 * p3
        q1 = m10 * p0 + m11 * p1 + m12 * p2 + m13 * p3
        q2 = m20 * p0 + m21 * p1 + m22 * p2 + m23 * p3
        q3 = m30 * p0 + m31 * p1 + m32 * p2 + m33 * p3
        val = (q0 - sqrt(q1 * q1 + q2 * q2 + q3 * q3)) * inv_sqrt2
        if val < best:
            best = val
            best_idx = g
    return best, best_idx
