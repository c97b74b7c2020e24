"""Inner loops: constraint-matrix assembly and per-vertex transport.

Every kernel has a numpy implementation that works for both float64 and
exact (object dtype) arrays, and an ``@njit`` twin for float64 input.  The
numba path is used when numba imports and ``INFRIG_DISABLE_NUMBA`` is unset
(any of ``1``, ``true``, ``yes`` disables it).  Exact input always goes
through numpy.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("INFRIG_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _zeros(shape, like: np.ndarray) -> np.ndarray:
    if like.dtype == object:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape)


def _edge_arrays(edges):
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return e[:, 0].copy(), e[:, 1].copy()


# -- constraint rows -----------------------------------------------------------

def edge_rows_numpy(points: np.ndarray, edges, metric: np.ndarray | None = None) -> np.ndarray:
    """Rows ``g(p_i - p_j)`` in the block of i and ``g(p_j - p_i)`` in the block of j."""
    n, k = points.shape
    ei, ej = _edge_arrays(edges)
    m = ei.shape[0]
    out = _zeros((m, n * k), points)
    if m == 0:
        return out
    diff = points[ei] - points[ej]
    if metric is not None:
        diff = diff * metric
    rows = np.arange(m)[:, None]
    cols = np.arange(k)[None, :]
    out[rows, ei[:, None] * k + cols] = diff
    out[rows, ej[:, None] * k + cols] = -diff
    return out


def tangency_rows_numpy(points: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """One row ``g p_i`` per vertex, in the block of i."""
    n, k = points.shape
    out = _zeros((n, n * k), points)
    rows = np.arange(n)[:, None]
    out[rows, rows * k + np.arange(k)[None, :]] = points * metric
    return out


def equilibrium_matrix_numpy(points: np.ndarray) -> np.ndarray:
    """Matrix sending a Euclidean load to the components of its total bivector.

    The total is ``sum_i (1, p_i) ^ (0, f_i)``; pairs are ordered as in
    :func:`infrig.exterior.pair_index` on R^(d+1).
    """
    n, d = points.shape
    npairs = (d + 1) * d // 2
    out = _zeros((npairs, n * d), points)
    row = 0
    for a in range(d + 1):
        for b in range(a + 1, d + 1):
            if a == 0:
                # (p^ ^ f^)_{0b} = f_b
                out[row, np.arange(n) * d + (b - 1)] = 1
            else:
                # p_a f_b - p_b f_a  (spatial indices shifted by one)
                out[row, np.arange(n) * d + (b - 1)] = points[:, a - 1]
                out[row, np.arange(n) * d + (a - 1)] = -points[:, b - 1]
            row += 1
    return out


def trivial_generators_numpy(points: np.ndarray, metric: np.ndarray | None = None) -> np.ndarray:
    """Velocity fields of ambient infinitesimal isometries, one per row.

    Euclidean (``metric is None``): d translations, then ``q_i = A p_i`` for
    the skew generators ``A = E_ab - E_ba``.  Ambient models: ``q_i = A p_i``
    with ``A = E_ab g_bb - E_ba g_aa``, which satisfies ``A g + g A^T = 0``.
    """
    n, k = points.shape
    gens = []
    if metric is None:
        for a in range(k):
            q = _zeros((n, k), points)
            q[:, a] = 1
            gens.append(q.reshape(-1))
        g = [1] * k
    else:
        g = list(metric)
    for a in range(k):
        for b in range(a + 1, k):
            q = _zeros((n, k), points)
            q[:, a] = g[b] * points[:, b]
            q[:, b] = -g[a] * points[:, a]
            gens.append(q.reshape(-1))
    if not gens:
        return _zeros((0, n * k), points)
    return np.array(gens, dtype=points.dtype)


# -- projective transport --------------------------------------------------------

def stat_matrices_numpy(mat: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Per-vertex matrices of the static transport of a projective map.

    With ``l(p) = M[0] . (1, p)`` and ``g2 = |M[0, 1:]|^2`` the map is
    ``(l / g2) (M_s - Phi(p) m0^T)``, i.e. ``h(p)^2 dPhi_p`` for ``h = l / |m0|``.
    """
    m0 = mat[0, 1:]
    ms = mat[1:, 1:]
    ell = mat[0, 0] + points @ m0
    num = mat[1:, 0][None, :] + points @ ms.T
    phi = num / ell[:, None]
    g2 = m0 @ m0
    jac = ms[None, :, :] - phi[:, :, None] * m0[None, None, :]
    return jac * (ell / g2)[:, None, None]


if HAVE_NUMBA:

    @njit(cache=True)
    def edge_rows_numba(points, ei, ej, metric, use_metric):
        n, k = points.shape
        m = ei.shape[0]
        out = np.zeros((m, n * k))
        for r in range(m):
            i = ei[r]
            j = ej[r]
            for c in range(k):
                v = points[i, c] - points[j, c]
                if use_metric:
                    v *= metric[c]
                out[r, i * k + c] = v
                out[r, j * k + c] = -v
        return out

    @njit(cache=True)
    def tangency_rows_numba(points, metric):
        n, k = points.shape
        out = np.zeros((n, n * k))
        for i in range(n):
            for c in range(k):
                out[i, i * k + c] = metric[c] * points[i, c]
        return out

    @njit(cache=True)
    def equilibrium_matrix_numba(points):
        n, d = points.shape
        out = np.zeros(((d + 1) * d // 2, n * d))
        row = 0
        for a in range(d + 1):
            for b in range(a + 1, d + 1):
                for i in range(n):
                    if a == 0:
                        out[row, i * d + b - 1] = 1.0
                    else:
                        out[row, i * d + b - 1] = points[i, a - 1]
                        out[row, i * d + a - 1] = -points[i, b - 1]
                row += 1
        return out

    @njit(cache=True)
    def stat_matrices_numba(mat, points):
        n, d = points.shape
        out = np.empty((n, d, d))
        g2 = 0.0
        for c in range(d):
            g2 += mat[0, c + 1] * mat[0, c + 1]
        phi = np.empty(d)
        for i in range(n):
            ell = mat[0, 0]
            for c in range(d):
                ell += mat[0, c + 1] * points[i, c]
            for r in range(d):
                s = mat[r + 1, 0]
                for c in range(d):
                    s += mat[r + 1, c + 1] * points[i, c]
                phi[r] = s / ell
            f = ell / g2
            for r in range(d):
                for c in range(d):
                    out[i, r, c] = f * (mat[r + 1, c + 1] - phi[r] * mat[0, c + 1])
        return out

    @njit(cache=True)
    def apply_blocks_numba(blocks, vectors, transpose_inverse):
        n, d = vectors.shape
        out = np.empty((n, d))
        for i in range(n):
            if transpose_inverse:
                out[i] = np.linalg.solve(blocks[i].T.copy(), vectors[i].copy())
            else:
                out[i] = blocks[i] @ vectors[i]
        return out


def apply_blocks_numpy(blocks: np.ndarray, vectors: np.ndarray, transpose_inverse: bool) -> np.ndarray:
    if blocks.dtype == object:
        from .linalg import solve_exact

        if transpose_inverse:
            return np.array([solve_exact(b.T, v) for b, v in zip(blocks, vectors)], dtype=object).reshape(vectors.shape)
        return np.array([b.dot(v) for b, v in zip(blocks, vectors)], dtype=object).reshape(vectors.shape)
    if transpose_inverse:
        return np.linalg.solve(np.transpose(blocks, (0, 2, 1)), vectors[..., None])[..., 0]
    return np.einsum("nij,nj->ni", blocks, vectors)


# -- dispatch ------------------------------------------------------------------

def _fast(*arrays) -> bool:
    return USE_NUMBA and all(a.dtype == np.float64 for a in arrays)


def edge_rows(points, edges, metric=None):
    if _fast(points):
        ei, ej = _edge_arrays(edges)
        met = np.ones(points.shape[1]) if metric is None else np.asarray(metric, dtype=np.float64)
        return edge_rows_numba(points, ei, ej, met, metric is not None)
    return edge_rows_numpy(points, edges, metric)


def tangency_rows(points, metric):
    if _fast(points):
        return tangency_rows_numba(points, np.asarray(metric, dtype=np.float64))
    return tangency_rows_numpy(points, metric)


def equilibrium_matrix(points):
    if _fast(points):
        return equilibrium_matrix_numba(points)
    return equilibrium_matrix_numpy(points)


def stat_matrices(mat, points):
    if _fast(mat, points):
        return stat_matrices_numba(mat, points)
    return stat_matrices_numpy(mat, points)


def apply_blocks(blocks, vectors, transpose_inverse=False):
    # numpy's batched solve beats a loop of small LAPACK calls, so the
    # inverse-transpose path stays on numpy (see benchmarks/bench_kernels.py)
    if _fast(blocks, vectors) and not transpose_inverse:
        return apply_blocks_numba(blocks, vectors, transpose_inverse)
    return apply_blocks_numpy(blocks, vectors, transpose_inverse)


trivial_generators = trivial_generators_numpy
