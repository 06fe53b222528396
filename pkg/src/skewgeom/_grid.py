"""Lattice argmax shared by the RSG and competitor fitters.

Candidates are integer indices ``(i, j)`` on a lattice of spacing ``1/N``.
``loglik(i, j)`` must broadcast over index arrays and return ``-inf`` for
inadmissible points.
"""

from __future__ import annotations

import numpy as np


def _first_max(ll, I, J):
    # flat argmax in (row, col) order == smaller first index, then smaller second
    k = int(np.argmax(ll))
    r, c = np.unravel_index(k, ll.shape)
    return int(I[r, c] if I.ndim == 2 else I[r]), int(J[r, c] if J.ndim == 2 else J[c]), float(ll[r, c])


def exhaustive(loglik, i_range, j_range, chunk=250):
    """Evaluate every lattice point; returns ``(i, j, value, evaluations)``."""
    J = np.arange(j_range[0], j_range[1] + 1)
    best = (0, 0, -np.inf)
    evals = 0
    for start in range(i_range[0], i_range[1] + 1, chunk):
        I = np.arange(start, min(start + chunk, i_range[1] + 1))
        ll = np.atleast_2d(loglik(I[:, None], J[None, :]))
        ll = np.where(np.isnan(ll), -np.inf, ll)
        evals += ll.size
        cand = _first_max(ll, I, J)
        if cand[2] > best[2]:
            best = cand
    return best + (evals,)


def profile(loglik, i_range, j_range, N, coarse=100):
    """Every ``i`` on the lattice; ``j`` refined per row from spacing ``1/coarse``.

    For each row the second coordinate is scanned at spacing ``N // coarse``
    then refined one decade at a time within two cells of the row's incumbent.
    Requires ``N`` divisible by ``coarse`` with a power-of-ten ratio; otherwise
    falls back to :func:`exhaustive`.
    """
    ratio = N // coarse
    if N % coarse or ratio < 1 or 10 ** round(np.log10(ratio)) != ratio:
        return exhaustive(loglik, i_range, j_range)
    I = np.arange(i_range[0], i_range[1] + 1)
    j_lo, j_hi = j_range
    step = ratio
    J0 = np.arange(max(step, j_lo + (-j_lo) % step), j_hi + 1, step)
    if J0.size == 0:
        J0 = np.array([j_lo])
    ll = np.atleast_2d(loglik(I[:, None], J0[None, :]))
    ll = np.where(np.isnan(ll), -np.inf, ll)
    evals = ll.size
    cols = np.argmax(ll, axis=1)
    j_best = J0[cols]
    v_best = ll[np.arange(len(I)), cols]
    while step > 1:
        prev, step = step, step // 10
        offs = np.arange(-2 * prev, 2 * prev + 1, step)
        Jc = np.clip(j_best[:, None] + offs[None, :], j_lo, j_hi)
        ll = np.atleast_2d(loglik(I[:, None], Jc))
        ll = np.where(np.isnan(ll), -np.inf, ll)
        evals += ll.size
        # ties within a row go to the smaller index
        masked = np.where(ll == ll.max(axis=1, keepdims=True), Jc, np.iinfo(np.int64).max)
        j_new = masked.min(axis=1)
        ok = np.isfinite(ll.max(axis=1))
        j_best = np.where(ok, j_new, j_best)
        v_best = np.where(ok, ll.max(axis=1), v_best)
    r = int(np.argmax(v_best))
    return int(I[r]), int(j_best[r]), float(v_best[r]), evals
