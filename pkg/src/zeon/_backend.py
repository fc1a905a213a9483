"""Term-array kernels with a selectable backend.

An element is stored as two parallel arrays: uint64 blade bitmasks
(strictly ascending, unique) and complex128 coefficients.  The one hot
loop in the package is the pairwise blade product below, and it ships
in two interchangeable flavours:

* a numba ``@njit`` kernel, the default whenever numba imports cleanly,
* a pure-numpy fallback.

Set ``ZEON_BACKEND=numpy`` or ``ZEON_BACKEND=numba`` in the environment
before first import to force one path; ``backend_name()`` reports the
active choice.  Both flavours produce identical canonical term arrays,
so everything above this module is backend-agnostic.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

__all__ = ["backend_name", "mul_terms", "combine_terms", "mul_terms_numpy"]

_EMPTY_IDX = np.empty(0, dtype=np.uint64)
_EMPTY_COEF = np.empty(0, dtype=np.complex128)
_EMPTY_IDX.setflags(write=False)
_EMPTY_COEF.setflags(write=False)


def combine_terms(masks: np.ndarray, coefs: np.ndarray, prune: float):
    """Canonicalise raw (mask, coefficient) pairs.

    Sorts by mask, merges duplicates by summing, and drops entries whose
    magnitude ends up at or below ``prune``.
    """
    if masks.size == 0:
        return _EMPTY_IDX, _EMPTY_COEF
    order = np.argsort(masks, kind="stable")
    m = masks[order]
    v = coefs[order]
    starts = np.flatnonzero(np.r_[True, m[1:] != m[:-1]])
    sums = np.add.reduceat(v, starts)
    keep = np.abs(sums) > prune
    return m[starts][keep], sums[keep]


def mul_terms_numpy(ia, ca, ib, cb, prune: float):
    """Blade product of two canonical term arrays, pure numpy path.

    Pairs whose masks intersect annihilate; survivors land on the union
    mask.  The full outer product is materialised, which is fine at the
    sizes this algebra admits (at most 2**n terms per operand).
    """
    if ia.size == 0 or ib.size == 0:
        return _EMPTY_IDX, _EMPTY_COEF
    keep = (ia[:, None] & ib[None, :]) == 0
    masks = (ia[:, None] | ib[None, :])[keep]
    vals = (ca[:, None] * cb[None, :])[keep]
    return combine_terms(masks, vals, prune)


def _select_backend():
    choice = os.environ.get("ZEON_BACKEND", "").strip().lower()
    if choice not in ("", "numpy", "numba"):
        warnings.warn(
            f"ZEON_BACKEND={choice!r} not recognised; falling back to auto",
            RuntimeWarning,
            stacklevel=2,
        )
        choice = ""
    if choice == "numpy":
        return "numpy", mul_terms_numpy
    try:
        from numba import njit
    except ImportError:
        if choice == "numba":
            warnings.warn(
                "ZEON_BACKEND=numba requested but numba is unavailable; "
                "using the numpy fallback",
                RuntimeWarning,
                stacklevel=2,
            )
        return "numpy", mul_terms_numpy

    @njit(cache=True)
    def _mul_kernel(ia, ca, ib, cb, prune):  # pragma: no cover - compiled
        na = ia.shape[0]
        nb = ib.shape[0]
        buf_i = np.empty(na * nb, dtype=np.uint64)
        buf_c = np.empty(na * nb, dtype=np.complex128)
        m = 0
        for p in range(na):
            a = ia[p]
            va = ca[p]
            for q in range(nb):
                if a & ib[q] == np.uint64(0):
                    buf_i[m] = a | ib[q]
                    buf_c[m] = va * cb[q]
                    m += 1
        if m == 0:
            return buf_i[:0], buf_c[:0]
        order = np.argsort(buf_i[:m])
        out_i = np.empty(m, dtype=np.uint64)
        out_c = np.empty(m, dtype=np.complex128)
        k = -1
        for t in range(m):
            j = order[t]
            if k >= 0 and out_i[k] == buf_i[j]:
                out_c[k] += buf_c[j]
            else:
                k += 1
                out_i[k] = buf_i[j]
                out_c[k] = buf_c[j]
        w = 0
        for t in range(k + 1):
            if abs(out_c[t]) > prune:
                out_i[w] = out_i[t]
                out_c[w] = out_c[t]
                w += 1
        return out_i[:w].copy(), out_c[:w].copy()

    def mul_terms_numba(ia, ca, ib, cb, prune: float):
        if ia.size == 0 or ib.size == 0:
            return _EMPTY_IDX, _EMPTY_COEF
        return _mul_kernel(ia, ca, ib, cb, prune)

    return "numba", mul_terms_numba


_BACKEND_NAME, mul_terms = _select_backend()


def backend_name() -> str:
    """Name of the active multiplication backend: 'numba' or 'numpy'."""
    return _BACKEND_NAME
