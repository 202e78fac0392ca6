"""Dense exact linear algebra over GF(2^k).

The compiled extension ``_kernels`` is used when it imports; otherwise the
numpy fallback.  Set ``KH2_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from ..fields import GF2k

if os.environ.get("KH2_PURE_PYTHON") == "1":
    from . import _fallback as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _fallback as _impl
        BACKEND = "python"

from . import _fallback


def as_matrix(a, nrows: int | None = None, ncols: int | None = None) -> np.ndarray:
    m = np.ascontiguousarray(np.asarray(a, dtype=np.uint16))
    if m.ndim != 2:
        m = m.reshape((nrows or 0, ncols or 0))
    return m


def _pack_gf2(a: np.ndarray) -> np.ndarray:
    nr, nc = a.shape
    nw = max(1, (nc + 63) // 64)
    packed = np.packbits(a.astype(np.uint8) & 1, axis=1, bitorder="little")
    buf = np.zeros((nr, nw * 8), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    return np.ascontiguousarray(buf.view(np.uint64))


def rank(a, fld: GF2k, impl=None) -> int:
    impl = impl or _impl
    m = as_matrix(a)
    if m.size == 0:
        return 0
    if fld.k == 1:
        # use the shorter side as the packed dimension
        if m.shape[1] > m.shape[0]:
            m = np.ascontiguousarray(m.T)
        return int(impl.rank_gf2_packed(_pack_gf2(m), m.shape[1]))
    m = m.copy()
    return len(impl.rref_inplace(m, fld.exp_table, fld.log_table, fld.order))


def rref(a, fld: GF2k, impl=None) -> tuple[np.ndarray, list[int]]:
    impl = impl or _impl
    m = as_matrix(a).copy()
    if m.size == 0:
        return m, []
    piv = impl.rref_inplace(m, fld.exp_table, fld.log_table, fld.order)
    return m, list(piv)


def matmul(a, b, fld: GF2k, impl=None) -> np.ndarray:
    impl = impl or _impl
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint16)
    if fld.k == 1:
        return _fallback.matmul(a, b, fld.exp_table, fld.log_table)
    return impl.matmul(a, b, fld.exp_table, fld.log_table)


def nullspace(a, fld: GF2k) -> np.ndarray:
    """Columns spanning ``{x : a x = 0}``; shape ``(ncols, nullity)``."""
    m = as_matrix(a)
    nc = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(nc, dtype=np.uint16)
    r, piv = rref(m, fld)
    free = [j for j in range(nc) if j not in set(piv)]
    out = np.zeros((nc, len(free)), dtype=np.uint16)
    for t, f in enumerate(free):
        out[f, t] = 1
        for i, p in enumerate(piv):
            out[p, t] = r[i, f]  # char 2: -x = x
    return out


def column_space(a, fld: GF2k) -> np.ndarray:
    """Columns forming a basis of the column space."""
    m = as_matrix(a)
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.uint16)
    r, piv = rref(m.T, fld)
    return np.ascontiguousarray(r[: len(piv)].T)


def hstack(*blocks, nrows: int) -> np.ndarray:
    parts = [as_matrix(b) for b in blocks if as_matrix(b).size]
    if not parts:
        return np.zeros((nrows, 0), dtype=np.uint16)
    return np.ascontiguousarray(np.hstack(parts))
