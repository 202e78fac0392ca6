"""Field tier: dimensions by exact Gaussian elimination over GF(2^K)."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .. import linalg
from ..complex import GradedFreeComplex
from ..fields import GF, FieldElem, GF2k
from .module import DegreeHomology, HomologyModule


def resolve_point(ring, at: Optional[Sequence] = None, fld: Optional[GF2k] = None) -> tuple[tuple, GF2k]:
    """Normalize a specialization point to raw ints in a field containing everything."""
    if at is None:
        if ring.arity:
            raise ValueError(f"{ring} is not a field; pass a specialization point")
        at = ()
    ks = {p.field.k for p in at if isinstance(p, FieldElem)}
    if fld is None:
        ks.add(ring.field_degree)
        ks.discard(1)
        if len(ks) > 1:
            raise ValueError(f"incompatible field degrees {sorted(ks)}")
        fld = GF(ks.pop() if ks else 1)
    raw = tuple(p.value if isinstance(p, FieldElem) else int(p) for p in at)
    if len(raw) != ring.arity:
        raise ValueError(f"point has {len(raw)} coordinates, {ring} has {ring.arity} variables")
    for x, lm in zip(raw, ring.laurent_mask):
        if not fld.contains(x):
            raise ValueError(f"{x} is not an element of {fld}")
        if lm and x == 0:
            raise ZeroDivisionError("zero coordinate for a Laurent variable")
    return raw, fld


def specialize(c: GradedFreeComplex, at: Optional[Sequence] = None, fld: Optional[GF2k] = None):
    """Differentials of ``c`` evaluated at a point: {k: uint16 array}, and the field."""
    point, fld = resolve_point(c.ring, at, fld)
    mats = {}
    for k in c.degrees:
        m = c.differential(k)
        arr = np.zeros((m.nrows, m.ncols), dtype=np.uint16)
        cache: dict = {}
        for j, col in enumerate(m.cols):
            for i, x in col.items():
                v = cache.get(x)
                if v is None:
                    v = cache[x] = x.evaluate(point, fld)
                arr[i, j] = v
        mats[k] = arr
    return mats, fld, point


def homology_field(c: GradedFreeComplex, at: Optional[Sequence] = None, fld: Optional[GF2k] = None,
                   q_refine: bool = True) -> HomologyModule:
    mats, fld, point = specialize(c, at, fld)
    ranks = {k: linalg.rank(m, fld) for k, m in mats.items()}
    use_q = q_refine and c.q_kind == "grading" and c.ring.arity == 0 and c.qdeg is not None
    degrees = {}
    for k in c.degrees:
        dim = c.rank(k) - ranks.get(k, 0) - ranks.get(k - 1, 0)
        q_ranks = None
        if use_q:
            q_ranks = _q_ranks(c, mats, fld, k)
            assert sum(q_ranks.values()) == dim
        if dim:
            degrees[k] = DegreeHomology(dim, q_ranks=q_ranks)
    meta = {"point": [fld.format(x) for x in point], "field": f"GF(2^{fld.k})"} if point else {}
    return HomologyModule(c.ring if not point else _field_ring(fld), "field", degrees, c.shift, meta)


def _field_ring(fld: GF2k):
    from ..rings import RingDescriptor
    return RingDescriptor(fld.k, (), ())


def _block_rank(c, mats, fld, k, q) -> int:
    """Rank of the q-preserving block of d_k."""
    if k not in mats or c.rank(k + 1) == 0:
        return 0
    rows = [i for i, x in enumerate(c.qdeg.get(k + 1, ())) if x == q]
    cols = [j for j, x in enumerate(c.qdeg[k]) if x == q]
    if not rows or not cols:
        return 0
    return linalg.rank(mats[k][np.ix_(rows, cols)], fld)


def _q_ranks(c, mats, fld, k) -> dict:
    out = {}
    for q in sorted(set(c.qdeg[k])):
        n = sum(1 for x in c.qdeg[k] if x == q)
        dim = n - _block_rank(c, mats, fld, k, q) - _block_rank(c, mats, fld, k - 1, q)
        if dim:
            out[q] = dim
    return out


def field_dimensions(c: GradedFreeComplex, at: Optional[Sequence] = None, fld: Optional[GF2k] = None) -> dict:
    """{degree: dim H^k(C ⊗ k_p)} for every degree of the complex, zeros included."""
    mats, fld, _ = specialize(c, at, fld)
    ranks = {k: linalg.rank(m, fld) for k, m in mats.items()}
    return {k: c.rank(k) - ranks.get(k, 0) - ranks.get(k - 1, 0) for k in c.degrees}
