"""Gaussian elimination of unit entries in a chain complex.

If ``d(x) = u y + ...`` with ``u`` a unit, the complex is homotopy equivalent
to the one with ``x`` and ``y`` removed and ``d(a) -> d(a) - d(a)_y u^{-1} d(x)``
on the remaining generators of the same degree.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..complex import GradedFreeComplex, SparseMatrix
from ..errors import ResourceLimitError

DEFAULT_TERM_CAP = 10**6


class _Work:
    def __init__(self, c: GradedFreeComplex):
        self.c = c
        self.cols = {}  # k -> {x: {y: entry}}
        self.rows = {}  # k -> {y: set(x)}
        self.alive = {k: set(range(c.rank(k))) for k in c.degrees}
        for k in c.degrees:
            m = c.differential(k)
            self.cols[k] = {j: dict(col) for j, col in enumerate(m.cols)}
            rows: dict = {}
            for j, col in enumerate(m.cols):
                for i in col:
                    rows.setdefault(i, set()).add(j)
            self.rows[k] = rows

    def pivot(self, k: int, x: int, y: int):
        cols, rows = self.cols[k], self.rows[k]
        col_x = cols.pop(x)
        u_inv = col_x.pop(y).inverse()
        row_y = rows.pop(y)
        row_y.discard(x)
        for z in col_x:
            rows[z].discard(x)
        for a in row_y:
            col_a = cols[a]
            f = col_a.pop(y) * u_inv
            for z, dzx in col_x.items():
                v = col_a.get(z)
                w = dzx * f
                v = w if v is None else v + w
                if v:
                    if z not in col_a:
                        rows[z].add(a)
                    col_a[z] = v
                else:
                    col_a.pop(z, None)
                    rows[z].discard(a)
        # x disappears as a row of d_{k-1}, y as a column of d_{k+1}
        if k - 1 in self.cols:
            for w in self.rows[k - 1].pop(x, ()):
                self.cols[k - 1][w].pop(x, None)
        if k + 1 in self.cols:
            col_y = self.cols[k + 1].pop(y, {})
            for z in col_y:
                self.rows[k + 1][z].discard(y)
        self.alive[k].discard(x)
        self.alive[k + 1].discard(y)

    def terms(self) -> int:
        return sum(len(x.terms) for cols in self.cols.values() for col in cols.values() for x in col.values())


def cancel_units(c: GradedFreeComplex, is_unit: Optional[Callable] = None,
                 term_cap: int = DEFAULT_TERM_CAP) -> GradedFreeComplex:
    """Homotopy-equivalent complex with no unit entries left in any differential."""
    is_unit = is_unit or (lambda x: x.is_unit())
    w = _Work(c)
    checks = 0
    for k in c.degrees:
        if k + 1 not in w.alive:
            continue
        changed = True
        while changed:
            changed = False
            for x in sorted(w.cols[k]):
                col = w.cols[k].get(x)
                if not col:
                    continue
                best = None
                for y, e in col.items():
                    if is_unit(e):
                        cost = len(w.rows[k][y])
                        if best is None or cost < best[0]:
                            best = (cost, y)
                if best is not None:
                    w.pivot(k, x, best[1])
                    changed = True
                    checks += 1
                    if checks % 64 == 0 and w.terms() > term_cap:
                        raise ResourceLimitError(f"unit cancellation exceeded {term_cap} terms")
    gens, d, qdeg = {}, {}, ({} if c.qdeg is not None else None)
    newidx = {}
    for k in c.degrees:
        keep = sorted(w.alive[k])
        if not keep:
            continue
        gens[k] = [c.gens[k][i] for i in keep]
        newidx[k] = {old: new for new, old in enumerate(keep)}
        if qdeg is not None:
            qdeg[k] = [c.qdeg[k][i] for i in keep]
    for k in gens:
        nxt = newidx.get(k + 1, {})
        m = SparseMatrix(c.ring, len(nxt), len(gens[k]))
        for old, new in newidx[k].items():
            for y, e in w.cols[k].get(old, {}).items():
                m.cols[new][nxt[y]] = e
        d[k] = m
    return GradedFreeComplex(c.ring, gens, d, qdeg, c.q_kind, c.shift, dict(c.meta, cancelled=True))
