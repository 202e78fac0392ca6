"""Spectral sequence of a filtered cochain complex over GF(2^K).

Filtration is decreasing, ``F^p = span{generators of level >= p}``, and the
differential never lowers the level.  Pages use the explicit subquotients

    Z_r^p = {x in F^p : dx in F^{p+r}}
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})

so ``E_0`` is the associated graded of the chain groups and ``d_r`` raises the
level by r.  Levels are normalized to start at 0 and divided by their common
step (the quantum filtration moves in steps of 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce as _fold
from math import gcd
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg
from .complex import GradedFreeComplex
from .fields import GF2k
from .homology.field import specialize


class FilteredComplex:
    def __init__(self, dims: dict, d: dict, levels: dict, fld: GF2k, normalize: bool = True):
        self.dims = {k: n for k, n in dims.items() if n}
        self.fld = fld
        self.d = d
        levels = {k: np.asarray(levels[k], dtype=np.int64) for k in self.dims}
        allv = np.concatenate(list(levels.values())) if levels else np.zeros(0, dtype=np.int64)
        self.offset, self.step = 0, 1
        if normalize and allv.size:
            self.offset = int(allv.min())
            diffs = [int(x) - self.offset for x in set(allv.tolist())]
            self.step = _fold(gcd, diffs, 0) or 1
            levels = {k: (v - self.offset) // self.step for k, v in levels.items()}
        self.levels = levels
        self._check_filtered()

    @classmethod
    def from_complex(cls, c: GradedFreeComplex, level: Callable, at: Optional[Sequence] = None,
                     fld: Optional[GF2k] = None) -> "FilteredComplex":
        """``level(k, index, tag)`` gives the filtration level of a generator."""
        mats, fld, _ = specialize(c, at, fld)
        levels = {k: [level(k, i, t) for i, t in enumerate(c.gens[k])] for k in c.degrees}
        return cls({k: c.rank(k) for k in c.degrees}, mats, levels, fld)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def width(self) -> int:
        if not self.levels:
            return 0
        return max(int(v.max()) for v in self.levels.values() if v.size)

    def filtration_levels(self) -> range:
        return range(0, self.width + 1)

    def matrix(self, k: int) -> np.ndarray:
        m = self.d.get(k)
        if m is None or m.size == 0:
            return np.zeros((self.dims.get(k + 1, 0), self.dims.get(k, 0)), dtype=np.uint16)
        return m

    def _check_filtered(self):
        for k in self.degrees:
            m = self.matrix(k)
            if not m.size:
                continue
            rows, cols = np.nonzero(m)
            if rows.size and np.any(self.levels[k + 1][rows] < self.levels[k][cols]):
                raise ValueError(f"differential lowers the filtration in degree {k}")

    def split_differential(self, k: int) -> dict:
        """d = Σ_s d_s with d_s raising the level by exactly s: {s: matrix}."""
        m = self.matrix(k)
        out = {}
        if not m.size:
            return out
        rows, cols = np.nonzero(m)
        shifts = self.levels[k + 1][rows] - self.levels[k][cols]
        for s in sorted(set(shifts.tolist())):
            part = np.zeros_like(m)
            sel = shifts == s
            part[rows[sel], cols[sel]] = m[rows[sel], cols[sel]]
            out[int(s)] = part
        return out

    # -- subspaces of C^k, as column-basis matrices -----------------------------------
    def _F(self, k: int, p: int) -> np.ndarray:
        return np.flatnonzero(self.levels[k] >= p) if k in self.levels else np.zeros(0, dtype=np.int64)

    def Z(self, k: int, p: int, r: Optional[int]) -> np.ndarray:
        """Basis of Z_r^p in degree k; r=None means the cycles in F^p."""
        n = self.dims.get(k, 0)
        cols = self._F(k, p)
        if cols.size == 0:
            return np.zeros((n, 0), dtype=np.uint16)
        m = self.matrix(k)
        if r is None:
            rows = np.arange(m.shape[0])
        else:
            rows = np.flatnonzero(self.levels[k + 1] < p + r) if k + 1 in self.levels else np.zeros(0, dtype=np.int64)
        sub = m[np.ix_(rows, cols)] if rows.size else np.zeros((0, cols.size), dtype=np.uint16)
        null = linalg.nullspace(np.ascontiguousarray(sub), self.fld)
        out = np.zeros((n, null.shape[1]), dtype=np.uint16)
        out[cols, :] = null
        return out

    def image(self, k: int, basis: np.ndarray) -> np.ndarray:
        """d applied to the columns of ``basis`` (vectors in C^{k-1}), giving vectors in C^k."""
        if basis.shape[1] == 0 or self.dims.get(k, 0) == 0:
            return np.zeros((self.dims.get(k, 0), 0), dtype=np.uint16)
        return linalg.matmul(self.matrix(k - 1), basis, self.fld)

    def dim_span(self, *blocks, k: int) -> int:
        n = self.dims.get(k, 0)
        m = linalg.hstack(*blocks, nrows=n)
        return linalg.rank(m, self.fld) if m.size else 0

    def page_dim(self, k: int, p: int, r: Optional[int]) -> int:
        """dim E_r^{p,k}; r=None is E_∞."""
        z = self.Z(k, p, r)
        if z.shape[1] == 0:
            return 0
        if r is None:
            den_a = self.Z(k, p + 1, None)
            den_b = self._boundaries_in(k, p)
        else:
            den_a = self.Z(k, p + 1, r - 1) if r >= 1 else self._coords(k, p + 1)
            den_b = self.image(k, self.Z(k - 1, p - r + 1, r - 1) if r >= 1 else self._coords(k - 1, p + 1))
        return z.shape[1] - self.dim_span(den_a, den_b, k=k)

    def _coords(self, k: int, p: int) -> np.ndarray:
        n = self.dims.get(k, 0)
        cols = self._F(k, p)
        out = np.zeros((n, cols.size), dtype=np.uint16)
        out[cols, np.arange(cols.size)] = 1
        return out

    def _boundaries_in(self, k: int, p: int) -> np.ndarray:
        """Basis of im(d) ∩ F^p inside C^k."""
        n = self.dims.get(k, 0)
        if self.dims.get(k - 1, 0) == 0 or n == 0:
            return np.zeros((n, 0), dtype=np.uint16)
        m = self.matrix(k - 1)
        low = np.flatnonzero(self.levels[k] < p)
        # x with (d x) vanishing below level p
        pre = linalg.nullspace(np.ascontiguousarray(m[low, :]), self.fld) if low.size else np.eye(m.shape[1], dtype=np.uint16)
        return linalg.matmul(m, pre, self.fld) if pre.shape[1] else np.zeros((n, 0), dtype=np.uint16)

    def d_rank(self, k: int, p: int, r: int) -> int:
        """Rank of d_r : E_r^{p,k} -> E_r^{p+r,k+1}."""
        z = self.Z(k, p, r)
        if z.shape[1] == 0:
            return 0
        den_a = self.Z(k, p + 1, r - 1) if r >= 1 else self._coords(k, p + 1)
        den_b = self.image(k, self.Z(k - 1, p - r + 1, r - 1) if r >= 1 else self._coords(k - 1, p + 1))
        kernel = [self.Z(k, p, r + 1), den_a, den_b]
        return self.dim_span(z, den_a, den_b, k=k) - self.dim_span(*kernel, k=k)

    def homology_filtration(self, k: int, p: int) -> int:
        """dim F^p H^k = dim(Z ∩ F^p + B) - dim B."""
        n = self.dims.get(k, 0)
        zp = self.Z(k, p, None)
        b = self.image(k, np.eye(self.dims.get(k - 1, 0), dtype=np.uint16)) if self.dims.get(k - 1, 0) else np.zeros((n, 0), dtype=np.uint16)
        return self.dim_span(zp, b, k=k) - self.dim_span(b, k=k)


@dataclass
class PageData:
    r: Optional[int]  # None for E_∞
    ranks: dict  # (p, k) -> dim
    differential_ranks: dict = field(default_factory=dict)  # (p, k) -> rank of d_r leaving (p, k)

    @property
    def total(self) -> int:
        return sum(self.ranks.values())

    def by_degree(self) -> dict:
        out: dict = {}
        for (p, k), n in self.ranks.items():
            out[k] = out.get(k, 0) + n
        return {k: n for k, n in sorted(out.items()) if n}

    def rows(self) -> list:
        return [(self.r, p, k, n) for (p, k), n in sorted(self.ranks.items()) if n]

    def to_json(self) -> dict:
        return {
            "r": "inf" if self.r is None else self.r,
            "ranks": [{"p": p, "k": k, "rank": n} for (p, k), n in sorted(self.ranks.items()) if n],
            "differential_ranks": [{"p": p, "k": k, "rank": n}
                                   for (p, k), n in sorted(self.differential_ranks.items()) if n],
        }


def page(fc: FilteredComplex, r: Optional[int]) -> PageData:
    ranks, dranks = {}, {}
    for k in fc.degrees:
        present = set(fc.levels[k].tolist())
        for p in fc.filtration_levels():
            if p not in present:
                continue
            n = fc.page_dim(k, p, r)
            if n:
                ranks[(p, k)] = n
                if r is not None and (k + 1) in fc.dims:
                    dr = fc.d_rank(k, p, r)
                    if dr:
                        dranks[(p, k)] = dr
    return PageData(r, ranks, dranks)


def pages(fc: FilteredComplex, up_to: Optional[int] = None) -> list[PageData]:
    """E_0, E_1, ... up to ``up_to`` or until the page equals E_∞, followed by E_∞.

    Once E_r has the ranks of E_∞ every later differential vanishes, since
    ranks only drop from page to page.
    """
    inf = page(fc, None)
    last = fc.width + 1 if up_to is None else up_to
    out = []
    for r in range(0, last + 1):
        pg = page(fc, r)
        out.append(pg)
        if up_to is None and pg.ranks == inf.ranks:
            break
    out.append(inf)
    return out


@dataclass
class CollapseReport:
    collapse_page: int
    totals: list  # (r, total rank)
    drops: list  # (r, rank lost from E_r to E_{r+1})
    e_infinity_total: int
    monotone: bool


def collapse_report(pgs: list[PageData]) -> CollapseReport:
    finite = [p for p in pgs if p.r is not None]
    inf = next((p for p in pgs if p.r is None), finite[-1])
    collapse = next((p.r for p in finite if p.ranks == inf.ranks), finite[-1].r)
    totals = [(p.r, p.total) for p in finite]
    drops = [(a[0], a[1] - b[1]) for a, b in zip(totals, totals[1:])]
    monotone = all(dd >= 0 for _, dd in drops) and all(t >= inf.total for _, t in totals)
    return CollapseReport(collapse, totals, drops, inf.total, monotone)


def associated_graded(fc: FilteredComplex) -> dict:
    """(p, k) -> dim F^p H^k / F^{p+1} H^k."""
    out = {}
    for k in fc.degrees:
        prev = None
        for p in range(fc.width + 1, -1, -1):
            cur = fc.homology_filtration(k, p)
            if prev is not None and cur - prev:
                out[(p, k)] = cur - prev
            prev = cur
    return out


# -- the two filtrations of the theory ------------------------------------------------------

def cube_filtration(c: GradedFreeComplex, at: Optional[Sequence] = None, fld: Optional[GF2k] = None) -> FilteredComplex:
    """Level |v| of the cube vertex."""
    return FilteredComplex.from_complex(c, lambda k, i, tag: sum(tag[0]), at, fld)


def quantum_filtration(c: GradedFreeComplex, at: Optional[Sequence] = None, fld: Optional[GF2k] = None) -> FilteredComplex:
    if c.qdeg is None:
        raise ValueError("complex carries no quantum grading or filtration")
    return FilteredComplex.from_complex(c, lambda k, i, tag: c.qdeg[k][i], at, fld)
