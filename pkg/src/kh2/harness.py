"""Executable checks of the structural properties of the homology theories.

Each check returns a :class:`CheckReport`; ``witness`` locates the first
failure.  Everything random is drawn from ``random.Random(seed)``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .complex import (ChainMap, GradedFreeComplex, SparseMatrix, build_complex, dot_map, edge_images,
                      mapping_cone)
from .cache import canonical_diagram
from .diagram import LinkDiagram, connected_sum, from_braid
from .fields import GF, GF2k
from .frobenius import F_BN_GRADED, KH_F2, FrobeniusSystem
from .homology import compute_homology, homology_pid, smith_normal_form
from .homology.field import field_dimensions, homology_field, specialize
from .homology.groebner import groebner_presentation, random_points, specialized_dimensions
from .rings import LaurentPoly


@dataclass
class CheckReport:
    name: str
    digest: str
    passed: bool
    witness: Optional[str] = None
    seed: Optional[int] = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {"check": self.name, "inputs": self.digest, "pass": self.passed, "seed": self.seed}
        if self.witness:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def digest(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, LinkDiagram):
            cd = canonical_diagram(p)
            p = f"{cd.pd}|bp={cd.basepoint}"
        h.update(str(p).encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


# -- Künneth ------------------------------------------------------------------------------

def _tensor_tor(h1, h2, ring):
    """Predicted (free rank, cyclic torsion list) per degree of the connected sum."""
    out: dict = {}

    def slot(n):
        return out.setdefault(n, [0, []])

    for i, a in h1.degrees.items():
        for j, b in h2.degrees.items():
            s = slot(i + j)
            s[0] += a.free_rank * b.free_rank
            s[1] += list(a.torsion) * b.free_rank + list(b.torsion) * a.free_rank
            for x in a.torsion:
                for y in b.torsion:
                    g = _gcd(x, y, ring)
                    s[1].append(g)  # S/(x) ⊗ S/(y)
                    slot(i + j - 1)[1].append(g)  # Tor_1 lands one degree lower
    return out


def _gcd(x: LaurentPoly, y: LaurentPoly, ring) -> LaurentPoly:
    snf = smith_normal_form([[x, ring.zero()], [ring.zero(), y]], ring)
    return snf.diagonal[0]


def _canonical_torsion(factors: list, ring) -> list:
    """Invariant factors of ⊕ S/(f), via the SNF of the diagonal matrix."""
    fs = [f for f in factors if not f.is_unit()]
    if not fs:
        return []
    n = len(fs)
    z = ring.zero()
    diag = [[fs[i] if i == j else z for j in range(n)] for i in range(n)]
    return [str(f) for f in smith_normal_form(diag, ring).invariant_factors()]


def kunneth_check(d1: LinkDiagram, d2: LinkDiagram, sys: FrobeniusSystem = F_BN_GRADED) -> CheckReport:
    if d1.basepoint is None or d2.basepoint is None:
        raise ValueError("both diagrams need basepoints")
    ring = sys.ring
    h1 = homology_pid(build_complex(d1, sys, reduced=True))
    h2 = homology_pid(build_complex(d2, sys, reduced=True))
    hs = homology_pid(build_complex(connected_sum(d1, d2), sys, reduced=True))
    predicted = _tensor_tor(h1, h2, ring)
    rep = CheckReport("kunneth", digest(d1, d2, sys.name), True)
    for n in sorted(set(predicted) | set(hs.degrees)):
        free, tors = predicted.get(n, [0, []])
        want = (free, _canonical_torsion(tors, ring))
        got = (hs[n].free_rank, _canonical_torsion(list(hs[n].torsion), ring))
        rep.details[str(n)] = {"predicted": want, "computed": got}
        if want != got and rep.passed:
            rep.passed = False
            rep.witness = f"degree {n}: predicted {want}, computed {got}"
    return rep


# -- skein triangle --------------------------------------------------------------------------

def _circle_map(full_state, part_state, arc_map: dict) -> dict:
    """Full-diagram circle index -> circle index in the partially smoothed diagram."""
    out = {}
    for j, circ in enumerate(full_state.circles):
        out[j] = part_state.circle_of_arc[arc_map[min(circ)]]
    return out


def saddle_chain_map(d: LinkDiagram, i: int, sys: FrobeniusSystem, c0: GradedFreeComplex,
                     c1: GradedFreeComplex, d0: LinkDiagram, d1: LinkDiagram, am0: dict, am1: dict) -> ChainMap:
    """Edge maps across crossing i, from the raw-graded 0-smoothing complex to the 1-smoothing one."""
    maps = {}
    idx1 = {k: c1.index(k) for k in c1.degrees}
    for k in c0.degrees:
        m = SparseMatrix(sys.ring, c1.rank(k), c0.rank(k))
        for col, (vp, bits0) in enumerate(c0.gens[k]):
            v = vp[:i] + (0,) + vp[i:]
            u = vp[:i] + (1,) + vp[i:]
            sv, su = d.smooth(v), d.smooth(u)
            s0, s1 = d0.smooth(vp), d1.smooth(vp)
            to0 = _circle_map(sv, s0, am0)
            to1 = _circle_map(su, s1, am1)
            bits = tuple(bits0[to0[j]] for j in range(sv.n_circles))
            edge = d.edge(v, u, i)
            for w, coeff in edge_images(sys, edge, bits, su.n_circles):
                w1 = [0] * s1.n_circles
                for j, b in enumerate(w):
                    w1[to1[j]] = b
                m.add_entry(idx1[k][(vp, tuple(w1))], col, coeff)
        maps[k] = m
    return ChainMap(c0, c1, maps)


def _raw(c: GradedFreeComplex) -> GradedFreeComplex:
    return c.shifted(-c.shift)


def _induced_rank(f: ChainMap, k: int, fld: GF2k, at=()) -> int:
    """Rank of H^k(f) over the field, by dim(f(Z) + B) - dim(B)."""
    src, tgt = f.source, f.target
    if src.rank(k) == 0 or tgt.rank(k) == 0:
        return 0
    ms, _, _ = specialize(src, at, fld)
    mt, _, _ = specialize(tgt, at, fld)
    fk = f.component(k).to_field_array(at, fld)
    z = linalg.nullspace(ms.get(k, np.zeros((0, src.rank(k)), dtype=np.uint16)), fld)
    fz = linalg.matmul(np.asarray(fk, dtype=np.uint16), z, fld) if z.shape[1] else np.zeros((tgt.rank(k), 0), dtype=np.uint16)
    b = mt.get(k - 1)
    b = b if b is not None else np.zeros((tgt.rank(k), 0), dtype=np.uint16)
    rb = linalg.rank(b, fld) if b.size else 0
    both = linalg.hstack(fz, b, nrows=tgt.rank(k))
    return (linalg.rank(both, fld) if both.size else 0) - rb


def skein_triangle_check(d: LinkDiagram, crossing: int, sys: FrobeniusSystem = KH_F2,
                         at: Sequence = ()) -> CheckReport:
    """Full complex ≃ cone(saddle map), with LES exactness checked by rank bookkeeping."""
    i = crossing
    full = _raw(build_complex(d, sys))
    d0, am0 = d.smooth_crossing(i, 0)
    d1, am1 = d.smooth_crossing(i, 1)
    c0, c1 = _raw(build_complex(d0, sys)), _raw(build_complex(d1, sys))
    f = saddle_chain_map(d, i, sys, c0, c1, d0, d1, am0, am1)
    rep = CheckReport("skein_triangle", digest(d, i, sys.name, at), True)
    if not f.is_chain_map():
        rep.passed, rep.witness = False, "saddle map does not commute with the differentials"
        return rep
    cone = mapping_cone(f, check=False)
    fld = GF(max(sys.ring.field_degree, 1))
    h_full = field_dimensions(full, at, fld)
    h_cone = field_dimensions(cone, at, fld)
    h0 = field_dimensions(c0, at, fld)
    h1 = field_dimensions(c1, at, fld)
    for n in sorted(set(h_full) | {k + 1 for k in h_cone}):
        a, b = h_full.get(n, 0), h_cone.get(n - 1, 0)
        if a != b:
            rep.passed, rep.witness = False, f"raw degree {n}: full {a}, cone {b}"
            return rep
        # ... -> H^{n-1}(D1) -> H^n(full) -> H^n(D0) -> H^n(D1) -> ...
        les = (h1.get(n - 1, 0) - _induced_rank(f, n - 1, fld, at)) + (h0.get(n, 0) - _induced_rank(f, n, fld, at))
        if a != les:
            rep.passed, rep.witness = False, f"raw degree {n}: exactness predicts {les}, found {a}"
            return rep
    rep.details = {"full": {str(k): v for k, v in h_full.items() if v}}
    return rep


# -- dot operator ----------------------------------------------------------------------------

def dot_relation_check(d: LinkDiagram, sys: FrobeniusSystem, points: int = 5, seed: int = 0,
                       reduced: bool = False) -> CheckReport:
    """Λ is a chain map, Λ² + αΛ + β = 0, Λ + Λ' = α and ΛΛ' = β, exactly and on homology."""
    rep = CheckReport("dot_relation", digest(d, sys.name, reduced), True, seed=seed)
    c = build_complex(d, sys, reduced)
    lam = dot_map(d, c, sys)
    lamc = dot_map(d, c, sys, conjugate=True)
    if not lam.is_chain_map():
        rep.passed, rep.witness = False, "Λ does not commute with d"
        return rep
    for k in c.degrees:
        n = c.rank(k)
        L, Lc = lam.component(k), lamc.component(k)
        ident = SparseMatrix.identity(c.ring, n)
        quad = (L @ L) + L.map_entries(lambda x: x * sys.alpha, c.ring) + ident.map_entries(lambda x: x * sys.beta, c.ring)
        if not quad.is_zero():
            rep.passed, rep.witness = False, f"Λ² + αΛ + β ≠ 0 in degree {k}"
            return rep
        if not (L + Lc + ident.map_entries(lambda x: x * sys.alpha, c.ring)).is_zero():
            rep.passed, rep.witness = False, f"Λ + Λ' ≠ α in degree {k}"
            return rep
        if not ((L @ Lc) + ident.map_entries(lambda x: x * sys.beta, c.ring)).is_zero():
            rep.passed, rep.witness = False, f"ΛΛ' ≠ β in degree {k}"
            return rep
    # on homology at specializations: N = Λ² + αΛ + β must send cycles into boundaries
    pts, fld = _points_for(c.ring, points, seed)
    for p in pts:
        mats, _, _ = specialize(c, p, fld)
        for k in c.degrees:
            lk = np.asarray(lam.component(k).to_field_array(p, fld), dtype=np.uint16)
            a = sys.alpha.evaluate(p, fld)
            b = sys.beta.evaluate(p, fld)
            nmat = linalg.matmul(lk, lk, fld)
            nmat ^= _scalar_mul(lk, a, fld)
            nmat[np.arange(len(nmat)), np.arange(len(nmat))] ^= b
            z = linalg.nullspace(mats.get(k, np.zeros((0, c.rank(k)), dtype=np.uint16)), fld)
            img = linalg.matmul(nmat, z, fld) if z.shape[1] else z
            bnd = mats.get(k - 1)
            rb = linalg.rank(bnd, fld) if bnd is not None and bnd.size else 0
            both = linalg.hstack(img, bnd if bnd is not None else np.zeros((c.rank(k), 0), np.uint16), nrows=c.rank(k))
            if (linalg.rank(both, fld) if both.size else 0) != rb:
                rep.passed, rep.witness = False, f"relation fails on H^{k} at {p}"
                return rep
    rep.details = {"points": len(pts)}
    return rep


def _scalar_mul(m: np.ndarray, a: int, fld: GF2k) -> np.ndarray:
    out = np.zeros_like(m)
    if a == 0:
        return out
    nz = m != 0
    out[nz] = fld.exp_table[fld.log_table[m[nz]].astype(np.int64) + int(fld.log_table[a])]
    return out


def _points_for(ring, n: int, seed: int):
    if ring.arity == 0:
        return [()], GF(ring.field_degree)
    fld = GF(16 if ring.field_degree == 1 else ring.field_degree)
    rnd = random.Random(seed)
    return [tuple(rnd.randrange(1, fld.order) for _ in range(ring.arity)) for _ in range(n)], fld


def unknot_dot_matrix(sys: FrobeniusSystem) -> list:
    """Matrix of Λ on the homology of the crossingless unknot, basis (x+, x-)."""
    u = LinkDiagram.unlink(1)
    c = build_complex(u, sys)
    return dot_map(u, c, sys).component(0).to_dense()


def minimal_polynomial_2x2(m: list, ring) -> list:
    """Coefficients (1, c1, c0) of the monic minimal polynomial of a non-scalar 2x2 matrix."""
    if not m[1][0] and not m[0][1] and m[0][0] == m[1][1]:
        return [ring.one(), m[0][0]]
    # char 2: x^2 + tr x + det, and a non-scalar 2x2 matrix has it as minimal polynomial
    return [ring.one(), m[0][0] + m[1][1], m[0][0] * m[1][1] + m[0][1] * m[1][0]]


# -- invariance and mirror -------------------------------------------------------------------

def invariance_check(family: Sequence[LinkDiagram], sys: FrobeniusSystem, tier: str = "pid",
                     seed: int = 0, points: int = 20, reduced: bool = False) -> CheckReport:
    rep = CheckReport(f"invariance:{tier}", digest(*family, sys.name, tier, reduced), True, seed=seed)
    sigs = []
    span = max(dg.n_crossings for dg in family) + 1
    window = range(-span, span + 1)
    for dg in family:
        c = build_complex(dg, sys, reduced)
        if tier == "groebner":
            mod = groebner_presentation(c, seed=seed)
            fld = GF(16)
            # the origin and the axes see the torsion that generic points miss
            n = c.ring.arity
            special = [tuple(int(i == j) for j in range(n)) for i in range(-1, n)]
            pts = special + random_points(points, seed, fld)
            sig = (tuple(sorted(mod.ranks().items())),
                   tuple(tuple(sorted(specialized_dimensions(mod, p, fld, window).items()))
                         for p in pts))
        else:
            sig = compute_homology(c, tier).signature()
        sigs.append(sig)
        if sig != sigs[0]:
            rep.passed = False
            rep.witness = f"{dg.name or dg.pd} differs from {family[0].name or family[0].pd}"
            return rep
    rep.details = {"members": len(family)}
    return rep


def mirror_duality_check(d: LinkDiagram, sys: FrobeniusSystem = KH_F2, at: Sequence = ()) -> CheckReport:
    """dim H^{i,j}(d) = dim H^{-i,-j}(mirror d) over a field (q only when graded)."""
    rep = CheckReport("mirror_duality", digest(d, sys.name, at), True)
    a = homology_field(build_complex(d, sys), at or None)
    b = homology_field(build_complex(d.mirror(), sys), at or None)
    pa, pb = a.poincare(), b.poincare()
    if pa or pb:
        want = {(-i, -j): n for (i, j), n in pa.items()}
        ok, got = want == pb, pb
    else:
        want = {-k: n for k, n in a.ranks().items()}
        got = b.ranks()
        ok = want == got
    if not ok:
        rep.passed, rep.witness = False, f"reflected {want} vs mirror {got}"
    rep.details = {"ranks": {str(k): v for k, v in a.ranks().items()}}
    return rep


# -- fixture families --------------------------------------------------------------------------

def fixture_families() -> dict:
    """Reidemeister-related diagram families used to pin conventions."""
    from .table import load_table

    table = load_table()
    r3_1 = table["3_1"]
    return {
        "unknot": [LinkDiagram.unlink(1), LinkDiagram.from_text("X(1,1,2,2)", name="kink"),
                   from_braid([1, -2], 3, name="braid[1,-2]")],
        "trefoil": [r3_1, from_braid([1, 1, 1], 2, name="braid[1,1,1]"),
                    _named(r3_1.add_kink(1, positive=False), "3_1+kink")],
        "figure8": [table["4_1"], from_braid([1, -2, 1, -2], 3, name="braid[1,-2,1,-2]")],
        "hopf": [table["L2a1{1}"], from_braid([1, 1], 2, name="braid[1,1]")],
    }


def _named(d: LinkDiagram, name: str) -> LinkDiagram:
    d.name = name
    return d
