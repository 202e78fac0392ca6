"""Acceptance suite: one test per criterion, each with its own time limit.

Run ``pytest tests/test_acceptance.py`` (or this file directly); the terminal
summary prints one PASS/FAIL line per criterion.
"""

import sys
import time

import numpy as np
import pytest

from kh2 import matrices as mx
from kh2.complex import build_complex
from kh2.diagram import LinkDiagram
from kh2.frobenius import PAPER_SYSTEM_IDS, SYSTEMS, get_system
from kh2.harness import (dot_relation_check, fixture_families, invariance_check, kunneth_check,
                         minimal_polynomial_2x2, skein_triangle_check, unknot_dot_matrix)
from kh2.homology import compute_homology, homology_field
from kh2.homology.field import specialize
from kh2.homology.uct import uct_check
from kh2.rings import CONSTANTS, F2T, F4, r, s_bn, s_fbn, s_T
from kh2.spectral import associated_graded, collapse_report, cube_filtration, pages, quantum_filtration
from kh2.table import load_table

TABLE = load_table()
# frozen fixture: nonzero degrees of F2 Khovanov homology of the right-handed trefoil (3_1)
TREFOIL_DEGREES = [0, 2, 3]


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def _fixture_diagrams():
    return [d for fam in fixture_families().values() for d in fam]


def test_criterion_01_ring_identities():
    """Ring identities under s_bn, s_fbn and the T specialization"""
    with Timer(1):
        P, Q = CONSTANTS.P, CONSTANTS.Q
        assert s_bn(P) == CONSTANTS.A + CONSTANTS.A_prime
        assert s_bn(Q) == CONSTANTS.A * CONSTANTS.A_prime
        assert s_fbn(P) == F4.one() and s_fbn(Q) == F4.zero()
        T = F2T.gen(0)
        assert s_T(P) == T ** 2 + T ** -2 and s_T(Q) == F2T.zero()


def test_criterion_02_frobenius_axioms():
    """Frobenius axioms and pairing determinant for every predefined system"""
    assert set(PAPER_SYSTEM_IDS) <= set(SYSTEMS)
    with Timer(1):
        for sys_ in SYSTEMS.values():
            ring = sys_.ring
            mu, delta, eps = sys_.mu_matrix(), sys_.delta_matrix(), sys_.counit_matrix()
            ident = mx.identity(ring, 2)
            k = lambda a, b: mx.kron(a, b, ring)  # noqa: E731
            m = lambda a, b: mx.matmul(a, b, ring)  # noqa: E731
            assert m(mu, k(mu, ident)) == m(mu, k(ident, mu)), sys_.name
            assert m(k(delta, ident), delta) == m(k(ident, delta), delta), sys_.name
            assert m(delta, mu) == m(k(mu, ident), k(ident, delta)) == m(k(ident, mu), k(delta, ident)), sys_.name
            assert m(k(eps, ident), delta) == ident == m(k(ident, eps), delta), sys_.name
            pm = sys_.pairing_matrix()
            assert pm == [[ring.zero(), ring.one()], [ring.one(), sys_.alpha]]
            assert mx.det2(pm) == ring.one()


def test_criterion_03_unlinks():
    """Unlinks U_n, n <= 6: free of rank 2^n, reduced rank 2^(n-1)"""
    with Timer(5):
        for sys_ in SYSTEMS.values():
            for n in range(7):
                u = LinkDiagram.unlink(n)
                mod = compute_homology(build_complex(u, sys_), seed=0)
                assert mod.nonzero_degrees() == [0] and mod[0].free_rank == 2 ** n and not mod[0].torsion
                if sys_.has_root and n:
                    red = compute_homology(build_complex(u, sys_, reduced=True), seed=0)
                    assert red[0].free_rank == 2 ** (n - 1) and not red[0].torsion


def test_criterion_04_sphere_recurrence():
    """Dotted sphere evaluations obey the two-term recurrence up to 64 dots"""
    for sys_ in SYSTEMS.values():
        e = sys_.sphere_evaluations(64)
        assert e[0] == sys_.ring.zero() and e[1] == sys_.ring.one()
        for d in range(2, 65):
            assert e[d] == sys_.alpha * e[d - 1] + sys_.beta * e[d - 2], (sys_.name, d)
        for d in (0, 1, 2, 5, 13):
            assert sys_.surface_evaluation(0, d) == e[d]


def test_criterion_05_dot_relation():
    """Minimal polynomial of the dot on the unknot is x^2 + ax + b; Lambda + Lambda' = a"""
    for sys_ in SYSTEMS.values():
        assert minimal_polynomial_2x2(unknot_dot_matrix(sys_), sys_.ring) == [sys_.ring.one(), sys_.alpha, sys_.beta]
        for d in (LinkDiagram.unlink(1), TABLE["3_1"]):
            rep = dot_relation_check(d, sys_, points=3)
            assert rep, (sys_.name, rep.witness)


def test_criterion_06_invariance():
    """Fixture families give identical homology over F2, F4, F2[h] and at 20 Groebner points"""
    fams = fixture_families()
    assert [len(fams[k]) for k in ("unknot", "trefoil", "figure8", "hopf")] == [3, 3, 2, 2]
    with Timer(60):
        for name, fam in fams.items():
            for system, tier in (("kh", "field"), ("filtered-f4", "field"), ("bn-graded", "pid")):
                rep = invariance_check(fam, get_system(system), tier)
                assert rep, (name, system, rep.witness)
            rep = invariance_check(fam, get_system("f5"), "groebner", seed=0, points=20)
            assert rep, (name, "groebner", rep.witness)


def test_criterion_07_skein_triangle():
    """Skein cone quasi-isomorphism at every crossing of every fixture up to 6 crossings"""
    targets = _fixture_diagrams() + [e.diagram for e in TABLE.select(max_crossings=6)]
    with Timer(60):
        n = 0
        for d in targets:
            for i in range(d.n_crossings):
                rep = skein_triangle_check(d, i)
                assert rep, (d.name, i, rep.witness)
                n += 1
    assert n > 100


def test_criterion_08_kunneth():
    """Reduced F2[h] homology of 3_1#3_1 and 3_1#4_1 matches tensor plus Tor"""
    with Timer(120):
        for a, b in (("3_1", "3_1"), ("3_1", "4_1")):
            rep = kunneth_check(TABLE[a], TABLE[b])
            assert rep, rep.witness
            assert len(rep.details) >= 3


def test_criterion_09_filtered_total_rank():
    """Filtered Bar-Natan E_inf has rank 2^components for every table link up to 7 crossings"""
    sys_ = get_system("filtered-f4")
    entries = TABLE.select(max_crossings=7)
    assert len(entries) >= 55
    with Timer(600):
        for e in entries:
            c = build_complex(e.diagram, sys_)
            want = 2 ** e.components
            assert homology_field(c).total_rank == want, e.name
            rep = collapse_report(pages(quantum_filtration(c)))
            assert rep.e_infinity_total == want, e.name


def test_criterion_10_uct():
    """Base change before and after computing agree at 20 seeded points"""
    with Timer(300):
        for name in ("3_1", "4_1", "L2a1{1}"):
            for phi in (r, s_bn.compose(r), s_fbn.compose(r)):
                rep = uct_check(TABLE[name], phi, points=20, seed=11)
                assert rep.passed, (name, phi.name, rep.mismatches[:1])


def _edge_rule(alpha, beta):
    """Local merge/split images over a field, written out from X^2 = aX + b."""
    def merge(a, b):
        if a == 0 or b == 0:
            return {a | b: 1}
        return {k: v for k, v in ((1, alpha), (0, beta)) if v}

    def split(a):
        if a == 0:
            out = {(0, 1): 1, (1, 0): 1, (0, 0): alpha}
        else:
            out = {(1, 1): 1, (0, 0): beta}
        return {k: v for k, v in out.items() if v}

    return merge, split


def _expected_d1(d, c, alpha, beta):
    merge, split = _edge_rule(alpha, beta)
    index = {k: {g: j for j, g in enumerate(c.gens[k])} for k in c.degrees}
    circ = {v: [frozenset(x) for x in d.smooth(v).circles] for v in d.resolutions()}
    out = {}
    for k in c.degrees:
        if k + 1 not in index:
            continue
        m = np.zeros((len(index[k + 1]), len(index[k])), dtype=np.uint16)
        for (v, bits), col in index[k].items():
            lab = dict(zip(circ[v], bits))
            for i in range(len(v)):
                if v[i]:
                    continue
                u = v[:i] + (1,) + v[i + 1:]
                gone = [x for x in circ[v] if x not in circ[u]]
                new = [x for x in circ[u] if x not in circ[v]]
                keep = {x: lab[x] for x in circ[v] if x in circ[u]}
                if len(gone) == 2:
                    images = {((new[0], b),): co for b, co in merge(lab[gone[0]], lab[gone[1]]).items()}
                else:
                    images = {((new[0], b1), (new[1], b2)): co for (b1, b2), co in split(lab[gone[0]]).items()}
                for assign, co in images.items():
                    full = {**keep, **dict(assign)}
                    row = index[k + 1][(u, tuple(full[x] for x in circ[u]))]
                    m[row, col] ^= co
        out[k] = m
    return out


def test_criterion_11_spectral_pages():
    """Cube-filtration E_1 is the vertex spaces, d_1 is the edge maps, pages shrink to E_inf"""
    for d in _fixture_diagrams():
        for name in ("kh", "filtered-f4"):
            sys_ = get_system(name)
            c = build_complex(d, sys_)
            fc = cube_filtration(c)
            # vertex ranks: every generator sits at one vertex, 2^circles(v) of them
            counts = {}
            for k in c.degrees:
                for v, _ in c.gens[k]:
                    counts[v] = counts.get(v, 0) + 1
            assert counts == {v: 2 ** d.smooth(v).n_circles for v in d.resolutions()}
            # d_0 vanishes, so E_1 = E_0 vertexwise, and d_1 is the edge differential
            mats, fld, _ = specialize(c)
            want = _expected_d1(d, c, sys_.alpha.constant_value(), sys_.beta.constant_value())
            for k in c.degrees:
                parts = fc.split_differential(k)
                assert set(parts) <= {1}
                if k in want:
                    assert (fc.matrix(k) == want[k]).all(), (d.name, name, k)
            for filt in (fc, quantum_filtration(c)):
                pgs = pages(filt)
                rep = collapse_report(pgs)
                assert rep.monotone
                assert all(a >= b for (_, a), (_, b) in zip(rep.totals, rep.totals[1:]))
                assert pgs[-1].ranks == associated_graded(filt)
                assert pgs[-1].total == homology_field(c).total_rank


def test_criterion_12_convention_pin():
    """Trefoil homology sits in degrees 0, 2, 3; the mirror in -3, -2, 0"""
    d = TABLE["3_1"]
    kh = get_system("kh")
    assert list(d.signs) == [1, 1, 1]
    assert homology_field(build_complex(d, kh)).nonzero_degrees() == TREFOIL_DEGREES
    mirrored = homology_field(build_complex(d.mirror(), kh)).nonzero_degrees()
    assert mirrored == sorted(-k for k in TREFOIL_DEGREES)


@pytest.mark.parametrize("tier, system, limit", [("field", "kh", 2), ("pid", "bn-graded", 30),
                                                 ("groebner", "f5", 600)])
def test_criterion_13_performance(tier, system, limit):
    """8-crossing knots: field < 2 s, PID < 30 s, Groebner < 10 min each"""
    knots = [e for e in TABLE.select(max_crossings=8, links=False) if e.diagram.n_crossings == 8]
    assert len(knots) == 21
    sys_ = get_system(system)
    for e in knots:
        with Timer(limit):
            mod = compute_homology(build_complex(e.diagram, sys_), tier, seed=0)
        assert mod.tier == tier
        assert mod.total_rank >= 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
