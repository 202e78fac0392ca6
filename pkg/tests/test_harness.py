import json

import pytest

from kh2 import harness
from kh2.complex import ChainMap, SparseMatrix, identity_map
from kh2.diagram import LinkDiagram
from kh2.frobenius import SYSTEMS, get_system
from kh2.harness import (dot_relation_check, fixture_families, invariance_check, kunneth_check,
                         minimal_polynomial_2x2, mirror_duality_check, skein_triangle_check, unknot_dot_matrix)
from kh2.table import load_table


@pytest.fixture(scope="module")
def table():
    return load_table()


# -- positive checks --------------------------------------------------------------------------

@pytest.mark.parametrize("pair", [("0_1", "0_1"), ("3_1", "0_1"), ("3_1", "3_1"), ("3_1", "4_1")])
def test_kunneth(pair, table):
    rep = kunneth_check(table[pair[0]], table[pair[1]])
    assert rep, rep.witness


def test_kunneth_trefoil_square_torsion(table):
    rep = kunneth_check(table["3_1"], table["3_1"])
    assert rep.details["3"]["computed"][0] == 0
    assert len(rep.details["3"]["computed"][1]) == 2


@pytest.mark.parametrize("name", ["3_1", "4_1", "L2a1{1}"])
def test_skein_every_crossing(name, table):
    d = table[name]
    for i in range(d.n_crossings):
        assert skein_triangle_check(d, i), (name, i)


def test_skein_over_bar_natan_at_a_point(table):
    assert skein_triangle_check(table["3_1"], 0, get_system("bn-graded"), at=(1,))


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_dot_relation(name, table):
    assert dot_relation_check(table["3_1"], get_system(name), points=3)


@pytest.mark.parametrize("name", [n for n in sorted(SYSTEMS) if SYSTEMS[n].has_root])
def test_dot_relation_reduced(name, table):
    assert dot_relation_check(table["4_1"], get_system(name), points=3, reduced=True)


def test_unknot_dot_matrix_has_the_right_minimal_polynomial():
    for sys in SYSTEMS.values():
        m = unknot_dot_matrix(sys)
        assert minimal_polynomial_2x2(m, sys.ring) == [sys.ring.one(), sys.alpha, sys.beta]


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "L2a1{1}"])
def test_mirror_duality(name, table):
    assert mirror_duality_check(table[name])


@pytest.mark.parametrize("family", sorted(fixture_families()))
@pytest.mark.parametrize("system, tier", [("kh", "field"), ("filtered-f4", "field"), ("bn-graded", "pid"),
                                          ("t-ring", "pid")])
def test_invariance(family, system, tier):
    assert invariance_check(fixture_families()[family], get_system(system), tier)


@pytest.mark.parametrize("family", ["unknot", "trefoil"])
def test_invariance_groebner(family):
    assert invariance_check(fixture_families()[family], get_system("f5"), "groebner", points=8)


# -- negative checks: each harness must notice a planted fault ---------------------------------

def test_invariance_detects_different_knots(table):
    rep = invariance_check([table["3_1"], table["4_1"]], get_system("kh"), "field")
    assert not rep and "differs" in rep.witness


def test_invariance_detects_mirror_over_groebner(table):
    rep = invariance_check([table["3_1"], table["3_1"].mirror()], get_system("f5"), "groebner", points=4)
    assert not rep


def test_mirror_duality_detects_broken_mirror(table, monkeypatch):
    monkeypatch.setattr(LinkDiagram, "mirror", lambda self: self)
    assert not mirror_duality_check(table["3_1"])
    # the figure eight is amphichiral, so the identity is a valid "mirror"
    assert mirror_duality_check(table["4_1"])


def test_kunneth_detects_wrong_sum(table, monkeypatch):
    monkeypatch.setattr(harness, "connected_sum", lambda a, b: table["5_1"])
    rep = kunneth_check(table["3_1"], table["0_1"])
    assert not rep and rep.witness.startswith("degree")


def test_skein_detects_zero_map(table, monkeypatch):
    def zero(d, i, sys, c0, c1, *rest):
        comps = {k: SparseMatrix(c0.ring, c1.rank(k), c0.rank(k)) for k in c0.degrees}
        return ChainMap(c0, c1, comps)
    monkeypatch.setattr(harness, "saddle_chain_map", zero)
    assert not skein_triangle_check(LinkDiagram.from_text("X(1,1,2,2)"), 0)


def test_skein_detects_non_chain_map(table, monkeypatch):
    real = harness.saddle_chain_map

    def broken(*args):
        f = real(*args)
        k = next(k for k in f.source.degrees if f.source.rank(k) and f.target.rank(k))
        f.component(k).add_entry(0, 0, f.source.ring.one())
        return f
    monkeypatch.setattr(harness, "saddle_chain_map", broken)
    rep = skein_triangle_check(table["3_1"], 0)
    assert not rep


def test_dot_relation_detects_identity(table, monkeypatch):
    monkeypatch.setattr(harness, "dot_map", lambda d, c, sys, conjugate=False: identity_map(c))
    rep = dot_relation_check(table["3_1"], get_system("kh"))
    assert not rep and "Λ² + αΛ + β" in rep.witness


# -- reports --------------------------------------------------------------------------------

def test_report_json_and_digest(table):
    rep = mirror_duality_check(table["3_1"])
    blob = json.loads(json.dumps(rep.to_json()))
    assert blob["check"] == "mirror_duality" and blob["pass"] is True
    assert len(blob["inputs"]) == 16
    # relabeling leaves the digest alone
    d = table["3_1"]
    rel = d.relabel({x: x % 6 + 1 for x in range(1, 7)})
    assert harness.digest(rel) == harness.digest(d)
    assert harness.digest(d) != harness.digest(d.mirror())
