import pytest

from kh2.complex import (ChainMap, SparseMatrix, build_complex, dot_map, identity_map, mapping_cone,
                         reduced_embedding, verify_dsquared)
from kh2.diagram import LinkDiagram, from_braid
from kh2.errors import ReducedTheoryUndefined
from kh2.frobenius import SYSTEMS, get_system
from kh2.homology import compute_homology, homology_field
from kh2.homology.field import field_dimensions
from kh2.table import load_table
from oracles import naive_khovanov_f2

ALL = sorted(SYSTEMS)
ROOTED = [n for n in ALL if SYSTEMS[n].has_root]


@pytest.fixture(scope="module")
def table():
    return load_table()


@pytest.mark.parametrize("name", ALL)
@pytest.mark.parametrize("knot", ["3_1", "4_1", "L2a1{1}", "5_2"])
def test_d_squared_is_zero(name, knot, table):
    sys = get_system(name)
    c = build_complex(table[knot], sys)
    assert verify_dsquared(c)
    if sys.has_root:
        assert verify_dsquared(build_complex(table[knot], sys, reduced=True))


@pytest.mark.parametrize("name", ALL)
@pytest.mark.parametrize("n", range(0, 7))
def test_unlink_ranks(name, n):
    sys = get_system(name)
    u = LinkDiagram.unlink(n)
    mod = compute_homology(build_complex(u, sys), seed=0) if sys.ring.arity <= 2 else None
    c = build_complex(u, sys)
    assert c.rank(0) == 2 ** n
    if mod is not None:
        assert mod.nonzero_degrees() == [0] and mod[0].free_rank == 2 ** n and not mod[0].torsion
    if sys.has_root and n:
        assert build_complex(u, sys, reduced=True).rank(0) == 2 ** (n - 1)


def test_reduced_needs_root():
    with pytest.raises(ReducedTheoryUndefined):
        build_complex(LinkDiagram.unlink(1), get_system("f5"), reduced=True)


def test_generator_count_is_circle_sum(table):
    d = table["4_1"]
    c = build_complex(d, get_system("kh"))
    assert c.total_rank == sum(2 ** d.smooth(v).n_circles for v in d.resolutions())


@pytest.mark.parametrize("knot", ["3_1", "4_1", "5_1", "5_2", "6_1", "L2a1{0}", "L2a1{1}", "L4a1{0}", "L5a1{1}"])
def test_field_homology_matches_naive_oracle(knot, table):
    d = table[knot]
    want = naive_khovanov_f2(list(d.pd.crossings), d.pd.loops)
    got = homology_field(build_complex(d, get_system("kh"))).poincare()
    assert got == want


def test_kinked_and_braid_diagrams_match_oracle():
    for d in (LinkDiagram.from_text("X(1,1,2,2)"), from_braid([1, -2, 1, -2], 3), from_braid([1, 1, 1], 2)):
        want = naive_khovanov_f2(list(d.pd.crossings), d.pd.loops)
        assert homology_field(build_complex(d, get_system("kh"))).poincare() == want


@pytest.mark.parametrize("name", ALL)
def test_dot_map_is_chain_map(name, table):
    sys = get_system(name)
    d = table["3_1"]
    c = build_complex(d, sys)
    lam, lamc = dot_map(d, c, sys), dot_map(d, c, sys, conjugate=True)
    assert lam.is_chain_map() and lamc.is_chain_map()
    for k in c.degrees:
        comm = lam.component(k) @ lamc.component(k) + lamc.component(k) @ lam.component(k)
        assert comm.is_zero()


@pytest.mark.parametrize("name", ROOTED)
def test_reduced_embedding_is_chain_map(name, table):
    sys = get_system(name)
    d = table["4_1"]
    red, full = build_complex(d, sys, True), build_complex(d, sys)
    assert reduced_embedding(d, red, full, sys).is_chain_map()


def test_cone_of_identity_is_acyclic(table):
    c = build_complex(table["3_1"], get_system("kh"))
    cone = mapping_cone(identity_map(c))
    assert verify_dsquared(cone)
    assert all(v == 0 for v in field_dimensions(cone).values())


def test_non_chain_map_detected(table):
    c = build_complex(table["3_1"], get_system("kh"))
    k0 = c.degrees[0]
    bogus = {k: SparseMatrix(c.ring, c.rank(k), c.rank(k)) for k in c.degrees}
    bogus[k0].add_entry(0, 0, c.ring.one())
    assert not ChainMap(c, c, bogus).is_chain_map()


def test_base_change_commutes_with_build(table):
    from kh2.rings import s_bn
    d = table["3_1"]
    univ, sbn = get_system("univ"), get_system("sbn")
    a = build_complex(d, univ).base_change(s_bn)
    b = build_complex(d, sbn)
    for k in b.degrees:
        assert a.differential(k) == b.differential(k)


def test_shift_and_quantum_gradings(table):
    d = table["3_1"].mirror()
    c = build_complex(d, get_system("kh"))
    assert c.shift == d.n_minus == 3
    assert c.q_kind == "grading"
    assert build_complex(d, get_system("filtered-f4")).q_kind == "filtration"
    assert build_complex(d, get_system("univ")).q_kind is None
