import numpy as np
import pytest

from kh2.complex import build_complex
from kh2.fields import GF
from kh2.frobenius import get_system
from kh2.homology import homology_field
from kh2.spectral import (FilteredComplex, associated_graded, collapse_report, cube_filtration, page, pages,
                          quantum_filtration)
from kh2.table import load_table

KH = get_system("kh")
FILT = get_system("filtered-f4")


@pytest.fixture(scope="module")
def table():
    return load_table()


def _toy(levels0, levels1, d):
    fld = GF(1)
    m = np.array(d, dtype=np.uint16)
    return FilteredComplex({0: len(levels0), 1: len(levels1)}, {0: m}, {0: levels0, 1: levels1}, fld)


def test_toy_differential_survives_to_its_jump():
    # d raises the level by 3; a spectator at level 1 keeps the step at 1
    fc = _toy([0], [3, 1], [[1], [0]])
    ps = pages(fc)
    totals = [p.total for p in ps if p.r is not None]
    assert totals == [3, 3, 3, 3, 1]
    assert ps[-1].r is None and ps[-1].total == 1
    assert page(fc, 3).differential_ranks == {(0, 0): 1}


def test_toy_level_preserving_part_dies_on_e1():
    fc = _toy([0, 1], [0, 2], [[1, 0], [0, 1]])
    assert page(fc, 0).total == 4
    assert page(fc, 1).total == 2
    assert page(fc, 2).total == 0


def test_levels_normalized():
    fc = _toy([4], [10], [[1]])
    assert (fc.offset, fc.step) == (4, 6)
    assert fc.levels[0].tolist() == [0] and fc.levels[1].tolist() == [1]


def test_lowering_differential_rejected():
    with pytest.raises(ValueError):
        _toy([2], [0], [[1]])


def test_split_differential_sums_to_d(table):
    fc = quantum_filtration(build_complex(table["4_1"], FILT))
    for k in fc.degrees:
        parts = fc.split_differential(k)
        if parts:
            total = np.bitwise_xor.reduce(np.stack(list(parts.values())), axis=0)
            assert (total == fc.matrix(k)).all()
            assert min(parts) >= 0


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "L2a1{1}", "6_2"])
def test_cube_filtration_pages(name, table):
    d = table[name]
    c = build_complex(d, KH)
    fc = cube_filtration(c)
    e1 = page(fc, 1)
    # E_1 at level p is the direct sum of the vertex spaces with |v| = p
    for p in range(d.n_crossings + 1):
        want = sum(2 ** d.smooth(v).n_circles for v in d.resolutions() if sum(v) == p)
        assert sum(n for (q, _), n in e1.ranks.items() if q == p) == want
    # d_1 is the whole edge differential, so E_2 is already the homology
    mod = homology_field(c)
    assert page(fc, 2).by_degree() == {k: mod[k].free_rank for k in mod.nonzero_degrees()}
    rep = collapse_report(pages(fc))
    assert rep.monotone and rep.collapse_page <= 2


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_1", "6_1", "L2a1{1}", "L4a1{1}"])
def test_quantum_filtration_turner_sequence(name, table):
    d = table[name]
    c = build_complex(d, FILT)
    fc = quantum_filtration(c)
    ps = pages(fc)
    # E_1 is Khovanov homology (over F4), E_inf has rank 2^components
    kh = homology_field(build_complex(d, KH)).poincare()
    e1 = {(k, fc.offset + fc.step * p): n for (p, k), n in ps[1].ranks.items()}
    assert e1 == kh
    rep = collapse_report(ps)
    assert rep.monotone
    assert rep.e_infinity_total == 2 ** d.n_components
    assert ps[-1].ranks == associated_graded(fc)


def test_filtered_homology_ranks_match_direct(table):
    c = build_complex(table["5_2"], FILT)
    fc = quantum_filtration(c)
    direct = homology_field(c)
    assert page(fc, None).by_degree() == {k: direct[k].free_rank for k in direct.nonzero_degrees()}


def test_quantum_filtration_needs_grading(table):
    with pytest.raises(ValueError):
        quantum_filtration(build_complex(table["3_1"], get_system("univ")))


def test_e0_is_the_chain_groups(table):
    c = build_complex(table["4_1"], FILT)
    e0 = page(quantum_filtration(c), 0)
    assert e0.total == c.total_rank
