import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from kh2 import linalg
from kh2.fields import GF, FieldElem
from kh2.linalg import _fallback
from oracles import gf_mul, naive_rank

try:
    from kh2.linalg import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

IMPLS = [_fallback] + ([_kernels] if _kernels is not None else [])
DEGREES = [1, 2, 4, 8, 16]


def matrices(k, max_side=9):
    shape = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shape.flatmap(lambda s: hnp.arrays(np.uint16, s, elements=st.integers(0, (1 << k) - 1)))


@pytest.mark.parametrize("k", DEGREES)
def test_field_tables_match_schoolbook(k):
    fld = GF(k)
    rng = np.random.default_rng(k)
    for a, b in rng.integers(0, fld.order, size=(500, 2)):
        assert fld.mul(int(a), int(b)) == gf_mul(int(a), int(b), k)
        if a:
            assert fld.mul(int(a), fld.inv(int(a))) == 1


@pytest.mark.parametrize("k", DEGREES)
def test_rank_matches_oracle(k):
    fld = GF(k)

    @settings(max_examples=300)
    @given(matrices(k))
    def check(m):
        want = naive_rank(m.tolist(), k)
        for impl in IMPLS:
            assert linalg.rank(m, fld, impl=impl) == want

    check()


@pytest.mark.parametrize("k", [1, 4, 16])
def test_nullspace_and_rref(k):
    fld = GF(k)

    @settings(max_examples=200)
    @given(matrices(k))
    def check(m):
        ns = linalg.nullspace(m, fld)
        assert ns.shape == (m.shape[1], m.shape[1] - linalg.rank(m, fld))
        if ns.shape[1]:
            assert not linalg.matmul(m, ns, fld).any()
        r, piv = linalg.rref(m, fld)
        assert len(piv) == linalg.rank(m, fld)
        for i, c in enumerate(piv):
            assert r[i, c] == 1

    check()


@pytest.mark.parametrize("k", [1, 2, 16])
def test_matmul_backends_agree(k):
    fld = GF(k)
    rng = np.random.default_rng(3)
    a = rng.integers(0, fld.order, size=(17, 23), dtype=np.uint16)
    b = rng.integers(0, fld.order, size=(23, 11), dtype=np.uint16)
    ref = np.zeros((17, 11), dtype=np.int64)
    for i in range(17):
        for j in range(11):
            acc = 0
            for t in range(23):
                acc ^= gf_mul(int(a[i, t]), int(b[t, j]), k)
            ref[i, j] = acc
    for impl in IMPLS:
        assert (linalg.matmul(a, b, fld, impl=impl) == ref).all()


def test_large_gf2_rank_backends_agree():
    fld = GF(1)
    rng = np.random.default_rng(7)
    m = rng.integers(0, 2, size=(300, 700), dtype=np.uint16)
    m[150:] = m[:150] ^ m[150:300] * 0  # duplicate rows: rank 150
    ranks = {impl.__name__: linalg.rank(m, fld, impl=impl) for impl in IMPLS}
    assert set(ranks.values()) == {150}


def test_field_elements():
    fld = GF(4)
    a, b = FieldElem(fld, 3), FieldElem(fld, 7)
    assert (a * b) / b == a
    assert a + a == FieldElem(fld, 0)
    assert fld.format(fld.zeta) == "z"


def test_fallback_selected_by_environment():
    env = dict(os.environ, KH2_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import kh2.linalg as l; print(l.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
def test_compiled_backend_active_by_default():
    env = {k: v for k, v in os.environ.items() if k != "KH2_PURE_PYTHON"}
    out = subprocess.run([sys.executable, "-c", "import kh2.linalg as l; print(l.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "compiled"


def test_homology_identical_under_fallback():
    code = ("from kh2.table import load_table; from kh2.complex import build_complex; "
            "from kh2.frobenius import SYSTEMS; from kh2.homology import homology_field; "
            "print(sorted(homology_field(build_complex(load_table()['6_2'], SYSTEMS['kh'])).poincare().items()))")
    outs = set()
    for flag in ("0", "1"):
        env = dict(os.environ, KH2_PURE_PYTHON=flag)
        outs.add(subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                                env=env, check=True).stdout)
    assert len(outs) == 1
