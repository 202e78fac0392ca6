import pytest

from kh2 import matrices as mx
from kh2.errors import ReducedTheoryUndefined
from kh2.frobenius import PAPER_SYSTEM_IDS, SYSTEMS, FrobeniusSystem, get_system, plain_khovanov
from kh2.rings import CALR, CONSTANTS, R5

ALL = sorted(SYSTEMS)


def _axioms(sys):
    ring = sys.ring
    mu, delta = sys.mu_matrix(), sys.delta_matrix()
    eps, unit = sys.counit_matrix(), sys.unit_matrix()
    I = mx.identity(ring, 2)
    k = lambda a, b: mx.kron(a, b, ring)  # noqa: E731
    m = lambda a, b: mx.matmul(a, b, ring)  # noqa: E731
    return {
        "associativity": m(mu, k(mu, I)) == m(mu, k(I, mu)),
        "coassociativity": m(k(delta, I), delta) == m(k(I, delta), delta),
        "frobenius": m(delta, mu) == m(k(mu, I), k(I, delta)) == m(k(I, mu), k(delta, I)),
        "counit": m(k(eps, I), delta) == I == m(k(I, eps), delta),
        "unit": m(mu, k(unit, I)) == I == m(mu, k(I, unit)),
        "commutative": mu == m(mu, _swap(ring)),
    }


def _swap(ring):
    s = mx.zeros(ring, 4, 4)
    for i in range(2):
        for j in range(2):
            s[2 * j + i][2 * i + j] = ring.one()
    return s


@pytest.mark.parametrize("name", ALL)
def test_frobenius_axioms(name):
    res = _axioms(get_system(name))
    assert all(res.values()), res


@pytest.mark.parametrize("name", ALL)
def test_pairing_has_determinant_one(name):
    sys = get_system(name)
    pm = sys.pairing_matrix()
    ring = sys.ring
    assert pm == [[ring.zero(), ring.one()], [ring.one(), sys.alpha]]
    assert mx.det2(pm) == ring.one()


@pytest.mark.parametrize("name", ALL)
def test_sphere_with_dots_recurrence(name):
    sys = get_system(name)
    eps = sys.sphere_evaluations(64)
    assert eps[:9] == [sys.surface_evaluation(0, d) for d in range(9)]
    assert eps[0] == sys.ring.zero() and eps[1] == sys.ring.one()
    for d in range(2, 65):
        assert eps[d] == sys.alpha * eps[d - 1] + sys.beta * eps[d - 2]


@pytest.mark.parametrize("name", ALL)
def test_handle_is_alpha_and_dual_basis(name):
    sys = get_system(name)
    assert sys.handle() == sys.one.scale(sys.alpha)
    # functionals are stored by their values on (x+, x-); the duals give the identity matrix
    duals = sys.dual_basis()
    vals = [[f.c1, f.cX] for f in duals]
    assert vals == [[sys.ring.one(), sys.ring.zero()], [sys.ring.zero(), sys.ring.one()]]


@pytest.mark.parametrize("name", ALL)
def test_dot_matrix_and_reduced_generator(name):
    sys = get_system(name)
    ring = sys.ring
    assert sys.dot_matrix() == [[ring.zero(), sys.beta], [ring.one(), sys.alpha]]
    if sys.has_root:
        m = sys.reduced_generator()
        # X m = A m
        assert sys.dot_action(m) == m.scale(sys.root)
        assert sys.root + sys.root_conjugate == sys.alpha
        assert sys.root * sys.root_conjugate == sys.beta
    else:
        with pytest.raises(ReducedTheoryUndefined):
            sys.reduced_generator()


def test_predefined_catalogue():
    assert set(PAPER_SYSTEM_IDS) <= set(SYSTEMS)
    assert get_system("univ").alpha == CONSTANTS.P and get_system("univ").beta == CONSTANTS.Q
    assert get_system("univ").ring == CALR
    assert get_system("f5").ring == R5
    assert get_system("sbn").root == CONSTANTS.A
    assert get_system("filtered-f4").alpha.is_one() and not get_system("filtered-f4").beta
    with pytest.raises(KeyError):
        get_system("nope")


def test_grading_flags():
    assert get_system("f5").is_graded and get_system("bn-graded").is_graded and get_system("kh").is_graded
    assert not get_system("filtered-f4").is_graded and get_system("filtered-f4").is_filtered


def test_orientation_reversal_is_involution():
    sys = get_system("f5")
    for a in (sys.one, sys.X):
        assert sys.orientation_reversal(sys.orientation_reversal(a)) == a
    assert sys.orientation_reversal(sys.X) == sys.X + sys.one.scale(sys.alpha)


def test_bad_root_rejected():
    h, t = R5.gens()
    with pytest.raises(ValueError):
        FrobeniusSystem(R5, h, t, h)


def test_plain_khovanov_over_extension():
    sys = plain_khovanov(2)
    assert sys.ring.field_degree == 2 and sys.name == "kh-gf2"
    assert all(_axioms(sys).values())
