from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.rootdata import AffineType
from qaffine.scalars import s_pow

types = st.sampled_from([("A", 2), ("A", 3), ("A", 4), ("A", 5), ("C", 2), ("C", 3)]).map(
    lambda p: AffineType(*p)
)


def test_cartan_matrices():
    a4 = AffineType("A", 4)
    assert [[a4.cartan(i, j) for j in range(4)] for i in range(4)] == [
        [2, -1, 0, -1], [-1, 2, -1, 0], [0, -1, 2, -1], [-1, 0, -1, 2]]
    c3 = AffineType("C", 3)
    assert [[c3.cartan(i, j) for j in range(4)] for i in range(4)] == [
        [2, -1, 0, 0], [-2, 2, -1, 0], [0, -1, 2, -2], [0, 0, -1, 2]]


def test_pairings_and_inner_products():
    a3 = AffineType("A", 3)
    assert a3.pairing(0, a3.fundamental(1)) == -1
    assert a3.inner(a3.fundamental(1), a3.fundamental(1)) == Fraction(2, 3)
    c2 = AffineType("C", 2)
    assert c2.inner(c2.fundamental(1), c2.fundamental(1)) == Fraction(1, 2)
    assert c2.inner(c2.fundamental(1), c2.fundamental(2)) == Fraction(1, 2)


def test_marks_and_duality():
    c2 = AffineType("C", 2)
    assert c2.marks == (1, 2, 1) and c2.comarks == (1, 1, 1)
    a3 = AffineType("A", 3)
    assert a3.dual_index(1) == 2
    assert AffineType("C", 3).dual_index(2) == 2


def test_constants():
    a3 = AffineType("A", 3).constants()
    assert a3.delta_rho == 3 and a3.literature_delta_rho == 4
    assert a3.pstar() == s_pow(6, -1)            # (-q)^3 with q = s^2
    assert AffineType("C", 2).constants().pstar() == s_pow(6)
    assert AffineType("C", 3).constants().pstar() == s_pow(8)


def test_orbit_of_vector_weight():
    a3 = AffineType("A", 3)
    assert a3.classical_orbit(a3.fundamental(1)) == {(1, 0), (-1, 1), (0, -1)}


def test_invalid_type():
    with pytest.raises(ValueError):
        AffineType("B", 3)


@given(types, st.data())
def test_reflection_is_involution(t, data):
    i = data.draw(st.sampled_from(t.index_set))
    lam = tuple(data.draw(st.integers(-3, 3)) for _ in t.fundamental(1))
    assert t.reflect(i, t.reflect(i, lam)) == lam
    assert t.pairing(i, t.reflect(i, lam)) == -t.pairing(i, lam)


@given(types, st.data())
def test_reflection_preserves_inner_product(t, data):
    i = data.draw(st.sampled_from(t.classical))
    lam = tuple(data.draw(st.integers(-3, 3)) for _ in t.fundamental(1))
    assert t.inner(t.reflect(i, lam), t.reflect(i, lam)) == t.inner(lam, lam)


@given(types)
def test_level_zero(t):
    # sum of comarks times pairings vanishes on classical weights
    for k in t.classical:
        lam = t.fundamental(k)
        assert sum(c * t.pairing(i, lam) for i, c in zip(t.index_set, t.comarks)) == 0
