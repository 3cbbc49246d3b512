from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.fund_a import module_A
from qaffine.fund_c import module_C
from qaffine.linalg import SMat
from qaffine.rmatrix import (
    RMatrixError,
    a_series,
    a_series_from_denominators,
    closed_form_d,
    component_ratios,
    explicit_R11_C,
    functional_checks,
    gamma_closed_form,
    inversion_check,
    matrix_diff,
    pole_reducibility,
    solve_R,
    solve_R_fund,
    yang_baxter,
    yang_baxter_at,
)
from qaffine.rootdata import AffineType
from qaffine.scalars import ONE, ZERO, BiRat, RatFunc, parse_scalar, s_pow, strip_units
from qaffine.umodule import ModuleError, check_intertwiner, tensor, twist

A3, A4, C2, C3 = (AffineType("A", 3), AffineType("A", 4), AffineType("C", 2), AffineType("C", 3))


def stripped(text):
    return strip_units(parse_scalar(text))


def test_denominator_examples():
    assert solve_R_fund("A", 3, 1, 1).denominator_str() == "(z - s^4)"
    assert solve_R_fund("C", 2, 1, 1).denominator_str() == "(z - s^2)*(z - s^6)"
    assert solve_R_fund("A", 4, 2, 2).denominator == stripped("(z - s^4)*(z - s^8)")
    assert solve_R_fund("C", 3, 2, 2).denominator_str() == "(z - s^2)*(z - s^6)*(z - s^8)"


def test_closed_form_examples():
    assert strip_units(closed_form_d(A4, 2, 2)) == stripped("(z - s^4)*(z - s^8)")
    assert strip_units(closed_form_d(A4, 1, 2)) == stripped("z + s^6")
    assert strip_units(closed_form_d(C2, 2, 2)) == stripped("(z - s^4)*(z - s^6)")


def test_normalization_at_z_equal_one():
    R = solve_R_fund("C", 2, 1, 2)
    assert R.at(ONE).apply({0: ONE}) == {0: ONE}


def test_matrix_is_an_intertwiner():
    assert solve_R_fund("C", 2, 2, 1).intertwiner_failures() == []
    assert solve_R_fund("A", 4, 1, 2).intertwiner_failures() == []


def test_denominator_is_minimal():
    R = solve_R_fund("C", 2, 1, 1)
    # dropping either factor leaves some entry with a pole
    for root in (s_pow(2), s_pow(6)):
        assert R.is_pole(root)
    assert not R.is_pole(s_pow(4))


def test_type_mismatch():
    with pytest.raises(ModuleError):
        solve_R(module_C(2, 1), module_A(3, 1))


@pytest.mark.parametrize("n", [2, 3])
def test_explicit_R11_matches_solved(n):
    assert matrix_diff(solve_R_fund("C", n, 1, 1).matrix, explicit_R11_C(n)) == []


def test_explicit_R11_at_one_is_identity():
    m = explicit_R11_C(2).map(lambda x: BiRat.from_ratfunc(x.at_z(ONE)))
    assert m == SMat.identity(16, BiRat.const(1))


@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)])
def test_component_ratios(n, k):
    res = component_ratios(solve_R_fund("C", n, k, 1), k)
    assert set(res) == set(gamma_closed_form(n, k))
    for item in res.values():
        assert item["match"]
        assert item["unit"][1] == 0            # the unit carries no power of z


def test_component_ratio_units():
    res = component_ratios(solve_R_fund("C", 2, 2, 1), 2)
    assert str(res[1]["unit"][0]) == "s^-2 + 1"
    assert list(gamma_closed_form(3, 3)) == [2]


def test_gamma_limits_are_bar_related():
    z_inv = BiRat.var("z", -1)
    for g in gamma_closed_form(3, 1).values():
        at0 = g.at_z(ZERO)
        at_inf = g.subs({"z": z_inv}).at_z(ZERO)
        assert at0 == at_inf.bar()


def test_a_series_constants():
    a = a_series(A3, 1, 1, 3)
    assert a.coeffs[0] == ONE and a.prefactor == Fraction(4, 3)
    assert str(a.coeffs[1]) == "(-1 + s^8)/(1 + s^4 + s^8)"
    c = a_series(C2, 1, 2, 3)
    assert c.prefactor == 1
    assert str(c.coeffs[1]) == "(s - s^3)/(1 - s^2 + s^4)"


@pytest.mark.parametrize("t,k,l", [(A3, 1, 2), (A4, 2, 2), (C2, 1, 1), (C2, 2, 1)])
def test_general_formula_reproduces_closed_form(t, k, l):
    def roots(i, j):
        return solve_R_fund(t.family, t.n, i, j).poles

    assert a_series_from_denominators(t, k, l, 6, roots) == a_series(t, k, l, 6)


@pytest.mark.parametrize("t,k,l", [(A3, 1, 1), (A4, 1, 3), (C2, 1, 1), (C2, 1, 2)])
def test_functional_equations(t, k, l):
    rep = functional_checks(t, k, l, 6, lambda i, j: solve_R_fund(t.family, t.n, i, j).denominator)
    assert all(v["holds"] for v in rep.values())


def test_functional_unit_C2():
    rep = functional_checks(C2, 1, 1, 6, lambda i, j: solve_R_fund("C", 2, i, j).denominator)
    assert rep["univ"]["unit_coefficient"] == "s^12"
    assert rep["univ"]["unit_z_exponent"] == -4


def test_reverse_relation_A3():
    d = solve_R_fund("A", 3, 1, 1).denominator
    rev = d.subs({"z": BiRat.var("z", -1), "s": BiRat.var("s", -1)})
    assert strip_units(rev) == stripped("z - s^4")


@pytest.mark.parametrize("fam,n", [("A", 3), ("C", 2)])
def test_yang_baxter(fam, n):
    assert yang_baxter(fam, n)


def test_yang_baxter_degenerate_and_pole():
    assert yang_baxter_at("A", 3, ONE, ONE)
    with pytest.raises(RMatrixError):
        yang_baxter_at("A", 3, s_pow(4), s_pow(1))


@pytest.mark.parametrize("fam,n,i,j", [("A", 3, 1, 2), ("C", 2, 1, 1), ("C", 2, 2, 1)])
def test_inversion(fam, n, i, j):
    full = (fam, n) != ("C", 3)
    assert inversion_check(solve_R_fund(fam, n, i, j), solve_R_fund(fam, n, j, i), full=full)


def test_pole_reducibility_examples():
    r = pole_reducibility(C2, 1, 1, s_pow(2))
    assert r["pole"] and r["reducible"] and r["consistent"]
    r = pole_reducibility(C2, 1, 1, s_pow(3))
    assert not r["pole"] and not r["reducible"]
    r = pole_reducibility(A3, 1, 1, s_pow(4))
    assert r["pole"] and r["reducible"] and not r["cyclic"] and r["cocyclic"]


@given(st.integers(-9, 9), st.sampled_from([1, -1]))
def test_specialized_R_is_intertwiner(e, sign):
    a = RatFunc.monomial(e, sign)
    R = solve_R_fund("C", 2, 1, 2)
    if R.is_pole(a):
        return
    S = tensor(R.V, twist(R.W, a))
    T = tensor(twist(R.W, a), R.V)
    assert check_intertwiner(R.at(a), S, T) == []


def test_json_dump():
    out = solve_R_fund("A", 3, 1, 1).to_json()
    assert out["denominator"] == "(z - s^4)"
    assert out["poles"] == [{"sign": 1, "exponent": 4, "multiplicity": 1}]
    assert len(out["source"]) == 9
