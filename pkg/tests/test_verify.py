import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.rootdata import AffineType
from qaffine.scalars import ONE, RatFunc, s_pow
from qaffine.verify import (
    Factor,
    TensorSpec,
    VerifyError,
    check_conj1,
    check_conj2,
    check_cor_pole,
    format_pole_table,
    highest_line_check,
    is_ordered,
    pole_table,
    reducibility_witnesses_C,
    relation_suite,
    selftest,
)

A3, A4, C2, C3 = (AffineType("A", 3), AffineType("A", 4), AffineType("C", 2), AffineType("C", 3))


def test_ordering_convention():
    assert is_ordered([4, 0], cyclic=True)
    assert not is_ordered([0, 4], cyclic=True)
    assert is_ordered([0, 4], cyclic=False)


def test_conj1_at_a_pole():
    # V (x) V_{s^4} with exponents 0, 4 is only valid for the cocyclic half
    spec = TensorSpec("A", 3, (Factor(1, 0), Factor(1, 4)))
    with pytest.raises(VerifyError, match="precondition: ordering"):
        check_conj1(spec, 1)
    rep = check_conj1(spec, 2)
    assert rep["pass"] and rep["cocyclic"] and not rep["cyclic"]
    assert rep["generated_dim"] == 6
    rep = check_conj1(TensorSpec("A", 3, (Factor(1, 4), Factor(1, 0))), 1)
    assert rep["pass"] and rep["generated_dim"] == 9


def test_conj1_single_factor_and_C2_fixture():
    assert check_conj1(TensorSpec("C", 2, (Factor(2, 5),)), 1)["pass"]
    rep = check_conj1(TensorSpec("C", 2, (Factor(1, 0), Factor(2, 3, -1))), 2)
    assert rep["cyclic"] and rep["cocyclic"] and rep["dim"] == 20


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=3))
def test_conj1_generic_cyclic(exps):
    exps = sorted(exps, reverse=True)
    spec = TensorSpec("A", 3, tuple(Factor(1, e) for e in exps))
    assert check_conj1(spec, 1)["pass"]


def test_cor_pole():
    r = check_cor_pole(A3, 1, 1, s_pow(4))
    assert r["pole"] and not r["valuation_order_predicts_no_pole"] and r["pass"]
    r = check_cor_pole(C2, 1, 1, s_pow(-2))
    assert not r["pole"] and r["pass"]
    for t in (A3, C2):
        assert not check_cor_pole(t, 1, 1, ONE)["pole"]


def test_conj2_A4():
    rep = check_conj2(A4, 2)
    assert rep["F_dims"] == [5, 3, 1]
    assert rep["pass"]


def test_conj2_C():
    assert check_conj2(C2, 1)["F_dims"] == [3, 1]
    rep = check_conj2(C2, 2)
    assert rep["pass"] and rep["cond1_F_N_is_highest_line"]
    assert check_conj2(C3, 3)["F_dims"] == [13, 5, 2, 1]


@pytest.mark.parametrize("n,i", [(2, 1), (2, 2), (3, 2)])
def test_highest_line_check(n, i):
    assert highest_line_check(n, i)["pass"]


def test_witnesses():
    rep = reducibility_witnesses_C(2, 1, 1)
    assert [c["root"] for c in rep["certificates"]] == ["(-s)^2", "(-s)^6"]
    assert rep["pass"]
    rep = reducibility_witnesses_C(3, 2, 1)
    first = [c for c in rep["certificates"] if c["family"] == "first"]
    assert first and first[0]["pass"]
    # l - i = 0 uses the trivial module
    assert reducibility_witnesses_C(2, 2, 2)["pass"]


def test_pole_table_A4():
    table = pole_table(A4)
    assert table["pass"]
    assert {tuple(r["pair"]): r["denominator"] for r in table["rows"]}[(2, 2)] == "(z - s^4)*(z - s^8)"
    assert "match" in format_pole_table(table)


def test_relation_suite():
    assert relation_suite(C2, max_factors=3, samples=2)["pass"]


def test_selftest_small_is_deterministic():
    a, b = selftest("small"), selftest("small")
    assert a == b
    assert a["pass"]


def test_bad_budget():
    with pytest.raises(VerifyError):
        selftest("huge")


def test_factor_label():
    assert Factor(2, 3, -1).label() == "V2@-s^3"
    assert Factor(1).value == RatFunc.const(1)
