import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.fund_c import (
    FundCError,
    build_crystal_C,
    column_label,
    conj2_maps_C,
    e_column,
    f_column,
    fused_data_C,
    is_admissible,
    kn_columns,
    module_C,
    p_i_C,
    parse_column,
    solve_ip_C,
    trace_C,
    vector_module_C,
)
from qaffine.umodule import check_relations


def test_column_labels_round_trip():
    assert parse_column("(1,2b)") == (1, -2)
    assert column_label((2, -1)) == "(2,1b)"


def test_admissibility():
    assert not is_admissible(2, (1, -1))
    assert is_admissible(2, (2, -2))
    assert is_admissible(2, (-2, -1))


def test_kn_columns_C2():
    assert kn_columns(2, 2) == [(1, 2), (1, -2), (2, -2), (2, -1), (-2, -1)]


def test_kashiwara_operators_on_columns():
    assert e_column(2, 0, (1, 2)) == (2, -1)
    assert f_column(2, 2, (2,)) == (-2,)
    assert f_column(2, 1, (1, -2)) is None or f_column(2, 1, (1, -2)) in kn_columns(2, 2)


@given(st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]), st.data())
def test_e_inverts_f(nk, data):
    n, k = nk
    col = data.draw(st.sampled_from(kn_columns(n, k)))
    i = data.draw(st.integers(0, n))
    g = f_column(n, i, col)
    if g is not None:
        assert e_column(n, i, g) == col


def test_fused_module_matches_crystal():
    F = fused_data_C(2, 2)
    assert F.module.labels == ("(1,2)", "(1,2b)", "(2,2b)", "(2,1b)", "(2b,1b)")
    assert F.ambient.dim == 16
    assert module_C(3, 2).dim == 14 == len(build_crystal_C(3, 2))
    assert module_C(3, 3).dim == 14


@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)])
def test_relations(n, k):
    assert check_relations(module_C(n, k)) == []


def test_vector_module_relations():
    assert check_relations(vector_module_C(2)) == []


def test_trace_normalization():
    entries = sorted((r, c, str(x)) for r, c, x in trace_C(2, 1).matrix.entries())
    assert entries == [(0, 3, "1"), (0, 6, "-s"), (0, 9, "s^3"), (0, 12, "-s^4")]


@pytest.mark.parametrize("n", [2, 3])
def test_fusion_maps_are_intertwiners(n):
    for mu in range(n + 1):
        for nu in range(n + 1 - mu):
            i, p = solve_ip_C(n, mu, nu)
            assert i.is_intertwiner() and p.is_intertwiner()
    for i in range(1, n + 1):
        assert p_i_C(n, i).is_intertwiner()
        assert trace_C(n, i).is_intertwiner()


def test_filtration_maps():
    data = conj2_maps_C(3, 3)
    assert [d["b"] for d in data] == [6, 5, 4]
    assert all(d["phi"].is_intertwiner() for d in data)


def test_out_of_range():
    with pytest.raises(FundCError):
        module_C(2, 3)
