import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.fund_a import (
    FundAError,
    build_crystal_A,
    conj2_data_A,
    embed_i,
    minus_q_pow,
    module_A,
    project_p,
    psi,
    subset_weight,
)
from qaffine.scalars import s_pow
from qaffine.umodule import check_relations


def test_vector_module():
    M = module_A(3, 1)
    assert M.labels == ("{1}", "{2}", "{3}")
    assert M.weights == ((1, 0), (-1, 1), (0, -1))


def test_dimensions_are_binomial():
    assert [module_A(5, k).dim for k in range(6)] == [1, 5, 10, 10, 5, 1]


def test_weights_and_psi():
    assert subset_weight(4, (1, 3)) == (1, -1, 1)
    assert psi((3,), (1, 2)) == 2
    assert minus_q_pow(3) == s_pow(6, -1)


def test_out_of_range():
    with pytest.raises(FundAError):
        build_crystal_A(3, 3)
    with pytest.raises(FundAError):
        embed_i(3, 2, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_relations(n):
    for k in range(1, n):
        assert check_relations(module_A(n, k)) == []


def test_embedding_entries():
    entries = sorted((r, c, str(x)) for r, c, x in embed_i(4, 1, 1).matrix.entries())
    assert entries[:4] == [(1, 0, "1"), (2, 1, "1"), (3, 2, "1"), (4, 0, "-s^2")]


@given(st.integers(3, 4), st.data())
def test_embeddings_and_projections_are_intertwiners(n, data):
    j = data.draw(st.integers(0, n - 1))
    k = data.draw(st.integers(0, n - j))
    assert embed_i(n, j, k).is_intertwiner()
    assert project_p(n, j, k).is_intertwiner()


def test_projection_after_embedding_is_nonzero_on_top():
    i = embed_i(4, 1, 2)
    assert i.apply({0: s_pow(0)}) != {}


@pytest.mark.parametrize("n,i,N", [(3, 1, 1), (4, 2, 2), (4, 3, 1), (2, 1, 0)])
def test_filtration_maps(n, i, N):
    data = conj2_data_A(n, i)
    assert len(data) == N
    for d in data:
        assert d["phi"].is_intertwiner()
