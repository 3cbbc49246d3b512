import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaffine.crystal import (
    KASHIWARA,
    MIRRORED,
    delete_arrow,
    disjoint_union,
    raising_word,
    replay_word,
    same_chamber,
    tensor,
    weyl_dimension,
)
from qaffine.fund_a import build_crystal_A, module_A
from qaffine.fund_c import build_crystal_C, vector_module_C
from qaffine.rootdata import AffineType
from qaffine.scalars import ONE
from qaffine.umodule import lower_kashiwara
from qaffine.umodule import tensor as mtensor

FUNDAMENTALS = [("A", 3, 1), ("A", 3, 2), ("A", 4, 2), ("C", 2, 1), ("C", 2, 2),
                ("C", 3, 1), ("C", 3, 2), ("C", 3, 3)]


def crystal(fam, n, k):
    return build_crystal_A(n, k) if fam == "A" else build_crystal_C(n, k)


def test_vector_crystal_A3():
    B = crystal("A", 3, 1)
    assert B.nodes == ((1,), (2,), (3,))
    assert B.weyl_action(1, (1,)) == (2,)
    assert B.f_op(0, (3,)) == (1,)


def test_dot_export_is_stable():
    dot = crystal("A", 3, 1).to_dot()
    assert dot.count("->") == 3
    assert 'n2 -> n0 [label="0"]' in dot
    assert dot == crystal("A", 3, 1).to_dot()


def test_kn_counts():
    assert [len(crystal("C", n, k)) for n, k in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]] == [4, 5, 6, 14, 14]


def test_weyl_dimension():
    assert weyl_dimension(AffineType("C", 2), (1, 2), [0, 1]) == 5
    assert weyl_dimension(AffineType("C", 3), (1, 2, 3), [0, 1, 0]) == 14


@pytest.mark.parametrize("fam,n,k", FUNDAMENTALS)
def test_fundamental_crystals_are_simple(fam, n, k):
    B = crystal(fam, n, k)
    assert not B.check_axioms()
    assert B.is_regular()
    assert B.is_simple()
    assert B.connectedness()


def test_extremal_tensor_examples():
    B = crystal("A", 3, 1)
    T = tensor(B, B)
    assert T.is_extremal(((1,), (1,)))
    assert not T.is_extremal(((1,), (3,)))


@pytest.mark.parametrize("fam,n", [("A", 3), ("C", 2)])
def test_extremal_tensor_equivalence(fam, n):
    t = AffineType(fam, n)
    ks = range(1, n) if fam == "A" else range(1, n + 1)
    for k in ks:
        for l in ks:
            B1, B2 = crystal(fam, n, k), crystal(fam, n, l)
            T = tensor(B1, B2)
            for b1, b2 in T.nodes:
                rhs = B1.is_extremal(b1) and B2.is_extremal(b2) and same_chamber(t, B1.wt[b1], B2.wt[b2])
                assert T.is_extremal((b1, b2)) == rhs


def test_negative_controls():
    B = crystal("A", 3, 1)
    assert not disjoint_union(B, B).connectedness()
    assert not delete_arrow(B, 1, (1,)).is_simple()


def test_extremalize_reaches_extremal_nodes():
    B = crystal("C", 3, 2)
    for b in B.nodes:
        e = B.extremalize(b)
        assert B.is_extremal(e)
        if B.is_extremal(b):
            assert e == b


def test_raising_word_replays():
    t = AffineType("A", 3)
    word = raising_word(t, (0, -1), (1, 0))
    assert replay_word(t, (0, -1), word) == ((1, 0), True)
    assert raising_word(t, (1, 0), (1, 0)) == []


def _mod_q(v):
    out = {}
    for k, x in v.items():
        if x.valuation() < 0:
            return None
        if x.valuation() == 0:
            out[k] = x.leading_at_zero()
    return out


@pytest.mark.parametrize("conv,expected", [(KASHIWARA, True), (MIRRORED, False)])
@pytest.mark.parametrize("case", ["A3", "C2"])
def test_tensor_rule_matches_coproduct(case, conv, expected):
    """Lower Kashiwara operators on V (x) V reduce mod q to the crystal tensor rule."""
    B, M = (build_crystal_A(3, 1), module_A(3, 1)) if case == "A3" else (build_crystal_C(2, 1), vector_module_C(2))
    T = mtensor(M, M)
    C = tensor(B, B, conv)
    idx = {nd: k for k, nd in enumerate(C.nodes)}
    agree = True
    for nd in C.nodes:
        for i in M.rtype.index_set:
            _, fv = lower_kashiwara(T, i, {idx[nd]: ONE})
            target = C.f_op(i, nd)
            want = {} if target is None else {idx[target]: 1}
            got = _mod_q(fv)
            agree &= got is not None and got == want
    assert agree == expected


@given(st.sampled_from(FUNDAMENTALS[:6]), st.sampled_from(FUNDAMENTALS[:6]), st.data())
def test_tensor_invariants(c1, c2, data):
    if c1[:2] != c2[:2]:
        return
    B1, B2 = crystal(*c1), crystal(*c2)
    T = tensor(B1, B2)
    assert len(T) == len(B1) * len(B2)
    assert not T.check_axioms()
    b = data.draw(st.sampled_from(list(T.nodes)))
    t = T.rtype
    assert T.wt[b] == t.add(B1.wt[b[0]], B2.wt[b[1]])
    i = data.draw(st.sampled_from(t.index_set))
    assert T.weyl_action(i, T.weyl_action(i, b)) == b
    assert T.wt[T.weyl_action(i, b)] == t.reflect(i, T.wt[b])
