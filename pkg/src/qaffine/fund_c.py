"""Fundamental crystals and modules of type C^(1)_n.

Letters of Kashiwara-Nakashima columns are nonzero integers: x > 0 stands for x
and -x for x-bar, ordered 1 < ... < n < n-bar < ... < 1-bar.  The vector module
transports basis vectors along crystal arrows; V(varpi_k) for k >= 2 is the
submodule of V(varpi_1)_{(-s)^{k-1}} (x) V(varpi_{k-1})_{(-s)^-1} generated by its
classical highest vector of weight varpi_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .crystal import CrystalGraph
from .linalg import SMat, kron
from .rootdata import AffineType, Weight
from .scalars import ONE, neg_s_pow, s_pow
from .umodule import (
    ModuleError,
    Morphism,
    UModule,
    ZMat,
    classical_hw_vectors,
    closure,
    from_crystal_transport,
    solve_intertwiner,
    tensor,
    trivial_module,
    twist,
)

Column = tuple[int, ...]


class FundCError(ValueError):
    pass


# --------------------------------------------------------------------------
# columns

def letter_key(n: int, x: int) -> int:
    return x if x > 0 else 2 * n + 1 + x


def letter_str(x: int) -> str:
    return str(x) if x > 0 else f"{-x}b"


def column_label(col: Column) -> str:
    return "(" + ",".join(letter_str(x) for x in col) + ")"


def parse_column(text: str) -> Column:
    body = text.strip().strip("()")
    if not body:
        return ()
    return tuple(-int(p[:-1]) if p.endswith("b") else int(p) for p in body.split(","))


def is_admissible(n: int, col: Column) -> bool:
    keys = [letter_key(n, x) for x in col]
    if any(a >= b for a, b in zip(keys, keys[1:])):
        return False
    k = len(col)
    pos = {x: p for p, x in enumerate(col, start=1)}
    for a, x in enumerate(col, start=1):
        if x > 0 and -x in pos:
            b = pos[-x]
            if a + (k - b + 1) > x:
                return False
    return True


def kn_columns(n: int, k: int) -> list[Column]:
    """Admissible columns of length k in lexicographic order of letter keys."""
    alphabet = sorted(list(range(1, n + 1)) + list(range(-n, 0)), key=lambda x: letter_key(n, x))
    return [c for c in combinations(alphabet, k) if is_admissible(n, c)]


def column_weight(n: int, col: Column) -> Weight:
    w = [0] * n
    for x in col:
        w[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(w)


def _signs(n: int, i: int, col: Column) -> list[tuple[int, str]]:
    out = []
    for p, x in enumerate(col):
        if i < n:
            if x == i or x == -(i + 1):
                out.append((p, "+"))
            elif x == i + 1 or x == -i:
                out.append((p, "-"))
        else:
            if x == n:
                out.append((p, "+"))
            elif x == -n:
                out.append((p, "-"))
    # cancel adjacent +- pairs until the word reads -..-+..+
    stack: list[tuple[int, str]] = []
    for item in out:
        if item[1] == "-" and stack and stack[-1][1] == "+":
            stack.pop()
        else:
            stack.append(item)
    return stack


def _f_letter(n: int, i: int, x: int) -> int:
    if i == n:
        return -n
    return i + 1 if x == i else -i


def _e_letter(n: int, i: int, x: int) -> int:
    if i == n:
        return n
    return i if x == i + 1 else -(i + 1)


def f_column(n: int, i: int, col: Column) -> Column | None:
    if i == 0:
        if col and col[-1] == -1:
            return (1,) + col[:-1]
        return None
    plus = [p for p, s in _signs(n, i, col) if s == "+"]
    if not plus:
        return None
    p = plus[0]
    return col[:p] + (_f_letter(n, i, col[p]),) + col[p + 1:]


def e_column(n: int, i: int, col: Column) -> Column | None:
    if i == 0:
        if col and col[0] == 1:
            return col[1:] + (-1,)
        return None
    minus = [p for p, s in _signs(n, i, col) if s == "-"]
    if not minus:
        return None
    p = minus[-1]
    return col[:p] + (_e_letter(n, i, col[p]),) + col[p + 1:]


def _check(n: int, k: int, lo: int = 1) -> None:
    if n < 2:
        raise FundCError("n must be at least 2")
    if not lo <= k <= n:
        raise FundCError(f"k={k} out of range for n={n}")


@lru_cache(maxsize=None)
def build_crystal_C(n: int, k: int) -> CrystalGraph:
    _check(n, k)
    t = AffineType("C", n)
    nodes = kn_columns(n, k)
    node_set = set(nodes)
    f = {}
    for col in nodes:
        for i in t.index_set:
            nxt = f_column(n, i, col)
            if nxt is not None:
                if nxt not in node_set:
                    raise FundCError(f"f_{i} leaves the column set at {column_label(col)}")
                f[(i, col)] = nxt
    wt = {c: column_weight(n, c) for c in nodes}
    B = CrystalGraph(t, nodes, wt, f, column_label, f"B{k}")
    for (i, b2), b1 in B.e.items():
        if e_column(n, i, b2) != b1:
            raise FundCError("e and f rules disagree")
    return B


# --------------------------------------------------------------------------
# modules

@lru_cache(maxsize=None)
def vector_module_C(n: int) -> UModule:
    B = build_crystal_C(n, 1)
    idx = B.index
    f_arrows = {(i, idx[a]): idx[b] for (i, a), b in B.f.items()}
    e_arrows = {(i, idx[b]): idx[a] for (i, a), b in B.f.items()}
    return from_crystal_transport(
        B.rtype, [column_label(c) for c in B.nodes], [B.wt[c] for c in B.nodes],
        e_arrows, f_arrows, "V1",
    )


@dataclass(frozen=True)
class FusedModule:
    module: UModule
    ambient: UModule
    embedding: SMat        # fused basis -> ambient basis


@lru_cache(maxsize=None)
def fused_data_C(n: int, k: int) -> FusedModule:
    _check(n, k)
    if k == 1:
        V = vector_module_C(n)
        return FusedModule(V, V, SMat.identity(V.dim, ONE))
    t = AffineType("C", n)
    V1 = vector_module_C(n)
    Vp = module_C(n, k - 1)
    amb = tensor(twist(V1, neg_s_pow(k - 1)), twist(Vp, neg_s_pow(-1)))
    lam = t.fundamental(k)
    hws = classical_hw_vectors(amb, lam)
    if len(hws) != 1:
        raise ModuleError(f"hw space not 1-dimensional (dimension {len(hws)})")
    ech = closure(amb, hws)
    B = build_crystal_C(n, k)
    dim = sum(len(e) for e in ech.values())
    if dim != len(B):
        raise ModuleError(f"dimension mismatch: fused {dim}, crystal {len(B)}")
    by_weight: dict[Weight, list[Column]] = {}
    for col in B.nodes:
        by_weight.setdefault(B.wt[col], []).append(col)
    labels, weights, vectors = [], [], []
    index_of: dict[tuple[Weight, int], int] = {}
    for w, cols in by_weight.items():
        rows = ech.get(w)
        if rows is None or len(rows) != len(cols):
            raise ModuleError(f"weight multiplicity mismatch at {w}")
        for col, piv in zip(cols, rows.pivots()):
            index_of[(w, piv)] = len(labels)
            labels.append(column_label(col))
            weights.append(w)
            vectors.append(rows.rows[piv])
    d = len(labels)

    def restrict(X: ZMat) -> ZMat:
        parts = {}
        for deg, m in X.parts.items():
            cols = {}
            for j, v in enumerate(vectors):
                img = m.apply(v)
                if not img:
                    continue
                w2 = amb.weights[next(iter(img))]
                e = ech[w2]
                coords = e.coordinates(img)
                cols[j] = {index_of[(w2, p)]: x for p, x in coords.items()}
            parts[deg] = SMat(d, d, cols)
        return ZMat(d, d, parts)

    E = tuple(restrict(X) for X in amb.E)
    F = tuple(restrict(X) for X in amb.F)
    M = UModule(t, tuple(labels), tuple(weights), E, F, f"V{k}", (d,))
    emb = SMat(amb.dim, d, {j: v for j, v in enumerate(vectors)})
    return FusedModule(M, amb, emb)


def fused_module_C(n: int, k: int) -> UModule:
    return fused_data_C(n, k).module


def module_C(n: int, k: int) -> UModule:
    """V(varpi_k); k = 0 gives the trivial module."""
    _check(n, k, lo=0)
    if k == 0:
        return trivial_module(AffineType("C", n), "()")
    if k == 1:
        return vector_module_C(n)
    return fused_module_C(n, k)


def extremal_index(M: UModule, col: Column) -> int:
    """Basis index of the one-dimensional weight space of an extremal column."""
    n = M.rtype.n
    w = column_weight(n, col)
    idx = M.blocks.get(w, [])
    if len(idx) != 1:
        raise FundCError(f"weight of {column_label(col)} is not a line")
    return idx[0]


# --------------------------------------------------------------------------
# intertwiners

@lru_cache(maxsize=None)
def solve_ip_C(n: int, mu: int, nu: int) -> tuple[Morphism, Morphism]:
    """(i_{mu,nu}, p_{mu,nu}) normalized on the extremal anchor
    (1..mu) (x) (mu+1..mu+nu) <-> u_{mu+nu}."""
    if mu < 0 or nu < 0 or mu + nu > n:
        raise FundCError("need mu, nu >= 0 and mu + nu <= n")
    Vm, Vn, Vs = module_C(n, mu), module_C(n, nu), module_C(n, mu + nu)
    a = extremal_index(Vm, tuple(range(1, mu + 1))) if mu else 0
    b = extremal_index(Vn, tuple(range(mu + 1, mu + nu + 1))) if nu else 0
    anchor = a * Vn.dim + b
    tgt = tensor(twist(Vm, neg_s_pow(nu)), twist(Vn, neg_s_pow(-mu)))
    imat = solve_intertwiner(Vs, tgt, anchor=(anchor, 0))
    src = tensor(twist(Vm, neg_s_pow(-nu)), twist(Vn, neg_s_pow(mu)))
    pmat = solve_intertwiner(src, Vs, anchor=(0, anchor))
    return (Morphism(imat, Vs, tgt, f"i_{mu},{nu}"), Morphism(pmat, src, Vs, f"p_{mu},{nu}"))


def lowest_column(k: int) -> Column:
    return tuple(-x for x in range(k, 0, -1))


@lru_cache(maxsize=None)
def trace_C(n: int, k: int) -> Morphism:
    """tr: V(varpi_k) (x) V(varpi_k)_{s^{2n+2}} -> k, normalized by tr(u_k (x) lowest) = 1."""
    V = module_C(n, k)
    src = tensor(V, twist(V, s_pow(2 * n + 2)))
    low = extremal_index(V, lowest_column(k))
    m = solve_intertwiner(src, trivial_module(V.rtype), anchor=(0, low))
    return Morphism(m, src, trivial_module(V.rtype), f"tr_{k}")


def _kron_id(left: int, m: SMat, right: int) -> SMat:
    out = m
    if left > 1:
        out = kron(SMat.identity(left, ONE), out)
    if right > 1:
        out = kron(out, SMat.identity(right, ONE))
    return out


@lru_cache(maxsize=None)
def p_i_C(n: int, i: int) -> Morphism:
    """p_i: V(varpi_i) (x) V(varpi_1)_{(-s)^{i+1}} -> V(varpi_{i+1})_{-s} for i < n and
    p_n: V(varpi_n) (x) V(varpi_1)_{(-s)^{n+3}} -> V(varpi_{n-1})_{-s}."""
    c = neg_s_pow(1)
    if i < n:
        _, p = solve_ip_C(n, i, 1)
        return p.twisted(c)
    emb, _ = solve_ip_C(n, n - 1, 1)
    V1 = module_C(n, 1)
    Vm = module_C(n, n - 1)
    tr = trace_C(n, 1)
    step1 = _kron_id(1, emb.matrix, V1.dim)
    step2 = _kron_id(Vm.dim, tr.matrix, 1)
    src = tensor(module_C(n, n), twist(V1, neg_s_pow(n + 3)))
    tgt = twist(Vm, c)
    return Morphism(step2 @ step1, src, tgt, "p_n")


def conj2_maps_C(n: int, i: int) -> list[dict]:
    """phi_{i,mu} = (p_i (x) W_mu) o (V(varpi_i) (x) (i_{1,mu-1})_{b_mu}), mu = 1..i."""
    if not 1 <= i <= n:
        raise FundCError("i out of range")
    Vi = module_C(n, i)
    p = p_i_C(n, i)
    out = []
    for mu in range(1, i + 1):
        if i < n:
            b_exp, w_exp, t_idx = i - mu + 2, i - mu + 1, i + 1
        else:
            b_exp, w_exp, t_idx = n - mu + 4, n - mu + 3, n - 1
        emb, _ = solve_ip_C(n, 1, mu - 1)
        W = twist(module_C(n, mu - 1), neg_s_pow(w_exp))
        first = _kron_id(Vi.dim, emb.matrix, 1)
        second = _kron_id(1, p.matrix, W.dim)
        src = tensor(Vi, twist(module_C(n, mu), neg_s_pow(b_exp)))
        tgt = tensor(p.target, W)
        out.append({
            "mu": mu, "s": mu, "t": t_idx, "b": b_exp, "c": 1,
            "W_index": mu - 1, "W_twist": w_exp,
            "phi": Morphism(second @ first, src, tgt, f"phi_{i},{mu}"),
            "W": W,
        })
    return out
