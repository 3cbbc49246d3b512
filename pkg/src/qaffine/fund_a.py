"""Fundamental crystals and modules of type A^(1)_{n-1}.

Nodes of B_k are k-element subsets of Z/nZ realized on {1..n}; index i moves i to
i+1 (index 0 moves n to 1).  Every weight is extremal, so the module generators
transport the global basis along crystal arrows.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .crystal import CrystalGraph
from .linalg import SMat
from .rootdata import AffineType
from .scalars import RatFunc
from .umodule import (
    Morphism,
    UModule,
    from_crystal_transport,
    tensor,
    trivial_module,
    twist,
)

Subset = tuple[int, ...]


class FundAError(ValueError):
    pass


def subset_label(K: Subset) -> str:
    return "{" + ",".join(map(str, K)) + "}"


def _check(n: int, k: int, lo: int = 1) -> None:
    if n < 2:
        raise FundAError("n must be at least 2")
    if not lo <= k <= n - (1 if lo == 1 else 0):
        raise FundAError(f"k={k} out of range for n={n}")


def subset_weight(n: int, K: Subset) -> tuple[int, ...]:
    return tuple(int(i in K) - int(i + 1 in K) for i in range(1, n))


def _f_subset(n: int, i: int, K: Subset) -> Subset | None:
    a = n if i == 0 else i
    b = 1 if i == 0 else i + 1
    if a in K and b not in K:
        return tuple(sorted((set(K) - {a}) | {b}))
    return None


def subsets(n: int, k: int) -> list[Subset]:
    return list(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def build_crystal_A(n: int, k: int) -> CrystalGraph:
    _check(n, k)
    t = AffineType("A", n)
    nodes = subsets(n, k)
    f = {}
    for K in nodes:
        for i in t.index_set:
            L = _f_subset(n, i, K)
            if L is not None:
                f[(i, K)] = L
    wt = {K: subset_weight(n, K) for K in nodes}
    return CrystalGraph(t, nodes, wt, f, subset_label, f"B{k}")


@lru_cache(maxsize=None)
def module_A(n: int, k: int) -> UModule:
    """V(varpi_k); k = 0 and k = n give the trivial module."""
    _check(n, k, lo=0)
    t = AffineType("A", n)
    if k in (0, n):
        return trivial_module(t, "{}" if k == 0 else subset_label(tuple(range(1, n + 1))))
    B = build_crystal_A(n, k)
    idx = B.index
    f_arrows = {(i, idx[K]): idx[L] for (i, K), L in B.f.items()}
    e_arrows = {(i, idx[L]): idx[K] for (i, K), L in B.f.items()}
    labels = [subset_label(K) for K in B.nodes]
    weights = [B.wt[K] for K in B.nodes]
    return from_crystal_transport(t, labels, weights, e_arrows, f_arrows, f"V{k}")


def _nodes(n: int, k: int) -> list[Subset]:
    return [()] if k == 0 else [tuple(range(1, n + 1))] if k == n else subsets(n, k)


def psi(J: Subset, K: Subset) -> int:
    return sum(1 for a in J for b in K if a > b)


def minus_q_pow(e: int) -> RatFunc:
    """(-q)^e with q = s^2."""
    return RatFunc.monomial(2 * e, (-1) ** (e % 2))


def embed_i(n: int, j: int, k: int) -> Morphism:
    """i_{j,k}: V(varpi_{j+k}) -> V(varpi_j)_{(-q)^k} (x) V(varpi_k)_{(-q)^-j}."""
    if j < 0 or k < 0 or j + k > n:
        raise FundAError("need j, k >= 0 and j + k <= n")
    src = module_A(n, j + k)
    tgt = tensor(twist(module_A(n, j), minus_q_pow(k)), twist(module_A(n, k), minus_q_pow(-j)))
    Jn, Kn = _nodes(n, j), _nodes(n, k)
    Jpos = {J: a for a, J in enumerate(Jn)}
    Kpos = {K: b for b, K in enumerate(Kn)}
    entries = []
    for c, M in enumerate(_nodes(n, j + k)):
        for J in combinations(M, j):
            K = tuple(x for x in M if x not in J)
            entries.append((Jpos[J] * len(Kn) + Kpos[K], c, minus_q_pow(psi(J, K))))
    return Morphism(SMat.from_entries(tgt.dim, src.dim, entries), src, tgt, f"i_{j},{k}")


def project_p(n: int, j: int, k: int) -> Morphism:
    """p_{j,k}: V(varpi_j)_{(-q)^-k} (x) V(varpi_k)_{(-q)^j} -> V(varpi_{j+k})."""
    if j < 0 or k < 0 or j + k > n:
        raise FundAError("need j, k >= 0 and j + k <= n")
    src = tensor(twist(module_A(n, j), minus_q_pow(-k)), twist(module_A(n, k), minus_q_pow(j)))
    tgt = module_A(n, j + k)
    Jn, Kn = _nodes(n, j), _nodes(n, k)
    Mpos = {M: c for c, M in enumerate(_nodes(n, j + k))}
    entries = []
    for a, J in enumerate(Jn):
        for b, K in enumerate(Kn):
            if set(J) & set(K):
                continue
            M = tuple(sorted(J + K))
            entries.append((Mpos[M], a * len(Kn) + b, minus_q_pow(psi(J, K))))
    return Morphism(SMat.from_entries(tgt.dim, src.dim, entries), src, tgt, f"p_{j},{k}")


def conj2_data_A(n: int, i: int) -> list[dict]:
    """Filtration maps for V(varpi_i).

    For 1 <= i < n-1 and mu = 1..i: phi_mu = ((p_{i,1})_{-q} (x) W_mu) o (V (x) (i_{1,mu-1})_b)
    with s_mu = mu, t_mu = i+1, b_mu = (-q)^{i-mu+2}, c_mu = -q and
    W_mu = V(varpi_{mu-1})_{(-q)^{i-mu+1}}.  For i = n-1 the diagram automorphism
    j -> n-j carries the i = 1 data to a single map V_{n-1} (x) V_{n-1,(-q)^2} -> V_{n-2,-q},
    solved directly.  For n = 2 no map is needed.  Twists are recorded as exponents of -q.
    """
    if not 1 <= i <= n - 1:
        raise FundAError("i out of range")
    if i == n - 1:
        return _conj2_data_last(n)
    out = []
    for mu in range(1, i + 1):
        b = minus_q_pow(i - mu + 2)
        c = minus_q_pow(1)
        emb = embed_i(n, 1, mu - 1).twisted(b)
        proj = project_p(n, i, 1).twisted(c)
        Vi = module_A(n, i)
        W = emb.target  # V1_{(-q)^{i+1}} (x) W_mu
        first = Morphism(
            _kron_id_left(Vi.dim, emb.matrix), tensor(Vi, emb.source), tensor(Vi, W), "id⊗i"
        )
        Wmu = twist(module_A(n, mu - 1), minus_q_pow(i - mu + 1))
        second = Morphism(
            _kron_id_right(proj.matrix, Wmu.dim),
            tensor(proj.source, Wmu),
            tensor(proj.target, Wmu),
            "p⊗id",
        )
        out.append({
            "mu": mu, "s": mu, "t": i + 1, "b": (i - mu + 2), "c": 1,
            "W_index": mu - 1, "W_twist": (i - mu + 1),
            "phi": second @ _reassociate(first, second.source),
            "W": Wmu,
        })
    return out


def _conj2_data_last(n: int) -> list[dict]:
    from .umodule import solve_intertwiner

    if n == 2:
        return []
    V = module_A(n, n - 1)
    src = tensor(V, twist(V, minus_q_pow(2)))
    triv = trivial_module(AffineType("A", n))
    tgt = tensor(twist(module_A(n, n - 2), minus_q_pow(1)), triv)
    phi = Morphism(solve_intertwiner(src, tgt), src, tgt, f"phi_{n - 1},1")
    return [{
        "mu": 1, "s": n - 1, "t": n - 2, "b": 2, "c": 1, "W_index": 0, "W_twist": 0,
        "phi": phi, "W": triv,
    }]


def _kron_id_left(d: int, m: SMat) -> SMat:
    from .linalg import kron
    from .scalars import ONE

    return kron(SMat.identity(d, ONE), m)


def _kron_id_right(m: SMat, d: int) -> SMat:
    from .linalg import kron
    from .scalars import ONE

    return kron(m, SMat.identity(d, ONE))


def _reassociate(f: Morphism, target: UModule) -> Morphism:
    """Same matrix; (A (x) B) (x) C and A (x) (B (x) C) share the flattened basis."""
    return Morphism(f.matrix, f.source, target, f.name)
