"""Finite level-zero crystals: tensor products, the Weyl group action S_w,
extremal elements, simplicity and regularity checks."""

from __future__ import annotations

import itertools
import json
from collections import deque
from collections.abc import Callable, Hashable, Iterable
from fractions import Fraction

from .rootdata import AffineType, Weight

Node = Hashable

KASHIWARA = "kashiwara"
MIRRORED = "mirrored"


class CrystalError(ValueError):
    pass


class CrystalGraph:
    """Crystal given by its nodes, weights and f-arrows; e-arrows are derived."""

    def __init__(self, rtype: AffineType, nodes: Iterable[Node], wt: dict[Node, Weight],
                 f: dict[tuple[int, Node], Node], label: Callable[[Node], str] = str,
                 name: str = ""):
        self.rtype = rtype
        self.nodes = tuple(nodes)
        self.wt = dict(wt)
        self.f = dict(f)
        self.e = {(i, b2): b1 for (i, b1), b2 in self.f.items()}
        if len(self.e) != len(self.f):
            raise CrystalError("f-arrows are not injective")
        self.label = label
        self.name = name
        self.index = {b: k for k, b in enumerate(self.nodes)}
        self._extremal: dict[Node, bool] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, b: Node) -> bool:
        return b in self.index

    # strings ------------------------------------------------------------------
    def f_op(self, i: int, b: Node) -> Node | None:
        return self.f.get((i, b))

    def e_op(self, i: int, b: Node) -> Node | None:
        return self.e.get((i, b))

    def eps(self, i: int, b: Node) -> int:
        k = 0
        while (b := self.e.get((i, b))) is not None:
            k += 1
        return k

    def phi(self, i: int, b: Node) -> int:
        k = 0
        while (b := self.f.get((i, b))) is not None:
            k += 1
        return k

    def e_max(self, i: int, b: Node) -> Node:
        while (c := self.e.get((i, b))) is not None:
            b = c
        return b

    def check_axioms(self) -> list[str]:
        """Weight shift, inverse arrows and phi - eps = pairing."""
        t = self.rtype
        problems = []
        for (i, b1), b2 in self.f.items():
            if self.wt[b2] != t.add(self.wt[b1], t.alpha(i), -1):
                problems.append(f"weight shift f_{i}({self.label(b1)})")
        for b in self.nodes:
            for i in t.index_set:
                if self.phi(i, b) - self.eps(i, b) != t.pairing(i, self.wt[b]):
                    problems.append(f"phi-eps at i={i}, {self.label(b)}")
        return problems

    # Weyl group action ---------------------------------------------------------
    def weyl_action(self, i: int, b: Node) -> Node:
        k = self.rtype.pairing(i, self.wt[b])
        arrows = self.f if k >= 0 else self.e
        for _ in range(abs(k)):
            b = arrows[(i, b)]
        return b

    def is_i_extremal(self, i: int, b: Node) -> bool:
        return (i, b) not in self.e or (i, b) not in self.f

    def weyl_orbit(self, b: Node) -> list[Node]:
        seen = {b: None}
        todo = deque([b])
        while todo:
            x = todo.popleft()
            for i in self.rtype.index_set:
                y = self.weyl_action(i, x)
                if y not in seen:
                    seen[y] = None
                    todo.append(y)
        return list(seen)

    def is_extremal(self, b: Node) -> bool:
        if b in self._extremal:
            return self._extremal[b]
        orbit = self.weyl_orbit(b)
        ok = all(self.is_i_extremal(i, x) for x in orbit for i in self.rtype.index_set)
        for x in orbit:
            self._extremal[x] = ok
        return ok

    def cascade_closure(self, b: Node) -> list[Node]:
        """All nodes reachable from b by maximal raising e_i^max, ascending i."""
        seen = {b: None}
        todo = deque([b])
        while todo:
            x = todo.popleft()
            for i in self.rtype.index_set:
                y = self.e_max(i, x)
                if y not in seen:
                    seen[y] = None
                    todo.append(y)
        return list(seen)

    def extremalize(self, b: Node) -> Node:
        t = self.rtype
        best = max(self.cascade_closure(b),
                   key=lambda x: t.inner(self.wt[x], self.wt[x]))
        best_norm = t.inner(self.wt[best], self.wt[best])
        # first node (discovery order) of maximal norm
        for x in self.cascade_closure(b):
            if t.inner(self.wt[x], self.wt[x]) == best_norm:
                best = x
                break
        if not self.is_extremal(best):
            raise CrystalError("extremalization did not reach an extremal node")
        return best

    # global properties ---------------------------------------------------------
    def connectedness(self) -> bool:
        if not self.nodes:
            return True
        adj: dict[Node, list[Node]] = {b: [] for b in self.nodes}
        for (_, b1), b2 in self.f.items():
            adj[b1].append(b2)
            adj[b2].append(b1)
        seen = {self.nodes[0]}
        todo = [self.nodes[0]]
        while todo:
            for y in adj[todo.pop()]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == len(self.nodes)

    def regularity_problems(self) -> list[str]:
        """Rank <= 2 regularity: each J-component has one highest node and the
        Weyl dimension of its weight."""
        problems = self.check_axioms()
        if problems:
            return problems
        t = self.rtype
        idx = t.index_set
        subsets = [(i,) for i in idx] + [
            J for J in itertools.combinations(idx, 2) if len(J) < len(idx)
        ]
        for J in subsets:
            for comp in self._components(J):
                tops = [b for b in comp if all((j, b) not in self.e for j in J)]
                if len(tops) != 1:
                    problems.append(f"J={J}: {len(tops)} highest nodes in a component")
                    continue
                lam = [t.pairing(j, self.wt[tops[0]]) for j in J]
                if len(comp) != weyl_dimension(t, J, lam):
                    problems.append(f"J={J}: component of {self.label(tops[0])} has wrong size")
        return problems

    def is_regular(self) -> bool:
        return not self.regularity_problems()

    def _components(self, J: tuple[int, ...]) -> list[list[Node]]:
        seen: set[Node] = set()
        comps = []
        for b in self.nodes:
            if b in seen:
                continue
            comp, todo = [b], [b]
            seen.add(b)
            while todo:
                x = todo.pop()
                for j in J:
                    for y in (self.f.get((j, x)), self.e.get((j, x))):
                        if y is not None and y not in seen:
                            seen.add(y)
                            comp.append(y)
                            todo.append(y)
            comps.append(comp)
        return comps

    def is_simple(self) -> bool:
        if not self.is_regular():
            return False
        t = self.rtype
        weights = [self.wt[b] for b in self.nodes]
        extremal_weights = {self.wt[b] for b in self.nodes if self.is_extremal(b)}
        candidates = sorted({w for w in weights if t.is_dominant(w)},
                            key=lambda w: (-t.inner(w, w), w))
        for lam in candidates:
            if sum(1 for w in weights if w == lam) != 1:
                continue
            orbit = t.classical_orbit(lam)
            if not extremal_weights <= orbit:
                continue
            if all(t.in_convex_hull(w, lam) for w in set(weights)):
                return True
        return False

    # exports --------------------------------------------------------------------
    def to_dot(self) -> str:
        lines = [f'digraph "{self.name or "crystal"}" {{']
        for b in self.nodes:
            lines.append(f'  n{self.index[b]} [label="{self.label(b)}"];')
        for b in self.nodes:
            for i in self.rtype.index_set:
                c = self.f.get((i, b))
                if c is not None:
                    lines.append(f'  n{self.index[b]} -> n{self.index[c]} [label="{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "family": self.rtype.family,
            "n": self.rtype.n,
            "name": self.name,
            "nodes": [
                {"label": self.label(b), "weight": list(self.wt[b])} for b in self.nodes
            ],
            "arrows": [
                {"i": i, "from": self.label(b), "to": self.label(self.f[(i, b)])}
                for b in self.nodes for i in self.rtype.index_set if (i, b) in self.f
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False, sort_keys=True)


# --------------------------------------------------------------------------
# constructions

def tensor(b1: CrystalGraph, b2: CrystalGraph, convention: str = KASHIWARA) -> CrystalGraph:
    if b1.rtype != b2.rtype:
        raise CrystalError("type mismatch")
    t = b1.rtype
    nodes = [(x, y) for x in b1.nodes for y in b2.nodes]
    wt = {(x, y): t.add(b1.wt[x], b2.wt[y]) for x, y in nodes}
    f = {}
    for x, y in nodes:
        for i in t.index_set:
            if convention == KASHIWARA:
                first = b1.phi(i, x) > b2.eps(i, y)
            elif convention == MIRRORED:
                first = not (b2.phi(i, y) > b1.eps(i, x))
            else:
                raise CrystalError(f"unknown convention {convention}")
            if first:
                nx = b1.f_op(i, x)
                if nx is not None:
                    f[(i, (x, y))] = (nx, y)
            else:
                ny = b2.f_op(i, y)
                if ny is not None:
                    f[(i, (x, y))] = (x, ny)
    label = lambda p: f"{b1.label(p[0])}⊗{b2.label(p[1])}"
    return CrystalGraph(t, nodes, wt, f, label, f"{b1.name}⊗{b2.name}")


def disjoint_union(b1: CrystalGraph, b2: CrystalGraph) -> CrystalGraph:
    nodes = [(0, x) for x in b1.nodes] + [(1, y) for y in b2.nodes]
    wt = {(0, x): b1.wt[x] for x in b1.nodes} | {(1, y): b2.wt[y] for y in b2.nodes}
    f = {(i, (0, x)): (0, y) for (i, x), y in b1.f.items()}
    f |= {(i, (1, x)): (1, y) for (i, x), y in b2.f.items()}
    label = lambda p: f"{p[0]}:{(b1, b2)[p[0]].label(p[1])}"
    return CrystalGraph(b1.rtype, nodes, wt, f, label, f"{b1.name}+{b2.name}")


def delete_arrow(b: CrystalGraph, i: int, node: Node) -> CrystalGraph:
    f = dict(b.f)
    del f[(i, node)]
    return CrystalGraph(b.rtype, b.nodes, b.wt, f, b.label, b.name + "-broken")


# --------------------------------------------------------------------------
# weights

def weyl_dimension(t: AffineType, J: tuple[int, ...], lam: list[int]) -> int:
    """Dimension of the irreducible U_q(g_J)-module of highest weight lam."""
    if any(x < 0 for x in lam):
        return 0
    m = len(J)
    a = [[t.cartan(J[r], J[c]) for c in range(m)] for r in range(m)]
    half = [Fraction(t.root_norm(j), 2) for j in J]
    simple = [tuple(1 if r == c else 0 for c in range(m)) for r in range(m)]
    roots = set(simple)
    todo = list(simple)
    while todo:
        beta = todo.pop()
        for k in range(m):
            pair = sum(beta[j] * a[k][j] for j in range(m))
            gamma = tuple(beta[j] - (pair if j == k else 0) for j in range(m))
            if all(x >= 0 for x in gamma) and any(gamma) and gamma not in roots:
                roots.add(gamma)
                todo.append(gamma)
            if len(roots) > 64:
                raise CrystalError(f"subsystem {J} is not of finite type")
    num = Fraction(1)
    for beta in roots:
        top = sum(beta[j] * (lam[j] + 1) * half[j] for j in range(m))
        bottom = sum(beta[j] * half[j] for j in range(m))
        num *= Fraction(top) / bottom
    if num.denominator != 1:
        raise CrystalError("non-integral Weyl dimension")
    return int(num)


def same_chamber(t: AffineType, lam: Weight, mu: Weight) -> bool:
    """Some w in W_cl makes both w(lam) and w(mu) dominant."""
    start = (tuple(lam), tuple(mu))
    seen = {start}
    todo = [start]
    while todo:
        x, y = todo.pop()
        if t.is_dominant(x) and t.is_dominant(y):
            return True
        for i in t.classical:
            nxt = (t.reflect(i, x), t.reflect(i, y))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


def raising_word(t: AffineType, lam: Weight, mu: Weight) -> list[int]:
    """Word i_1..i_N with mu = s_{i_N}...s_{i_1} lam and every pairing
    <h_{i_k}, s_{i_{k-1}}...s_{i_1} lam> positive; shortest such word."""
    lam, mu = tuple(lam), tuple(mu)
    if t.dominant_rep(lam) != t.dominant_rep(mu):
        raise CrystalError("not in same orbit")
    parent: dict[Weight, tuple[Weight, int] | None] = {lam: None}
    todo = deque([lam])
    while todo:
        x = todo.popleft()
        if x == mu:
            break
        for i in t.index_set:
            if t.pairing(i, x) > 0:
                y = t.reflect(i, x)
                if y not in parent:
                    parent[y] = (x, i)
                    todo.append(y)
    if mu not in parent:
        raise CrystalError("no positive word found")
    word = []
    x = mu
    while parent[x] is not None:
        x, i = parent[x]
        word.append(i)
    word.reverse()
    return word


def replay_word(t: AffineType, lam: Weight, word: list[int]) -> tuple[Weight, bool]:
    """Apply the reflections; report the end weight and whether all pairings were positive."""
    ok = True
    for i in word:
        if t.pairing(i, lam) <= 0:
            ok = False
        lam = t.reflect(i, lam)
    return lam, ok
