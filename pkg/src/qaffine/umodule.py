"""Finite-dimensional U'_q(g)-modules given by generator matrices.

Generators e_i, f_i are z-graded sparse matrices over Q(s): a module twisted by a
formal spectral parameter carries z-degrees on e_0 (+) and f_0 (-).  The t_i act
diagonally through the weights.  The coproduct is

    Delta(e_i) = e_i (x) t_i^-1 + 1 (x) e_i,    Delta(f_i) = f_i (x) 1 + t_i (x) f_i.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .linalg import (
    Echelon,
    SMat,
    Vec,
    inverse,
    kron,
    nullspace,
    nullspace_ff,
    vadd,
    vscale,
)
from .rootdata import AffineType, Weight
from .scalars import ONE, ZERO, BiRat, RatFunc, qfactorial, s_pow


class ModuleError(ValueError):
    pass


# --------------------------------------------------------------------------
# z-graded matrices

class ZMat:
    """sum_d z^d * parts[d] with parts sparse matrices over Q(s)."""

    __slots__ = ("nrows", "ncols", "parts")

    def __init__(self, nrows: int, ncols: int, parts: dict[int, SMat] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.parts = {d: m for d, m in (parts or {}).items() if not m.is_zero()}

    @classmethod
    def const(cls, m: SMat) -> "ZMat":
        return cls(m.nrows, m.ncols, {0: m})

    def is_zero(self) -> bool:
        return not self.parts

    def is_constant(self) -> bool:
        return all(d == 0 for d in self.parts)

    def part(self, d: int = 0) -> SMat:
        return self.parts.get(d, SMat(self.nrows, self.ncols))

    def __matmul__(self, other: "ZMat") -> "ZMat":
        out: dict[int, SMat] = {}
        for d1, a in self.parts.items():
            for d2, b in other.parts.items():
                p = a @ b
                out[d1 + d2] = out[d1 + d2] + p if d1 + d2 in out else p
        return ZMat(self.nrows, other.ncols, out)

    def __add__(self, other: "ZMat") -> "ZMat":
        out = dict(self.parts)
        for d, m in other.parts.items():
            out[d] = out[d] + m if d in out else m
        return ZMat(self.nrows, self.ncols, out)

    def __sub__(self, other: "ZMat") -> "ZMat":
        return self + other.scale(RatFunc.const(-1))

    def scale(self, c: RatFunc, shift: int = 0) -> "ZMat":
        return ZMat(self.nrows, self.ncols, {d + shift: m.scale(c) for d, m in self.parts.items()})

    def specialize(self, a: RatFunc) -> SMat:
        out = SMat(self.nrows, self.ncols)
        for d, m in self.parts.items():
            out = out + (m if d == 0 else m.scale(a ** d))
        return out

    def apply(self, v: Vec) -> dict[int, Vec]:
        out = {}
        for d, m in self.parts.items():
            w = m.apply(v)
            if w:
                out[d] = w
        return out

    def transpose(self) -> "ZMat":
        return ZMat(self.ncols, self.nrows, {d: m.transpose() for d, m in self.parts.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ZMat) and self.parts == other.parts


def zkron(a: ZMat, b: ZMat) -> ZMat:
    out: dict[int, SMat] = {}
    for d1, x in a.parts.items():
        for d2, y in b.parts.items():
            p = kron(x, y)
            out[d1 + d2] = out[d1 + d2] + p if d1 + d2 in out else p
    return ZMat(a.nrows * b.nrows, a.ncols * b.ncols, out)


# --------------------------------------------------------------------------
# modules

@dataclass(frozen=True, eq=False)
class UModule:
    rtype: AffineType
    labels: tuple[str, ...]
    weights: tuple[Weight, ...]
    E: tuple[ZMat, ...]
    F: tuple[ZMat, ...]
    name: str = ""
    factor_dims: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.labels)

    @cached_property
    def blocks(self) -> dict[Weight, list[int]]:
        out: dict[Weight, list[int]] = {}
        for k, w in enumerate(self.weights):
            out.setdefault(w, []).append(k)
        return out

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: k for k, lab in enumerate(self.labels)}

    def is_formal(self) -> bool:
        return not all(m.is_constant() for m in self.E + self.F)

    def t_exponent(self, i: int, k: int) -> int:
        """t_i acts on basis vector k by s^(this)."""
        return self.rtype.root_norm(i) * self.rtype.pairing(i, self.weights[k])

    def T(self, i: int, power: int = 1) -> SMat:
        return SMat.diagonal([s_pow(power * self.t_exponent(i, k)) for k in range(self.dim)])

    def unit(self, k: int) -> Vec:
        return {k: ONE}

    def weight_of(self, v: Vec) -> Weight:
        ws = {self.weights[k] for k in v}
        if len(ws) != 1:
            raise ModuleError("vector is not a weight vector")
        return ws.pop()

    def generators(self) -> list[tuple[str, int, ZMat]]:
        return [("E", i, m) for i, m in enumerate(self.E)] + [("F", i, m) for i, m in enumerate(self.F)]

    def to_json(self) -> dict:
        def dump(m: ZMat) -> dict:
            return {
                str(d): [[r, c, str(x)] for r, c, x in part.entries()]
                for d, part in sorted(m.parts.items())
            }

        return {
            "family": self.rtype.family,
            "n": self.rtype.n,
            "name": self.name,
            "labels": list(self.labels),
            "weights": [list(w) for w in self.weights],
            "E": {str(i): dump(m) for i, m in enumerate(self.E)},
            "F": {str(i): dump(m) for i, m in enumerate(self.F)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False, sort_keys=True)


def trivial_module(t: AffineType, label: str = "1") -> UModule:
    zero = ZMat(1, 1)
    k = len(t.index_set)
    return UModule(t, (label,), (t.zero(),), (zero,) * k, (zero,) * k, "trivial", (1,))


def from_crystal_transport(t: AffineType, labels, weights, e_arrows, f_arrows, name: str) -> UModule:
    """Module whose e_i, f_i move basis vectors along crystal arrows with coefficient 1."""
    dim = len(labels)
    E, F = [], []
    for i in t.index_set:
        E.append(ZMat.const(SMat.from_entries(dim, dim, [(b2, b1, ONE) for (j, b1), b2 in e_arrows.items() if j == i])))
        F.append(ZMat.const(SMat.from_entries(dim, dim, [(b2, b1, ONE) for (j, b1), b2 in f_arrows.items() if j == i])))
    return UModule(t, tuple(labels), tuple(weights), tuple(E), tuple(F), name, (dim,))


def twist(M: UModule, a: RatFunc | int = 1, zdeg: int = 0) -> UModule:
    """psi(a z^zdeg): e_0 -> a z^zdeg e_0, f_0 -> a^-1 z^-zdeg f_0."""
    a = RatFunc.coerce(a)
    if a.is_zero():
        raise ModuleError("zero twist parameter")
    E = list(M.E)
    F = list(M.F)
    E[0] = E[0].scale(a, zdeg)
    F[0] = F[0].scale(a.inverse(), -zdeg)
    tag = f"{M.name}_[{a}]" + (f"z^{zdeg}" if zdeg else "")
    return UModule(M.rtype, M.labels, M.weights, tuple(E), tuple(F), tag, M.factor_dims)


def specialize(M: UModule, a: RatFunc) -> UModule:
    """Replace the formal z by a."""
    E = tuple(ZMat.const(m.specialize(a)) for m in M.E)
    F = tuple(ZMat.const(m.specialize(a)) for m in M.F)
    return UModule(M.rtype, M.labels, M.weights, E, F, f"{M.name}|z={a}", M.factor_dims)


def tensor(M: UModule, N: UModule) -> UModule:
    if M.rtype != N.rtype:
        raise ModuleError("type mismatch")
    t = M.rtype
    idM = ZMat.const(SMat.identity(M.dim, ONE))
    idN = ZMat.const(SMat.identity(N.dim, ONE))
    E, F = [], []
    for i in t.index_set:
        tinvN = ZMat.const(N.T(i, -1))
        tM = ZMat.const(M.T(i, 1))
        E.append(zkron(M.E[i], tinvN) + zkron(idM, N.E[i]))
        F.append(zkron(M.F[i], idN) + zkron(tM, N.F[i]))
    labels = tuple(f"{a}⊗{b}" for a in M.labels for b in N.labels)
    weights = tuple(t.add(a, b) for a in M.weights for b in N.weights)
    return UModule(t, labels, weights, tuple(E), tuple(F), f"{M.name}⊗{N.name}",
                   M.factor_dims + N.factor_dims)


def tensor_all(mods: list[UModule]) -> UModule:
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


# --------------------------------------------------------------------------
# relations

def _divided_power(X: ZMat, k: int, e: int, cache: dict) -> ZMat:
    if (id(X), k) in cache:
        return cache[(id(X), k)]
    n = X.nrows
    out = ZMat.const(SMat.identity(n, ONE))
    for _ in range(k):
        out = out @ X
    out = out.scale(qfactorial(k, e).inverse())
    cache[(id(X), k)] = out
    return out


def check_relations(M: UModule) -> list[str]:
    """Evaluate the defining relations as exact matrix identities; return failures."""
    t = M.rtype
    fails = []
    for k, w in enumerate(M.weights):
        if sum(c * t.pairing(i, w) for i, c in zip(t.index_set, t.comarks)) != 0:
            fails.append(f"level: basis {M.labels[k]} has nonzero level")
    for name, i, X in M.generators():
        shift = t.alpha(i)
        sign = 1 if name == "E" else -1
        for part in X.parts.values():
            for r, c, _ in part.entries():
                if M.weights[r] != t.add(M.weights[c], shift, sign):
                    fails.append(f"weight: {name}_{i} entry ({r},{c})")
                    break
    for i in t.index_set:
        e = t.root_norm(i)
        qi = s_pow(e)
        cartan = (M.T(i, 1) - M.T(i, -1)).scale((qi - qi.inverse()).inverse())
        for j in t.index_set:
            comm = M.E[i] @ M.F[j] - M.F[j] @ M.E[i]
            target = ZMat.const(cartan) if i == j else ZMat(M.dim, M.dim)
            if comm != target:
                fails.append(f"commutator [E_{i},F_{j}]")
    cache: dict = {}
    for i in t.index_set:
        e = t.root_norm(i)
        for j in t.index_set:
            if i == j:
                continue
            b = 1 - t.cartan(i, j)
            for name, gens in (("E", M.E), ("F", M.F)):
                acc = ZMat(M.dim, M.dim)
                for k in range(b + 1):
                    term = _divided_power(gens[i], k, e, cache) @ gens[j] @ _divided_power(gens[i], b - k, e, cache)
                    acc = acc + (term if k % 2 == 0 else term.scale(RatFunc.const(-1)))
                if not acc.is_zero():
                    fails.append(f"Serre {name}_{i},{name}_{j}")
    return fails


def check_intertwiner(phi: SMat, S: UModule, T: UModule) -> list[str]:
    """phi: S -> T commutes with every generator (both modules specialized)."""
    fails = []
    P = ZMat.const(phi)
    for (name, i, X), (_, _, Y) in zip(S.generators(), T.generators()):
        if P @ X != Y @ P:
            fails.append(f"{name}_{i}")
    for k in range(S.dim):
        for r in phi.cols.get(k, {}):
            if T.weights[r] != S.weights[k]:
                fails.append("weight")
                return fails
    return fails


# --------------------------------------------------------------------------
# closures and highest vectors

def _split_by_weight(weights, v: Vec) -> dict[Weight, Vec]:
    out: dict[Weight, Vec] = {}
    for k, x in v.items():
        out.setdefault(weights[k], {})[k] = x
    return out


def closure(M: UModule, start: list[Vec], transpose: bool = False) -> dict[Weight, Echelon]:
    """Span of start under all e_i, f_i (or their transposes), weight block by block."""
    if M.is_formal():
        raise ModuleError("closure needs specialized spectral parameters")
    gens = [X.part(0) for _, _, X in M.generators()]
    if transpose:
        gens = [g.transpose() for g in gens]
    ech: dict[Weight, Echelon] = {}
    queue: deque[Vec] = deque()

    def push(v: Vec) -> None:
        for w, comp in _split_by_weight(M.weights, v).items():
            e = ech.setdefault(w, Echelon())
            before = len(e)
            if e.add(comp) and len(e) > before:
                queue.append(comp)

    for v in start:
        push(v)
    while queue:
        v = queue.popleft()
        for g in gens:
            w = g.apply(v)
            if w:
                push(w)
    return ech


def closure_dim(ech: dict[Weight, Echelon]) -> int:
    return sum(len(e) for e in ech.values())


def generated_submodule(M: UModule, v: Vec) -> list[Vec]:
    ech = closure(M, [v])
    return [row for w in sorted(ech) for row in ech[w].basis()]


def is_cyclic(M: UModule, v: Vec) -> bool:
    return closure_dim(closure(M, [v])) == M.dim


def is_cocyclic(M: UModule, k: int) -> bool:
    """Every nonzero submodule contains basis vector k (k spans its weight space)."""
    if len(M.blocks[M.weights[k]]) != 1:
        raise ModuleError("cocyclicity test needs a one-dimensional weight space")
    return closure_dim(closure(M, [{k: ONE}], transpose=True)) == M.dim


def classical_hw_vectors(M: UModule, lam: Weight) -> list[Vec]:
    """Basis of {v in M_lam : e_i v = 0 for classical i}."""
    idx = M.blocks.get(tuple(lam), [])
    if not idx:
        return []
    pos = {k: j for j, k in enumerate(idx)}
    rows: dict[tuple[int, int], Vec] = {}
    for i in M.rtype.classical:
        X = M.E[i]
        if not X.is_constant():
            raise ModuleError("classical generators must be z-free")
        part = X.part(0)
        for k in idx:
            for r, x in part.cols.get(k, {}).items():
                rows.setdefault((i, r), {})[pos[k]] = x
    sols = nullspace(list(rows.values()), len(idx))
    return [{idx[j]: x for j, x in v.items()} for v in sols]


def dominant_extremal_module_vectors(M: UModule) -> list[tuple[Weight, list[Vec]]]:
    """For each dominant weight lam, the vectors of M_lam whose generated submodule
    has weights only in lam - Q_+."""
    t = M.rtype
    out = []
    for lam in sorted(w for w in M.blocks if t.is_dominant(w)):
        bad = [k for k, w in enumerate(M.weights) if not t.below(w, lam)]
        idx = M.blocks[lam]
        if bad:
            ech = closure(M, [{k: ONE} for k in bad], transpose=True)
            rows = ech[lam].basis() if lam in ech else []
        else:
            rows = []
        pos = {k: j for j, k in enumerate(idx)}
        sols = nullspace([{pos[k]: x for k, x in r.items()} for r in rows], len(idx))
        if sols:
            out.append((lam, [{idx[j]: x for j, x in v.items()} for v in sols]))
    return out


def apply_word(M: UModule, word: tuple[int, ...], v: Vec) -> Vec:
    """F_{word[0]} ... F_{word[-1]} v for classical indices."""
    for i in reversed(word):
        v = M.F[i].part(0).apply(v)
    return v


# --------------------------------------------------------------------------
# classical decomposition

@dataclass
class Component:
    weight: Weight
    hw: Vec
    lowest_word: tuple[int, ...]
    lowest: Vec


@dataclass
class Decomposition:
    """Basis of M adapted to its classical isotypic decomposition."""

    module: UModule
    components: list[Component]
    columns: dict[Weight, list[tuple[int, tuple[int, ...]]]]   # (component, word)
    vectors: dict[tuple[int, tuple[int, ...]], Vec]
    pinv: dict[Weight, SMat]                                    # local coords -> column coords

    def coordinates(self, v: Vec) -> dict[tuple[int, tuple[int, ...]], RatFunc]:
        """Coefficients of a weight vector on the adapted basis."""
        out: dict[tuple[int, tuple[int, ...]], RatFunc] = {}
        M = self.module
        for w, comp in _split_by_weight(M.weights, v).items():
            idx = M.blocks[w]
            pos = {k: j for j, k in enumerate(idx)}
            local = {pos[k]: x for k, x in comp.items()}
            coords = self.pinv[w].apply(local)
            cols = self.columns[w]
            for j, x in coords.items():
                out[cols[j]] = x
        return out


def classical_decomposition(M: UModule) -> Decomposition:
    t = M.rtype
    for i in t.classical:
        if not (M.E[i].is_constant() and M.F[i].is_constant()):
            raise ModuleError("classical generators must be z-free")
    Fc = {i: M.F[i].part(0) for i in t.classical}
    comps: list[Component] = []
    columns: dict[Weight, list[tuple[int, tuple[int, ...]]]] = {}
    vectors: dict[tuple[int, tuple[int, ...]], Vec] = {}
    doms = sorted((w for w in M.blocks if t.is_dominant(w)), key=lambda w: (-t.inner(w, w), w))
    for lam in doms:
        for h in classical_hw_vectors(M, lam):
            c = len(comps)
            ech: dict[Weight, Echelon] = {lam: Echelon()}
            ech[lam].add(h)
            level = [((), h)]
            found = [((), h)]
            while level:
                nxt = []
                for word, v in level:
                    for i in t.classical:
                        u = Fc[i].apply(v)
                        if not u:
                            continue
                        w = M.weights[next(iter(u))]
                        e = ech.setdefault(w, Echelon())
                        if e.add(u):
                            nxt.append(((i,) + word, u))
                found.extend(nxt)
                last = level
                level = nxt
            if len(last) != 1:
                raise ModuleError("component lowest weight space is not a line")
            comps.append(Component(lam, h, last[0][0], last[0][1]))
            for word, v in found:
                w = M.weights[next(iter(v))]
                columns.setdefault(w, []).append((c, word))
                vectors[(c, word)] = v
    pinv = {}
    for w, idx in M.blocks.items():
        cols = columns.get(w, [])
        if len(cols) != len(idx):
            raise ModuleError(f"weight {w}: {len(cols)} adapted vectors for dimension {len(idx)}")
        pos = {k: j for j, k in enumerate(idx)}
        P = SMat(len(idx), len(idx), {
            j: {pos[k]: x for k, x in vectors[col].items()} for j, col in enumerate(cols)
        })
        pinv[w] = inverse(P)
    return Decomposition(M, comps, columns, vectors, pinv)


# --------------------------------------------------------------------------
# intertwiners

@dataclass
class HomSpace:
    """Intertwiners S -> T parametrized by their values on classical highest vectors."""

    S: UModule
    T: UModule
    dS: Decomposition
    dT: Decomposition
    unknowns: list[tuple[int, int]]                         # (S component, T component)
    rows: list[dict[int, dict[int, RatFunc]]]               # unknown -> {zdeg: coeff}
    _images: dict = field(default_factory=dict)

    @property
    def formal(self) -> bool:
        return any(d != 0 for row in self.rows for g in row.values() for d in g)

    def image(self, word: tuple[int, ...], c2: int) -> Vec:
        key = (word, c2)
        if key not in self._images:
            self._images[key] = apply_word(self.T, word, self.dT.components[c2].hw)
        return self._images[key]

    def solve(self) -> list[dict[int, object]]:
        """Basis of solutions over Q(s) (constant twists) or Q(z, s) (formal twist)."""
        n = len(self.unknowns)
        if self.formal:
            z = BiRat.var("z")
            rows = []
            for row in self.rows:
                r = {}
                for u, graded in row.items():
                    acc = BiRat.const(0)
                    for d, c in graded.items():
                        acc = acc + BiRat.from_ratfunc(c) * z ** d
                    if not acc.is_zero():
                        r[u] = acc
                if r:
                    rows.append(r)
            return nullspace_ff(rows, n)
        rows = []
        for row in self.rows:
            r = {u: g[0] for u, g in row.items() if 0 in g and not g[0].is_zero()}
            if r:
                rows.append(r)
        return nullspace(rows, n)

    def solve_at(self, a: RatFunc) -> list[dict[int, RatFunc]]:
        """Solutions after substituting z = a."""
        rows = []
        for row in self.rows:
            r = {}
            for u, graded in row.items():
                acc = ZERO
                for d, c in graded.items():
                    acc = acc + c * a ** d
                if not acc.is_zero():
                    r[u] = acc
            if r:
                rows.append(r)
        return nullspace(rows, len(self.unknowns))

    def block(self, sol: dict[int, object], lam: Weight) -> dict[tuple[int, int], object]:
        return {
            (c1, c2): sol[u] for u, (c1, c2) in enumerate(self.unknowns)
            if u in sol and self.dS.components[c1].weight == lam
        }

    def apply(self, sol: dict[int, object], v: Vec, scalar=None) -> Vec:
        """Image of v (RatFunc entries) under the intertwiner with coefficients sol."""
        by_comp: dict[int, list[tuple[int, object]]] = {}
        for u, (c1, c2) in enumerate(self.unknowns):
            if u in sol:
                by_comp.setdefault(c1, []).append((c2, sol[u]))
        out: Vec = {}
        lift = scalar or (lambda x: x)
        for (c1, word), x in self.dS.coordinates(v).items():
            for c2, coef in by_comp.get(c1, []):
                img = self.image(word, c2)
                out = vadd(out, {k: lift(y) for k, y in img.items()}, coef * lift(x))
        return out

    def matrix(self, sol: dict[int, object], scalar=None) -> SMat:
        cols = {}
        for k in range(self.S.dim):
            col = self.apply(sol, {k: ONE}, scalar)
            if col:
                cols[k] = col
        return SMat(self.T.dim, self.S.dim, cols)


def hom_space(S: UModule, T: UModule, dS: Decomposition | None = None,
              dT: Decomposition | None = None) -> HomSpace:
    """Set up the linear system for intertwiners S -> T.

    Classical intertwiners are determined by the images of classical highest
    vectors; commutation with e_0 is imposed on highest vectors and with f_0 on
    lowest vectors, which suffices because the defects commute with the classical
    f_i (resp. e_i).
    """
    if S.rtype != T.rtype:
        raise ModuleError("type mismatch")
    dS = dS or classical_decomposition(S)
    dT = dT or classical_decomposition(T)
    unknowns = [
        (c1, c2)
        for c1, a in enumerate(dS.components)
        for c2, b in enumerate(dT.components)
        if a.weight == b.weight
    ]
    uindex = {p: u for u, p in enumerate(unknowns)}
    by_s: dict[int, list[int]] = {}
    for (c1, c2) in unknowns:
        by_s.setdefault(c1, []).append(c2)
    H = HomSpace(S, T, dS, dT, unknowns, [])
    eqs: dict[tuple, dict[int, dict[int, RatFunc]]] = {}

    def add(key, u, d, x):
        row = eqs.setdefault(key, {})
        g = row.setdefault(u, {})
        g[d] = g.get(d, ZERO) + x

    for c1, comp in enumerate(dS.components):
        for gen, vec, word in ((S.E[0], comp.hw, ()), (S.F[0], comp.lowest, comp.lowest_word)):
            tgen = T.E[0] if gen is S.E[0] else T.F[0]
            tag = "E" if gen is S.E[0] else "F"
            # R(X v)
            for d, w in gen.apply(vec).items():
                for (c2s, wd), x in dS.coordinates(w).items():
                    for c2 in by_s.get(c2s, []):
                        u = uindex[(c2s, c2)]
                        for r, y in H.image(wd, c2).items():
                            add((tag, c1, r), u, d, x * y)
            # X R(v)
            for c2 in by_s.get(c1, []):
                u = uindex[(c1, c2)]
                for d, w in tgen.apply(H.image(word, c2)).items():
                    for r, y in w.items():
                        add((tag, c1, r), u, d, -y)
    for key in sorted(eqs, key=lambda k: (k[0], k[1], k[2])):
        row = {u: {d: x for d, x in g.items() if not x.is_zero()} for u, g in eqs[key].items()}
        row = {u: g for u, g in row.items() if g}
        if row:
            H.rows.append(row)
    return H


def solve_intertwiner(S: UModule, T: UModule, anchor: tuple[int, int] | None = None) -> SMat:
    """The unique (up to scalar) intertwiner S -> T between specialized modules,
    normalized so that the anchor entry (target row, source column) is 1."""
    H = hom_space(S, T)
    sols = H.solve()
    if len(sols) != 1:
        raise ModuleError(f"hom space dimension {len(sols)} != 1")
    m = H.matrix(sols[0])
    if anchor is not None:
        r, c = anchor
        x = m.get(r, c)
        if x is None:
            raise ModuleError("normalization entry vanishes")
        m = m.scale(x.inverse())
    return m


# --------------------------------------------------------------------------
# duality

@dataclass
class DualityResult:
    index: int
    partner: int
    trace_twists: list[RatFunc]
    coev_twists: list[RatFunc]
    scan: list[tuple[int, int, int]]          # (partner, sign, exponent) with nonzero trace
    trace: SMat | None = None
    coev: SMat | None = None
    zigzag: RatFunc | None = None


def duality_solve(modules: dict[int, UModule], i: int, max_exp: int | None = None) -> DualityResult:
    """Scan twists +-s^m for intertwiners V_i (x) (V_j)_a -> k and k -> (V_j)_a (x) V_i."""
    V = modules[i]
    t = V.rtype
    max_exp = max_exp if max_exp is not None else 4 * t.n + 8
    triv = trivial_module(t)
    dtriv = classical_decomposition(triv)
    scan = []
    trace_tw: dict[int, list[RatFunc]] = {}
    coev_tw: dict[int, list[RatFunc]] = {}
    for j in t.classical:
        W = modules[j]
        Hs = hom_space(tensor(V, twist(W, 1, 1)), triv, dT=dtriv)
        Hc = hom_space(triv, tensor(twist(W, 1, 1), V), dS=dtriv)
        if not Hs.unknowns:
            continue
        for m in range(-max_exp, max_exp + 1):
            for sign in (1, -1):
                a = RatFunc.monomial(m, sign)
                if Hs.solve_at(a):
                    scan.append((j, sign, m))
                    trace_tw.setdefault(j, []).append(a)
                if Hc.solve_at(a):
                    coev_tw.setdefault(j, []).append(a)
    if not trace_tw:
        raise ModuleError("no duality twist found in scan range")
    partner = min(trace_tw)
    res = DualityResult(i, partner, trace_tw[partner], coev_tw.get(partner, []), scan)
    if len(res.trace_twists) == 1 and len(res.coev_twists) == 1:
        W = modules[partner]
        a = res.trace_twists[0]
        tr = solve_intertwiner(tensor(V, twist(W, a)), triv)
        b = res.coev_twists[0]
        co = solve_intertwiner(triv, tensor(twist(W, b), V))
        res.trace, res.coev = tr, co
        if a == b:
            res.zigzag = zigzag_scalar(tr, co, V.dim, W.dim)
    return res


def zigzag_scalar(tr: SMat, co: SMat, dv: int, dw: int) -> RatFunc:
    """(tr (x) id)(id (x) coev) applied to the first basis vector of V."""
    coev = co.cols[0]                      # sum c_{ab} a (x) b, a in W, b in V
    out: Vec = {}
    for key, c in coev.items():
        a, b = divmod(key, dv)
        x = tr.get(0, 0 * dw + a)          # tr(v_0 (x) w_a), flattened index 0*dw + a
        if x is not None:
            out = vadd(out, {b: c * x})
    if set(out) - {0}:
        raise ModuleError("zigzag map is not scalar on the first basis vector")
    return out.get(0, ZERO)


# --------------------------------------------------------------------------
# lower crystal operators at q_i -> 0

def _decompose_sl2(M: UModule, i: int, v: Vec, cache: dict) -> dict[int, Vec]:
    """v = sum_n f_i^(n) u_n with e_i u_n = 0 (v a weight vector)."""
    if not v:
        return {}
    key = tuple(sorted((k, str(x)) for k, x in v.items()))
    if key in cache:
        return cache[key]
    t = M.rtype
    e = t.root_norm(i)
    E = M.E[i].part(0)
    F = M.F[i].part(0)
    lam = t.pairing(i, M.weight_of(v))
    c = E.apply(v)
    if not c:
        cache[key] = {0: v}
        return cache[key]
    dec_c = _decompose_sl2(M, i, c, cache)
    out: dict[int, Vec] = {}
    rest = dict(v)
    for m, w in dec_c.items():
        n = m + 1
        from .scalars import qint
        u = vscale(w, qint(lam + n + 1, e).inverse())
        out[n] = u
        rest = vadd(rest, _fdiv(F, u, n, e), RatFunc.const(-1))
    if rest:
        out[0] = rest
    cache[key] = out
    return out


def _fdiv(F: SMat, u: Vec, n: int, e: int) -> Vec:
    for _ in range(n):
        u = F.apply(u)
    return vscale(u, qfactorial(n, e).inverse()) if u else u


def lower_kashiwara(M: UModule, i: int, v: Vec) -> tuple[Vec, Vec]:
    """(e~_i v, f~_i v) for the lower crystal operators of a weight vector v."""
    dec = _decompose_sl2(M, i, v, {})
    F = M.F[i].part(0)
    e = M.rtype.root_norm(i)
    ev: Vec = {}
    fv: Vec = {}
    for n, u in dec.items():
        fv = vadd(fv, _fdiv(F, u, n + 1, e))
        if n >= 1:
            ev = vadd(ev, _fdiv(F, u, n - 1, e))
    return ev, fv


def nilpotent_string_lengths(M: UModule, i: int) -> list[int]:
    """Sorted lengths of the Jordan strings of e_i (via ranks of powers)."""
    from .linalg import Echelon as _E

    E = M.E[i].specialize(ONE)
    ranks = [M.dim]
    P = SMat.identity(M.dim, ONE)
    while ranks[-1] > 0:
        P = E @ P
        ech = _E()
        for col in P.cols.values():
            ech.add(col)
        ranks.append(len(ech))
    # number of strings of length >= k is ranks[k-1] - ranks[k]
    counts = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    lengths = []
    for k in range(1, len(counts) + 1):
        exact = counts[k - 1] - (counts[k] if k < len(counts) else 0)
        lengths += [k] * exact
    return sorted(lengths)


# --------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True, eq=False)
class Morphism:
    """A linear map source -> target given by its matrix on the module bases."""

    matrix: SMat
    source: UModule
    target: UModule
    name: str = ""

    def __post_init__(self) -> None:
        if (self.matrix.nrows, self.matrix.ncols) != (self.target.dim, self.source.dim):
            raise ModuleError(f"{self.name}: matrix shape does not match the modules")

    def check(self) -> list[str]:
        return check_intertwiner(self.matrix, self.source, self.target)

    def is_intertwiner(self) -> bool:
        return not self.check()

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """self o other."""
        return Morphism(self.matrix @ other.matrix, other.source, self.target,
                        f"{self.name}∘{other.name}")

    def apply(self, v: Vec) -> Vec:
        return self.matrix.apply(v)

    def twisted(self, a: RatFunc | int) -> "Morphism":
        """The same matrix viewed between the a-twisted modules."""
        return Morphism(self.matrix, twist_tensor(self.source, a), twist_tensor(self.target, a),
                        f"({self.name})_{a}")


def identity_morphism(M: UModule) -> Morphism:
    return Morphism(SMat.identity(M.dim, ONE), M, M, "id")


def tensor_morphisms(f: Morphism, g: Morphism) -> Morphism:
    return Morphism(kron(f.matrix, g.matrix), tensor(f.source, g.source), tensor(f.target, g.target),
                    f"{f.name}⊗{g.name}")


def twist_tensor(M: UModule, a: RatFunc | int) -> UModule:
    """Twisting a tensor product twists every factor; this acts on e_0/f_0 of the
    assembled module exactly as twisting a single module does."""
    return twist(M, a)
