"""Verification drivers: cyclicity of tensor products, pole locations, the
filtration data proving cyclicity, explicit reducibility certificates, pole
tables and the self-test suite.

Every driver returns a JSON-ready dict with a boolean "pass" entry.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .fund_a import conj2_data_A
from .fund_c import (
    conj2_maps_C,
    module_C,
    p_i_C,
    solve_ip_C,
    trace_C,
)
from .linalg import SMat, kron, nullspace, vadd
from .rmatrix import (
    RMatrixError,
    closed_form_roots,
    compare_with_closed_form,
    component_ratios,
    explicit_R11_C,
    functional_checks,
    fundamental,
    inversion_check,
    matrix_diff,
    pole_reducibility,
    solve_R_fund,
    yang_baxter,
)
from .rootdata import AffineType
from .scalars import ONE, BiRat, RatFunc, neg_s_pow
from .umodule import (
    Morphism,
    check_relations,
    generated_submodule,
    is_cocyclic,
    tensor,
    tensor_all,
    twist,
)

#: Conventions fixed by the n = 3 type A computation; embedded in every report.
CONVENTIONS = {
    "tensor_rule": "Kashiwara: coproduct e -> e(x)t^-1 + 1(x)e, f -> f(x)1 + t(x)f",
    "ordering": (
        "a <= b iff a/b has no pole at q_s = 0; for monomials s^m this is "
        "exponent(a) >= exponent(b). Cyclic on u(x)...(x)u needs weakly decreasing exponents."
    ),
    "spectral_parameter": "R(z): V (x) W_z -> W_z (x) V with z = y/x; e_0 carries z",
}


class VerifyError(ValueError):
    pass


def index_range(t: AffineType) -> range:
    return range(1, t.n) if t.family == "A" else range(1, t.n + 1)


# --------------------------------------------------------------------------
# tensor products and the cyclicity statement

@dataclass(frozen=True)
class Factor:
    """V(varpi_index) twisted by sign * s^exponent."""

    index: int
    exponent: int = 0
    sign: int = 1

    @property
    def value(self) -> RatFunc:
        return RatFunc.monomial(self.exponent, self.sign)

    def label(self) -> str:
        return f"V{self.index}@{str(self.value)}"


@dataclass(frozen=True)
class TensorSpec:
    family: str
    n: int
    factors: tuple[Factor, ...] = field(default_factory=tuple)

    @property
    def rtype(self) -> AffineType:
        return AffineType(self.family, self.n)

    def module(self):
        t = self.rtype
        for f in self.factors:
            if f.index not in index_range(t):
                raise VerifyError(f"index {f.index} out of range")
        return tensor_all([twist(fundamental(t, f.index), f.value) for f in self.factors])

    def exponents(self) -> list[int]:
        return [f.exponent for f in self.factors]


def is_ordered(exps: list[int], cyclic: bool) -> bool:
    """a_1 <= ... <= a_N in the valuation order (cyclic) or the reverse (cocyclic)."""
    pairs = list(zip(exps, exps[1:]))
    return all(a >= b for a, b in pairs) if cyclic else all(a <= b for a, b in pairs)


def check_conj1(spec: TensorSpec, part: int = 1, enforce_order: bool = True) -> dict:
    """part 1: generated by u (x) ... (x) u; part 2: every nonzero submodule contains it."""
    if part not in (1, 2):
        raise VerifyError("part must be 1 or 2")
    if enforce_order and not is_ordered(spec.exponents(), cyclic=(part == 1)):
        raise VerifyError("precondition: ordering")
    M = spec.module()
    dim = len(generated_submodule(M, {0: ONE}))
    cyclic = dim == M.dim
    cocyclic = is_cocyclic(M, 0)
    verdict = cyclic if part == 1 else cocyclic
    return {
        "factors": [f.label() for f in spec.factors],
        "part": part,
        "dim": M.dim,
        "generated_dim": dim,
        "cyclic": cyclic,
        "cocyclic": cocyclic,
        "pass": verdict,
    }


def check_cor_pole(t: AffineType, i: int, j: int, a: RatFunc) -> dict:
    """No pole of R_ij at z = y/x = a when x <= y; reports both readings of the order."""
    R = solve_R_fund(t.family, t.n, i, j)
    val = a.valuation()
    pole = R.is_pole(a)
    # x <= y  <=>  x/y = 1/z has no pole at 0  <=>  val(z) <= 0
    predicted_no_pole = val <= 0
    return {
        "pair": [i, j],
        "a": str(a),
        "d(a)": str(_eval(R.denominator, a)),
        "pole": pole,
        "valuation_order_predicts_no_pole": predicted_no_pole,
        "reversed_order_predicts_no_pole": val >= 0,
        "pass": (not pole) if predicted_no_pole else True,
    }


def _eval(p: BiRat, a: RatFunc) -> RatFunc:
    return p.at_z(a)


# --------------------------------------------------------------------------
# filtration data

def _conj2_data(t: AffineType, i: int) -> list[dict]:
    return conj2_maps_C(t.n, i) if t.family == "C" else conj2_data_A(t.n, i)


def _lowest_index(t: AffineType, M, i: int) -> int:
    low = tuple(-x for x in t.fundamental(t.dual_index(i)))
    hits = [k for k, w in enumerate(M.weights) if tuple(w) == low]
    if len(hits) != 1:
        raise VerifyError("lowest weight line not found")
    return hits[0]


def _kernel(vectors: list[dict], images: list[dict], width: int) -> list[dict]:
    """Basis of {sum c_k vectors[k] : sum c_k images[k] = 0}."""
    rows: dict[int, dict[int, RatFunc]] = {}
    for k, img in enumerate(images):
        for r, x in img.items():
            rows.setdefault(r, {})[k] = x
    sols = nullspace(list(rows.values()), len(vectors))
    out = []
    for s in sols:
        v: dict = {}
        for k, c in s.items():
            v = vadd(v, vectors[k], c)
        out.append(v)
    return out


def check_conj2(t: AffineType, i: int) -> dict:
    """The filtration F_0 > F_1 > ... > F_N and its four defining conditions."""
    if i not in index_range(t):
        raise VerifyError("i out of range")
    V = fundamental(t, i)
    data = _conj2_data(t, i)
    low = _lowest_index(t, V, i)
    F = [{k: ONE} for k in range(V.dim) if k != low]
    dims = [len(F)]
    steps = []
    ok = True
    for d in data:
        phi: Morphism = d["phi"]
        W = d["W"]
        us = fundamental(t, d["s"]).dim
        cols = [phi.apply(_tensor_vec(v, {0: ONE}, us)) for v in F]
        in_w_line = all(r % W.dim == 0 for img in cols for r in img)
        cond3 = (d["s"], d["b"]) != (d["t"], d["c"])
        cond4 = (d["s"], d["b"]) != (d["W_index"], d["W_twist"])
        intertwiner = phi.is_intertwiner()
        in_m = d["b"] > 0 and d["c"] > 0
        F = _kernel(F, cols, phi.matrix.nrows)
        dims.append(len(F))
        step_ok = in_w_line and cond3 and cond4 and intertwiner and in_m
        ok = ok and step_ok
        steps.append({
            "mu": d["mu"], "s": d["s"], "t": d["t"],
            "b": f"(-s)^{d['b']}", "c": f"(-s)^{d['c']}",
            "W": f"V{d['W_index']}@(-s)^{d['W_twist']}",
            "intertwiner": intertwiner, "twists_in_m": in_m,
            "cond2_image_in_V(x)w": in_w_line, "cond3": cond3, "cond4": cond4,
        })
    final_is_hw = len(F) == 1 and set(F[0]) == {0}
    if t.family == "A":
        scale = {"b": "(-q)^e with q = s^2", "c": "(-q)^e"}
    else:
        scale = {"b": "(-s)^e", "c": "(-s)^e"}
    for st in steps:
        if t.family == "A":
            st["b"] = st["b"].replace("(-s)", "(-q)")
            st["c"] = st["c"].replace("(-s)", "(-q)")
    return {
        "family": t.family, "n": t.n, "i": i,
        "F_dims": dims,
        "cond1_F_N_is_highest_line": final_is_hw,
        "steps": steps,
        "twist_units": scale,
        "pass": ok and final_is_hw,
    }


def _tensor_vec(v: dict, w: dict, wdim: int) -> dict:
    out = {}
    for a, x in v.items():
        for b, y in w.items():
            out[a * wdim + b] = x * y
    return out


def highest_line_check(n: int, i: int) -> dict:
    """{v in V(varpi_i) : p_i(v (x) G(j)) = 0 for 1 <= j <= i} is the highest line (type C)."""
    p = p_i_C(n, i)
    V = module_C(n, i)
    V1 = module_C(n, 1)
    vecs = [{k: ONE} for k in range(V.dim)]
    idx = {lab: k for k, lab in enumerate(V1.labels)}
    images = []
    for v in vecs:
        img: dict = {}
        for j in range(1, i + 1):
            part = p.apply(_tensor_vec(v, {idx[f"({j})"]: ONE}, V1.dim))
            for r, x in part.items():
                img[(j - 1) * p.matrix.nrows + r] = x
        images.append(img)
    E = _kernel(vecs, images, 0)
    ok = len(E) == 1 and set(E[0]) == {0}
    return {"n": n, "i": i, "dim": len(E), "pass": ok}


# --------------------------------------------------------------------------
# reducibility certificates

def _kron_chain(*mats: SMat) -> SMat:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def _id(d: int) -> SMat:
    return SMat.identity(d, ONE)


def reducibility_witnesses_C(n: int, k: int, l: int, check_intertwiner: bool = True) -> dict:
    """For each root of d_kl (k >= l), a nonzero map out of V_k (x) V_l,a killing u (x) u."""
    if not (1 <= l <= k <= n):
        raise VerifyError("need 1 <= l <= k <= n")
    t = AffineType("C", n)
    Vk, Vl = module_C(n, k), module_C(n, l)
    items = []
    for i in range(1, min(n - k, l) + 1):
        e = k - l + 2 * i
        emb, _ = solve_ip_C(n, i, l - i)
        _, proj = solve_ip_C(n, k, i)
        dl = module_C(n, l - i).dim
        comp = _kron_chain(proj.matrix, _id(dl)) @ _kron_chain(_id(Vk.dim), emb.matrix)
        src = tensor(Vk, twist(Vl, neg_s_pow(e)))
        tgt = tensor(twist(module_C(n, k + i), neg_s_pow(i)), twist(module_C(n, l - i), neg_s_pow(k - l + i)))
        items.append(_certificate("first", i, e, comp, src, tgt, check_intertwiner))
    for i in range(1, l + 1):
        e = 2 * n + 2 - k - l + 2 * i
        e1, _ = solve_ip_C(n, k - i, i)
        e2, _ = solve_ip_C(n, i, l - i)
        tr = trace_C(n, i)
        dk, dl = module_C(n, k - i).dim, module_C(n, l - i).dim
        comp = _kron_chain(_id(dk), tr.matrix, _id(dl)) @ kron(e1.matrix, e2.matrix)
        src = tensor(Vk, twist(Vl, neg_s_pow(e)))
        tgt = tensor(twist(module_C(n, k - i), neg_s_pow(i)),
                     twist(module_C(n, l - i), neg_s_pow(2 * n + 2 - k - l + i)))
        items.append(_certificate("second", i, e, comp, src, tgt, check_intertwiner))
    roots = {(r[0], r[1]) for r in closed_form_roots(t, k, l)}
    covered = {((-1) ** (it["exponent"] % 2), it["exponent"]) for it in items}
    return {
        "n": n, "k": k, "l": l,
        "certificates": items,
        "roots_covered": roots <= covered,
        "pass": all(it["pass"] for it in items) and roots <= covered,
    }


def _certificate(family: str, i: int, e: int, comp: SMat, src, tgt, check: bool) -> dict:
    nonzero = not comp.is_zero()
    kills = not comp.apply({0: ONE})
    inter = Morphism(comp, src, tgt).is_intertwiner() if check else None
    ok = nonzero and kills and inter is not False
    return {
        "family": family, "i": i, "root": f"(-s)^{e}", "exponent": e,
        "nonzero": nonzero, "kills_u(x)u": kills, "intertwiner": inter, "pass": ok,
    }


# --------------------------------------------------------------------------
# pole tables

def pole_table(t: AffineType, pairs: list[tuple[int, int]] | None = None) -> dict:
    """Denominator roots of every pair with the form and range checks."""
    rng = index_range(t)
    pairs = pairs or [(i, j) for i in rng for j in rng]
    top = 2 * t.constants().delta_rho        # q^(delta,rho) with q = s^2
    rows = []
    ok = True
    for i, j in pairs:
        R = solve_R_fund(t.family, t.n, i, j)
        cmp = compare_with_closed_form(R, t, i, j)
        form_ok = R.cofactor_degree == 0
        range_ok = all(0 < m <= top for _, m, _ in R.poles)
        simple = all(mult == 1 for _, _, mult in R.poles)
        rows.append({
            "pair": [i, j],
            "denominator": R.denominator_str(),
            "closed_form": cmp["closed_form"],
            "match": cmp["match"],
            "monomial_roots": form_ok,
            "exponent_range": range_ok,
            "simple_poles": simple,
        })
        ok = ok and cmp["match"] and form_ok and range_ok
    return {"family": t.family, "n": t.n, "rows": rows, "pass": ok}


def format_pole_table(table: dict) -> str:
    rows = table["rows"]
    w = max(len(r["denominator"]) for r in rows) if rows else 10
    lines = [f"{table['family']}{table['n']}  pair   {'denominator'.ljust(w)}  closed form match"]
    for r in rows:
        pair = f"({r['pair'][0]},{r['pair'][1]})"
        lines.append(f"     {pair.ljust(6)} {r['denominator'].ljust(w)}  {'yes' if r['match'] else 'NO'}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# relation suite

def relation_suite(t: AffineType, max_factors: int = 3, seed: int = 0, samples: int = 4) -> dict:
    """check_relations on every fundamental, random twists and tensors of up to max_factors."""
    rng = random.Random(seed)
    idx = list(index_range(t))
    failures = []
    count = 0

    def run(M, label):
        nonlocal count
        count += 1
        errs = check_relations(M)
        if errs:
            failures.append({"module": label, "errors": errs[:3]})

    for i in idx:
        run(fundamental(t, i), f"V{i}")
        run(twist(fundamental(t, i), 1, 1), f"V{i}_z")
    for nf in range(2, max_factors + 1):
        for _ in range(samples):
            fs = [(rng.choice(idx), rng.randint(-6, 6), rng.choice((1, -1))) for _ in range(nf)]
            dims = 1
            for i, _, _ in fs:
                dims *= fundamental(t, i).dim
            if dims > 400:
                continue
            M = tensor_all([twist(fundamental(t, i), RatFunc.monomial(m, sg)) for i, m, sg in fs])
            run(M, "⊗".join(f"V{i}@{RatFunc.monomial(m, sg)}" for i, m, sg in fs))
    return {"family": t.family, "n": t.n, "modules": count, "failures": failures, "pass": not failures}


# --------------------------------------------------------------------------
# self-test

BUDGETS = {
    "small": {"A": [2, 3], "C": [2], "order": 6, "conj1_max_factors": 2},
    "full": {"A": [2, 3, 4, 5], "C": [2, 3], "order": 8, "conj1_max_factors": 3},
}


def budget_pairs(t: AffineType, max_dim: int = 400) -> list[tuple[int, int]]:
    rng = index_range(t)
    return [(i, j) for i in rng for j in rng
            if fundamental(t, i).dim * fundamental(t, j).dim <= max_dim]


def selftest(budget: str = "small") -> dict:
    """The full invariant suite; output is deterministic for a given budget."""
    if budget not in BUDGETS:
        raise VerifyError(f"unknown budget {budget!r}")
    cfg = BUDGETS[budget]
    sections: dict[str, dict] = {}
    types = [AffineType("A", n) for n in cfg["A"]] + [AffineType("C", n) for n in cfg["C"]]

    sections["relations"] = _collect(relation_suite(t, 3 if t.n <= 3 else 2) for t in types)
    sections["poles"] = _collect(pole_table(t, budget_pairs(t)) for t in types)
    sections["explicit_R11"] = _collect(
        {"n": t.n, "pass": not matrix_diff(solve_R_fund("C", t.n, 1, 1).matrix, explicit_R11_C(t.n))}
        for t in types if t.family == "C"
    )
    sections["component_ratios"] = _collect(
        {"n": t.n, "k": k, "pass": all(v["match"] for v in component_ratios(solve_R_fund("C", t.n, k, 1), k).values())}
        for t in types if t.family == "C" for k in index_range(t)
    )
    sections["inversion"] = _collect(
        {"family": t.family, "n": t.n, "pair": [i, j],
         "pass": inversion_check(solve_R_fund(t.family, t.n, i, j), solve_R_fund(t.family, t.n, j, i))}
        for t in types for i, j in budget_pairs(t)
    )
    sections["yang_baxter"] = _collect(
        {"family": t.family, "n": t.n, "pass": yang_baxter(t.family, t.n)}
        for t in types if t.n <= (3 if t.family == "A" else 2)
    )
    sections["functional"] = _collect(
        functional_item(t, k, l, cfg["order"]) for t in types for k, l in budget_pairs(t)
    )
    sections["conj2"] = _collect(
        check_conj2(t, i) for t in types if t.n <= (4 if t.family == "A" else 3) for i in index_range(t)
    )
    sections["pole_reducibility"] = _collect(
        pole_reducibility_item(t, i, j) for t in types if t.n <= 3 for i, j in budget_pairs(t, 64)
    )
    sections["conj1"] = _collect(_conj1_items(types, cfg["conj1_max_factors"]))
    sections["witnesses"] = _collect(
        reducibility_witnesses_C(t.n, k, l, check_intertwiner=False)
        for t in types if t.family == "C" for k in index_range(t) for l in range(1, k + 1)
    )
    return {
        "budget": budget,
        "conventions": CONVENTIONS,
        "sections": sections,
        "pass": all(s["pass"] for s in sections.values()),
    }


def _collect(items) -> dict:
    items = list(items)
    return {"items": items, "pass": all(it["pass"] for it in items)}


def functional_item(t: AffineType, k: int, l: int, order: int) -> dict:
    def d(i, j):
        return solve_R_fund(t.family, t.n, i, j).denominator

    rep = functional_checks(t, k, l, order, d)
    return {
        "family": t.family, "n": t.n, "pair": [k, l],
        "report": rep,
        "pass": all(v["holds"] for v in rep.values()),
    }


def pole_reducibility_item(t: AffineType, i: int, j: int) -> dict:
    bound = 2 * (t.n + 2)
    bad = []
    for m in range(-bound, bound + 1):
        for sg in (1, -1):
            r = pole_reducibility(t, i, j, RatFunc.monomial(m, sg))
            if not r["consistent"]:
                bad.append(r["a"])
    return {"family": t.family, "n": t.n, "pair": [i, j], "disagreements": bad, "pass": not bad}


def _conj1_items(types, max_factors: int):
    """Irreducibility away from poles and cyclicity at poles in the right order."""
    for t in types:
        if t.n > 3:
            continue
        for i, j in budget_pairs(t, 64):
            R = solve_R_fund(t.family, t.n, i, j)
            for sign, m, _ in R.poles:
                # reducible point in cyclic order: the factor with the larger exponent first
                spec = TensorSpec(t.family, t.n, (Factor(j, m, sign), Factor(i, 0)))
                try:
                    rep = check_conj1(spec, 1)
                except RMatrixError:
                    continue
                yield {**rep, "family": t.family, "n": t.n}
        if max_factors >= 3 and t.n <= 3:
            i = 1
            spec = TensorSpec(t.family, t.n, (Factor(i, 2 * t.n + 3), Factor(i, 1), Factor(i, -2 * t.n - 1)))
            rep1 = check_conj1(spec, 1)
            yield {**rep1, "family": t.family, "n": t.n}


__all__ = [
    "BUDGETS",
    "CONVENTIONS",
    "Factor",
    "TensorSpec",
    "VerifyError",
    "budget_pairs",
    "check_conj1",
    "check_conj2",
    "check_cor_pole",
    "format_pole_table",
    "functional_item",
    "highest_line_check",
    "index_range",
    "is_ordered",
    "pole_reducibility_item",
    "pole_table",
    "reducibility_witnesses_C",
    "relation_suite",
    "selftest",
]
