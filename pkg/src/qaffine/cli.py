"""Command-line interface.

    qaffine crystal --family A --n 3 --k 1 --dot out.dot
    qaffine rmatrix --family C --n 2 --i 1 --j 1 --check-closed-form
    qaffine verify conj2 --family C --n 2 --i 2
    qaffine verify selftest --budget small

Options may also come from a plain key=value file given with --config; flags
given on the command line win.  Exit codes: 0 pass, 1 verification failure,
2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import __version__
from .crystal import tensor as crystal_tensor
from .fund_a import build_crystal_A
from .fund_c import build_crystal_C
from .rmatrix import RMatrixError, compare_with_closed_form, solve_R_fund, yang_baxter
from .rootdata import AffineType
from .verify import (
    CONVENTIONS,
    Factor,
    TensorSpec,
    VerifyError,
    check_conj1,
    check_conj2,
    format_pole_table,
    index_range,
    pole_table,
    relation_suite,
    selftest,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

HARD_CAPS = {"A": 5, "C": 3, "factors": 3, "order": 10}


class UsageError(Exception):
    pass


class BudgetError(Exception):
    pass


@dataclass
class Manifest:
    """Everything that determines an output; embedded in every report."""

    command: str = ""
    family: str = "A"
    n: int = 3
    k: int | None = None
    i: int | None = None
    j: int | None = None
    order: int = 8
    budget: str = "small"
    factors: str = ""
    part: int = 1
    jobs: int = 1
    unsafe_budget: bool = False
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    def check_caps(self, factor_count: int = 0) -> None:
        if self.unsafe_budget:
            return
        cap = HARD_CAPS.get(self.family)
        if cap is not None and self.n > cap:
            raise BudgetError(f"n={self.n} exceeds the {self.family} cap {cap}; use --unsafe-budget")
        if self.order > HARD_CAPS["order"]:
            raise BudgetError(f"series order {self.order} exceeds the cap {HARD_CAPS['order']}")
        if factor_count > HARD_CAPS["factors"]:
            raise BudgetError(f"{factor_count} tensor factors exceed the cap {HARD_CAPS['factors']}")

    def record(self) -> dict:
        out = asdict(self)
        out["version"] = __version__
        return {k: v for k, v in out.items() if v is not None}


def read_config(path: str) -> dict[str, str]:
    """Parse a key=value file; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(name: str, value: str):
    if name in ("n", "k", "i", "j", "order", "jobs", "part"):
        return int(value)
    if name == "unsafe_budget":
        return value.lower() in ("1", "true", "yes")
    return value


def build_manifest(command: str, args: argparse.Namespace) -> Manifest:
    values: dict = {}
    if getattr(args, "config", None):
        known = {f.name for f in fields(Manifest)} - {"conventions", "command"}
        for key, value in read_config(args.config).items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r}")
            values[key] = _coerce(key, value)
    for name in ("family", "n", "k", "i", "j", "order", "budget", "factors", "part", "jobs"):
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    if getattr(args, "unsafe_budget", False):
        values["unsafe_budget"] = True
    m = Manifest(command=command, **values)
    if m.family not in ("A", "C"):
        raise UsageError("family must be A or C")
    return m


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=str)


def _emit(report: dict, out: str | None) -> None:
    text = _dump(report) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands

def _rtype(m: Manifest) -> AffineType:
    try:
        return AffineType(m.family, m.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _crystal(m: Manifest, k: int):
    t = _rtype(m)
    if k not in index_range(t):
        top = t.n - 1 if t.family == "A" else t.n
        raise UsageError(f"k={k} out of range 1..{top}")
    return build_crystal_A(m.n, k) if m.family == "A" else build_crystal_C(m.n, k)


def cmd_crystal(args: argparse.Namespace) -> int:
    m = build_manifest("crystal", args)
    m.check_caps()
    if args.tensor:
        try:
            ks = [int(x) for x in args.tensor.split(",")]
        except ValueError:
            raise UsageError("--tensor expects k1,k2") from None
        m.check_caps(len(ks))
        B = _crystal(m, ks[0])
        for k in ks[1:]:
            B = crystal_tensor(B, _crystal(m, k))
    else:
        if m.k is None:
            raise UsageError("--k or --tensor is required")
        B = _crystal(m, m.k)
    if args.dot:
        Path(args.dot).write_text(B.to_dot())
    if args.json or not args.dot:
        report = {"manifest": m.record(), "crystal": B.to_json(),
                  "simple": B.is_simple(), "connected": B.connectedness()}
        _emit(report, args.out)
    return EXIT_PASS


def cmd_rmatrix(args: argparse.Namespace) -> int:
    m = build_manifest("rmatrix", args)
    m.check_caps()
    t = _rtype(m)
    if m.i is None or m.j is None:
        raise UsageError("--i and --j are required")
    for x in (m.i, m.j):
        if x not in index_range(t):
            raise UsageError(f"index {x} out of range")
    R = solve_R_fund(m.family, m.n, m.i, m.j)
    report = {"manifest": m.record(), "rmatrix": R.to_json(with_matrix=not args.no_matrix)}
    code = EXIT_PASS
    if args.check_closed_form:
        cmp = compare_with_closed_form(R, t, m.i, m.j)
        report["closed_form"] = {**cmp, "verdict": "match" if cmp["match"] else "mismatch"}
        code = EXIT_PASS if cmp["match"] else EXIT_FAIL
    _emit(report, args.out)
    return code


def _parse_factors(text: str) -> tuple[Factor, ...]:
    """'1@0,1@4,2@-3' with optional sign prefix on the exponent: '1@-4' vs '1@~4' for -s^4."""
    out = []
    for item in filter(None, (x.strip() for x in text.split(","))):
        try:
            idx, _, exp = item.partition("@")
            sign = -1 if exp.startswith("~") else 1
            out.append(Factor(int(idx), int(exp.lstrip("~") or 0), sign))
        except ValueError:
            raise UsageError(f"bad factor {item!r}; expected index@exponent") from None
    return tuple(out)


def _map(jobs: int, fn, items):
    items = list(items)
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def cmd_verify(args: argparse.Namespace) -> int:
    m = build_manifest(f"verify {args.what}", args)
    what = args.what
    if what == "selftest":
        if m.budget not in ("small", "full"):
            raise UsageError("budget must be small or full")
        report = selftest(m.budget)
    else:
        t = _rtype(m)
        if what == "conj1":
            spec = TensorSpec(m.family, m.n, _parse_factors(m.factors))
            m.check_caps(len(spec.factors))
            report = check_conj1(spec, m.part)
        elif what == "conj2":
            m.check_caps()
            ids = [m.i] if m.i is not None else list(index_range(t))
            items = _map(m.jobs, lambda i: check_conj2(t, i), ids)
            report = {"items": items, "pass": all(x["pass"] for x in items)}
        elif what == "poles":
            m.check_caps()
            report = pole_table(t)
            if args.text:
                sys.stderr.write(format_pole_table(report) + "\n")
        elif what == "relations":
            m.check_caps()
            report = relation_suite(t)
        elif what == "ybe":
            m.check_caps()
            report = {"family": m.family, "n": m.n, "pass": yang_baxter(m.family, m.n)}
        else:  # pragma: no cover - argparse restricts choices
            raise UsageError(what)
    _emit({"manifest": m.record(), "report": report}, args.out)
    return EXIT_PASS if report["pass"] else EXIT_FAIL


# --------------------------------------------------------------------------
# parser

def _common(p: argparse.ArgumentParser, index_flags: tuple[str, ...] = ()) -> None:
    p.add_argument("--config", help="key=value file; flags override its values")
    p.add_argument("--family", choices=("A", "C"))
    p.add_argument("--n", type=int)
    for name in index_flags:
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--unsafe-budget", action="store_true", help="lift the hard size caps")
    p.add_argument("--jobs", type=int, help="worker threads for independent items")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaffine", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crystal", help="fundamental crystals and their tensor products")
    _common(p, ("k",))
    p.add_argument("--tensor", help="comma-separated k values to tensor together")
    p.add_argument("--dot", help="write a DOT graph here")
    p.add_argument("--json", action="store_true", help="print the JSON description")
    p.set_defaults(func=cmd_crystal)

    p = sub.add_parser("rmatrix", help="normalized R-matrix of two fundamental modules")
    _common(p, ("i", "j"))
    p.add_argument("--check-closed-form", action="store_true")
    p.add_argument("--no-matrix", action="store_true", help="omit the matrix entries")
    p.set_defaults(func=cmd_rmatrix)

    p = sub.add_parser("verify", help="verification drivers")
    p.add_argument("what", choices=("conj1", "conj2", "poles", "relations", "ybe", "selftest"))
    _common(p, ("i",))
    p.add_argument("--budget", choices=("small", "full"))
    p.add_argument("--factors", help="tensor factors as index@exponent,... ('~' negates the sign)")
    p.add_argument("--part", type=int, choices=(1, 2))
    p.add_argument("--order", type=int)
    p.add_argument("--text", action="store_true", help="also print the pole table as text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except BudgetError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (VerifyError, RMatrixError) as exc:
        sys.stderr.write(f"verification error: {exc}\n")
        return EXIT_FAIL


__all__ = ["HARD_CAPS", "Manifest", "build_parser", "main", "read_config"]
