"""Sparse exact linear algebra over Q(s) (RatFunc) and Q(z, s) (BiRat).

Vectors are dicts {index: scalar} without zero entries.  Elimination over Q(s)
is Gauss-Jordan on canonical fractions; elimination over Q(z, s) is fraction-free
with content stripping.
"""

from __future__ import annotations

from collections.abc import Iterable

from .scalars import BiRat, RatFunc

Vec = dict


def vadd(u: Vec, v: Vec, c=None) -> Vec:
    """u + c*v (c defaults to 1)."""
    out = dict(u)
    for k, x in v.items():
        y = x if c is None else c * x
        if k in out:
            t = out[k] + y
            if t.is_zero():
                del out[k]
            else:
                out[k] = t
        elif not y.is_zero():
            out[k] = y
    return out


def vscale(v: Vec, c) -> Vec:
    if c.is_zero():
        return {}
    return {k: c * x for k, x in v.items()}


def vmap(v: Vec, f) -> Vec:
    out = {}
    for k, x in v.items():
        y = f(x)
        if not y.is_zero():
            out[k] = y
    return out


class SMat:
    """Column-major sparse matrix."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: dict[int, Vec] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = {c: v for c, v in (cols or {}).items() if v}

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, object]]) -> "SMat":
        cols: dict[int, Vec] = {}
        for r, c, x in entries:
            if x.is_zero():
                continue
            col = cols.setdefault(c, {})
            if r in col:
                t = col[r] + x
                if t.is_zero():
                    del col[r]
                else:
                    col[r] = t
            else:
                col[r] = x
        return cls(nrows, ncols, cols)

    @classmethod
    def identity(cls, n: int, one) -> "SMat":
        return cls(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def diagonal(cls, diag: list) -> "SMat":
        n = len(diag)
        return cls(n, n, {i: {i: d} for i, d in enumerate(diag) if not d.is_zero()})

    def entries(self):
        for c in sorted(self.cols):
            col = self.cols[c]
            for r in sorted(col):
                yield r, c, col[r]

    def get(self, r: int, c: int):
        return self.cols.get(c, {}).get(r)

    def nnz(self) -> int:
        return sum(len(v) for v in self.cols.values())

    def is_zero(self) -> bool:
        return not self.cols

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for c, x in v.items():
            col = self.cols.get(c)
            if col:
                out = vadd(out, col, x)
        return out

    def __matmul__(self, other: "SMat") -> "SMat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return SMat(self.nrows, other.ncols, {c: self.apply(v) for c, v in other.cols.items()})

    def __add__(self, other: "SMat") -> "SMat":
        cols = dict(self.cols)
        for c, v in other.cols.items():
            cols[c] = vadd(cols.get(c, {}), v)
        return SMat(self.nrows, self.ncols, cols)

    def __sub__(self, other: "SMat") -> "SMat":
        return self + other.scale(-1)

    def scale(self, c) -> "SMat":
        if not hasattr(c, "is_zero"):
            c = _coerce_like(self, c)
        return SMat(self.nrows, self.ncols, {k: vscale(v, c) for k, v in self.cols.items()})

    def map(self, f) -> "SMat":
        return SMat(self.nrows, self.ncols, {k: vmap(v, f) for k, v in self.cols.items()})

    def transpose(self) -> "SMat":
        cols: dict[int, Vec] = {}
        for r, c, x in self.entries():
            cols.setdefault(r, {})[c] = x
        return SMat(self.ncols, self.nrows, cols)

    def rows(self) -> dict[int, Vec]:
        return self.transpose().cols

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SMat)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.cols == other.cols
        )

    def submatrix(self, rows: list[int], cols: list[int]) -> "SMat":
        rpos = {r: i for i, r in enumerate(rows)}
        out = {}
        for j, c in enumerate(cols):
            col = self.cols.get(c)
            if col:
                v = {rpos[r]: x for r, x in col.items() if r in rpos}
                if v:
                    out[j] = v
        return SMat(len(rows), len(cols), out)


def _coerce_like(m: SMat, c):
    for v in m.cols.values():
        for x in v.values():
            return x.coerce(c) if isinstance(x, BiRat) else RatFunc.coerce(c)
    return RatFunc.coerce(c)


def kron(a: SMat, b: SMat) -> SMat:
    cols = {}
    for ca, va in a.cols.items():
        for cb, vb in b.cols.items():
            v = {}
            for ra, x in va.items():
                for rb, y in vb.items():
                    v[ra * b.nrows + rb] = x * y
            cols[ca * b.ncols + cb] = v
    return SMat(a.nrows * b.nrows, a.ncols * b.ncols, cols)


class Echelon:
    """Incremental reduced row echelon form over a field; pivot = smallest index."""

    def __init__(self) -> None:
        self.rows: dict[int, Vec] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        hits = [p for p in v if p in self.rows]
        for p in hits:
            c = v.get(p)
            if c is not None:
                v = vadd(v, self.rows[p], -c)
        return v

    def add(self, v: Vec) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        v = vscale(v, v[p].inverse())
        for q, row in self.rows.items():
            c = row.get(p)
            if c is not None:
                self.rows[q] = vadd(row, v, -c)
        self.rows[p] = v
        return True

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Vec) -> dict[int, object]:
        """Coefficients of v on the echelon rows (keyed by pivot); v must lie in the span."""
        if self.reduce(v):
            raise ValueError("vector not in span")
        return {p: v[p] for p in v if p in self.rows}

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[Vec]:
        return [self.rows[p] for p in self.pivots()]


def nullspace(rows: Iterable[Vec], ncols: int) -> list[Vec]:
    """Basis of {x : r.x = 0 for all rows r} over Q(s), one vector per free column."""
    ech = Echelon()
    for r in rows:
        if r:
            ech.add(r)
    pivots = ech.rows
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = {f: _one_like(pivots)}
        for p, row in pivots.items():
            c = row.get(f)
            if c is not None:
                x[p] = -c
        basis.append(x)
    return basis


def _one_like(pivots):
    for row in pivots.values():
        for x in row.values():
            return x.coerce(1) if isinstance(x, BiRat) else RatFunc.coerce(1)
    return RatFunc.coerce(1)


def nullspace_ff(rows: Iterable[Vec], ncols: int) -> list[Vec]:
    """Nullspace over Q(z, s) by fraction-free Gauss-Jordan with content stripping."""
    work: list[Vec] = []
    for r in rows:
        r = _primitive(r)
        if r:
            work.append(r)
    pivot_rows: dict[int, Vec] = {}
    for r in work:
        for p, prow in pivot_rows.items():
            b = r.get(p)
            if b is not None:
                a = prow[p]
                r = _primitive(vadd(vscale(r, a), prow, -b))
        if not r:
            continue
        p = min(r)
        for q in list(pivot_rows):
            row = pivot_rows[q]
            b = row.get(p)
            if b is not None:
                pivot_rows[q] = _primitive(vadd(vscale(row, r[p]), r, -b))
        pivot_rows[p] = r
    basis = []
    for f in range(ncols):
        if f in pivot_rows:
            continue
        one = BiRat.const(1)
        x = {f: one}
        for p, row in pivot_rows.items():
            c = row.get(f)
            if c is not None:
                x[p] = -c / row[p]
        basis.append(x)
    return basis


def _primitive(r: Vec) -> Vec:
    """Clear denominators and divide out the polynomial content of a BiRat row."""
    if not r:
        return r
    anyx = next(iter(r.values()))
    ctx = anyx.ctx
    den = None
    for x in r.values():
        den = x.den if den is None else _lcm(den, x.den)
    scaled = {k: x * BiRat(den, None, None, x.names) for k, x in r.items()}
    g = None
    for x in scaled.values():
        g = x.num if g is None else g.gcd(x.num)
    lo = tuple(min(x.mono[i] for x in scaled.values()) for i in range(len(anyx.names)))
    divisor = BiRat(g, None, lo, anyx.names)
    out = {k: x / divisor for k, x in scaled.items()}
    # sign convention: first entry's leading coefficient positive
    first = out[min(out)]
    if first.num.coeffs()[0] < 0:
        out = {k: -x for k, x in out.items()}
    del ctx
    return out


def _lcm(a, b):
    g = a.gcd(b)
    return (a * b) / g


def inverse(m: SMat) -> SMat:
    """Inverse of a square RatFunc matrix."""
    n = m.nrows
    if m.ncols != n:
        raise ValueError("not square")
    rows = m.rows()
    one = RatFunc.coerce(1)
    aug = []
    for i in range(n):
        v = dict(rows.get(i, {}))
        v[n + i] = one
        aug.append(v)
    ech = Echelon()
    for v in aug:
        ech.add(v)
    if sorted(p for p in ech.rows if p < n) != list(range(n)):
        raise ValueError("singular matrix")
    cols: dict[int, Vec] = {}
    for p in range(n):
        for k, x in ech.rows[p].items():
            if k >= n:
                cols.setdefault(k - n, {})[p] = x
    return SMat(n, n, cols)
