"""Root data of the affine types A^(1)_{n-1} and C^(1)_n at level 0.

Classical weights are integer tuples: fundamental-weight coordinates for type A
(length n-1) and epsilon coordinates for type C (length n, with (e_i, e_j) = 1/2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

Weight = tuple[int, ...]

HARD_CAPS = {"A": 5, "C": 3}


class RootDataError(ValueError):
    pass


@dataclass(frozen=True)
class AffineType:
    family: str
    n: int

    def __post_init__(self) -> None:
        if self.family not in ("A", "C"):
            raise RootDataError(f"unsupported family {self.family!r}")
        if self.n < 2:
            raise RootDataError("n must be at least 2")

    def __str__(self) -> str:
        return f"{self.family}{self.n}"

    # index sets -------------------------------------------------------------
    @cached_property
    def index_set(self) -> tuple[int, ...]:
        top = self.n - 1 if self.family == "A" else self.n
        return tuple(range(top + 1))

    @cached_property
    def classical(self) -> tuple[int, ...]:
        return self.index_set[1:]

    @cached_property
    def rank(self) -> int:
        """Length of a weight tuple."""
        return self.n - 1 if self.family == "A" else self.n

    def check_index(self, i: int) -> None:
        if i not in self.index_set:
            raise RootDataError(f"index {i} out of range for {self}")

    # pairings ----------------------------------------------------------------
    def pairing(self, i: int, lam: Weight) -> int:
        """<h_i, lam>."""
        self.check_index(i)
        if self.family == "A":
            return -sum(lam) if i == 0 else lam[i - 1]
        if i == 0:
            return -lam[0]
        if i == self.n:
            return lam[self.n - 1]
        return lam[i - 1] - lam[i]

    def root_norm(self, i: int) -> int:
        """(alpha_i, alpha_i)."""
        self.check_index(i)
        if self.family == "A":
            return 2
        return 2 if i in (0, self.n) else 1

    @cached_property
    def _alphas(self) -> tuple[Weight, ...]:
        out = []
        for i in self.index_set:
            if self.family == "A":
                out.append(tuple(self.cartan(j, i) for j in self.classical))
            else:
                v = [0] * self.n
                if i == 0:
                    v[0] = -2
                elif i == self.n:
                    v[self.n - 1] = 2
                else:
                    v[i - 1], v[i] = 1, -1
                out.append(tuple(v))
        return tuple(out)

    def alpha(self, i: int) -> Weight:
        """Classical part cl(alpha_i)."""
        self.check_index(i)
        return self._alphas[i]

    def cartan(self, i: int, j: int) -> int:
        """a_ij = <h_i, alpha_j>."""
        if self.family == "A":
            n = self.n
            if i == j:
                return 2
            if n == 2:
                return -2
            return -1 if (i - j) % n in (1, n - 1) else 0
        return self.pairing(i, self.alpha(j))

    def inner(self, lam: Weight, mu: Weight) -> Fraction:
        """(lam, mu) on the classical weight lattice."""
        if self.family == "C":
            return Fraction(sum(a * b for a, b in zip(lam, mu)), 2)
        n = self.n
        total = Fraction(0)
        for i in range(1, n):
            for j in range(1, n):
                g = Fraction(min(i, j)) - Fraction(i * j, n)
                total += lam[i - 1] * mu[j - 1] * g
        return total

    def fundamental(self, i: int) -> Weight:
        """varpi_i for i in the classical index set; i = 0 (and i = n for A) gives 0."""
        if self.family == "A":
            v = [0] * (self.n - 1)
            if 0 < i < self.n:
                v[i - 1] = 1
            return tuple(v)
        return tuple(1 if j < i else 0 for j in range(self.n))

    def reflect(self, i: int, lam: Weight) -> Weight:
        k = self.pairing(i, lam)
        return tuple(a - k * b for a, b in zip(lam, self.alpha(i)))

    def is_dominant(self, lam: Weight) -> bool:
        return all(self.pairing(i, lam) >= 0 for i in self.classical)

    def add(self, lam: Weight, mu: Weight, k: int = 1) -> Weight:
        return tuple(a + k * b for a, b in zip(lam, mu))

    def zero(self) -> Weight:
        return (0,) * self.rank

    def root_coordinates(self, lam: Weight) -> tuple[Fraction, ...]:
        """Coefficients of lam in the classical simple roots."""
        # pairing with classical h_j gives C x = <h, lam>, solve by Fraction Gauss
        idx = self.classical
        m = len(idx)
        rows = [[Fraction(self.cartan(i, j)) for j in idx] + [Fraction(self.pairing(i, lam))]
                for i in idx]
        for c in range(m):
            p = next(r for r in range(c, m) if rows[r][c] != 0)
            rows[c], rows[p] = rows[p], rows[c]
            piv = rows[c][c]
            rows[c] = [x / piv for x in rows[c]]
            for r in range(m):
                if r != c and rows[r][c] != 0:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return tuple(rows[r][m] for r in range(m))

    def dominant_rep(self, lam: Weight) -> Weight:
        lam = tuple(lam)
        changed = True
        while changed:
            changed = False
            for i in self.classical:
                if self.pairing(i, lam) < 0:
                    lam = self.reflect(i, lam)
                    changed = True
        return lam

    def classical_orbit(self, lam: Weight) -> set[Weight]:
        seen = {tuple(lam)}
        todo = [tuple(lam)]
        while todo:
            x = todo.pop()
            for i in self.classical:
                y = self.reflect(i, x)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def in_convex_hull(self, mu: Weight, lam: Weight) -> bool:
        """mu in the convex hull of W_cl lam (lam dominant)."""
        diff = tuple(a - b for a, b in zip(lam, self.dominant_rep(mu)))
        return all(c >= 0 for c in self.root_coordinates(diff))

    def below(self, mu: Weight, lam: Weight) -> bool:
        """lam - mu lies in the non-negative integer cone of classical simple roots."""
        coords = self.root_coordinates(tuple(a - b for a, b in zip(lam, mu)))
        return all(c >= 0 and c.denominator == 1 for c in coords)

    # constants ---------------------------------------------------------------
    @cached_property
    def marks(self) -> tuple[int, ...]:
        if self.family == "A":
            return (1,) * self.n
        return (1,) + (2,) * (self.n - 1) + (1,)

    @cached_property
    def comarks(self) -> tuple[int, ...]:
        if self.family == "A":
            return (1,) * self.n
        return (1,) * (self.n + 1)

    def dual_index(self, i: int) -> int:
        self.check_index(i)
        if self.family == "C" or i == 0:
            return i
        return self.n - i

    def constants(self) -> "Constants":
        delta_rho = sum(self.comarks)
        rho_delta = sum(self.marks)
        gamma = 1 if self.family == "A" else 2
        return Constants(
            delta_rho=delta_rho,
            rhovee_delta=rho_delta,
            gamma=gamma,
            pstar_sign=(-1) ** rho_delta,
            pstar_s_exp=2 * delta_rho,
            m={i: 1 for i in self.classical},
            dual={i: self.dual_index(i) for i in self.classical},
            literature_delta_rho=self.n + 1,
        )


@dataclass(frozen=True)
class Constants:
    delta_rho: int
    rhovee_delta: int
    gamma: int
    pstar_sign: int
    pstar_s_exp: int
    m: dict[int, int] = field(default_factory=dict)
    dual: dict[int, int] = field(default_factory=dict)
    literature_delta_rho: int = 0

    def pstar(self):
        from .scalars import RatFunc

        return RatFunc.monomial(self.pstar_s_exp, self.pstar_sign)

    def literature_pstar(self):
        """p* computed from the (delta, rho) value n+1 quoted for both families."""
        from .scalars import RatFunc

        sign = (-1) ** (self.literature_delta_rho if self.gamma == 1 else self.rhovee_delta)
        return RatFunc.monomial(2 * self.literature_delta_rho, sign)
