"""Exact scalars: Laurent polynomials and rational functions in s = q_s, bivariate
rational functions in (z, s), and truncated power series in z.

Univariate arithmetic is delegated to FLINT's ``fmpq_poly`` and multivariate
arithmetic to ``fmpq_mpoly``; this module only adds Laurent shifts, a canonical
normal form and the serialization format used by every JSON output.
"""

from __future__ import annotations

import ast
from collections.abc import Iterable
from fractions import Fraction
from typing import Union

import flint

Number = Union[int, Fraction, "flint.fmpq"]

_ZERO_POLY = flint.fmpq_poly([])
_ONE_POLY = flint.fmpq_poly([1])


class ZeroDivision(ZeroDivisionError):
    def __init__(self) -> None:
        super().__init__("zero divisor")


def _fmpq(c: Number) -> flint.fmpq:
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq(c)


def _frac(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _low(p: flint.fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no lowest term")


def _strip_low(p: flint.fmpq_poly) -> tuple[flint.fmpq_poly, int]:
    if p.is_zero():
        return p, 0
    k = _low(p)
    return (p.right_shift(k) if k else p), k


# --------------------------------------------------------------------------
# string formatting shared by all scalar types

def _coeff_str(c: Fraction, mono: str) -> str:
    """Unsigned coefficient times monomial."""
    c = abs(c)
    if not mono:
        return str(c)
    if c == 1:
        return mono
    return f"{c}*{mono}"


def _join_terms(terms: list[tuple[Fraction, str]]) -> str:
    if not terms:
        return "0"
    out = []
    for idx, (c, mono) in enumerate(terms):
        body = _coeff_str(c, mono)
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _mono_str(names: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _wrap(text: str, nterms: int) -> str:
    return f"({text})" if nterms > 1 else text


# --------------------------------------------------------------------------
# Laurent polynomials in s

class LaurentPoly:
    """s^shift * poly(s) with poly(0) != 0 (or the zero polynomial)."""

    __slots__ = ("shift", "poly")

    def __init__(self, poly: flint.fmpq_poly, shift: int = 0):
        poly, k = _strip_low(poly)
        self.poly = poly
        self.shift = 0 if poly.is_zero() else shift + k

    @classmethod
    def from_terms(cls, terms: dict[int, Number]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return cls(_ZERO_POLY)
        lo = min(terms)
        coeffs = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = _fmpq(c)
        return cls(flint.fmpq_poly(coeffs), lo)

    def terms(self) -> dict[int, Fraction]:
        return {
            self.shift + i: _frac(c) for i, c in enumerate(self.poly.coeffs()) if c != 0
        }

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _align(self, other: "LaurentPoly") -> tuple[flint.fmpq_poly, flint.fmpq_poly, int]:
        lo = min(self.shift, other.shift)
        return self.poly.left_shift(self.shift - lo), other.poly.left_shift(other.shift - lo), lo

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b, lo = self._align(other)
        return LaurentPoly(a + b, lo)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b, lo = self._align(other)
        return LaurentPoly(a - b, lo)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.poly * other.poly, self.shift + other.shift)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(-self.poly, self.shift)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.shift == other.shift
            and self.poly == other.poly
        )

    def __hash__(self) -> int:
        return hash((self.shift, str(self.poly)))

    def __str__(self) -> str:
        items = sorted(self.terms().items())
        return _join_terms([(c, _mono_str(("s",), (e,))) for e, c in items])

    __repr__ = __str__


# --------------------------------------------------------------------------
# rational functions in s

class RatFunc:
    """Element of Q(s) stored as s^val * num(s)/den(s).

    Canonical form: num(0) != 0, den(0) != 0, den monic, gcd(num, den) = 1.
    """

    __slots__ = ("val", "num_poly", "den_poly", "_hash")

    def __init__(self, num: flint.fmpq_poly, den: flint.fmpq_poly = _ONE_POLY, val: int = 0,
                 *, canonical: bool = False):
        if canonical:
            self.num_poly, self.den_poly, self.val = num, den, val
            self._hash = None
            return
        if den.is_zero():
            raise ZeroDivision()
        if num.is_zero():
            self.num_poly, self.den_poly, self.val = _ZERO_POLY, _ONE_POLY, 0
            self._hash = None
            return
        num, k1 = _strip_low(num)
        den, k2 = _strip_low(den)
        if not den.is_one():
            if den.degree() > 0:
                g = num.gcd(den)
                if not g.is_one():
                    num = _exact_div(num, g)
                    den = _exact_div(den, g)
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num_poly, self.den_poly, self.val = num, den, val + k1 - k2
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "RatFunc":
        c = _fmpq(c)
        if c == 0:
            return ZERO
        return cls(flint.fmpq_poly([c]), _ONE_POLY, 0, canonical=True)

    @classmethod
    def monomial(cls, e: int, c: Number = 1) -> "RatFunc":
        c = _fmpq(c)
        if c == 0:
            return ZERO
        return cls(flint.fmpq_poly([c]), _ONE_POLY, e, canonical=True)

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "RatFunc":
        return cls(p.poly, _ONE_POLY, p.shift)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentPoly):
            return cls.from_laurent(x)
        if isinstance(x, (int, Fraction, flint.fmpq)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    # views ---------------------------------------------------------------
    @property
    def num(self) -> LaurentPoly:
        return LaurentPoly(self.num_poly, self.val)

    @property
    def den(self) -> LaurentPoly:
        return LaurentPoly(self.den_poly, 0)

    def is_zero(self) -> bool:
        return self.num_poly.is_zero()

    def is_laurent(self) -> bool:
        return self.den_poly.is_one()

    def valuation(self) -> int:
        """Order of vanishing at s = 0."""
        if self.is_zero():
            raise ValueError("valuation of zero")
        return self.val

    def leading_at_zero(self) -> Fraction:
        """Coefficient of s^valuation in the expansion at s = 0."""
        return _frac(self.num_poly.coeffs()[0] / self.den_poly.coeffs()[0])

    def is_monomial(self) -> bool:
        return self.is_laurent() and self.num_poly.degree() == 0

    # arithmetic ------------------------------------------------------------
    def __add__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            if other == 0:
                return self
            other = RatFunc.coerce(other)
        if other.num_poly.is_zero():
            return self
        if self.num_poly.is_zero():
            return other
        lo = min(self.val, other.val)
        a = self.num_poly.left_shift(self.val - lo)
        b = other.num_poly.left_shift(other.val - lo)
        if self.den_poly == other.den_poly:
            return RatFunc(a + b, self.den_poly, lo)
        return RatFunc(a * other.den_poly + b * self.den_poly, self.den_poly * other.den_poly, lo)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        if self.num_poly.is_zero():
            return self
        return RatFunc(-self.num_poly, self.den_poly, self.val, canonical=True)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            if isinstance(other, (BiRat, PowerSeries)):
                return NotImplemented
            other = RatFunc.coerce(other)
        if self.num_poly.is_zero() or other.num_poly.is_zero():
            return ZERO
        if self.den_poly.is_one() and other.den_poly.is_one():
            return RatFunc(self.num_poly * other.num_poly, _ONE_POLY,
                           self.val + other.val, canonical=True)
        n1, d1, n2, d2 = self.num_poly, self.den_poly, other.num_poly, other.den_poly
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = _exact_div(n1, g), _exact_div(d2, g)
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = _exact_div(n2, g), _exact_div(d1, g)
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc(num, den, self.val + other.val, canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num_poly.is_zero():
            raise ZeroDivision()
        return RatFunc(self.den_poly, self.num_poly, -self.val)

    def __truediv__(self, other) -> "RatFunc":
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_monomial():
            c = self.num_poly.coeffs()[0] ** k
            return RatFunc(flint.fmpq_poly([c]), _ONE_POLY, self.val * k, canonical=True)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self.val == other.val
            and self.num_poly == other.num_poly
            and self.den_poly == other.den_poly
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.val, str(self.num_poly), str(self.den_poly)))
        return self._hash

    def __bool__(self) -> bool:
        return not self.num_poly.is_zero()

    # transforms -------------------------------------------------------------
    def bar(self) -> "RatFunc":
        """Substitute s -> 1/s."""
        if self.num_poly.is_zero():
            return self
        dn, dd = self.num_poly.degree(), self.den_poly.degree()
        rn = flint.fmpq_poly(list(reversed(self.num_poly.coeffs())))
        rd = flint.fmpq_poly(list(reversed(self.den_poly.coeffs())))
        return RatFunc(rn, rd, -self.val - dn + dd)

    def subs_power(self, k: int, sign: int = 1) -> "RatFunc":
        """Substitute s -> sign * s^k (k != 0)."""
        return _subs_poly(self.num_poly, k, sign) * RatFunc.monomial(self.val * k, sign ** (self.val % 2)) \
            / _subs_poly(self.den_poly, k, sign)

    def __str__(self) -> str:
        num_terms = sorted(self.num.terms().items())
        num = _join_terms([(c, _mono_str(("s",), (e,))) for e, c in num_terms])
        if self.den_poly.is_one():
            return num
        den_terms = sorted(self.den.terms().items())
        den = _join_terms([(c, _mono_str(("s",), (e,))) for e, c in den_terms])
        return f"{_wrap(num, len(num_terms))}/{_wrap(den, len(den_terms))}"

    __repr__ = __str__


def _exact_div(a: flint.fmpq_poly, b: flint.fmpq_poly) -> flint.fmpq_poly:
    q, r = divmod(a, b)
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return q


def _subs_poly(p: flint.fmpq_poly, k: int, sign: int) -> RatFunc:
    out = {}
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            out[i * k] = _frac(c) * (sign ** i)
    return RatFunc.from_laurent(LaurentPoly.from_terms(out))


ZERO = RatFunc(_ZERO_POLY, _ONE_POLY, 0, canonical=True)
ONE = RatFunc(_ONE_POLY, _ONE_POLY, 0, canonical=True)
S = RatFunc.monomial(1)


def s_pow(e: int, c: Number = 1) -> RatFunc:
    return RatFunc.monomial(e, c)


def neg_s_pow(e: int) -> RatFunc:
    """(-s)^e."""
    return RatFunc.monomial(e, -1 if e % 2 else 1)


def bar(f: RatFunc) -> RatFunc:
    return f.bar()


def qint(k: int, e: int = 1) -> RatFunc:
    """Balanced q-integer [k] with q = s^e."""
    if k == 0:
        return ZERO
    sign = 1 if k > 0 else -1
    k = abs(k)
    return RatFunc.from_laurent(LaurentPoly.from_terms({e * (k - 1 - 2 * j): 1 for j in range(k)})) * sign


def qfactorial(k: int, e: int = 1) -> RatFunc:
    out = ONE
    for j in range(1, k + 1):
        out = out * qint(j, e)
    return out


# --------------------------------------------------------------------------
# multivariate rational functions (z, s) and friends

def _mctx(names: tuple[str, ...]):
    return flint.fmpq_mpoly_ctx.get(names, "lex")


ZS = ("z", "s")


class BiRat:
    """Rational function in the variables ``names`` (default (z, s)).

    Stored as mono * num / den, mono a Laurent monomial, num and den polynomials
    with no monomial content, gcd 1, and den with leading coefficient 1 in the lex
    order whose first variable is z.
    """

    __slots__ = ("names", "ctx", "mono", "num", "den")

    def __init__(self, num, den=None, mono: tuple[int, ...] | None = None,
                 names: tuple[str, ...] = ZS, *, canonical: bool = False):
        self.names = names
        self.ctx = _mctx(names)
        nv = len(names)
        if den is None:
            den = self.ctx.from_dict({(0,) * nv: 1})
        if mono is None:
            mono = (0,) * nv
        if canonical:
            self.num, self.den, self.mono = num, den, mono
            return
        if den.is_zero():
            raise ZeroDivision()
        if num.is_zero():
            self.num, self.den, self.mono = num, self.ctx.from_dict({(0,) * nv: 1}), (0,) * nv
            return
        num, mn = _strip_mono(self.ctx, num)
        den, md = _strip_mono(self.ctx, den)
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num, den = num / g, den / g
        lc = _lead_coeff(den)
        if lc != 1:
            num, den = num / lc, den / lc
        self.num, self.den = num, den
        self.mono = tuple(a + b - c for a, b, c in zip(mono, mn, md))

    # constructors -------------------------------------------------------
    @classmethod
    def from_ratfunc(cls, f: RatFunc, names: tuple[str, ...] = ZS) -> "BiRat":
        ctx = _mctx(names)
        si = names.index("s")
        nv = len(names)

        def lift(p):
            d = {}
            for i, c in enumerate(p.coeffs()):
                if c != 0:
                    e = [0] * nv
                    e[si] = i
                    d[tuple(e)] = c
            return ctx.from_dict(d)

        mono = [0] * nv
        mono[si] = f.val
        return cls(lift(f.num_poly), lift(f.den_poly), tuple(mono), names, canonical=True)

    @classmethod
    def var(cls, name: str, power: int = 1, names: tuple[str, ...] = ZS) -> "BiRat":
        ctx = _mctx(names)
        mono = [0] * len(names)
        mono[names.index(name)] = power
        one = ctx.from_dict({(0,) * len(names): 1})
        return cls(one, one, tuple(mono), names, canonical=True)

    @classmethod
    def const(cls, c, names: tuple[str, ...] = ZS) -> "BiRat":
        return cls.from_ratfunc(RatFunc.coerce(c), names)

    @classmethod
    def from_zpoly(cls, coeffs: dict[int, RatFunc], names: tuple[str, ...] = ZS) -> "BiRat":
        out = cls.const(0, names)
        zv = cls.var("z", 1, names)
        for d, c in coeffs.items():
            if not c.is_zero():
                out = out + cls.from_ratfunc(c, names) * zv ** d
        return out

    def coerce(self, x) -> "BiRat":
        if isinstance(x, BiRat):
            if x.names != self.names:
                raise TypeError("operands over different variable sets")
            return x
        return BiRat.from_ratfunc(RatFunc.coerce(x), self.names)

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def _mono_poly(self, exps: Iterable[int]):
        return self.ctx.from_dict({tuple(exps): 1})

    # arithmetic -------------------------------------------------------------
    def __add__(self, other) -> "BiRat":
        other = self.coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        lo = tuple(min(a, b) for a, b in zip(self.mono, other.mono))
        ma = self._mono_poly(a - l for a, l in zip(self.mono, lo))
        mb = self._mono_poly(b - l for b, l in zip(other.mono, lo))
        if self.den == other.den:
            return BiRat(self.num * ma + other.num * mb, self.den, lo, self.names)
        return BiRat(self.num * other.den * ma + other.num * self.den * mb,
                     self.den * other.den, lo, self.names)

    __radd__ = __add__

    def __neg__(self) -> "BiRat":
        return BiRat(-self.num, self.den, self.mono, self.names, canonical=True)

    def __sub__(self, other) -> "BiRat":
        return self + (-self.coerce(other))

    def __rsub__(self, other) -> "BiRat":
        return self.coerce(other) + (-self)

    def __mul__(self, other) -> "BiRat":
        other = self.coerce(other)
        if self.is_zero() or other.is_zero():
            return BiRat.const(0, self.names)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_constant():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_constant():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        num, den = n1 * n2, d1 * d2
        lc = _lead_coeff(den)
        if lc != 1:
            num, den = num / lc, den / lc
        mono = tuple(a + b for a, b in zip(self.mono, other.mono))
        return BiRat(num, den, mono, self.names, canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "BiRat":
        if self.is_zero():
            raise ZeroDivision()
        return BiRat(self.den, self.num, tuple(-m for m in self.mono), self.names)

    def __truediv__(self, other) -> "BiRat":
        return self * self.coerce(other).inverse()

    def __rtruediv__(self, other) -> "BiRat":
        return self.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "BiRat":
        if k < 0:
            return self.inverse() ** (-k)
        out = BiRat.const(1, self.names)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self.mono == other.mono and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.names, self.mono, str(self.num), str(self.den)))

    # structure ---------------------------------------------------------------
    def _terms(self, p, shift) -> dict[tuple[int, ...], Fraction]:
        return {
            tuple(e + m for e, m in zip(exps, shift)): _frac(c)
            for exps, c in zip(p.monoms(), p.coeffs())
        }

    def num_terms(self) -> dict[tuple[int, ...], Fraction]:
        return self._terms(self.num, self.mono)

    def den_terms(self) -> dict[tuple[int, ...], Fraction]:
        return self._terms(self.den, (0,) * len(self.names))

    def degree_in(self, name: str) -> tuple[int, int]:
        """(degree of numerator, degree of denominator) in a variable, mono included."""
        i = self.names.index(name)
        dn = max((e[i] for e in self.num.monoms()), default=0) + self.mono[i]
        dd = max((e[i] for e in self.den.monoms()), default=0)
        return dn, dd

    def is_free_of(self, name: str) -> bool:
        i = self.names.index(name)
        return self.mono[i] == 0 and all(e[i] == 0 for e in self.num.monoms()) and all(
            e[i] == 0 for e in self.den.monoms())

    def den_free_of(self, name: str) -> bool:
        i = self.names.index(name)
        return all(e[i] == 0 for e in self.den.monoms())

    def z_coefficients(self) -> dict[int, RatFunc]:
        """Coefficients in Q(s) of a Laurent polynomial in z (z-free denominator)."""
        if self.names != ZS:
            raise TypeError("z_coefficients needs the (z, s) variable set")
        if not self.den_free_of("z"):
            raise ValueError("not a Laurent polynomial in z")
        den = RatFunc(_poly_in_s(self.den_terms()))
        grouped: dict[int, dict[int, Fraction]] = {}
        for (ez, es), c in self.num_terms().items():
            grouped.setdefault(ez, {})[es] = c
        return {
            ez: RatFunc.from_laurent(LaurentPoly.from_terms(t)) / den
            for ez, t in sorted(grouped.items())
        }

    def to_ratfunc(self) -> RatFunc:
        others = [n for n in self.names if n != "s"]
        for n in others:
            if not self.is_free_of(n):
                raise ValueError(f"value depends on {n}")
        si = self.names.index("s")
        num = LaurentPoly.from_terms({e[si]: c for e, c in self.num_terms().items()})
        den = LaurentPoly.from_terms({e[si]: c for e, c in self.den_terms().items()})
        return RatFunc.from_laurent(num) / RatFunc.from_laurent(den)

    def subs(self, values: dict[str, "BiRat"], names: tuple[str, ...] | None = None) -> "BiRat":
        """Substitute variables by BiRat values over the variable set ``names``."""
        names = names or self.names
        gens = [
            values[n] if n in values else BiRat.var(n, 1, names)
            for n in self.names
        ]

        def ev(terms):
            out = BiRat.const(0, names)
            for exps, c in terms.items():
                t = BiRat.const(c, names)
                for g, e in zip(gens, exps):
                    if e:
                        t = t * g ** e
                out = out + t
            return out

        return ev(self.num_terms()) / ev(self.den_terms())

    def at_z(self, value: RatFunc) -> RatFunc:
        """Specialize z to an element of Q(s)."""
        if self.names != ZS:
            raise TypeError("at_z needs the (z, s) variable set")

        def ev(terms):
            grouped: dict[int, dict[int, Fraction]] = {}
            for (ez, es), c in terms.items():
                grouped.setdefault(ez, {})[es] = c
            out = ZERO
            for ez, t in grouped.items():
                out = out + RatFunc.from_laurent(LaurentPoly.from_terms(t)) * value ** ez
            return out

        den = ev(self.den_terms())
        if den.is_zero():
            raise ZeroDivision()
        return ev(self.num_terms()) / den

    def __str__(self) -> str:
        names = self.names
        si = names.index("s")

        def key(item):
            exps = item[0]
            return tuple(-e for i, e in enumerate(exps) if i != si) + (exps[si],)

        def fmt(terms):
            items = sorted(terms.items(), key=key)
            return _join_terms([(c, _display(names, e)) for e, c in items]), len(items)

        num, nn = fmt(self.num_terms())
        if self.den.is_one():
            return num
        den, nd = fmt(self.den_terms())
        return f"{_wrap(num, nn)}/{_wrap(den, nd)}"

    __repr__ = __str__


def _display(names: tuple[str, ...], exps: tuple[int, ...]) -> str:
    # lex order puts z first internally; printing puts s first within a term
    order = sorted(range(len(names)), key=lambda i: (names[i] != "s", i))
    return _mono_str(tuple(names[i] for i in order), tuple(exps[i] for i in order))


def _poly_in_s(terms: dict[tuple[int, int], Fraction]) -> flint.fmpq_poly:
    lp = LaurentPoly.from_terms({es: c for (_, es), c in terms.items()})
    if lp.shift < 0:
        raise ValueError("negative exponent")
    return lp.poly.left_shift(lp.shift)


def _strip_mono(ctx, p):
    monoms = p.monoms()
    nv = len(monoms[0])
    lo = tuple(min(m[i] for m in monoms) for i in range(nv))
    if any(lo):
        p = ctx.from_dict({tuple(a - b for a, b in zip(m, lo)): c
                           for m, c in zip(monoms, p.coeffs())})
    return p, lo


def _lead_coeff(p):
    return p.coeffs()[0]


def birat_z(power: int = 1) -> BiRat:
    return BiRat.var("z", power)


# --------------------------------------------------------------------------
# z-polynomials over Q(s): unit stripping and monomial roots

def strip_units(p: BiRat) -> BiRat:
    """Representative of p modulo units c*z^n: lowest z-degree 0, monic in z."""
    if p.is_zero():
        raise ValueError("strip_units of zero")
    coeffs = p.z_coefficients()
    lo = min(coeffs)
    hi = max(coeffs)
    lead = coeffs[hi]
    return BiRat.from_zpoly({d - lo: c / lead for d, c in coeffs.items()})


def unit_ratio(p: BiRat, q: BiRat) -> tuple[RatFunc, int] | None:
    """(c, n) with p = c * z^n * q if p/q is a unit of Q(s)[z, 1/z], else None."""
    r = p / q
    zi = r.names.index("z")
    if any(e[zi] for e in r.num.monoms()) or any(e[zi] for e in r.den.monoms()):
        return None
    n = r.mono[zi]
    return (r / BiRat.var("z", n, r.names)).to_ratfunc(), n


def zpoly_eval(coeffs: dict[int, RatFunc], value: RatFunc) -> RatFunc:
    out = ZERO
    for d, c in coeffs.items():
        out = out + c * value ** d
    return out


def zpoly_divide_linear(coeffs: dict[int, RatFunc], root: RatFunc) -> dict[int, RatFunc]:
    """Quotient of a polynomial in z (non-negative degrees) by (z - root); exact."""
    deg = max(coeffs)
    out: dict[int, RatFunc] = {}
    carry = ZERO
    for d in range(deg, 0, -1):
        carry = coeffs.get(d, ZERO) + carry * root if d != deg else coeffs.get(d, ZERO)
        out[d - 1] = carry
    rem = coeffs.get(0, ZERO) + carry * root
    if not rem.is_zero():
        raise ArithmeticError("root does not divide polynomial")
    return {d: c for d, c in out.items() if not c.is_zero()}


def monomial_roots(p: BiRat, max_exp: int) -> tuple[list[tuple[int, int, int]], dict[int, RatFunc]]:
    """Roots of the form sign*s^m (|m| <= max_exp) with multiplicity.

    Returns ([(sign, m, multiplicity)], cofactor coefficients).
    """
    coeffs = strip_units(p).z_coefficients()
    roots = []
    for m in range(-max_exp, max_exp + 1):
        for sign in (1, -1):
            r = RatFunc.monomial(m, sign)
            mult = 0
            while max(coeffs) > 0 and zpoly_eval(coeffs, r).is_zero():
                coeffs = zpoly_divide_linear(coeffs, r)
                mult += 1
            if mult:
                roots.append((sign, m, mult))
    return roots, coeffs


def factored_str(roots: list[tuple[int, int, int]]) -> str:
    """Canonical product form, e.g. "(z - s^2)*(z - s^6)"."""
    if not roots:
        return "1"
    parts = []
    for sign, m, mult in sorted(roots, key=lambda r: (r[1], -r[0])):
        root = RatFunc.monomial(m, sign)
        term = str(BiRat.var("z") - BiRat.from_ratfunc(root))
        parts.extend([f"({term})"] * mult)
    return "*".join(parts)


# --------------------------------------------------------------------------
# truncated power series in z

class PowerSeries:
    """s^prefactor * sum_{k<=order} coeffs[k] z^k with a rational prefactor exponent."""

    __slots__ = ("coeffs", "order", "prefactor")

    def __init__(self, coeffs: list[RatFunc], order: int, prefactor: Fraction = Fraction(0)):
        coeffs = list(coeffs[: order + 1])
        coeffs += [ZERO] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order
        self.prefactor = Fraction(prefactor)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([ONE], order)

    @classmethod
    def from_zpoly(cls, coeffs: dict[int, RatFunc], order: int) -> "PowerSeries":
        if coeffs and min(coeffs) < 0:
            raise ValueError("negative z-degree")
        return cls([coeffs.get(d, ZERO) for d in range(order + 1)], order)

    def _check(self, other: "PowerSeries") -> int:
        return min(self.order, other.order)

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, RatFunc):
            return PowerSeries([c * other for c in self.coeffs], self.order, self.prefactor)
        m = self._check(other)
        out = [ZERO] * (m + 1)
        for i in range(m + 1):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(m + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return PowerSeries(out, m, self.prefactor + other.prefactor)

    __rmul__ = __mul__

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        if self.prefactor != other.prefactor:
            raise ValueError("prefactors differ")
        m = self._check(other)
        return PowerSeries([a + b for a, b in zip(self.coeffs[: m + 1], other.coeffs[: m + 1])],
                           m, self.prefactor)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + other * RatFunc.const(-1)

    def inverse(self) -> "PowerSeries":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise ZeroDivision()
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = ZERO
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append(-acc * inv0)
        return PowerSeries(out, self.order, -self.prefactor)

    def __truediv__(self, other: "PowerSeries") -> "PowerSeries":
        return self * other.inverse()

    def scale_z(self, c: RatFunc) -> "PowerSeries":
        """f(c z)."""
        out, p = [], ONE
        for a in self.coeffs:
            out.append(a * p)
            p = p * c
        return PowerSeries(out, self.order, self.prefactor)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PowerSeries)
            and self.order == other.order
            and self.prefactor == other.prefactor
            and self.coeffs == other.coeffs
        )

    def __str__(self) -> str:
        body = " + ".join(f"({c})*z^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero())
        return f"s^({self.prefactor}) * [{body or '0'}] + O(z^{self.order + 1})"

    __repr__ = __str__


def qpoch(a: RatFunc, p: RatFunc, order: int) -> PowerSeries:
    """(a z; p)_inf truncated at z^order, from f(z) = (1 - a z) f(p z)."""
    out = [ONE]
    for k in range(1, order + 1):
        out.append(-a * p ** (k - 1) * out[-1] / (ONE - p ** k))
    return PowerSeries(out, order)


def pochhammer_series(m: int, sign_base: bool, step: int, order: int) -> PowerSeries:
    """((+-s)^m z; s^step)_inf truncated at z^order; sign_base selects base -s."""
    if step <= 0 or order < 0:
        raise ValueError("need step > 0 and order >= 0")
    a = neg_s_pow(m) if sign_base else s_pow(m)
    return qpoch(a, s_pow(step), order)


# --------------------------------------------------------------------------
# parsing of the canonical string form

def parse_scalar(text: str, names: tuple[str, ...] = ZS):
    """Inverse of str() for RatFunc and BiRat values."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    uses_z = any(isinstance(n, ast.Name) and n.id != "s" for n in ast.walk(tree))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return BiRat.const(node.value, names) if uses_z else RatFunc.const(node.value)
        if isinstance(node, ast.Name):
            if node.id == "s":
                return BiRat.var("s", 1, names) if uses_z else S
            if node.id in names:
                return BiRat.var(node.id, 1, names)
            raise ValueError(f"unknown symbol {node.id}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError("non-integer exponent")
                return ev(node.left) ** (sign * exp.value)
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)
