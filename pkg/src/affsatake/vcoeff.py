"""
Exact coefficients in Q(v): Laurent polynomials with a fast path, and
reduced ratios of integer polynomials in general.

A Laurent polynomial is stored as ``(low, coeffs)`` meaning
``sum coeffs[i] * v**(low + i)`` with nonzero end coefficients.  A general
coefficient is ``num / den`` with ``num`` Laurent, ``den`` an integer
polynomial with nonzero constant term and positive leading coefficient,
``gcd(num, den) = 1`` and coprime contents.  ``den == (1,)`` marks the
v-finite (Laurent) subring.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Sequence

# ---------------------------------------------------------------------------
# plain integer polynomial helpers (ascending coefficient tuples)


def _strip(c: Sequence[int]):
    lo = 0
    n = len(c)
    while lo < n and c[lo] == 0:
        lo += 1
    hi = n
    while hi > lo and c[hi - 1] == 0:
        hi -= 1
    return lo, tuple(c[lo:hi])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return out


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _content(a) -> int:
    g = 0
    for x in a:
        g = gcd(g, x)
    return g


def _pdivmod_q(a, b):
    """Division over Q; returns (quotient, remainder) as Fraction lists."""
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _primitive(a):
    """Clear denominators, divide by content, make leading coefficient positive."""
    den = 1
    for x in a:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    while ints and ints[-1] == 0:
        ints.pop()
    g = _content(ints) or 1
    ints = [x // g for x in ints]
    if ints and ints[-1] < 0:
        ints = [-x for x in ints]
    return ints


def pgcd(a, b):
    """Primitive gcd of two integer polynomials (ascending tuples)."""
    a, b = list(a), list(b)
    while b and any(b):
        _, r = _pdivmod_q(a, b)
        a, b = b, r
    return _primitive(a) if a else [1]


def _pexact_div(a, b):
    q, r = _pdivmod_q(a, b)
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    out = []
    for x in q:
        if x.denominator != 1:
            raise ArithmeticError("non-integral polynomial quotient")
        out.append(int(x))
    while out and out[-1] == 0:
        out.pop()
    return out


# ---------------------------------------------------------------------------


class VCoeff:
    """Element of Q(v) in canonical reduced form."""

    __slots__ = ("low", "num", "den", "_h")

    def __init__(self, low: int = 0, num: Sequence[int] = (), den: Sequence[int] = (1,),
                 _normal: bool = False):
        if _normal:
            self.low, self.num, self.den = low, tuple(num), tuple(den)
        else:
            self.low, self.num, self.den = _normalize(low, list(num), list(den))
        self._h = None

    # -- constructors ------------------------------------------------------
    @staticmethod
    def const(n) -> "VCoeff":
        if isinstance(n, VCoeff):
            return n
        if isinstance(n, Fraction) and n.denominator != 1:
            return VCoeff(0, (n.numerator,), (n.denominator,))
        n = int(n)
        return VCoeff(0, (n,) if n else (), (1,), _normal=True)

    @staticmethod
    def monomial(k: int, c: int = 1) -> "VCoeff":
        return VCoeff(k if c else 0, (c,) if c else (), (1,), _normal=True)

    @staticmethod
    def laurent(low: int, coeffs: Sequence[int]) -> "VCoeff":
        lo, c = _strip(coeffs)
        if not c:
            return ZERO
        return VCoeff(low + lo, c, (1,), _normal=True)

    @staticmethod
    def from_dict(d: dict) -> "VCoeff":
        if not d:
            return ZERO
        lo, hi = min(d), max(d)
        return VCoeff.laurent(lo, [d.get(k, 0) for k in range(lo, hi + 1)])

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_laurent(self) -> bool:
        """The v-finite test: denominator is a constant times a power of v."""
        return len(self.den) == 1

    def is_one(self) -> bool:
        return self.low == 0 and self.num == (1,) and self.den == (1,)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, VCoeff):
            if isinstance(other, (int, Fraction)):
                other = VCoeff.const(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den and (
            self.low == other.low or not self.num)

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.low, self.num, self.den))
        return self._h

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        return VCoeff(self.low, tuple(-x for x in self.num), self.den, _normal=True)

    def __add__(self, other):
        if not isinstance(other, VCoeff):
            other = VCoeff.const(other)
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == (1,) and other.den == (1,):
            lo = min(self.low, other.low)
            out = [0] * (max(self.low + len(self.num), other.low + len(other.num)) - lo)
            o = self.low - lo
            for i, x in enumerate(self.num):
                out[o + i] += x
            o = other.low - lo
            for i, x in enumerate(other.num):
                out[o + i] += x
            return VCoeff.laurent(lo, out)
        lo = min(self.low, other.low)
        a = [0] * (self.low - lo) + list(self.num)
        b = [0] * (other.low - lo) + list(other.num)
        if self.den == other.den:
            return VCoeff(lo, _padd(a, b), self.den)
        return VCoeff(lo, _padd(_pmul(a, other.den), _pmul(b, self.den)),
                      _pmul(self.den, other.den))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, VCoeff):
            other = VCoeff.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return VCoeff.const(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, VCoeff):
            if isinstance(other, int):
                if other == 0:
                    return ZERO
                if self.den == (1,):
                    return VCoeff(self.low, tuple(other * x for x in self.num), (1,),
                                  _normal=True)
            other = VCoeff.const(other)
        if not self.num or not other.num:
            return ZERO
        if self.den == (1,) and other.den == (1,):
            return VCoeff(self.low + other.low, _pmul(self.num, other.num), (1,),
                          _normal=True)
        return VCoeff(self.low + other.low, _pmul(self.num, other.num),
                      _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "VCoeff":
        if not self.num:
            raise ZeroDivisionError("inverse of zero coefficient")
        return VCoeff(-self.low, self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, VCoeff):
            other = VCoeff.const(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return VCoeff.const(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "VCoeff":
        """Multiply by ``v**k``."""
        if not self.num:
            return self
        return VCoeff(self.low + k, self.num, self.den, _normal=True)

    # -- v-degree data -----------------------------------------------------
    def laurent_terms(self) -> dict:
        if len(self.den) != 1:
            raise ValueError("coefficient is not v-finite")
        d = self.den[0]
        if d == 1:
            return {self.low + i: c for i, c in enumerate(self.num) if c}
        return {self.low + i: Fraction(c, d) for i, c in enumerate(self.num) if c}

    def min_degree(self) -> int | None:
        """Order of vanishing at ``v = 0``."""
        if not self.num:
            return None
        return self.low

    def max_degree(self) -> int | None:
        if not self.num:
            return None
        if len(self.den) != 1:
            return None
        return self.low + len(self.num) - 1

    def expand(self, vmax: int) -> "VCoeff":
        """Laurent expansion at ``v = 0`` keeping degrees ``<= vmax``."""
        if len(self.den) == 1:
            return self.truncate(vmax)
        n = vmax - self.low + 1
        if n <= 0:
            return ZERO
        num = list(self.num) + [0] * max(0, n - len(self.num))
        den = self.den
        d0 = den[0]
        out = []
        rem = [Fraction(x) for x in num[:n]]
        for i in range(n):
            c = rem[i] / d0
            out.append(c)
            if c:
                for j in range(1, len(den)):
                    if i + j < n:
                        rem[i + j] -= c * den[j]
        if any(x.denominator != 1 for x in out):
            dd = 1
            for x in out:
                dd = dd * x.denominator // gcd(dd, x.denominator)
            return VCoeff(self.low, [int(x * dd) for x in out], [dd])
        return VCoeff.laurent(self.low, [int(x) for x in out])

    def truncate(self, vmax: int, vmin: int | None = None) -> "VCoeff":
        if len(self.den) != 1:
            return self.expand(vmax).truncate(vmax, vmin)
        d = {self.low + i: c for i, c in enumerate(self.num)
             if c and self.low + i <= vmax and (vmin is None or self.low + i >= vmin)}
        return VCoeff.from_dict(d) / self.den[0] if self.den[0] != 1 else VCoeff.from_dict(d)

    # -- evaluation --------------------------------------------------------
    def at_v2(self, t: Fraction) -> Fraction:
        """Value at ``v**2 = t``; only even-degree Laurent coefficients allowed."""
        if len(self.den) != 1:
            raise ValueError("coefficient is not v-finite")
        t = Fraction(t)
        total = Fraction(0)
        for k, c in self.laurent_terms().items():
            if k % 2:
                raise ValueError("coefficient is not a function of v^2")
            total += c * t ** (k // 2)
        return total

    def at(self, v: Fraction) -> Fraction:
        v = Fraction(v)
        num = sum(Fraction(c) * v ** (self.low + i) for i, c in enumerate(self.num))
        den = sum(Fraction(c) * v ** i for i, c in enumerate(self.den))
        return num / den

    # -- printing ----------------------------------------------------------
    def __repr__(self):
        if self.den == (1,):
            return format_laurent(self.low, self.num)
        return f"({format_laurent(self.low, self.num)})/({format_laurent(0, self.den)})"

    def to_json(self) -> dict:
        return {"num": format_laurent(self.low, self.num),
                "den": format_laurent(0, self.den)}

    @staticmethod
    def from_json(obj) -> "VCoeff":
        if isinstance(obj, str):
            return parse_laurent(obj)
        return parse_laurent(obj["num"]) / parse_laurent(obj.get("den", "1"))


def _normalize(low: int, num: list, den: list):
    lo, n = _strip(num)
    if not n:
        return 0, (), (1,)
    low += lo
    dlo, d = _strip(den)
    if not d:
        raise ZeroDivisionError("zero denominator")
    low -= dlo
    n, d = list(n), list(d)
    if len(d) > 1:
        g = pgcd(n, d)
        if len(g) > 1:
            n = _pexact_div(n, g)
            d = _pexact_div(d, g)
    cg = gcd(_content(n), _content(d))
    if cg > 1:
        n = [x // cg for x in n]
        d = [x // cg for x in d]
    if d[-1] < 0:
        n = [-x for x in n]
        d = [-x for x in d]
    return low, tuple(n), tuple(d)


def format_laurent(low: int, coeffs: Sequence[int]) -> str:
    """Canonical ascending-degree string, e.g. ``-v^-2 + 1 + 3*v``."""
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        k = low + i
        if k == 0:
            mono = str(abs(c))
        else:
            p = "v" if k == 1 else f"v^{k}"
            mono = p if abs(c) == 1 else f"{abs(c)}*{p}"
        if not parts:
            parts.append(("-" if c < 0 else "") + mono)
        else:
            parts.append((" - " if c < 0 else " + ") + mono)
    return "".join(parts) if parts else "0"


_TERM = re.compile(r"\s*([+-]?)\s*(\d+)?\s*(\*?\s*v(?:\^\(?(-?\d+)\)?)?)?\s*")


def parse_laurent(s: str) -> VCoeff:
    """Parse the output of :func:`format_laurent` (and mild variants)."""
    s = s.strip()
    if not s:
        raise ValueError("empty polynomial string")
    pos = 0
    terms: dict = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at position {pos}: {s!r}")
        sign, coef, vpart, exp = m.groups()
        if not sign and not first:
            raise ValueError(f"missing operator at position {pos}: {s!r}")
        if coef is None and vpart is None:
            raise ValueError(f"empty term at position {pos}: {s!r}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        k = 0 if vpart is None else (int(exp) if exp is not None else 1)
        terms[k] = terms.get(k, 0) + c
        pos = m.end()
        first = False
    return VCoeff.from_dict({k: c for k, c in terms.items() if c})


ZERO = VCoeff(0, (), (1,), _normal=True)
ONE = VCoeff(0, (1,), (1,), _normal=True)
V = VCoeff(1, (1,), (1,), _normal=True)
VINV = VCoeff(-1, (1,), (1,), _normal=True)
V2 = VCoeff(2, (1,), (1,), _normal=True)


def vpow(k: int) -> VCoeff:
    return VCoeff.monomial(k)


def ratio(num: dict, den: dict) -> VCoeff:
    """``num / den`` from ``{degree: coeff}`` dictionaries."""
    return VCoeff.from_dict(num) / VCoeff.from_dict(den)
