"""Gaussian-rational scalars and complex literal parsing.

Exact mode works over Q(i): every value is ``re + im*i`` with rational
``re`` and ``im``. Float mode uses plain Python ``complex``. Mixing the two
in one arithmetic expression raises ``TypeError``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "GaussRational",
    "ModeError",
    "as_exact",
    "as_float",
    "is_exact",
    "parse_complex",
    "scalar_abs2",
    "scalar_conj",
]


class ModeError(TypeError):
    """Exact and floating-point scalars were combined."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    raise ModeError(f"cannot use {type(x).__name__} as an exact rational")


class GaussRational:
    """An element ``re + im*i`` of the Gaussian rationals.

    Instances are immutable and hashable. ``int`` and ``Fraction`` operands
    are promoted; ``float`` and ``complex`` operands are rejected.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.im == 0:
            return GaussRational(self.re * o.re, self.im * o.re)
        if self.im == 0:
            return GaussRational(self.re * o.re, self.re * o.im)
        return GaussRational(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        n = self * o.conjugate()
        return GaussRational(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussRational(1) / (self ** (-n))
        out = GaussRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        return format_complex(self)


def is_exact(x) -> bool:
    return isinstance(x, (GaussRational, Fraction)) or (
        isinstance(x, int) and not isinstance(x, bool))


def as_exact(x) -> GaussRational:
    """Promote an int, Fraction or GaussRational to ``GaussRational``."""
    if isinstance(x, GaussRational):
        return x
    return GaussRational(_frac(x))


def as_float(x) -> complex:
    return complex(x)


def scalar_conj(x):
    return x.conjugate()


def scalar_abs2(x):
    """``|x|**2``; exact for exact input."""
    if isinstance(x, GaussRational):
        return x.abs2()
    if is_exact(x):
        return Fraction(x) ** 2
    return abs(x) ** 2


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_complex(x) -> str:
    """Render a scalar in the literal grammar accepted by :func:`parse_complex`."""
    if isinstance(x, GaussRational):
        re_s, im = _fmt_rational(x.re), x.im
        if im == 0:
            return re_s
        im_abs = _fmt_rational(abs(im))
        im_s = "i" if abs(im) == 1 else f"{im_abs}i"
        if x.re == 0:
            return ("-" if im < 0 else "") + im_s
        return f"{re_s}{'-' if im < 0 else '+'}{im_s}"
    z = complex(x)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{'-' if z.imag < 0 else '+'}{abs(z.imag)!r}i"


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_LITERAL = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<isign>[+-])?(?P<im>{_NUM})?(?P<i>[ij]))?$"
)


def _parse_num(tok: str, exact: bool):
    if exact:
        if "/" in tok:
            num, den = tok.split("/")
            return Fraction(num) / Fraction(den)
        return Fraction(tok)
    if "/" in tok:
        num, den = tok.split("/")
        return float(num) / float(den)
    return float(tok)


def parse_complex(text: str, exact: bool = True):
    """Parse ``"RE"``, ``"RE+IMi"``, ``"RE-IMi"`` or ``"IMi"``.

    Components may be integers, decimals or rationals such as ``3/2``.
    Returns a ``GaussRational`` when ``exact`` is true, otherwise ``complex``.

    >>> parse_complex("1/2+1/2i")
    GaussRational(1/2+1/2i)
    >>> parse_complex("-1-i", exact=False)
    (-1-1j)
    """
    s = re.sub(r"\s*([+-])\s*", r"\1", text.strip())
    if any(ch.isspace() for ch in s):
        raise ValueError(f"malformed complex literal: {text!r}")
    m = _LITERAL.match(s)
    if not s or m is None or (m.group("re") is None and m.group("i") is None):
        raise ValueError(f"malformed complex literal: {text!r}")
    re_tok, im_tok, isign = m.group("re"), m.group("im"), m.group("isign")
    if m.group("i") and re_tok is not None and isign is None and im_tok is None:
        # "3i" is matched as re="3" followed by a bare i
        im_tok, re_tok, isign = re_tok.lstrip("+-"), None, "-" if re_tok.startswith("-") else "+"
    if m.group("i") and re_tok is not None and isign is None:
        raise ValueError(f"malformed complex literal: {text!r}")
    zero = Fraction(0) if exact else 0.0
    re_v = _parse_num(re_tok, exact) if re_tok is not None else zero
    if m.group("i"):
        im_v = _parse_num(im_tok, exact) if im_tok is not None else (Fraction(1) if exact else 1.0)
        if isign == "-":
            im_v = -im_v
    else:
        im_v = zero
    if exact:
        return GaussRational(re_v, im_v)
    return complex(re_v, im_v)
