"""Exact extended values.

Finite values are plain ``int`` or ``fractions.Fraction``; the two infinities
are the singletons :data:`INF` and :data:`NEG_INF`.  They interoperate with
rationals through Python's reflected operators, so ``Fraction(3) < INF`` and
``INF + 2`` work without wrapping.

:class:`DualValue` adds one infinitesimal component and is used by the
tie-breaking perturbation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import UndefinedArithmetic, UsageError


class Infinity:
    __slots__ = ("sign",)
    _instances: dict[int, "Infinity"] = {}

    def __new__(cls, sign: int) -> "Infinity":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        inst = cls._instances.get(sign)
        if inst is None:
            inst = super().__new__(cls)
            object.__setattr__(inst, "sign", sign)
            cls._instances[sign] = inst
        return inst

    def __reduce__(self):
        return (Infinity, (self.sign,))

    def __setattr__(self, name, value):
        raise AttributeError("Infinity is immutable")

    def __repr__(self) -> str:
        return "INF" if self.sign > 0 else "NEG_INF"

    def __str__(self) -> str:
        return "+inf" if self.sign > 0 else "-inf"

    def __hash__(self) -> int:
        return hash(("Infinity", self.sign))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DualValue):
            return NotImplemented
        return other is self

    def __lt__(self, other):
        if isinstance(other, DualValue):
            return NotImplemented
        return self.sign < 0 and other is not self

    def __gt__(self, other):
        if isinstance(other, DualValue):
            return NotImplemented
        return self.sign > 0 and other is not self

    def __le__(self, other):
        if isinstance(other, DualValue):
            return NotImplemented
        return self.sign < 0 or other is self

    def __ge__(self, other):
        if isinstance(other, DualValue):
            return NotImplemented
        return self.sign > 0 or other is self

    def __neg__(self) -> "Infinity":
        return Infinity(-self.sign)

    def __pos__(self) -> "Infinity":
        return self

    def __add__(self, other):
        if isinstance(other, DualValue):
            return NotImplemented
        if isinstance(other, Infinity):
            if other.sign != self.sign:
                raise UndefinedArithmetic("(+inf) + (-inf) is undefined")
            return self
        if isinstance(other, Rational):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DualValue):
            return NotImplemented
        if isinstance(other, Infinity):
            return self + (-other)
        if isinstance(other, Rational):
            return self
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return -self
        return NotImplemented

    def __mul__(self, other):
        # 0 * inf = 0: a zero step count contributes nothing to a path length.
        if not isinstance(other, Rational):
            return NotImplemented
        if other == 0:
            return 0
        return self if other > 0 else -self

    __rmul__ = __mul__


INF = Infinity(1)
NEG_INF = Infinity(-1)

ExtValue = Union[int, Fraction, Infinity]


def is_infinite(v) -> bool:
    if isinstance(v, DualValue):
        return isinstance(v.real, Infinity)
    return isinstance(v, Infinity)


def real_part(v):
    return v.real if isinstance(v, DualValue) else v


def normalize(q):
    """Collapse integral Fractions to ``int``; leave everything else alone."""
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_value(text: str) -> ExtValue:
    """Parse ``"p"``, ``"p/q"``, ``"+inf"`` or ``"-inf"`` (no decimals)."""
    token = text.strip()
    if token in ("+inf", "inf"):
        return INF
    if token == "-inf":
        return NEG_INF
    if not _RATIONAL_RE.match(token):
        raise UsageError(f"not an exact rational: {text!r}")
    if "/" in token and int(token.split("/")[1]) == 0:
        raise UsageError(f"zero denominator: {text!r}")
    return normalize(Fraction(token))


def parse_number(text: str) -> ExtValue:
    """Like :func:`parse_value` but also accepts decimals such as ``0.25``.

    Used for command-line parameters; decimal literals are converted exactly.
    """
    token = text.strip()
    try:
        return parse_value(token)
    except UsageError:
        pass
    try:
        return normalize(Fraction(token))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def format_value(v) -> str:
    if isinstance(v, Infinity):
        return str(v)
    if isinstance(v, DualValue):
        return str(v)
    q = Fraction(v)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _key(v):
    if isinstance(v, DualValue):
        return (v.real, v.eps)
    return (v, 0)


@dataclass(frozen=True, slots=True)
class DualValue:
    """``real + eps * ε`` for a positive infinitesimal ε.

    Ordered lexicographically (real part first); arithmetic is componentwise.
    """

    real: ExtValue
    eps: Fraction | int = 0

    def __str__(self) -> str:
        if self.eps == 0:
            return format_value(self.real)
        sign = "+" if self.eps > 0 else "-"
        return f"{format_value(self.real)}{sign}{format_value(abs(self.eps))}eps"

    def __eq__(self, other) -> bool:
        if not isinstance(other, (DualValue, Rational, Infinity)):
            return NotImplemented
        return _key(self) == _key(other)

    def __hash__(self) -> int:
        if self.eps == 0:
            return hash(self.real)
        return hash((self.real, self.eps))

    def __lt__(self, other):
        return _key(self) < _key(other)

    def __le__(self, other):
        return _key(self) <= _key(other)

    def __gt__(self, other):
        return _key(self) > _key(other)

    def __ge__(self, other):
        return _key(self) >= _key(other)

    def __neg__(self) -> "DualValue":
        return DualValue(-self.real, -self.eps)

    def __add__(self, other) -> "DualValue":
        if not isinstance(other, (DualValue, Rational, Infinity)):
            return NotImplemented
        r, e = _key(other)
        return DualValue(self.real + r, self.eps + e)

    __radd__ = __add__

    def __sub__(self, other) -> "DualValue":
        if not isinstance(other, (DualValue, Rational, Infinity)):
            return NotImplemented
        r, e = _key(other)
        return DualValue(self.real - r, self.eps - e)

    def __rsub__(self, other) -> "DualValue":
        if not isinstance(other, (Rational, Infinity)):
            return NotImplemented
        return DualValue(other - self.real, -self.eps)
