"""Exact rational arithmetic backend.

Every number in this package is an exact rational; no floating point is
used anywhere.  gmpy2's ``mpq`` is the preferred carrier (it is
semantically interchangeable with :class:`fractions.Fraction` and roughly
an order of magnitude faster); when gmpy2 is unavailable the standard
library Fraction is used instead.  Both types store lowest-terms values
with a positive denominator, hash identically and compare exactly, so the
choice of backend never changes any computed result.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence, Union

try:
    from gmpy2 import mpq as _backend_rat

    GMPY2_AVAILABLE = True
except ImportError:  # pragma: no cover - gmpy2 is an install-time dependency
    _backend_rat = Fraction
    GMPY2_AVAILABLE = False

# Public alias for annotations; values may be Fraction or gmpy2.mpq.
Rat = Union[Fraction, int]

RatLike = Union[int, str, float, Fraction, "Rat"]

ZERO: Rat = _backend_rat(0)
ONE: Rat = _backend_rat(1)


def rat(value: RatLike, denominator: RatLike | None = None) -> Rat:
    """Build an exact rational from ints, strings like ``"2/3"``, or rationals.

    Floats are rejected: silently converting a float would smuggle rounding
    error into an exact pipeline.
    """
    if isinstance(value, float) or isinstance(denominator, float):
        raise TypeError("floats are not accepted; pass ints, strings or rationals")
    if denominator is not None:
        return _backend_rat(value) / _backend_rat(denominator)
    if isinstance(value, str):
        return _parse(value)
    return _backend_rat(value)


def _parse(text: str) -> Rat:
    body = text.strip()
    if "/" in body:
        num, _, den = body.partition("/")
        return _backend_rat(int(num), int(den))
    return _backend_rat(int(body))


def rat_str(value: Rat) -> str:
    """Render as ``p/q``, or plain ``p`` for integers."""
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def as_fraction(value: Rat) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def scale_to_integers(values: Sequence[Rat]) -> tuple[int, ...]:
    """Scale a rational vector by the unique positive factor giving coprime ints.

    The all-zero vector maps to itself.  This is the canonical representative
    of a vector under positive rescaling.
    """
    den_lcm = 1
    for v in values:
        d = int(v.denominator)
        den_lcm = den_lcm // gcd(den_lcm, d) * d
    ints = [int(v.numerator) * (den_lcm // int(v.denominator)) for v in values]
    g = 0
    for n in ints:
        g = gcd(g, n)
    if g > 1:
        ints = [n // g for n in ints]
    return tuple(ints)
