"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational, Real

import mpmath


def as_fraction(x) -> Fraction:
    """Exact rational for ints, Fractions, ``"p/q"`` strings and floats.

    Floats go through their shortest repr, so ``0.3`` becomes ``3/10``
    rather than the nearest binary fraction.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite number: {x}")
        return Fraction(repr(x))
    if isinstance(x, Real):
        return Fraction(str(x))
    return Fraction(str(x))


def floor_product(a, n: int) -> int:
    return math.floor(as_fraction(a) * n)


def strict_size_cap(alpha, n: int) -> int:
    """Smallest integer K with ``k < alpha*n  <=>  k < K`` for integers k."""
    return math.ceil(as_fraction(alpha) * n)


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def log_fraction(x: Fraction, dps: int = 40) -> mpmath.mpf:
    """Natural log of a positive rational without going through a float."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of non-positive value")
    with mpmath.workdps(dps):
        return mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator))


def leq_rational_power(value: Fraction, base: Fraction, exponent: Fraction) -> bool:
    """Exact test of ``value <= base ** exponent`` for ``value >= 0``, ``base > 0``."""
    value, base, exponent = Fraction(value), Fraction(base), as_fraction(exponent)
    if value < 0 or base <= 0:
        raise ValueError("need value >= 0 and base > 0")
    if value == 0:
        return True
    p, d = exponent.numerator, exponent.denominator
    # value <= base^(p/d)  <=>  value^d <= base^p
    return value**d <= base**p
