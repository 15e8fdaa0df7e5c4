"""Extended-precision complex scalars.

Everything downstream computes with one of two scalar kinds:

* gmpy2 ``mpfr``/``mpc`` values at a configurable working precision
  (floating mode, default 128 bits), or
* ``fractions.Fraction`` (exact mode, terminating sums only).

gmpy2 wraps MPFR/MPC, so arithmetic is correctly rounded and bit-for-bit
deterministic across runs and platforms.  The helpers here centralize the
few operations where the two kinds need different treatment: construction,
square roots, magnitudes, and round-trip serialization.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpc, mpfr

__all__ = [
    "DEFAULT_PRECISION",
    "Precision",
    "Scalar",
    "ExactSqrtError",
    "set_precision",
    "get_precision",
    "precision",
    "make",
    "to_scalar",
    "inv_pair",
    "sqrt",
    "mag",
    "is_exact",
    "rel_close",
    "agreement_bits",
    "ulp_tol",
    "to_decimal",
    "from_decimal",
    "pi",
]

#: Working precision in bits.  53 is the minimum the contract admits.
Precision = int

DEFAULT_PRECISION: Precision = 128

#: Floating scalars are mpfr (real) or mpc (complex); exact work uses Fraction.
Scalar = Union[mpfr, mpc, Fraction, int]


class ExactSqrtError(ValueError):
    """Square root of a Fraction that is not a perfect rational square."""


def set_precision(bits: Precision) -> None:
    if bits < 53:
        raise ValueError(f"precision must be at least 53 bits, got {bits}")
    gmpy2.get_context().precision = bits


def get_precision() -> Precision:
    return gmpy2.get_context().precision


@contextlib.contextmanager
def precision(bits: Precision):
    """Temporarily switch working precision."""
    old = get_precision()
    set_precision(bits)
    try:
        yield
    finally:
        gmpy2.get_context().precision = old


def make(re, im=0) -> Scalar:
    """Build a floating scalar, real unless an imaginary part is given."""
    re = mpfr(re)
    im = mpfr(im)
    if not (gmpy2.is_finite(re) and gmpy2.is_finite(im)):
        raise ValueError("scalars must be built from finite parts")
    if im:
        return mpc(re, im)
    return re


def to_scalar(v) -> Scalar:
    """Coerce a sampled value (Fraction, int, complex, str) to floating form."""
    if isinstance(v, (mpfr, mpc)):
        return v
    if isinstance(v, (int, Fraction)):
        return mpfr(v)
    if isinstance(v, complex):
        return mpc(mpfr(v.real), mpfr(v.imag)) if v.imag else mpfr(v.real)
    if isinstance(v, tuple) and len(v) == 2:
        return make(v[0], v[1])
    return mpfr(v)


def is_exact(*values) -> bool:
    """True when every value is an int or Fraction (exact-rational mode)."""
    return all(isinstance(v, (int, Fraction)) for v in values)


def inv_pair(s: Scalar) -> tuple:
    """Return (s, 1/s); the pair feeds symbols evaluated at z and 1/z."""
    if mag(s) == 0:
        raise ZeroDivisionError("zero has no reciprocal pair")
    return s, 1 / s


def sqrt(v: Scalar) -> Scalar:
    """Principal square root.

    Nonnegative reals stay real; negative reals map to +i*sqrt(|v|).  For
    complex values the MPC principal branch (Re >= 0) is used, with the
    imag = -0.0 edge normalized off the lower side of the branch cut.
    Fractions must be perfect squares of nonnegative rationals.
    """
    if isinstance(v, (int, Fraction)):
        f = Fraction(v)
        if f < 0:
            raise ExactSqrtError(f"negative rational {f} has no exact real sqrt")
        rn, rd = math.isqrt(f.numerator), math.isqrt(f.denominator)
        if rn * rn != f.numerator or rd * rd != f.denominator:
            raise ExactSqrtError(f"{f} is not a perfect rational square")
        return Fraction(rn, rd)
    if isinstance(v, mpfr):
        if v >= 0:
            return gmpy2.sqrt(v)
        return mpc(0, gmpy2.sqrt(-v))
    z = mpc(v)
    if z.imag == 0:
        re = z.real
        return mpc(gmpy2.sqrt(re), 0) if re >= 0 else mpc(0, gmpy2.sqrt(-re))
    return gmpy2.sqrt(z)


def mag(v: Scalar):
    """|v| in the value's own arithmetic (Fraction in, Fraction out)."""
    return abs(v)


def ulp_tol(ulps: int = 4) -> mpfr:
    """ulps * 2^(1-prec), a relative tolerance at the working precision."""
    return mpfr(ulps) * mpfr(2) ** (1 - get_precision())


def rel_close(x: Scalar, y: Scalar, ulps: int = 4) -> bool:
    """Relative agreement within the given ulp budget (exact values: ==)."""
    if is_exact(x, y):
        return x == y
    xs, ys = to_scalar(x), to_scalar(y)
    scale = max(abs(xs), abs(ys))
    if scale == 0:
        return True
    return abs(xs - ys) <= ulp_tol(ulps) * scale


def agreement_bits(x: Scalar, y: Scalar) -> float:
    """Bits of relative agreement between two values (inf when equal)."""
    xs, ys = to_scalar(x), to_scalar(y)
    scale = max(abs(xs), abs(ys))
    if scale == 0:
        return float("inf")
    d = abs(xs - ys)
    if d == 0:
        return float("inf")
    return float(-gmpy2.log2(d / scale))


def to_decimal(v) -> str:
    """Round-trip decimal string for report serialization.

    gmpy2's str() prints exactly enough digits to reconstruct the value at
    its own precision, which is what byte-identical reports need.
    """
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, mpc):
        if v.imag == 0:
            return str(v.real)
        return str(v)
    return str(mpfr(v))


def from_decimal(s: str) -> Scalar:
    if "/" in s:
        return Fraction(s)
    if "j" in s:
        return mpc(s)
    if s.lstrip("+-").isdigit():
        return int(s)
    return mpfr(s)


def pi() -> mpfr:
    return gmpy2.const_pi()


set_precision(DEFAULT_PRECISION)
