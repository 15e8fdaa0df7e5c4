"""Polynomial families of the Askey-Wilson hierarchy, in both bases.

Every evaluator follows the explicit hypergeometric form of its family: a
prefactor times a terminating basic hypergeometric sum.  Three-term
recurrences are deliberately absent.  The package exists to certify the
explicit formulas, so the formulas are the single source of truth here and
the test suite checks them against direct rational summation instead.

Evaluation points are always supplied through z, with x = (z + 1/z)/2.
The base-inverted families restricted to the geometric lattice z = a q^(-m)
get their own handle (LatticePoint), because their lattice forms are
genuinely different expressions with better-behaved factorizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import scalar
from .qseries import (
    DEFAULT_POLICY,
    DomainError,
    PoleError,
    SeriesSpec,
    TruncationPolicy,
    as_qbase,
    full_accuracy,
    phi,
    poch_finite,
    poch_infinite,
    poch_multi,
)

__all__ = [
    "EvalPoint",
    "LatticePoint",
    "AWParams",
    "binom2",
    "askey_wilson",
    "cdq_hahn",
    "asc",
    "asc_alt",
    "cbq_hermite",
    "cbq_hermite_alt",
    "cq_hermite",
    "cdqi_hahn",
    "qi_asc",
    "qi_asc_lattice",
    "cbqi_hermite",
    "qi_asc_genfun_check",
]


def binom2(n: int) -> int:
    """n(n-1)/2, the exponent of q attached to an order-n term."""
    return n * (n - 1) // 2


def _lift(v):
    # Bare ints would fall back to Python float under negative powers;
    # promoting them to Fraction keeps exact inputs exact.
    return Fraction(v) if isinstance(v, int) else v


# Different parameter orderings of the same family must land on the same
# floating number, so every evaluator runs under the doubled-precision
# wrapper and rounds once on return.
_full_accuracy = full_accuracy


@dataclass(frozen=True)
class EvalPoint:
    """Evaluation point parametrized by nonzero z, standing for x = (z + 1/z)/2.

    z and 1/z describe the same x, and every family evaluated here is
    invariant under that swap.
    """

    z: object

    def __post_init__(self):
        if scalar.mag(self.z) == 0:
            raise DomainError("z = 0 does not define x = (z + 1/z)/2")
        object.__setattr__(self, "z", _lift(self.z))

    @property
    def x(self):
        return (self.z + 1 / self.z) / 2

    def inverse(self) -> "EvalPoint":
        return EvalPoint(1 / self.z)


@dataclass(frozen=True)
class LatticePoint:
    """Point z = a q^(-m) on the geometric lattice attached to the parameter a."""

    a: object
    m: int

    def __post_init__(self):
        if scalar.mag(self.a) == 0:
            raise DomainError("lattice base a must be nonzero")
        if not isinstance(self.m, int) or self.m < 0:
            raise DomainError("lattice index m must be a nonnegative integer")
        object.__setattr__(self, "a", _lift(self.a))

    def z(self, q):
        return self.a * _lift(as_qbase(q).q) ** (-self.m)

    def to_eval(self, q) -> EvalPoint:
        return EvalPoint(self.z(q))


@dataclass(frozen=True)
class AWParams:
    """The four parameters of the top family; subfamilies drop trailing ones."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if scalar.mag(v) == 0:
                raise DomainError(f"parameter {name} must be nonzero")
            object.__setattr__(self, name, _lift(v))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def permuted(self, order) -> "AWParams":
        t = self.as_tuple()
        return AWParams(*(t[i] for i in order))


def _resolve_z(pt_or_lat, q):
    if isinstance(pt_or_lat, LatticePoint):
        return pt_or_lat.z(q)
    return pt_or_lat.z


@_full_accuracy
def askey_wilson(n: int, pt: EvalPoint, p: AWParams, q,
                 policy: TruncationPolicy = DEFAULT_POLICY):
    """Askey-Wilson polynomial of degree n at x = (z + 1/z)/2.

    a^(-n) (ab, ac, ad; q)_n times the terminating balanced 4phi3 with
    numerator row (q^(-n), q^(n-1) abcd, a z, a/z) over (ab, ac, ad) at
    argument q.  Fully symmetric in (a, b, c, d), though the series shape
    only shows the (b, c, d) part of that symmetry.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, b, c, d = p.as_tuple()
    z = pt.z
    spec = SeriesSpec(
        (qq ** -n, qq ** (n - 1) * a * b * c * d, a * z, a / z),
        (a * b, a * c, a * d),
        qb,
        qq,
    )
    pref = a ** -n * poch_multi((a * b, a * c, a * d), qq, n)
    return pref * phi(spec, policy).value


@_full_accuracy
def cdq_hahn(n: int, pt: EvalPoint, a, b, c, q,
             policy: TruncationPolicy = DEFAULT_POLICY):
    """Continuous dual q-Hahn polynomial: the three-parameter subfamily.

    a^(-n) (ab, ac; q)_n times the terminating 3phi2 with numerator
    (q^(-n), a z, a/z) over (ab, ac) at argument q.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, b, c = _lift(a), _lift(b), _lift(c)
    z = pt.z
    spec = SeriesSpec((qq ** -n, a * z, a / z), (a * b, a * c), qb, qq)
    return a ** -n * poch_multi((a * b, a * c), qq, n) * phi(spec, policy).value


@_full_accuracy
def asc(n: int, pt: EvalPoint, a, b, q,
        policy: TruncationPolicy = DEFAULT_POLICY):
    """Al-Salam-Chihara polynomial through its zero-padded 3phi1 form."""
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, b = _lift(a), _lift(b)
    z = pt.z
    spec = SeriesSpec((qq ** -n, a * z, a / z), (a * b,), qb, qq, zero_shift=1)
    return a ** -n * poch_finite(a * b, qq, n) * phi(spec, policy).value


@_full_accuracy
def asc_alt(n: int, pt: EvalPoint, a, b, q,
            policy: TruncationPolicy = DEFAULT_POLICY):
    """The same polynomial as ``asc`` through its 2phi1 form.

    z^n (b/z; q)_n times the terminating 2phi1 with numerator (q^(-n), a z)
    over q^(1-n) z / b at argument q/(b z).  Agrees with ``asc`` wherever
    both forms avoid their respective poles.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, b = _lift(a), _lift(b)
    z = pt.z
    spec = SeriesSpec(
        (qq ** -n, a * z),
        (qq ** (1 - n) * z / b,),
        qb,
        qq / (b * z),
    )
    return z ** n * poch_finite(b / z, qq, n) * phi(spec, policy).value


@_full_accuracy
def cbq_hermite(n: int, pt: EvalPoint, a, q,
                policy: TruncationPolicy = DEFAULT_POLICY):
    """Continuous big q-Hermite polynomial, doubly zero-padded 3phi0 form."""
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a = _lift(a)
    z = pt.z
    spec = SeriesSpec((qq ** -n, a * z, a / z), (), qb, qq, zero_shift=2)
    return a ** -n * phi(spec, policy).value


@_full_accuracy
def cbq_hermite_alt(n: int, pt: EvalPoint, a, q,
                    policy: TruncationPolicy = DEFAULT_POLICY):
    """The same polynomial as ``cbq_hermite`` through its 2phi0 form."""
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a = _lift(a)
    z = pt.z
    spec = SeriesSpec((qq ** -n, a * z), (), qb, qq ** n / z ** 2)
    return z ** n * phi(spec, policy).value


@_full_accuracy
def cq_hermite(n: int, pt: EvalPoint, q):
    """Continuous q-Hermite polynomial, the a -> 0 end of cbq_hermite.

    Evaluated by the explicit symmetric Laurent sum over q-binomial
    coefficients: sum_k (q; q)_n / ((q; q)_k (q; q)_{n-k}) z^(n-2k).
    """
    qq = _lift(as_qbase(q).q)
    z = pt.z
    qn = poch_finite(qq, qq, n)
    total = 0 * z * qq
    for k in range(n + 1):
        coeff = qn / (poch_finite(qq, qq, k) * poch_finite(qq, qq, n - k))
        total = total + coeff * z ** (n - 2 * k)
    return total


@_full_accuracy
def cdqi_hahn(n: int, pt: EvalPoint, a, b, c, q,
              policy: TruncationPolicy = DEFAULT_POLICY):
    """Continuous dual q-Hahn polynomial in the inverted base.

    q^(-2 binom(n,2)) (abc)^n (1/(ab), 1/(ac); q)_n times the terminating
    3phi2 with numerator (q^(-n), z/a, 1/(a z)) over (1/(ab), 1/(ac)) at
    argument q^n/(bc).  Base inversion is baked into the formula; q itself
    stays inside the unit disk.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, b, c = _lift(a), _lift(b), _lift(c)
    z = pt.z
    spec = SeriesSpec(
        (qq ** -n, z / a, 1 / (a * z)),
        (1 / (a * b), 1 / (a * c)),
        qb,
        qq ** n / (b * c),
    )
    pref = (
        qq ** (-2 * binom2(n))
        * (a * b * c) ** n
        * poch_multi((1 / (a * b), 1 / (a * c)), qq, n)
    )
    return pref * phi(spec, policy).value


@_full_accuracy
def qi_asc(n: int, pt: EvalPoint, a, b, q,
           policy: TruncationPolicy = DEFAULT_POLICY):
    """Al-Salam-Chihara polynomial in the inverted base, 3phi1 form.

    q^(-binom(n,2)) (-b)^n (1/(ab); q)_n times the terminating 3phi1 with
    numerator (q^(-n), z/a, 1/(a z)) over 1/(ab) at argument q^n a / b.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, b = _lift(a), _lift(b)
    z = pt.z
    spec = SeriesSpec(
        (qq ** -n, z / a, 1 / (a * z)),
        (1 / (a * b),),
        qb,
        qq ** n * a / b,
    )
    pref = qq ** (-binom2(n)) * (-b) ** n * poch_finite(1 / (a * b), qq, n)
    return pref * phi(spec, policy).value


@_full_accuracy
def qi_asc_lattice(n: int, lat: LatticePoint, b, q,
                   policy: TruncationPolicy = DEFAULT_POLICY):
    """The same polynomial as ``qi_asc`` on the lattice z = a q^(-m).

    On the lattice the 3phi1 collapses to a 2phi1 in the base point:
    q^(-binom(n,2)) q^(-binom(m,2)) (-a/(qb))^m (-b)^n
    (1/(ab); q)_n (qb/a; q)_m / (1/(ab); q)_m times the terminating 2phi1
    with numerator (q^(-m), q^m/a^2) over qb/a at argument q^(n+1).  The
    2phi1 is a polynomial of degree m in q^n, which the bilinear sums
    downstream exploit.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a, m = lat.a, lat.m
    b = _lift(b)
    pab_m = poch_finite(1 / (a * b), qq, m)
    if scalar.mag(pab_m) == 0:
        raise PoleError("(1/(ab); q)_m vanished: lattice form undefined here")
    spec = SeriesSpec(
        (qq ** -m, qq ** m / a ** 2),
        (qq * b / a,),
        qb,
        qq ** (n + 1),
    )
    pref = (
        qq ** (-binom2(n))
        * qq ** (-binom2(m))
        * (-a / (qq * b)) ** m
        * (-b) ** n
        * poch_finite(1 / (a * b), qq, n)
        * poch_finite(qq * b / a, qq, m)
        / pab_m
    )
    return pref * phi(spec, policy).value


@_full_accuracy
def cbqi_hermite(n: int, pt_or_lat, a, q,
                 policy: TruncationPolicy = DEFAULT_POLICY):
    """Continuous big q-Hermite polynomial in the inverted base, 3phi0 form.

    a^(-n) times the terminating 3phi0 with numerator (q^(-n), z/a, 1/(a z))
    at argument q^n a^2.  Accepts a plain evaluation point or a lattice
    point z = a q^(-m) built on the same parameter a.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    a = _lift(a)
    z = _resolve_z(pt_or_lat, qb)
    spec = SeriesSpec((qq ** -n, z / a, 1 / (a * z)), (), qb, qq ** n * a ** 2)
    return a ** -n * phi(spec, policy).value


@_full_accuracy
def qi_asc_genfun_check(t, pt_or_lat, a, b, q, N: int,
                        policy: TruncationPolicy = DEFAULT_POLICY):
    """Generating function of qi_asc: partial sum against the closed product.

    lhs sums q^binom(n,2) t^n / (q; q)_n times the degree-n polynomial over
    n <= N; rhs is the closed infinite-product form, in its lattice variant
    when a lattice point is supplied.  Returns (lhs, rhs) so the caller can
    judge the residual; N must be large enough that the q^binom(n,2) decay
    has pushed the tail below the working tolerance.
    """
    qb = as_qbase(q)
    qb.require_interior("the generating-function check")
    qq = qb.q
    t, a, b = _lift(t), _lift(a), _lift(b)
    if scalar.is_exact(t, a, b, qq):
        raise DomainError("the generating-function check needs floating scalars")

    lattice = isinstance(pt_or_lat, LatticePoint)
    if lattice and not scalar.rel_close(pt_or_lat.a, a, ulps=4):
        raise DomainError("lattice base must equal the polynomial parameter a")

    lhs = 0 * qq
    fact = 1 + 0 * qq
    for k in range(N + 1):
        if k > 0:
            fact = fact * (1 - qq ** k)
        if lattice:
            pk = qi_asc_lattice(k, pt_or_lat, b, qb, policy)
        else:
            pk = qi_asc(k, pt_or_lat, a, b, qb, policy)
        lhs = lhs + qq ** binom2(k) * t ** k / fact * pk

    if lattice:
        m = pt_or_lat.m
        rhs = (
            qq ** (-binom2(m))
            * poch_infinite(-t / a, qq, policy)
            / poch_infinite(-b * t, qq, policy)
            * poch_finite(-qq / (a * t), qq, m)
            / poch_finite(-t / a, qq, m)
            * (a * t / qq) ** m
        )
    else:
        z = pt_or_lat.z
        rhs = (
            poch_infinite(-t * z, qq, policy)
            * poch_infinite(-t / z, qq, policy)
            / (poch_infinite(-t * a, qq, policy) * poch_infinite(-t * b, qq, policy))
        )
    return lhs, rhs
