"""q-Pochhammer symbols and basic hypergeometric series.

The series engine sums

    sum_k  (a_1..a_r; q)_k / ((q, b_1..b_s; q)_k) * ((-1)^k q^C(k,2))^(1+s-r) * z^k

by term-to-term recurrence, so each step costs one multiply per parameter.
Zero entries are legal on either row and simply shift the balance exponent
e = 1 + s - r; the ``zero_shift`` field expresses the same thing without
writing the zeros out.  The engine is generic over the scalar type: gmpy2
mpfr/mpc floats, or Fraction for exact evaluation of terminating sums.

Convergence bookkeeping follows the balance exponent: e > 0 series are
entire, e = 0 needs |z| < 1 unless terminating, e < 0 diverges unless
terminating.  Termination means some numerator entry equals q^(-n); it is
detected, never declared by the caller.
"""

from __future__ import annotations

import functools

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import scalar
from .scalar import mag

__all__ = [
    "QSeriesError",
    "DomainError",
    "PoleError",
    "DivergenceError",
    "NonConvergenceError",
    "BranchError",
    "QBase",
    "as_qbase",
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "SeriesSpec",
    "SeriesResult",
    "poch_finite",
    "poch_multi",
    "poch_infinite",
    "poch_infinite_multi",
    "poch_complex_index",
    "phi",
    "full_accuracy",
    "phi_vdbr",
    "vwp_w",
    "is_terminating",
    "termination_index",
    "is_balanced",
    "check_poles",
]

TERMINATION_SCAN_CAP = 512


class QSeriesError(Exception):
    """Base for everything the series layer can raise."""


class DomainError(QSeriesError):
    """Parameters outside the region where the requested object is defined."""


class PoleError(QSeriesError):
    """A denominator factor vanished before the sum terminated."""


class DivergenceError(QSeriesError):
    """Negative balance exponent without termination: the series diverges."""


class BranchError(QSeriesError):
    """A square-root combination landed off the expected principal sheet."""


class NonConvergenceError(QSeriesError):
    """Truncation budget exhausted; carries the partial result."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class QBase:
    """Base of the q-calculus.

    |q| < 1 is the default domain.  Terminating sums make sense for |q| > 1
    as well, but only a caller that knows its sum terminates may opt in via
    ``allow_exterior``; |q| = 1 is never valid.
    """

    q: object
    allow_exterior: bool = False

    def require_interior(self, what: str) -> None:
        if not self._interior():
            raise DomainError(f"{what} requires |q| < 1, got q = {self.q}")

    def _interior(self) -> bool:
        return bool(mag(self.q) < 1)

    def check(self) -> None:
        a = mag(self.q)
        if a == 0:
            raise DomainError("q = 0 is outside the base domain")
        if a < 1:
            return
        if not self.allow_exterior:
            raise DomainError(
                f"|q| >= 1 (q = {self.q}) needs allow_exterior=True and a terminating sum"
            )
        if a == 1:
            raise DomainError("|q| = 1 is never admissible")


def as_qbase(q) -> QBase:
    return q if isinstance(q, QBase) else QBase(q)


@dataclass(frozen=True)
class TruncationPolicy:
    """When to stop a convergent infinite sum.

    A partial sum is accepted once ``quiet_terms`` consecutive terms fall
    below rel_tol times its magnitude; max_terms exhaustion raises instead
    of silently returning garbage.
    """

    rel_tol: float = 1e-30
    max_terms: int = 2000
    quiet_terms: int = 5


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesSpec:
    """One basic hypergeometric sum, before evaluation.

    zero_shift m appends m zero entries to the denominator row (m > 0) or
    |m| zero entries to the numerator row (m < 0); they participate in the
    balance exponent exactly as written-out zeros would.
    """

    numerator: tuple
    denominator: tuple
    q: object
    argument: object
    zero_shift: int = 0

    def rows(self) -> tuple:
        num = tuple(self.numerator)
        den = tuple(self.denominator)
        if self.zero_shift > 0:
            den = den + (0,) * self.zero_shift
        elif self.zero_shift < 0:
            num = num + (0,) * (-self.zero_shift)
        return num, den

    def balance(self) -> int:
        num, den = self.rows()
        return 1 + len(den) - len(num)


@dataclass
class SeriesResult:
    value: object
    terms_used: int
    terminated: bool
    tail_bound: object


def _exact_entries(spec: SeriesSpec, qb: QBase) -> bool:
    num, den = spec.rows()
    return scalar.is_exact(qb.q, spec.argument, *num, *den)


def _round_back(out):
    if isinstance(out, SeriesResult):
        return SeriesResult(out.value + 0, out.terms_used, out.terminated, out.tail_bound + 0)
    if isinstance(out, tuple):
        return tuple(_round_back(v) for v in out)
    return out + 0


def full_accuracy(fn):
    """Run fn at doubled working precision and round its result once.

    Derived quantities such as parameter products feed series as single
    entries, and a sum can amplify an entry's rounding error by the ratio
    of its largest term to the final value.  Building everything at doubled
    precision keeps that amplification far below one ulp of the caller's
    precision, so values reached along different but mathematically equal
    routes land on the same floating number.  Exact-rational arithmetic
    passes through untouched; adding zero on the way out performs the one
    rounding step for floats.
    """

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        prec = scalar.get_precision()
        with scalar.precision(2 * prec + 64):
            out = fn(*args, **kwargs)
        return _round_back(out)

    return wrapper


def termination_index(entries, q, rel_tol=None) -> Optional[int]:
    """Smallest n with some entry equal to q^(-n), or None.

    Exact scalars compare exactly; floats compare to a relative tolerance
    of 2^(-prec/2) by default, wide enough to absorb accumulated rounding
    in entries built as q**-n but far too tight to fire on random draws.
    """
    entries = [a for a in entries if not (isinstance(a, int) and a == 0)]
    if not entries:
        return None
    exact = scalar.is_exact(q, *entries)
    if not exact and rel_tol is None:
        rel_tol = scalar.make(2) ** -(scalar.get_precision() // 2)
    aq = mag(q)
    biggest = max(mag(a) for a in entries)
    smallest = min((mag(a) for a in entries if mag(a) > 0), default=None)
    p = 1 + 0 * q  # q^0 in the ambient arithmetic
    for n in range(TERMINATION_SCAN_CAP + 1):
        for a in entries:
            if exact:
                if a == p:
                    return n
            elif mag(a - p) <= rel_tol * mag(p):
                return n
        # |q^-n| is monotone in n, so stop once it leaves the entries' range
        pm = mag(p)
        if aq < 1 and pm > 2 * biggest:
            return None
        if aq > 1 and (smallest is None or pm < smallest / 2):
            return None
        p = p / q
    return None


def is_terminating(spec: SeriesSpec) -> Optional[int]:
    num, _ = spec.rows()
    return termination_index(num, as_qbase(spec.q).q)


def is_balanced(spec: SeriesSpec) -> bool:
    """Terminating, argument q, and q * prod(numerator) = prod(denominator)."""
    num, den = spec.rows()
    q = as_qbase(spec.q).q
    if is_terminating(spec) is None:
        return False
    if not scalar.rel_close(spec.argument, q):
        return False
    pn = q
    for a in num:
        pn = pn * a
    pd = 1
    for b in den:
        pd = pd * b
    return scalar.rel_close(pn, pd)


def check_poles(spec: SeriesSpec, margin: float = 0.02) -> None:
    """Sampler-facing guard: denominator entries must stay clear of q^(-j).

    Raises PoleError when an entry sits within the given relative margin of
    a pole index the sum actually reaches.  The engine itself only faults
    on factors that vanish outright, so deliberately pole-adjacent limit
    evaluations stay representable; this check is for parameter hygiene.
    """
    num, den = spec.rows()
    qb = as_qbase(spec.q)
    nterm = termination_index(num, qb.q)
    p = 1 + 0 * qb.q
    for j in range(TERMINATION_SCAN_CAP + 1):
        pm = mag(p)
        for b in den:
            if mag(b) == 0:
                continue
            if mag(b - p) <= margin * pm and (nterm is None or j <= nterm):
                raise PoleError(f"denominator entry {b} within {margin} of q^-{j}")
        if mag(qb.q) < 1 and pm > 2 * max((mag(b) for b in den), default=0):
            return
        p = p / qb.q


def poch_finite(a, q, n: int):
    """(a; q)_n = prod_{k<n} (1 - a q^k); negative n via (a;q)_{-m} = 1/((a q^-m;q)_m)."""
    q = as_qbase(q).q
    if n < 0:
        shifted = a * q**n
        denom = poch_finite(shifted, q, -n)
        if mag(denom) == 0:
            raise PoleError(f"({a}; q)_{n} hits a vanishing factor")
        return 1 / denom
    out = 1 + 0 * a if not isinstance(a, int) else 1 + 0 * q
    qk = 1 + 0 * q
    for _ in range(n):
        out = out * (1 - a * qk)
        qk = qk * q
    return out


def poch_multi(entries, q, n, policy: TruncationPolicy = DEFAULT_POLICY):
    """prod_i (a_i; q)_n; n may be math.inf (or None) for the infinite product."""
    if n is None or n == float("inf"):
        return poch_infinite_multi(entries, q, policy)
    out = None
    for a in entries:
        p = poch_finite(a, q, n)
        out = p if out is None else out * p
    return out if out is not None else 1


def poch_infinite(a, q, policy: TruncationPolicy = DEFAULT_POLICY):
    """(a; q)_infinity, truncated once |a q^k| < rel_tol * (1 - |q|).

    The log of the discarded tail is bounded by |a q^K| / (1 - |q|), so the
    stopping rule keeps the relative truncation error near rel_tol.
    """
    qb = as_qbase(q)
    qb.require_interior("poch_infinite")
    if scalar.is_exact(a, qb.q):
        raise DomainError("infinite products need floating scalars")
    aq = mag(qb.q)
    cut = scalar.make(policy.rel_tol) * (1 - aq)
    out = 1 + 0 * a * qb.q
    t = a * (1 + 0 * qb.q)
    for _ in range(policy.max_terms):
        if mag(t) < cut:
            return out
        out = out * (1 - t)
        t = t * qb.q
    raise NonConvergenceError(f"({a}; q)_inf did not settle in {policy.max_terms} factors", out)


def poch_infinite_multi(entries, q, policy: TruncationPolicy = DEFAULT_POLICY):
    out = 1
    for a in entries:
        out = out * poch_infinite(a, q, policy)
    return out


def poch_complex_index(a, q, nu, policy: TruncationPolicy = DEFAULT_POLICY):
    """(a; q)_nu = (a; q)_inf / (a q^nu; q)_inf with q^nu on the principal log."""
    import gmpy2

    qb = as_qbase(q)
    qb.require_interior("poch_complex_index")
    qnu = gmpy2.exp(gmpy2.mpc(nu) * gmpy2.log(gmpy2.mpc(qb.q)))
    denom = poch_infinite(a * qnu, qb.q, policy)
    if mag(denom) == 0:
        raise PoleError(f"(a q^nu; q)_inf vanished for a={a}, nu={nu}")
    return poch_infinite(a, qb.q, policy) / denom


def _zero_arg_result(nterm) -> SeriesResult:
    return SeriesResult(1, 1, nterm is not None, 0)


def _phi_sum(num, den, q, z, e, nterm, policy, exact, zero_tol):
    """One summation pass at the ambient precision.

    Returns (result, peak) with peak the largest magnitude of any term or
    running total, which the caller compares against the final value to
    decide whether cancellation ate into the requested accuracy.
    """

    def vanished(f, y) -> bool:
        # f = 1 - y; treat as a true zero only at ~4 ulp of the subtraction scale
        if exact:
            return f == 0
        return mag(f) <= zero_tol * (1 + mag(y))

    term = 1 + 0 * (q * z)
    total = term
    peak = mag(term)
    qk = 1 + 0 * q
    quiet = 0
    rel_tol = policy.rel_tol
    k = 0
    limit = nterm if nterm is not None else policy.max_terms
    while True:
        if nterm is not None and k == nterm:
            return SeriesResult(total, k + 1, True, 0), peak
        if k >= limit:
            break
        ratio = z
        for a in num:
            ratio = ratio * (1 - a * qk)
        dfac = 1 - q * qk
        for b in den:
            y = b * qk
            f = 1 - y
            if vanished(f, y):
                raise PoleError(f"denominator factor (1 - {b} q^{k}) vanished")
            dfac = dfac * f
        ratio = ratio / dfac
        if e > 0:
            ratio = ratio * (-qk) ** e
        elif e < 0:
            ratio = ratio / (-qk) ** (-e)
        term = term * ratio
        total = total + term
        if not exact:
            peak = max(peak, mag(term), mag(total))
        qk = qk * q
        k += 1
        if nterm is None:
            if mag(term) <= rel_tol * mag(total):
                quiet += 1
                if quiet >= policy.quiet_terms:
                    return SeriesResult(total, k + 1, False, mag(term)), peak
            else:
                quiet = 0
    raise NonConvergenceError(
        f"series did not settle within {policy.max_terms} terms", SeriesResult(total, k, False, mag(term))
    )


def phi(spec: SeriesSpec, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Evaluate the sum described by ``spec``.

    Terminating sums run to their top index exactly; convergent infinite
    sums stop per the policy; anything divergent or out of domain raises.
    Floating evaluations run with guard precision sized adaptively to the
    cancellation actually observed, so the returned value is accurate to
    within a few ulp of the working precision even when intermediate terms
    dwarf the final sum.
    """
    import gmpy2

    qb = as_qbase(spec.q)
    qb.check()
    num, den = spec.rows()
    q, z = qb.q, spec.argument
    e = spec.balance()
    nterm = termination_index(num, q)
    exact = _exact_entries(spec, qb)

    if mag(z) == 0:
        return _zero_arg_result(nterm)
    if nterm is None:
        if exact:
            raise DomainError("nonterminating series needs floating scalars")
        qb.require_interior("a nonterminating series")
        if e < 0:
            raise DivergenceError(f"balance exponent {e} with no termination")
        if e == 0 and not mag(z) < 1:
            raise DomainError(f"balance 0 series needs |argument| < 1, got |z| = {mag(z)}")

    if exact:
        res, _ = _phi_sum(num, den, q, z, e, nterm, policy, True, None)
        return res

    # A terminating sum leans on the relation entry * q^nterm = 1 holding to
    # the full working accuracy: the partial sum is violently sensitive to
    # perturbations of that entry off the termination lattice, so a copy
    # rounded at the caller's precision poisons every guard pass equally.
    # Rebuild such entries from q itself at each pass's precision instead.
    sub_idx = ()
    if nterm is not None:
        tol = scalar.make(2) ** -(scalar.get_precision() // 2)
        ref = (1 + 0 * q) * q ** -nterm
        sub_idx = tuple(
            i for i, a in enumerate(num)
            if not (isinstance(a, int) and a == 0)
            and mag(a - ref) <= tol * mag(ref)
        )

    # Pole verdicts must not depend on how much guard precision a pass used,
    # so the near-zero cutoff stays pinned to the caller's precision.
    prec = scalar.get_precision()
    zero_tol = scalar.ulp_tol(4)
    guard = 64
    while True:
        with scalar.precision(prec + guard):
            num_pass = num
            if sub_idx:
                ideal = (1 + 0 * q) * q ** -nterm
                num_pass = tuple(
                    ideal if i in sub_idx else a for i, a in enumerate(num)
                )
            res, peak = _phi_sum(num_pass, den, q, z, e, nterm, policy, False, zero_tol)
        v = mag(res.value)
        if v > 0 and peak > 0:
            lost = float(gmpy2.log2(peak / v))
        else:
            lost = float(2 * guard)
        # A sum whose true value is zero never stops reading as pure noise;
        # once the guard covers everything the peak could hide, return.
        guard_cap = max(16 * prec, 4096)
        if peak > 1:
            guard_cap = max(guard_cap, int(float(gmpy2.log2(peak))) + prec + 128)
        if lost + 16 <= guard or guard >= guard_cap:
            return SeriesResult(
                res.value + 0, res.terms_used, res.terminated, res.tail_bound + 0
            )
        # When the computed value still sits at the rounding-noise floor,
        # the measured loss only echoes the current precision and says
        # nothing about the true requirement; grow geometrically until the
        # value emerges, then jump straight to the measured loss.
        if lost >= guard + prec - 64:
            guard = max(int(lost) + 64, 2 * guard)
        else:
            guard = int(lost) + 64


def phi_vdbr(numerator, denominator, m: int, q, z, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Zero-padded series: m > 0 pads the denominator, m < 0 the numerator."""
    return phi(SeriesSpec(tuple(numerator), tuple(denominator), q, z, zero_shift=m), policy)


def vwp_w(a, tail_params, p, q, z, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Very-well-poised series written over its defining parameter list.

    The numerator row is (a, +q sqrt(a), -q sqrt(a), *tail) against the
    denominator (+sqrt(a), -sqrt(a), *(q a / t for t in tail)), plus p >= 0
    padding zeros on the denominator row.  The sqrt(a) pair enters only
    through its square, so the branch choice cancels.
    """
    if p < 0:
        raise DivergenceError("very-well-poised series with negative zero padding diverges")
    qb = as_qbase(q)
    sa = scalar.sqrt(a)
    num = (a, qb.q * sa, -(qb.q * sa)) + tuple(tail_params)
    den = (sa, -sa) + tuple(qb.q * a / t for t in tail_params)
    return phi(SeriesSpec(num, den, qb, z, zero_shift=p), policy)
