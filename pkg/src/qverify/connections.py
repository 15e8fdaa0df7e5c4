"""Connection relations across the Askey-Wilson hierarchy.

Two kinds of basis change live here.  The finite kind rewrites a degree-n
polynomial over a second family sharing the same evaluation variable, with
exactly n + 1 coefficients; the classical double-sum change between two
four-parameter families is the master case, and the single-free-parameter
product formula is its summable specialization.  The infinite kind trades
two parameters of the source family for two fresh ones at the price of an
infinite expansion, convergent where the expansion parameter c satisfies
max(|cz|, |c/z|) < 1, and degenerates down the hierarchy into a ladder of
corollary expansions (four-parameter over three-parameter families, three
over three, two-parameter families over each other, and the base-inverted
crossover).  Every operation returns both sides of its identity so the
caller owns the residual; coefficient tables are exposed separately for
the finite relations so round trips can be checked coefficient by
coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import scalar
from .scalar import mag
from .qseries import (
    DEFAULT_POLICY,
    DomainError,
    NonConvergenceError,
    PoleError,
    SeriesResult,
    SeriesSpec,
    TruncationPolicy,
    as_qbase,
    full_accuracy,
    phi,
    poch_finite,
    poch_infinite,
    poch_infinite_multi,
    poch_multi,
)
from .qpolynomials import (
    AWParams,
    EvalPoint,
    _lift,
    asc,
    askey_wilson,
    binom2,
    cbq_hermite,
    cdq_hahn,
    cdqi_hahn,
)

__all__ = [
    "ConnectionSpec",
    "CoeffTable",
    "ismail_zhang_coeffs",
    "ismail_zhang_expand",
    "one_free_param_coeffs",
    "one_free_param_expand",
    "thm61_expand",
    "thm61_tail_rate",
    "corollary_check",
    "corollary_coeffs",
    "CONNECTION_COROLLARY_IDS",
    "FINITE_COROLLARY_IDS",
]


@dataclass(frozen=True)
class ConnectionSpec:
    """Which expansion a coefficient table belongs to.

    source and target are the parameter tuples of the two families,
    degree is the expanded polynomial's degree, and truncation is the
    index of the last kept coefficient for infinite relations (None means
    the relation is finite and the table is complete).
    """

    source: tuple
    target: tuple
    degree: int
    truncation: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 0:
            raise DomainError("degree must be a nonnegative integer")
        if self.truncation is not None and self.truncation < self.degree:
            raise DomainError("the truncation index must reach the degree")
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))

    @property
    def finite(self) -> bool:
        return self.truncation is None


@dataclass
class CoeffTable:
    """Coefficients c_k with p_n(source) = sum_k c_k p_k(target).

    A finite relation carries exactly degree + 1 entries and a zero
    tail_bound.  An infinite relation carries the entries that were
    actually summed plus a bound on the dropped remainder, valid at the
    evaluation point the table was built at (the cut depends on z through
    the convergence rate even though the coefficients do not).
    """

    spec: ConnectionSpec
    formula: str
    coeffs: list
    tail_bound: object = 0

    def __post_init__(self):
        if self.spec.finite and len(self.coeffs) != self.spec.degree + 1:
            raise DomainError(
                "a finite relation carries exactly degree + 1 coefficients"
            )

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)


def _nonzero(v, what):
    if mag(v) == 0:
        raise PoleError(f"{what} vanished")
    return v


def _require_floats(*values):
    if scalar.is_exact(*values):
        raise DomainError("an infinite expansion needs floating scalars")


def _family_eval(k, pt, ps, qb, policy):
    # three entries name the q-Hahn-type family, four the top family
    if len(ps) == 4:
        return askey_wilson(k, pt, AWParams(*ps), qb, policy)
    return cdq_hahn(k, pt, ps[0], ps[1], ps[2], qb, policy)


def _dot_basis(coeffs, pt, tgt, qb, policy):
    total = None
    for k, ck in enumerate(coeffs):
        t = ck * _family_eval(k, pt, tgt, qb, policy)
        total = t if total is None else total + t
    return total


def _geometric_sum(term_fn, rate, degree, policy, what):
    """Sum term_fn(k) over k >= 0 against a geometric tail model.

    rate is the nominal large-k ratio of consecutive term magnitudes; the
    sum stops once the bound |term| * rate / (1 - rate) stays below the
    policy tolerance for quiet_terms consecutive indices past the source
    degree.  The gate on the degree matters: when the target family sits
    close to a degeneration of the source, every term below the degree is
    tiny while the degree term carries the whole value, and an ungated
    stop would return garbage.  Passing rate=None estimates the ratio
    from consecutive terms instead, for sums that decay faster than any
    geometric rate.  Returns (total, terms_used, tail_bound).
    """
    if rate is not None and not rate < 1:
        raise DomainError(
            f"{what} needs an expansion rate below 1, got {float(rate):.4f}"
        )
    total = None
    prev = None
    quiet = 0
    bound = None
    for k in range(policy.max_terms + 1):
        t = term_fn(k)
        total = t if total is None else total + t
        tm = mag(t)
        if rate is None:
            r = tm / prev if prev is not None and prev > 0 else None
            prev = tm
        else:
            r = rate
        settled = False
        if r is not None and r < 1:
            bound = tm * r / (1 - r)
            settled = k > degree and bound <= policy.rel_tol * mag(total)
        if settled:
            quiet += 1
            if quiet >= policy.quiet_terms:
                return total, k + 1, bound
        else:
            quiet = 0
    raise NonConvergenceError(
        f"{what} did not settle within {policy.max_terms} terms",
        SeriesResult(total, policy.max_terms + 1, False, bound),
    )


def _emerged(build, policy):
    """Evaluate a cancellation-heavy terminating sum through precision ladders.

    A terminating sum of degree k whose internal terms span q^(-k^2/2)
    orders of magnitude is poisoned by the rounding of its own entries:
    the summation guard can absorb arithmetic roundoff, but an entry
    frozen at too low a precision biases every pass equally, and once the
    true value sits far enough below the term peak the bias is all that
    comes back.  The only cure is building the entries themselves at a
    higher precision, so this helper calls *build* (which must construct
    the series spec from the caller's scalars at the current precision)
    under a doubling precision ladder until two consecutive rungs agree
    to the caller's accuracy; the stabilized high-precision value is
    returned for the caller to round.
    """
    base = scalar.get_precision()
    collapse = scalar.make(2) ** -(base // 4)
    prev = None
    falls = 0
    for step in range(8):
        with scalar.precision(base << step):
            val = phi(build(), policy).value
        if prev is not None:
            if mag(val) == 0 and mag(prev) == 0:
                return val
            if scalar.agreement_bits(prev, val) >= base - 8:
                return val
            # A sum that is identically zero never stabilizes: each rung
            # returns fresh roundoff one rung-width smaller than the last.
            # Two consecutive collapses of the magnitude itself are that
            # signature (an emerging small value drops at most once and
            # then agrees, which the check above catches first).
            if mag(val) <= mag(prev) * collapse:
                falls += 1
                if falls >= 2:
                    return val * 0
            else:
                falls = 0
        prev = val
    raise NonConvergenceError(
        "a terminating inner sum kept shifting as the precision used to "
        "build its entries grew; the value never emerged from roundoff",
        SeriesResult(val, step + 1, False, mag(val)),
    )


# ---------------------------------------------------------------------------
# finite basis changes


def _ismail_zhang_raw(n, src, tgt, qb, qq, policy):
    a, b, c, d = src.as_tuple()
    e, f, g, h = tgt.as_tuple()
    abcd = a * b * c * d
    efgh = e * f * g * h
    pref = poch_multi((qq, a * d, b * d, c * d), qq, n)

    # The terminating series inside the double sum depends on (k, l) only
    # through m = k + l, so the cache key collapses to the diagonal.
    inner_cache = {}

    def inner(m):
        if m not in inner_cache:
            spec = SeriesSpec(
                (
                    qq ** (m - n),
                    qq ** (n + m - 1) * abcd,
                    qq ** m * d * h,
                    d / h,
                ),
                (qq ** m * a * d, qq ** m * b * d, qq ** m * c * d),
                qb,
                qq,
            )
            inner_cache[m] = phi(spec, policy).value
        return inner_cache[m]

    coeffs = []
    for k in range(n + 1):
        outer = (
            (qq ** k * d) ** (k - n)
            * poch_finite(qq ** (n - 1) * abcd, qq, k)
            / _nonzero(
                poch_finite(qq, qq, n - k)
                * poch_multi(
                    (qq, a * d, b * d, c * d, qq ** (k - 1) * efgh), qq, k
                ),
                "a basis-change denominator",
            )
        )
        lsum = None
        for l in range(n - k + 1):
            lcoef = (
                (qq * d / h) ** l
                * poch_multi(
                    (
                        qq ** (k - n),
                        qq ** (n + k - 1) * abcd,
                        qq ** k * e * h,
                        qq ** k * f * h,
                        qq ** k * g * h,
                    ),
                    qq,
                    l,
                )
                / _nonzero(
                    poch_multi(
                        (
                            qq,
                            qq ** (2 * k) * efgh,
                            qq ** k * a * d,
                            qq ** k * b * d,
                            qq ** k * c * d,
                        ),
                        qq,
                        l,
                    ),
                    "a basis-change denominator",
                )
            )
            t = lcoef * inner(k + l)
            lsum = t if lsum is None else lsum + t
        coeffs.append(pref * outer * lsum)
    return coeffs


def ismail_zhang_coeffs(n, src, tgt, q, policy: TruncationPolicy = DEFAULT_POLICY) -> CoeffTable:
    """Coefficient table of the double-sum change between four-parameter bases.

    The k-th coefficient is a sum over l of products of finite Pochhammer
    ratios times a terminating balanced series; everything is rational in
    the inputs, so exact parameters give exact coefficients.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    src4 = src if isinstance(src, AWParams) else AWParams(*src)
    tgt4 = tgt if isinstance(tgt, AWParams) else AWParams(*tgt)
    prec = scalar.get_precision()
    with scalar.precision(2 * prec):
        coeffs = _ismail_zhang_raw(n, src4, tgt4, qb, qq, policy)
    spec = ConnectionSpec(src4.as_tuple(), tgt4.as_tuple(), n)
    return CoeffTable(spec, "double-sum basis change", [v + 0 for v in coeffs], 0)


@full_accuracy
def ismail_zhang_expand(n, pt: EvalPoint, src, tgt, q,
                        policy: TruncationPolicy = DEFAULT_POLICY):
    """Expand a four-parameter polynomial over another four-parameter basis.

    Returns (lhs, rhs): the degree-n polynomial with the source parameters,
    and the sum of the double-sum coefficients against the target basis.
    All eight parameters are free; the relation is finite and exact for
    rational inputs.
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    src4 = src if isinstance(src, AWParams) else AWParams(*src)
    tgt4 = tgt if isinstance(tgt, AWParams) else AWParams(*tgt)
    lhs = askey_wilson(n, pt, src4, qb, policy)
    coeffs = _ismail_zhang_raw(n, src4, tgt4, qb, qq, policy)
    rhs = _dot_basis(coeffs, pt, tgt4.as_tuple(), qb, policy)
    return lhs, rhs


def _one_free_raw(n, p4, e, qb, qq, policy):
    a, b, c, d = p4.as_tuple()
    abce = a * b * c * e
    pref = poch_multi((qq, a * b, a * c, b * c), qq, n) / _nonzero(
        poch_finite(abce, qq, n), "the shared-product entry"
    )
    coeffs = []
    for k in range(n + 1):
        num = (
            e ** (n - k)
            * poch_finite(d / e, qq, n - k)
            * poch_multi((abce / qq, qq ** (n - 1) * a * b * c * d), qq, k)
            * poch_finite(abce, qq, 2 * k)
        )
        den = _nonzero(
            poch_finite(qq, qq, n - k)
            * poch_multi((qq, a * b, a * c, b * c, qq ** n * abce), qq, k)
            * poch_finite(abce / qq, qq, 2 * k),
            "a coefficient denominator",
        )
        coeffs.append(pref * num / den)
    return coeffs


def one_free_param_coeffs(n, params, e, q, policy: TruncationPolicy = DEFAULT_POLICY) -> CoeffTable:
    """Coefficient table for the single-replaced-parameter basis change."""
    qb = as_qbase(q)
    qq = _lift(qb.q)
    p4 = params if isinstance(params, AWParams) else AWParams(*params)
    e = _lift(e)
    if mag(e) == 0:
        raise DomainError("the replacement parameter must be nonzero")
    prec = scalar.get_precision()
    with scalar.precision(2 * prec):
        coeffs = _one_free_raw(n, p4, e, qb, qq, policy)
    a, b, c, _ = p4.as_tuple()
    spec = ConnectionSpec(p4.as_tuple(), (a, b, c, e), n)
    return CoeffTable(spec, "single-free-parameter products", [v + 0 for v in coeffs], 0)


@full_accuracy
def one_free_param_expand(n, pt: EvalPoint, params, e, q,
                          policy: TruncationPolicy = DEFAULT_POLICY):
    """Expand over the basis obtained by replacing the last parameter with e.

    The coefficients are pure products of finite Pochhammer symbols (no
    inner series survives when the bases share three parameters), so the
    whole relation is a finite sum, exact for rational inputs.  Returns
    (lhs, rhs).
    """
    qb = as_qbase(q)
    qq = _lift(qb.q)
    p4 = params if isinstance(params, AWParams) else AWParams(*params)
    e = _lift(e)
    if mag(e) == 0:
        raise DomainError("the replacement parameter must be nonzero")
    a, b, c, _ = p4.as_tuple()
    lhs = askey_wilson(n, pt, p4, qb, policy)
    coeffs = _one_free_raw(n, p4, e, qb, qq, policy)
    rhs = _dot_basis(coeffs, pt, (a, b, c, e), qb, policy)
    return lhs, rhs


# ---------------------------------------------------------------------------
# the infinite two-replaced-parameter expansion


def _thm61_coeff(form, n, k, p6, qb, qq, policy):
    """The k-th expansion coefficient, shared infinite prefactor excluded."""
    a, b, c, d, e, f = p6
    abef = a * b * e * f
    abcf = a * b * c * f
    if form == 1:
        inner = phi(
            SeriesSpec(
                (qq ** -n, qq ** (n - 1) * a * b * c * d, c * f, qq * c / e),
                (c * d, qq ** k * abcf, qq ** (1 - k) * c / e),
                qb,
                qq,
            ),
            policy,
        ).value
        return (
            c ** (k - n)
            * poch_finite(abef, qq, 2 * k)
            * poch_multi((e / c, abef / qq), qq, k)
            / _nonzero(
                poch_finite(abef / qq, qq, 2 * k)
                * poch_multi((qq, a * e, b * e, e * f, abcf), qq, k),
                "a coefficient denominator",
            )
            * inner
        )
    # the form-2 inner sum terminates at the *running* degree k, so its
    # internal cancellation grows without bound and the entries must be
    # rebuilt on a precision ladder
    inner = _emerged(
        lambda: SeriesSpec(
            (qq ** -k, qq ** (k - 1) * abef, c * f, qq * f / d),
            (e * f, qq ** n * abcf, qq ** (1 - n) * f / d),
            qb,
            qq,
        ),
        policy,
    )
    return (
        f ** (n - k)
        * poch_finite(abef, qq, 2 * k)
        * poch_finite(abef / qq, qq, k)
        / _nonzero(
            poch_finite(abef / qq, qq, 2 * k)
            * poch_multi((qq, a * b, a * e, b * e), qq, k),
            "a coefficient denominator",
        )
        * inner
    )


def _thm61_core(form, n, pt, p6, qb, qq, policy, rate):
    a, b, c, d, e, f = p6
    z = pt.z
    abef = a * b * e * f
    abcf = a * b * c * f
    tgt = AWParams(a, b, e, f)
    lhs = askey_wilson(n, pt, AWParams(a, b, c, d), qb, policy)

    pref = poch_infinite_multi(
        (a * e, b * e, e * f, abcf, c * z, c / z), qq, policy
    ) / _nonzero(
        poch_infinite_multi((a * c, b * c, c * f, abef, e * z, e / z), qq, policy),
        "the expansion prefactor",
    )
    if form == 1:
        pref = pref * poch_multi((a * c, b * c, c * d), qq, n)
    else:
        pref = pref * poch_multi((a * b, a * c, b * c, d / f), qq, n) / _nonzero(
            poch_finite(abcf, qq, n), "the shared-product entry"
        )

    coeffs = []
    total = None
    quiet = 0
    bound = None
    for k in range(policy.max_terms + 1):
        ck = _thm61_coeff(form, n, k, p6, qb, qq, policy)
        coeffs.append(pref * ck)
        t = ck * askey_wilson(k, pt, tgt, qb, policy)
        total = t if total is None else total + t
        bound = mag(t) * rate / (1 - rate)
        # Stops are gated past the source degree: near a degenerate target
        # every term below the degree is negligible while the degree term
        # carries the whole value.
        if k > n and bound <= policy.rel_tol * mag(total):
            quiet += 1
            if quiet >= policy.quiet_terms:
                return lhs, pref * total, coeffs, k + 1, bound * mag(pref)
        else:
            quiet = 0
    raise NonConvergenceError(
        f"the bilinear expansion did not settle within {policy.max_terms} terms",
        SeriesResult(pref * total, policy.max_terms + 1, False, bound),
    )


def thm61_expand(form: int, n, pt: EvalPoint, params, ef, q,
                 policy: TruncationPolicy = DEFAULT_POLICY):
    """Expand a four-parameter polynomial over a basis with two fresh parameters.

    Both coefficient forms of the same expansion are implemented: form 1
    builds the k-th coefficient from a terminating series of length n
    (the source degree), form 2 from one of length k (the running target
    degree).  The sum converges for max(|cz|, |c/z|) < 1 and is truncated
    adaptively with the geometric tail bound |last term| * r / (1 - r) at
    r = max(|cz|, |c/z|).  Returns (lhs, rhs, CoeffTable); the table rows
    are the full connection coefficients, shared prefactor included.
    """
    if form not in (1, 2):
        raise DomainError("form must be 1 or 2")
    if not isinstance(n, int) or n < 0:
        raise DomainError("degree must be a nonnegative integer")
    qb = as_qbase(q)
    qb.require_interior("the bilinear expansion")
    qq = _lift(qb.q)
    p4 = params if isinstance(params, AWParams) else AWParams(*params)
    a, b, c, d = p4.as_tuple()
    e, f = (_lift(v) for v in ef)
    for name, v in (("e", e), ("f", f)):
        if mag(v) == 0:
            raise DomainError(f"replacement parameter {name} must be nonzero")
    z = pt.z
    _require_floats(qq, z, a, b, c, d, e, f)
    rate = max(mag(c * z), mag(c / z))
    if not rate < 1:
        raise DomainError(
            f"convergence needs max(|cz|, |c/z|) < 1, got {float(rate):.4f}"
        )

    prec = scalar.get_precision()
    with scalar.precision(2 * prec):
        lhs, rhs, coeffs, used, tail = _thm61_core(
            form, n, pt, (a, b, c, d, e, f), qb, qq, policy, rate
        )
    spec = ConnectionSpec((a, b, c, d), (a, b, e, f), n, truncation=used - 1)
    label = "source-degree coefficient series" if form == 1 else \
        "running-degree coefficient series"
    table = CoeffTable(spec, label, [v + 0 for v in coeffs], tail + 0)
    return lhs + 0, rhs + 0, table


def thm61_tail_rate(form: int, n, pt: EvalPoint, params, q, K: int,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Fitted geometric decay ratio of the expansion summand.

    Computes the full summand (coefficient times target polynomial) for
    k <= K and least-squares fits log magnitude against k over the top
    half of the range, where the asymptotic mixture of (cz)^k and (c/z)^k
    dominates.  The fitted ratio should not exceed max(|cz|, |c/z|) by
    more than a few percent; this is a diagnostic, not a check, so no
    convergence condition is imposed.
    """
    if form not in (1, 2):
        raise DomainError("form must be 1 or 2")
    if K < 40:
        raise DomainError("the rate fit needs K >= 40 to see the asymptotic regime")
    qb = as_qbase(q)
    qq = _lift(qb.q)
    p6 = tuple(_lift(v) for v in params)
    if len(p6) != 6:
        raise DomainError("params must supply all six parameters")
    a, b, _, _, e, f = p6
    tgt = AWParams(a, b, e, f)
    pts = []
    for k in range(K + 1):
        t = _thm61_coeff(form, n, k, p6, qb, qq, policy) * askey_wilson(
            k, pt, tgt, qb, policy
        )
        if k < (K + 1) // 2:
            continue
        try:
            m = float(mag(t))
        except OverflowError:
            continue
        if m > 0 and math.isfinite(m):
            pts.append((k, math.log(m)))
    if len(pts) < 8:
        raise DomainError("not enough usable summand magnitudes to fit a rate")
    kbar = sum(k for k, _ in pts) / len(pts)
    ybar = sum(y for _, y in pts) / len(pts)
    slope = sum((k - kbar) * (y - ybar) for k, y in pts) / sum(
        (k - kbar) ** 2 for k, _ in pts
    )
    return math.exp(slope)


# ---------------------------------------------------------------------------
# corollary ladder


def _two_free_coeffs(n, params, qb, qq, policy):
    a, b, c, d, e, f = (_lift(v) for v in params)
    abcd = a * b * c * d
    abef = a * b * e * f
    pref = poch_multi((qq, a * b, a * c, a * d), qq, n)
    coeffs = []
    for k in range(n + 1):
        inner = phi(
            SeriesSpec(
                (
                    qq ** (k - n),
                    qq ** k * a * e,
                    qq ** k * a * f,
                    qq ** (n + k - 1) * abcd,
                ),
                (qq ** k * a * c, qq ** k * a * d, qq ** (2 * k) * abef),
                qb,
                qq,
            ),
            policy,
        ).value
        den = _nonzero(
            poch_finite(qq, qq, n - k)
            * poch_multi((qq, a * b, a * c, a * d, qq ** (k - 1) * abef), qq, k),
            "a coefficient denominator",
        )
        coeffs.append(
            pref
            * (qq ** k * a) ** (k - n)
            * poch_finite(qq ** (n - 1) * abcd, qq, k)
            / den
            * inner
        )
    return (a, b, c, d), (a, b, e, f), coeffs


def _cdqhahn_in_aw_coeffs(n, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    abcd = a * b * c * d
    pref = (
        poch_multi((a * b, a * c, b * c), qq, n)
        * d ** n
        / _nonzero(poch_finite(abcd, qq, n), "the shared-product entry")
    )
    coeffs = []
    for k in range(n + 1):
        num = (
            qq ** (-binom2(k))
            * (-(qq ** n) / d) ** k
            * poch_finite(abcd, qq, 2 * k)
            * poch_multi((qq ** -n, abcd / qq), qq, k)
        )
        den = _nonzero(
            poch_finite(abcd / qq, qq, 2 * k)
            * poch_multi((qq, a * b, a * c, b * c, qq ** n * abcd), qq, k),
            "a coefficient denominator",
        )
        coeffs.append(pref * num / den)
    return (a, b, c), (a, b, c, d), coeffs


def _cdqhahn_term_coeffs(n, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    pref = d ** n * poch_multi((b * c, a / d), qq, n)
    coeffs = []
    for k in range(n + 1):
        den = _nonzero(
            poch_multi((qq, b * c, qq ** (1 - n) * d / a), qq, k),
            "a coefficient denominator",
        )
        coeffs.append(pref * (qq / a) ** k * poch_finite(qq ** -n, qq, k) / den)
    return (a, b, c), (b, c, d), coeffs


_FINITE_COEFF_BUILDERS = {
    "conn.two-free": _two_free_coeffs,
    "conn.cdqH-in-AW": _cdqhahn_in_aw_coeffs,
    "conn.cdqH-term": _cdqhahn_term_coeffs,
}

FINITE_COROLLARY_IDS = tuple(sorted(_FINITE_COEFF_BUILDERS))


def _make_finite_check(ident):
    def check(n, pt, params, qb, qq, policy):
        src, tgt, coeffs = _FINITE_COEFF_BUILDERS[ident](n, params, qb, qq, policy)
        lhs = _family_eval(n, pt, src, qb, policy)
        rhs = _dot_basis(coeffs, pt, tgt, qb, policy)
        return lhs, rhs

    return check


def _check_degree_limit(n, pt, params, qb, qq, policy):
    # params = (k, a, b, c, x); pt is unused because the limit variable x
    # enters the series directly rather than through z
    k = params[0]
    if not isinstance(k, int) or k < 0:
        raise DomainError("the secondary degree must be a nonnegative integer")
    if k > n:
        raise DomainError("the closed form requires n >= k")
    a, b, c, x = (_lift(v) for v in params[1:])
    lhs = (
        poch_finite(x, qq, k)
        * phi(
            SeriesSpec(
                (qq ** -n, qq ** (n - 1) * a * b, c, qq / x),
                (qq ** k * a * c, b, qq ** (1 - k) / x),
                qb,
                qq,
            ),
            policy,
        ).value
    )
    num = (
        c ** (n - k)
        * poch_multi((qq, a), qq, n)
        * poch_finite(b / c, qq, n - k)
        * poch_multi((c, a * c, qq ** (n - 1) * a * b), qq, k)
    )
    den = _nonzero(
        poch_multi((b, a * c), qq, n)
        * poch_finite(qq, qq, n - k)
        * poch_multi((a, qq ** n * a * c), qq, k),
        "a closed-form denominator",
    )
    return lhs, num / den


def _check_shared_triple(n, pt, params, qb, qq, policy):
    a, b, c, d, e = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d, e)
    rate = max(mag(e * z), mag(e / z))
    lhs = askey_wilson(n, pt, AWParams(a, b, c, d), qb, policy)
    tgt = AWParams(a, b, c, e)
    abce = a * b * c * e
    pref = poch_multi((a * b, a * c, b * c, d / e), qq, n) / _nonzero(
        poch_finite(abce, qq, n), "the shared-product entry"
    )

    def term(k):
        # terminates at the running k: entry precision must ladder up
        inner = _emerged(
            lambda: SeriesSpec(
                (qq ** -k, qq ** (k - 1) * abce, qq * e / d),
                (qq ** n * abce, qq ** (1 - n) * e / d),
                qb,
                qq,
            ),
            policy,
        )
        coef = (
            e ** (n - k)
            * poch_finite(abce, qq, 2 * k)
            * poch_finite(abce / qq, qq, k)
            / _nonzero(
                poch_finite(abce / qq, qq, 2 * k)
                * poch_multi((qq, a * b, a * c, b * c), qq, k),
                "a coefficient denominator",
            )
        )
        return coef * inner * askey_wilson(k, pt, tgt, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the shared-triple expansion")
    return lhs, pref * total


def _check_aw_over_cdqhahn_1(n, pt, params, qb, qq, policy):
    a, b, c, d, e = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d, e)
    rate = max(mag(c * z), mag(c / z))
    lhs = askey_wilson(n, pt, AWParams(a, b, c, d), qb, policy)
    abcd = a * b * c * d
    pref = (
        poch_infinite_multi((a * e, b * e, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * c, b * c, e * z, e / z), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c, c * d), qq, n)
    )

    def term(k):
        inner = phi(
            SeriesSpec(
                (qq ** -n, qq ** (n - 1) * abcd, qq * c / e),
                (c * d, qq ** (1 - k) * c / e),
                qb,
                qq,
            ),
            policy,
        ).value
        coef = (
            c ** (k - n)
            * poch_finite(e / c, qq, k)
            / _nonzero(
                poch_multi((qq, a * e, b * e), qq, k), "a coefficient denominator"
            )
        )
        return coef * inner * cdq_hahn(k, pt, a, b, e, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the triple-basis expansion")
    return lhs, pref * total


def _check_aw_over_cdqhahn_2(n, pt, params, qb, qq, policy):
    a, b, c, d, e = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d, e)
    rate = max(mag(c * z), mag(c / z))
    lhs = askey_wilson(n, pt, AWParams(a, b, c, d), qb, policy)
    abcd = a * b * c * d
    abce = a * b * c * e
    pref = (
        poch_infinite_multi((abce, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * c, b * c, e * c), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c, c * d), qq, n)
    )

    def term(k):
        # fresh series per k: both a denominator entry and the argument
        # carry the running index
        inner = phi(
            SeriesSpec(
                (qq ** -n, qq ** (n - 1) * abcd, c * e),
                (c * d, qq ** k * abce),
                qb,
                qq ** (k + 1),
            ),
            policy,
        ).value
        coef = c ** (k - n) / _nonzero(
            poch_multi((qq, abce), qq, k), "a coefficient denominator"
        )
        return coef * inner * cdq_hahn(k, pt, a, b, e, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the triple-basis expansion")
    return lhs, pref * total


def _check_aw_over_cdqhahn_3(n, pt, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d)
    rate = max(mag(c * z), mag(c / z))
    lhs = askey_wilson(n, pt, AWParams(a, b, c, d), qb, policy)
    abcd = a * b * c * d
    pref = (
        poch_infinite_multi((abcd, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * c, b * c, c * d), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c, c * d), qq, n)
        / _nonzero(poch_finite(abcd, qq, 2 * n), "the shared-product entry")
    )

    def term(k):
        coef = c ** k / _nonzero(
            poch_multi((qq, qq ** (2 * n) * abcd), qq, k),
            "a coefficient denominator",
        )
        return coef * cdq_hahn(n + k, pt, a, b, d, qb, policy)

    total, _, _ = _geometric_sum(term, rate, 0, policy, "the shifted-degree expansion")
    return lhs, pref * total


def _check_aw_over_cdqhahn_4(n, pt, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d)
    rate = max(mag(c * z), mag(c / z))
    lhs = askey_wilson(n, pt, AWParams(a, b, c, d), qb, policy)
    pref = (
        poch_infinite_multi((qq * a / d, qq * b / d, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi(
                (a * c, b * c, qq * z / d, qq / (d * z)), qq, policy
            ),
            "the expansion prefactor",
        )
        * qq ** binom2(n)
        * (-d) ** n
        * poch_multi((a * b, a * c, b * c), qq, n)
    )

    def term(k):
        coef = (
            c ** k
            * poch_multi((qq ** n * a * b, qq ** (1 - n) / (c * d)), qq, k)
            / _nonzero(
                poch_multi((qq, a * b, qq * a / d, qq * b / d), qq, k),
                "a coefficient denominator",
            )
        )
        return coef * cdq_hahn(k, pt, a, b, qq / d, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the inverted-parameter expansion")
    return lhs, pref * total


def _check_cdqhahn_over_aw(n, pt, params, qb, qq, policy):
    a, b, c, d, e = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d, e)
    rate = max(mag(c * z), mag(c / z))
    lhs = cdq_hahn(n, pt, a, b, c, qb, policy)
    abce = a * b * c * e
    abde = a * b * d * e
    tgt = AWParams(a, b, d, e)
    pref = (
        poch_infinite_multi((abce, a * d, b * d, e * d, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((abde, a * c, b * c, e * c, d * z, d / z), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c), qq, n)
    )

    def term(k):
        inner = phi(
            SeriesSpec(
                (qq ** -n, c * e, qq * c / d),
                (qq ** k * abce, qq ** (1 - k) * c / d),
                qb,
                qq,
            ),
            policy,
        ).value
        coef = (
            c ** (k - n)
            * poch_finite(abde, qq, 2 * k)
            * poch_multi((abde / qq, d / c), qq, k)
            / _nonzero(
                poch_finite(abde / qq, qq, 2 * k)
                * poch_multi((qq, a * d, b * d, e * d, abce), qq, k),
                "a coefficient denominator",
            )
        )
        return coef * inner * askey_wilson(k, pt, tgt, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the widened-basis expansion")
    return lhs, pref * total


def _check_cdqhahn_pair_1(n, pt, params, qb, qq, policy):
    a, b, c, d, e = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d, e)
    rate = max(mag(c * z), mag(c / z))
    lhs = cdq_hahn(n, pt, a, b, c, qb, policy)
    pref = (
        poch_infinite_multi((a * e, e * d, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * c, c * d, e * z, e / z), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c), qq, n)
    )

    def term(k):
        inner = phi(
            SeriesSpec(
                (qq ** -n, qq * c / e, c * d),
                (b * c, qq ** (1 - k) * c / e),
                qb,
                qq,
            ),
            policy,
        ).value
        coef = (
            c ** (k - n)
            * poch_finite(e / c, qq, k)
            / _nonzero(
                poch_multi((qq, a * e, d * e), qq, k), "a coefficient denominator"
            )
        )
        return coef * inner * cdq_hahn(k, pt, a, d, e, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the triple-pair expansion")
    return lhs, pref * total


def _check_cdqhahn_pair_2(n, pt, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d)
    rate = max(mag(c * z), mag(c / z))
    lhs = cdq_hahn(n, pt, a, b, c, qb, policy)
    pref = (
        poch_infinite_multi((a * d, b * d, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * c, b * c, d * z, d / z), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c), qq, n)
        / _nonzero(poch_multi((a * d, b * d), qq, n), "a prefactor denominator")
    )

    def term(k):
        coef = (
            c ** k
            * poch_finite(d / c, qq, k)
            / _nonzero(
                poch_multi((qq, qq ** n * a * d, qq ** n * b * d), qq, k),
                "a coefficient denominator",
            )
        )
        return coef * cdq_hahn(n + k, pt, a, b, d, qb, policy)

    total, _, _ = _geometric_sum(term, rate, 0, policy, "the shifted-degree expansion")
    return lhs, pref * total


def _check_cdqhahn_pair_3(n, pt, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d)
    rate = max(mag(c * z), mag(c / z))
    lhs = cdq_hahn(n, pt, a, b, c, qb, policy)
    abcd = a * b * c * d
    pref = (
        poch_infinite_multi((abcd, c * z, c / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * c, b * c, c * d), qq, policy),
            "the expansion prefactor",
        )
        * poch_multi((a * c, b * c), qq, n)
    )

    def term(k):
        inner = phi(
            SeriesSpec(
                (qq ** -n, c * d),
                (qq ** k * abcd,),
                qb,
                qq ** (k + 1),
            ),
            policy,
        ).value
        coef = c ** (k - n) / _nonzero(
            poch_multi((qq, abcd), qq, k), "a coefficient denominator"
        )
        return coef * inner * cdq_hahn(k, pt, a, b, d, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the triple-pair expansion")
    return lhs, pref * total


def _check_inverted_hahn_over_asc(n, pt, params, qb, qq, policy):
    a, b, c = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c)
    rate = max(mag(z / c), mag(1 / (c * z)))
    lhs = cdqi_hahn(n, pt, a, b, c, qb, policy)
    pref = (
        qq ** (-2 * binom2(n))
        * poch_infinite_multi((z / c, 1 / (c * z)), qq, policy)
        / _nonzero(
            poch_infinite_multi((1 / (a * c), 1 / (b * c)), qq, policy),
            "the expansion prefactor",
        )
        * (a * b * c) ** n
        * poch_multi((1 / (a * b), 1 / (a * c), 1 / (b * c)), qq, n)
    )

    def term(k):
        coef = (
            (1 / c) ** k
            * poch_finite(qq ** n / (a * b), qq, k)
            / _nonzero(
                poch_multi((qq, 1 / (a * b)), qq, k), "a coefficient denominator"
            )
        )
        return coef * asc(k, pt, 1 / a, 1 / b, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the base-crossing expansion")
    return lhs, pref * total


def _check_asc_pair_1(n, pt, params, qb, qq, policy):
    a, b, c, d = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c, d)
    rate = max(mag(a * z), mag(a / z))
    lhs = asc(n, pt, a, b, qb, policy)
    pref = (
        poch_infinite_multi((c * d, a * z, a / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * d, c * z, c / z), qq, policy),
            "the expansion prefactor",
        )
        * poch_finite(a * b, qq, n)
    )

    def term(k):
        inner = phi(
            SeriesSpec(
                (qq ** -n, qq * a / c, a * d),
                (qq ** (1 - k) * a / c, a * b),
                qb,
                qq,
            ),
            policy,
        ).value
        coef = (
            a ** (k - n)
            * poch_finite(c / a, qq, k)
            / _nonzero(
                poch_multi((qq, c * d), qq, k), "a coefficient denominator"
            )
        )
        return coef * inner * asc(k, pt, c, d, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the pair-basis expansion")
    return lhs, pref * total


def _check_asc_pair_2(n, pt, params, qb, qq, policy):
    a, b, c = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c)
    rate = max(mag(a * z), mag(a / z))
    lhs = asc(n, pt, a, b, qb, policy)
    pref = (
        poch_infinite_multi((b * c, a * z, a / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * b, c * z, c / z), qq, policy),
            "the expansion prefactor",
        )
        * poch_finite(a * b, qq, n)
        / _nonzero(poch_finite(b * c, qq, n), "a prefactor denominator")
    )

    def term(k):
        coef = (
            a ** k
            * poch_finite(c / a, qq, k)
            / _nonzero(
                poch_multi((qq, qq ** n * b * c), qq, k),
                "a coefficient denominator",
            )
        )
        return coef * asc(n + k, pt, b, c, qb, policy)

    total, _, _ = _geometric_sum(term, rate, 0, policy, "the shifted-degree expansion")
    return lhs, pref * total


def _check_asc_pair_3(n, pt, params, qb, qq, policy):
    a, b, c = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c)
    rate = max(mag(b * z), mag(b / z))
    lhs = asc(n, pt, a, b, qb, policy)
    pref = (
        poch_infinite_multi((b * z, b / z), qq, policy)
        / _nonzero(
            poch_infinite_multi((a * b, b * c), qq, policy),
            "the expansion prefactor",
        )
        * poch_finite(a * b, qq, n)
    )

    def term(k):
        # the inner series runs at unit balance through a written-out zero
        # denominator entry, with the argument carrying the running index
        inner = phi(
            SeriesSpec(
                (qq ** -n, b * c),
                (),
                qb,
                qq ** (k + 1),
                zero_shift=1,
            ),
            policy,
        ).value
        coef = b ** (k - n) / _nonzero(
            poch_finite(qq, qq, k), "a coefficient denominator"
        )
        return coef * inner * asc(k, pt, a, c, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the pair-basis expansion")
    return lhs, pref * total


def _check_hermite_over_asc(n, pt, params, qb, qq, policy):
    a, b, c = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b, c)
    rate = max(mag(a * z), mag(a / z))
    lhs = cbq_hermite(n, pt, a, qb, policy)
    pref = poch_infinite_multi((b * c, a * z, a / z), qq, policy) / _nonzero(
        poch_infinite_multi((a * b, c * z, c / z), qq, policy),
        "the expansion prefactor",
    )

    def term(k):
        inner = phi(
            SeriesSpec(
                (qq ** -n, qq * a / c, a * b),
                (qq ** (1 - k) * a / c,),
                qb,
                qq,
                zero_shift=1,
            ),
            policy,
        ).value
        coef = (
            a ** (k - n)
            * poch_finite(c / a, qq, k)
            / _nonzero(
                poch_multi((qq, b * c), qq, k), "a coefficient denominator"
            )
        )
        return coef * inner * asc(k, pt, b, c, qb, policy)

    total, _, _ = _geometric_sum(term, rate, n, policy, "the one-parameter expansion")
    return lhs, pref * total


def _check_hermite_pair(n, pt, params, qb, qq, policy):
    a, b = (_lift(v) for v in params)
    z = pt.z
    _require_floats(qq, z, a, b)
    lhs = cbq_hermite(n, pt, a, qb, policy)
    pref = (
        poch_infinite(a * b, qq, policy)
        / _nonzero(
            poch_infinite_multi((b * z, b / z), qq, policy),
            "the expansion prefactor",
        )
        / _nonzero(poch_finite(a * b, qq, n), "a prefactor denominator")
    )

    def term(k):
        coef = (
            qq ** binom2(k)
            * (-b) ** k
            / _nonzero(
                poch_multi((qq, qq ** n * a * b), qq, k),
                "a coefficient denominator",
            )
        )
        return coef * asc(n + k, pt, a, b, qb, policy)

    # the triangular power of q beats any geometric envelope, so the tail
    # model uses the observed ratio of consecutive terms
    total, _, _ = _geometric_sum(term, None, n, policy, "the one-parameter pair expansion")
    return lhs, pref * total


_COROLLARY_EVALUATORS = {
    "conn.two-free": (6, _make_finite_check("conn.two-free")),
    "conn.lim-e-to-c": (5, _check_degree_limit),
    "conn.thm55": (5, _check_shared_triple),
    "conn.cdqH-in-AW": (4, _make_finite_check("conn.cdqH-in-AW")),
    "conn.cdqH-term": (4, _make_finite_check("conn.cdqH-term")),
    "conn.AWcdqH.1": (5, _check_aw_over_cdqhahn_1),
    "conn.AWcdqH.2": (5, _check_aw_over_cdqhahn_2),
    "conn.AWcdqH.3": (4, _check_aw_over_cdqhahn_3),
    "conn.AWcdqH.4": (4, _check_aw_over_cdqhahn_4),
    "conn.cdqH-of-AW": (5, _check_cdqhahn_over_aw),
    "conn.cdqHcdqH.1": (5, _check_cdqhahn_pair_1),
    "conn.cdqHcdqH.2": (4, _check_cdqhahn_pair_2),
    "conn.cdqHcdqH.3": (4, _check_cdqhahn_pair_3),
    "conn.qiHahn-ASC": (3, _check_inverted_hahn_over_asc),
    "conn.ASCASC.1": (4, _check_asc_pair_1),
    "conn.ASCASC.2": (3, _check_asc_pair_2),
    "conn.ASCASC.3": (3, _check_asc_pair_3),
    "conn.cbqH-ASC": (3, _check_hermite_over_asc),
    "conn.cbqHcbqH": (2, _check_hermite_pair),
}

CONNECTION_COROLLARY_IDS = tuple(sorted(_COROLLARY_EVALUATORS))


@full_accuracy
def corollary_check(ident: str, n: int, pt, params, q,
                    policy: TruncationPolicy = DEFAULT_POLICY):
    """Evaluate both sides of one corollary expansion, keyed by registry id.

    params is a flat tuple in the order the relation's parameters are
    written, with the expanded polynomial's parameters first:

      conn.two-free      (a, b, c, d, e, f)   finite, source (a,b,c,d) over (a,b,e,f)
      conn.lim-e-to-c    (k, a, b, c, x)      closed limit value; pt unused, x near 1
      conn.thm55         (a, b, c, d, e)      (a,b,c,d) over (a,b,c,e), rate max(|ez|,|e/z|)
      conn.cdqH-in-AW    (a, b, c, d)         finite, (a,b,c) over (a,b,c,d)
      conn.cdqH-term     (a, b, c, d)         finite, (a,b,c) over (b,c,d)
      conn.AWcdqH.1/2    (a, b, c, d, e)      (a,b,c,d) over (a,b,e)
      conn.AWcdqH.3      (a, b, c, d)         (a,b,c,d) over (a,b,d), shifted degrees
      conn.AWcdqH.4      (a, b, c, d)         (a,b,c,d) over (a,b,q/d)
      conn.cdqH-of-AW    (a, b, c, d, e)      (a,b,c) over (a,b,d,e)
      conn.cdqHcdqH.1    (a, b, c, d, e)      (a,b,c) over (a,d,e)
      conn.cdqHcdqH.2    (a, b, c, d)         (a,b,c) over (a,b,d), shifted degrees
      conn.cdqHcdqH.3    (a, b, c, d)         (a,b,c) over (a,b,d)
      conn.qiHahn-ASC    (a, b, c)            inverted-base triple over pairs (1/a, 1/b)
      conn.ASCASC.1      (a, b, c, d)         pair (a,b) over pair (c,d)
      conn.ASCASC.2      (a, b, c)            pair (a,b) over pair (b,c), shifted degrees
      conn.ASCASC.3      (a, b, c)            pair (a,b) over pair (a,c)
      conn.cbqH-ASC      (a, b, c)            one-parameter family over pair (b,c)
      conn.cbqHcbqH      (a, b)               one-parameter family over pair (a,b)

    Returns (lhs, rhs).  Finite relations accept exact rational inputs and
    return exact values; infinite expansions require floating scalars.
    """
    try:
        arity, fn = _COROLLARY_EVALUATORS[ident]
    except KeyError:
        raise ValueError(f"unknown corollary id {ident!r}") from None
    if len(params) != arity:
        raise DomainError(f"{ident} takes {arity} parameters, got {len(params)}")
    if not isinstance(n, int) or n < 0:
        raise DomainError("degree must be a nonnegative integer")
    if ident != "conn.lim-e-to-c" and not isinstance(pt, EvalPoint):
        raise DomainError(f"{ident} needs an evaluation point")
    qb = as_qbase(q)
    qq = _lift(qb.q)
    return fn(n, pt, tuple(params), qb, qq, policy)


def corollary_coeffs(ident: str, n: int, params, q,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> CoeffTable:
    """Coefficient table of a finite corollary relation.

    Only the terminating relations expose their coefficients this way;
    the infinite expansions return theirs through thm61_expand.
    """
    try:
        builder = _FINITE_COEFF_BUILDERS[ident]
    except KeyError:
        if ident in _COROLLARY_EVALUATORS:
            raise DomainError(
                f"{ident} is not a finite relation and has no closed table"
            ) from None
        raise ValueError(f"unknown corollary id {ident!r}") from None
    arity, _ = _COROLLARY_EVALUATORS[ident]
    if len(params) != arity:
        raise DomainError(f"{ident} takes {arity} parameters, got {len(params)}")
    if not isinstance(n, int) or n < 0:
        raise DomainError("degree must be a nonnegative integer")
    qb = as_qbase(q)
    qq = _lift(qb.q)
    prec = scalar.get_precision()
    with scalar.precision(2 * prec):
        src, tgt, coeffs = builder(n, tuple(params), qb, qq, policy)
    spec = ConnectionSpec(src, tgt, n)
    return CoeffTable(spec, ident, [v + 0 for v in coeffs], 0)
