"""Bilinear kernel sums linking the base-q and base-1/q polynomial families.

The centerpiece is the kernel

    P(t) = sum_n q^(2 C(n,2)) t^n / ((q, 1/(cd); q)_n) * Q_n[a q^-m] Q_n[c q^-m']

over products of two lattice polynomials from the 1/q family, together
with its closed form, its Hermite-type degeneration, and the expansions
that write one family as a bilinear sum over another.  Each operation
returns enough for a two-sided residual check; nothing here assumes the
identities it exists to test.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import scalar
from .scalar import mag
from .qseries import (
    BranchError,
    DEFAULT_POLICY,
    DomainError,
    NonConvergenceError,
    PoleError,
    SeriesResult,
    SeriesSpec,
    TruncationPolicy,
    as_qbase,
    phi,
    poch_finite,
    poch_infinite,
    poch_multi,
    full_accuracy,
)
from .qpolynomials import (
    AWParams,
    EvalPoint,
    LatticePoint,
    _lift,
    asc,
    askey_wilson,
    binom2,
    cbq_hermite,
    cbqi_hermite,
    cdq_hahn,
    cq_hermite,
    qi_asc_lattice,
)

__all__ = [
    "KernelParams",
    "poisson_direct",
    "poisson_closed",
    "poisson_summand",
    "poisson_rational_pair",
    "bighermite_kernel_check",
    "groenevelt_expansion_rhs",
    "asc_bilinear_check",
    "special_case_checks",
    "SPECIAL_CASE_IDS",
]


@dataclass(frozen=True)
class KernelParams:
    """Parameters of the bilinear kernel sum.

    a, b parametrize the first lattice family and c, d the second; t is
    the kernel variable; m and mp are the two lattice heights.  The sum
    converges absolutely for |bdt| < 1, which is enforced here.
    """

    a: object
    b: object
    c: object
    d: object
    t: object
    m: int = 0
    mp: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if mag(v) == 0:
                raise DomainError(f"kernel parameter {name} must be nonzero")
            object.__setattr__(self, name, _lift(v))
        object.__setattr__(self, "t", _lift(self.t))
        for name in ("m", "mp"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise DomainError(f"lattice height {name} must be a nonnegative integer")
        if not mag(self.b * self.d * self.t) < 1:
            raise DomainError(
                f"kernel sum needs |bdt| < 1, got {mag(self.b * self.d * self.t)}"
            )

    def is_balanced(self) -> bool:
        """True when ab = cd, the regime with the transpose symmetry."""
        return scalar.rel_close(self.a * self.b, self.c * self.d)

    def transposed(self) -> "KernelParams":
        """Swap the two lattice families: (a,b,m) with (c,d,mp)."""
        return KernelParams(self.c, self.d, self.a, self.b, self.t, self.mp, self.m)


def _require_float(op_name, *values):
    if scalar.is_exact(*values):
        raise DomainError(f"{op_name} sums an infinite series and needs floating scalars")


def poisson_summand(kp: KernelParams, q, n: int,
                    policy: TruncationPolicy = DEFAULT_POLICY):
    """The nth term of the direct kernel sum, for decay-rate diagnostics."""
    qb = as_qbase(q)
    coef = (qb.q ** (2 * binom2(n)) * kp.t ** n
            / (poch_finite(qb.q, qb.q, n) * poch_finite(1 / (kp.c * kp.d), qb.q, n)))
    qa = qi_asc_lattice(n, LatticePoint(kp.a, kp.m), kp.b, qb, policy)
    qc = qi_asc_lattice(n, LatticePoint(kp.c, kp.mp), kp.d, qb, policy)
    return coef * qa * qc


def _poisson_direct_core(kp: KernelParams, qb, policy, zero_tol) -> SeriesResult:
    q = qb.q
    inv_cd = 1 / (kp.c * kp.d)
    la = LatticePoint(kp.a, kp.m)
    lc = LatticePoint(kp.c, kp.mp)

    coef = 1 + 0 * (q * kp.t)
    total = coef  # n = 0 term: both lattice factors are 1
    qn = 1 + 0 * q
    quiet = 0
    for n in range(1, policy.max_terms + 1):
        f_cd = 1 - inv_cd * qn
        if mag(f_cd) <= zero_tol * (1 + mag(inv_cd * qn)):
            raise PoleError(f"(1/(cd); q)_n hit a zero factor at index {n - 1}")
        # q^(2 C(n,2)) gains q^(2(n-1)) per step
        coef = coef * kp.t * qn * qn / ((1 - q * qn) * f_cd)
        qn = qn * q
        term = (coef
                * qi_asc_lattice(n, la, kp.b, qb, policy)
                * qi_asc_lattice(n, lc, kp.d, qb, policy))
        total = total + term
        if mag(term) <= policy.rel_tol * mag(total):
            quiet += 1
            if quiet >= policy.quiet_terms:
                return SeriesResult(total, n + 1, False, mag(term))
        else:
            quiet = 0
    raise NonConvergenceError(
        f"kernel sum did not settle within {policy.max_terms} terms",
        SeriesResult(total, policy.max_terms, False, mag(term)),
    )


def poisson_direct(kp: KernelParams, q,
                   policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Sum the bilinear kernel term by term.

    This side is the brute-force oracle for poisson_closed: it knows only
    the summand, not the closed form.
    """
    qb = as_qbase(q)
    qb.require_interior("the kernel sum")
    if mag(kp.t) == 0:
        return SeriesResult(1, 1, True, 0)
    _require_float("poisson_direct", qb.q, kp.a, kp.b, kp.c, kp.d, kp.t)
    if not mag(kp.b * kp.d * kp.t) < 1:
        raise NonConvergenceError("kernel sum diverges for |bdt| >= 1")
    prec = scalar.get_precision()
    zero_tol = scalar.ulp_tol(4)  # pole verdicts stay pinned to caller precision
    with scalar.precision(2 * prec + 64):
        res = _poisson_direct_core(kp, qb, policy, zero_tol)
    return SeriesResult(res.value + 0, res.terms_used, res.terminated, res.tail_bound + 0)


@full_accuracy
def poisson_closed(kp: KernelParams, q,
                   policy: TruncationPolicy = DEFAULT_POLICY):
    """Closed form of the kernel: lattice prefactors times a terminating 4phi3."""
    qb = as_qbase(q)
    qb.require_interior("the kernel closed form")
    q_, m, mp = qb.q, kp.m, kp.mp
    a, b, c, d, t = kp.a, kp.b, kp.c, kp.d, kp.t
    if mag(t) == 0:
        # the sum collapses to its first term; the closed form has a
        # removable singularity here
        return 1
    _require_float("poisson_closed", q_, a, b, c, d, t)
    adt = a * d * t
    pref = (q_ ** (-binom2(m)) * q_ ** (-binom2(mp))
            * (-c / (q_ * d)) ** mp * (-adt / q_) ** m)
    grand = poch_infinite(d * t / a, q_, policy) / poch_infinite(b * d * t, q_, policy)
    down_m = poch_finite(d * t / a, q_, m)
    down_mp = poch_finite(1 / (c * d), q_, mp)
    if mag(down_m) == 0 or mag(down_mp) == 0:
        raise PoleError("a finite Pochhammer in the kernel prefactor vanished")
    fin = (poch_finite(q_ / adt, q_, m) / down_m
           * poch_finite(q_ * d / c, q_, mp) / down_mp)
    hyp = phi(SeriesSpec(
        (q_ ** -mp, q_ ** mp / c ** 2, adt, b * d * t),
        (q_ ** -m * adt, q_ ** m * d * t / a, q_ * d / c),
        qb, q_), policy)
    return pref * grand * fin * hyp.value


def _lattice_expansion_coeffs(m, u, v, q):
    """Coefficients of the terminating 2phi1 a lattice polynomial carries.

    Entry j is (q^-m; q)_j (q^m/u^2; q)_j / ((q; q)_j (q v/u; q)_j); the
    polynomial's n-dependence enters only through the argument q^(n+1),
    which is what makes the kernel sum collapsible over n.
    """
    coeffs = []
    for j in range(m + 1):
        den = poch_finite(q, q, j) * poch_finite(q * v / u, q, j)
        if mag(den) == 0:
            raise PoleError("a lattice expansion denominator vanished")
        coeffs.append(poch_finite(q ** -m, q, j)
                      * poch_finite(q ** m / u ** 2, q, j) / den)
    return coeffs


def _lattice_prefactor(m, u, v, q):
    """The n-free prefactor of the lattice polynomial's 2phi1 collapse."""
    down = poch_finite(1 / (u * v), q, m)
    if mag(down) == 0:
        raise PoleError("(1/(uv); q)_m vanished in a lattice prefactor")
    return (q ** (-binom2(m)) * (-u / (q * v)) ** m
            * poch_finite(q * v / u, q, m) / down)


def poisson_rational_pair(kp: KernelParams, q,
                          policy: TruncationPolicy = DEFAULT_POLICY):
    """Both sides of the kernel identity with the infinite factor removed.

    Expanding each lattice factor through its terminating 2phi1 collapse
    and summing over n first turns the kernel into the nonterminating
    q-binomial sum, whose product value shares the (dt/a;q)oo/(bdt;q)oo
    factor of the closed form.  Dividing that factor out of both sides
    leaves a finite double sum against a finite prefactor times the
    terminating 4phi3, so exact scalars stay exact all the way through.
    Returns (lhs, rhs); equality is the caller's check.
    """
    qb = as_qbase(q)
    qb.require_interior("the kernel reduction")
    q_, m, mp = qb.q, kp.m, kp.mp
    a, b, c, d, t = kp.a, kp.b, kp.c, kp.d, kp.t
    if mag(t) == 0:
        # both reduced sides collapse to Q_0 Q_0 = 1
        return (1, 1)

    bdt = b * d * t
    dta = d * t / a
    left_a = _lattice_expansion_coeffs(m, a, b, q_)
    left_c = _lattice_expansion_coeffs(mp, c, d, q_)
    total = 0
    for j in range(m + 1):
        for l in range(mp + 1):
            down = poch_finite(dta, q_, j + l)
            if mag(down) == 0:
                raise PoleError("(dt/a; q)_{j+l} vanished in the kernel reduction")
            total = total + (left_a[j] * left_c[l] * q_ ** (j + l)
                             * poch_finite(bdt, q_, j + l) / down)
    lhs = _lattice_prefactor(m, a, b, q_) * _lattice_prefactor(mp, c, d, q_) * total

    adt = a * d * t
    pref = (q_ ** (-binom2(m)) * q_ ** (-binom2(mp))
            * (-c / (q_ * d)) ** mp * (-adt / q_) ** m)
    down_m = poch_finite(dta, q_, m)
    down_mp = poch_finite(1 / (c * d), q_, mp)
    if mag(down_m) == 0 or mag(down_mp) == 0:
        raise PoleError("a finite Pochhammer in the kernel prefactor vanished")
    fin = (poch_finite(q_ / adt, q_, m) / down_m
           * poch_finite(q_ * d / c, q_, mp) / down_mp)
    hyp = phi(SeriesSpec(
        (q_ ** -mp, q_ ** mp / c ** 2, adt, bdt),
        (q_ ** -m * adt, q_ ** m * d * t / a, q_ * d / c),
        qb, q_), policy)
    return (lhs, pref * fin * hyp.value)


def bighermite_kernel_check(m: int, mp: int, t, a, b, q,
                            policy: TruncationPolicy = DEFAULT_POLICY):
    """Hermite-type degeneration of the kernel: (direct sum, closed form)."""
    qb = as_qbase(q)
    qb.require_interior("the Hermite kernel sum")
    a, b, t = _lift(a), _lift(b), _lift(t)
    if mag(t) == 0:
        return (1, 1)
    _require_float("bighermite_kernel_check", qb.q, a, b, t)
    prec = scalar.get_precision()
    with scalar.precision(2 * prec + 64):
        lhs = _bighermite_direct(m, mp, t, a, b, qb, policy)
        rhs = _bighermite_closed(m, mp, t, a, b, qb, policy)
    return (lhs + 0, rhs + 0)


def _bighermite_direct(m, mp, t, a, b, qb, policy):
    q = qb.q
    la = LatticePoint(a, m)
    lb = LatticePoint(b, mp)
    coef = 1 + 0 * (q * t)
    total = coef
    qn = 1 + 0 * q
    quiet = 0
    for n in range(1, policy.max_terms + 1):
        coef = coef * t * qn / (1 - q * qn)  # q^C(n,2) gains q^(n-1) per step
        qn = qn * q
        term = (coef
                * cbqi_hermite(n, la, a, qb, policy)
                * cbqi_hermite(n, lb, b, qb, policy))
        total = total + term
        if mag(term) <= policy.rel_tol * mag(total):
            quiet += 1
            if quiet >= policy.quiet_terms:
                return total
        else:
            quiet = 0
    raise NonConvergenceError(
        f"Hermite kernel sum did not settle within {policy.max_terms} terms",
        SeriesResult(total, policy.max_terms, False, mag(term)),
    )


def _bighermite_closed(m, mp, t, a, b, qb, policy):
    q = qb.q
    pref = (q ** (-binom2(m)) * q ** (-2 * binom2(mp))
            * (b ** 2 / q) ** mp * (a * t / (q * b)) ** m)
    down = poch_finite(-t / (a * b), q, m)
    if mag(down) == 0:
        raise PoleError("(-t/(ab); q)_m vanished in the Hermite kernel prefactor")
    fin = poch_infinite(-t / (a * b), q, policy) * poch_finite(-q * b / (a * t), q, m) / down
    hyp = phi(SeriesSpec(
        (q ** -mp, q ** mp / b ** 2, -a * t / b),
        (-q ** -m * a * t / b, -q ** m * t / (a * b)),
        qb, q), policy)
    return pref * fin * hyp.value


def _audited_lattice_params(a, b, c, d, q):
    """Principal-branch roots for the 1/q lattice family, with the audit.

    The identities use the roots only in fixed combinations; rather than
    assuming the principal branches compose correctly off the positive
    axis, verify the two combinations the formulas rely on and refuse to
    continue when either fails.
    """
    tol = scalar.ulp_tol(4)
    abcd = a * b * c * d
    ra = scalar.sqrt(abcd)
    rq = scalar.sqrt(q)
    alpha = rq / ra
    beta = scalar.sqrt(c * d / (q * a * b))
    combined = scalar.sqrt(q / abcd) * beta
    target = 1 / (a * b)
    if mag(combined - target) > tol * mag(target):
        raise BranchError("sqrt(q/(abcd)) * sqrt(cd/(qab)) strayed from 1/(ab)")
    if mag(alpha * ra - rq) > tol * mag(rq):
        raise BranchError("(sqrt(q)/sqrt(abcd)) * sqrt(abcd) strayed from sqrt(q)")
    return alpha, beta


def groenevelt_expansion_rhs(n: int, pt: EvalPoint, p: AWParams, q,
                             policy: TruncationPolicy = DEFAULT_POLICY):
    """Bilinear expansion of the four-parameter polynomial over ASC pairs.

    Returns the expansion side only; callers compare it against
    askey_wilson(n, pt, p, q) evaluated independently.
    """
    qb = as_qbase(q)
    qb.require_interior("the bilinear expansion")
    a, b, c, d = p.as_tuple()
    z = pt.z
    _require_float("groenevelt_expansion_rhs", qb.q, a, b, c, d, z)
    prec = scalar.get_precision()
    zero_tol = scalar.ulp_tol(4)
    with scalar.precision(2 * prec + 64):
        out = _groenevelt_core(n, pt, a, b, c, d, qb, policy, zero_tol)
    return out + 0


def _groenevelt_core(n, pt, a, b, c, d, qb, policy, zero_tol):
    q = qb.q
    z = pt.z
    alpha, beta = _audited_lattice_params(a, b, c, d, q)
    gamma = scalar.sqrt(q * a * b * c / d)
    lat = LatticePoint(alpha, n)

    pref = (q ** binom2(n) * (-d) ** n
            * poch_infinite(c * z, q, policy) * poch_infinite(c / z, q, policy)
            * poch_multi((a * b, a * c, b * c), q, n)
            / (poch_infinite(a * c, q, policy) * poch_infinite(b * c, q, policy)))

    ab = a * b
    coef = 1 + 0 * (q * gamma)
    total = coef * qi_asc_lattice(0, lat, beta, qb, policy)  # Q_0(x) = 1
    qk = 1 + 0 * q
    quiet = 0
    for k in range(1, policy.max_terms + 1):
        f_ab = 1 - ab * qk
        if mag(f_ab) <= zero_tol * (1 + mag(ab * qk)):
            raise PoleError(f"(ab; q)_k hit a zero factor at index {k - 1}")
        # q^C(k,2) (-1)^k gamma^k against (q, ab; q)_k
        coef = coef * (-gamma) * qk / ((1 - q * qk) * f_ab)
        qk = qk * q
        term = (coef
                * qi_asc_lattice(k, lat, beta, qb, policy)
                * asc(k, pt, a, b, qb, policy))
        total = total + term
        if mag(term) <= policy.rel_tol * mag(total):
            quiet += 1
            if quiet >= policy.quiet_terms:
                return pref * total
        else:
            quiet = 0
    raise NonConvergenceError(
        f"bilinear expansion did not settle within {policy.max_terms} terms",
        SeriesResult(pref * total, policy.max_terms, False, mag(term)),
    )


def asc_bilinear_check(n: int, pt: EvalPoint, p: AWParams, q,
                       policy: TruncationPolicy = DEFAULT_POLICY):
    """Expansion of a two-parameter polynomial over four-parameter ones.

    Returns (lhs, rhs): the k-sum with lattice coefficients against the
    infinite-product prefactor times the two-parameter polynomial.
    """
    qb = as_qbase(q)
    qb.require_interior("the bilinear expansion")
    a, b, c, d = p.as_tuple()
    z = pt.z
    _require_float("asc_bilinear_check", qb.q, a, b, c, d, z)
    prec = scalar.get_precision()
    zero_tol = scalar.ulp_tol(4)
    with scalar.precision(2 * prec + 64):
        lhs = _asc_bilinear_lhs(n, pt, a, b, c, d, qb, policy, zero_tol)
        rhs = _asc_bilinear_rhs(n, pt, a, b, c, d, qb, policy)
    return (lhs + 0, rhs + 0)


def _asc_bilinear_lhs(n, pt, a, b, c, d, qb, policy, zero_tol):
    q = qb.q
    alpha, beta = _audited_lattice_params(a, b, c, d, q)
    abcd = a * b * c * d
    splus2 = q * abcd       # (+-sqrt(q abcd); q)_k enters via its square
    sminus2 = abcd / q
    p4 = AWParams(a, b, c, d)

    coef = 1 + 0 * (q * c)
    total = coef * _qi_asc_on_lattice(n, alpha, 0, beta, qb, policy)
    qk = 1 + 0 * q
    quiet = 0
    for k in range(1, policy.max_terms + 1):
        dens = (
            (1 - q * qk),
            (1 - sminus2 * qk * qk),  # the +-sqrt pair, base q^2, at step k
            (1 - a * c * qk),
            (1 - b * c * qk),
            (1 - c * d * qk),
        )
        for f in dens:
            if mag(f) <= zero_tol * (1 + mag(1 - f)):
                raise PoleError(f"a denominator Pochhammer factor vanished at index {k - 1}")
        coef = coef * (-c) * qk * (1 - abcd / q * qk) * (1 - splus2 * qk * qk)
        for f in dens:
            coef = coef / f
        qk = qk * q
        term = (coef
                * _qi_asc_on_lattice(n, alpha, k, beta, qb, policy)
                * askey_wilson(k, pt, p4, qb, policy))
        total = total + term
        if mag(term) <= policy.rel_tol * mag(total):
            quiet += 1
            if quiet >= policy.quiet_terms:
                return total
        else:
            quiet = 0
    raise NonConvergenceError(
        f"bilinear expansion did not settle within {policy.max_terms} terms",
        SeriesResult(total, policy.max_terms, False, mag(term)),
    )


def _asc_bilinear_rhs(n, pt, a, b, c, d, qb, policy):
    q = qb.q
    z = pt.z
    root = scalar.sqrt(c / (q * a * b * d))
    return (q ** (-binom2(n))
            * poch_infinite(a * b * c * d, q, policy)
            * poch_infinite(c * z, q, policy) * poch_infinite(c / z, q, policy)
            / (poch_infinite(a * c, q, policy)
               * poch_infinite(b * c, q, policy)
               * poch_infinite(c * d, q, policy))
            * (-root) ** n
            * asc(n, pt, a, b, qb, policy))


def _qi_asc_on_lattice(n, alpha, height, beta, qb, policy):
    """Q_n of the 1/q family at the lattice point alpha q^-height.

    The height-indexed collapse trades the degree sum for a height sum,
    which is the wrong shape when the height is large and the degree
    small: its terms cancel through q^(-height^2/2) peaks that no fixed
    working precision survives.  Keeping the degree sum and substituting
    the exact q^-height power leaves at most n+1 terms, the last one
    dominant, so every magnitude stays honest at any height.
    """
    q = qb.q
    spec = SeriesSpec(
        (q ** -n, q ** -height, q ** height / alpha ** 2),
        (1 / (alpha * beta),),
        qb,
        q ** n * alpha / beta,
    )
    pref = q ** (-binom2(n)) * (-beta) ** n * poch_finite(1 / (alpha * beta), q, n)
    return pref * phi(spec, policy).value


def _hermite_on_point_lattice(k, height, ypt, qb, policy):
    """H_k at point y whose parameter is y q^-height, the relation exact.

    The value at such a pair is exponentially smaller than at neighboring
    parameters, so the parameter must not be passed as an independently
    rounded scalar: substituting it into the 3phi0 keeps the q^-height
    entry exact, the sum terminates at the height, and its last term
    dominates, which is well conditioned at any degree.
    """
    q = qb.q
    y = ypt.z
    spec = SeriesSpec(
        (q ** -k, y * y * q ** -height, q ** -height), (), qb, q, zero_shift=2
    )
    return (y * q ** -height) ** -k * phi(spec, policy).value


SPECIAL_CASE_IDS = ("cdqh-finite", "cdqh-hermite", "asc-hermite", "cbqh-cqh")


def special_case_checks(case_id: str, m: int, pt: EvalPoint, params, q,
                        policy: TruncationPolicy = DEFAULT_POLICY):
    """Degenerations of the bilinear expansion, as (lhs, rhs) pairs.

    cdqh-finite:  three-parameter polynomial as a finite sum over the
                  two-parameter family (params = (a, b, c))
    cdqh-hermite: the same polynomial as an infinite Hermite-pair sum
                  (params = (a, b, c))
    asc-hermite:  two-parameter family over products of one-parameter and
                  parameter-free Hermite polynomials (params = (a, b))
    cbqh-cqh:     one-parameter Hermite as a finite sum over the
                  parameter-free family (params = (a,))
    """
    if case_id not in SPECIAL_CASE_IDS:
        raise ValueError(f"unknown case id {case_id!r}; pick one of {SPECIAL_CASE_IDS}")
    qb = as_qbase(q)
    params = tuple(_lift(v) for v in params)
    if case_id in ("cdqh-finite", "cbqh-cqh"):
        lhs, rhs = _special_finite(case_id, m, pt, params, qb, policy)
        return (lhs, rhs)
    _require_float(f"special case {case_id}", qb.q, pt.z, *params)
    prec = scalar.get_precision()
    with scalar.precision(2 * prec + 64):
        lhs, rhs = _special_hermite(case_id, m, pt, params, qb, policy)
    return (lhs + 0, rhs + 0)


def _special_finite(case_id, m, pt, params, qb, policy):
    q = qb.q
    if case_id == "cdqh-finite":
        a, b, c = params
        lhs = cdq_hahn(m, pt, a, b, c, qb, policy)
        ab = a * b
        scale = q ** binom2(m) * (-c) ** m * poch_finite(ab, q, m)
    else:
        (a,) = params
        b = None
        c = a
        ab = None
        lhs = cbq_hermite(m, pt, a, qb, policy)
        scale = q ** binom2(m) * (-a) ** m
    total = 0
    coef = 1 + 0 * (q * c)
    qk = 1 + 0 * q
    for k in range(m + 1):
        if case_id == "cdqh-finite":
            inner = asc(k, pt, a, b, qb, policy)
        else:
            inner = cq_hermite(k, pt, qb)
        total = total + coef * inner
        if k < m:
            step = (q / c) * (1 - q ** -m * qk) / (1 - q * qk)
            if case_id == "cdqh-finite":
                f = 1 - ab * qk
                if mag(f) == 0:
                    raise PoleError("(ab; q)_k vanished inside the finite expansion")
                step = step / f
            coef = coef * step
        qk = qk * q
    return (lhs, scale * total)


def _special_hermite(case_id, m, pt, params, qb, policy):
    q = qb.q
    rq = scalar.sqrt(q)
    tol = scalar.ulp_tol(4)
    if case_id == "cdqh-hermite":
        a, b, c = params
        prod = b * c
        gamma = scalar.sqrt(q * b / c)
        lhs = cdq_hahn(m, pt, a, b, c, qb, policy)
        pref = (q ** binom2(m) * (-c) ** m
                * poch_infinite(b * pt.z, q, policy) * poch_infinite(b / pt.z, q, policy)
                * poch_finite(a * b, q, m) / poch_infinite(a * b, q, policy))
    else:
        a, b = params
        prod = a * b
        gamma = scalar.sqrt(q * a / b)
        lhs = asc(m, pt, a, b, qb, policy)
        pref = (q ** binom2(m) * (-b) ** m
                * poch_infinite(a * pt.z, q, policy) * poch_infinite(a / pt.z, q, policy))
    y = scalar.sqrt(q / prod)
    w = rq * q ** -m / scalar.sqrt(prod)
    if mag(w - y * q ** -m) > tol * mag(w):
        raise BranchError("lattice parameter and point disagree off the principal sheet")
    ypt = EvalPoint(y)

    total = 0
    coef = 1 + 0 * (q * gamma)
    qk = 1 + 0 * q
    quiet = 0
    for k in range(policy.max_terms + 1):
        if case_id == "cdqh-hermite":
            inner = cbq_hermite(k, pt, a, qb, policy)
        else:
            inner = cq_hermite(k, pt, qb)
        term = coef * _hermite_on_point_lattice(k, m, ypt, qb, policy) * inner
        total = total + term
        if k and mag(term) <= policy.rel_tol * mag(total):
            quiet += 1
            if quiet >= policy.quiet_terms:
                return (lhs, pref * total)
        elif k:
            quiet = 0
        coef = coef * gamma / (1 - q * qk)
        qk = qk * q
    raise NonConvergenceError(
        f"special case {case_id} did not settle within {policy.max_terms} terms",
        SeriesResult(pref * total, policy.max_terms, False, mag(term)),
    )
