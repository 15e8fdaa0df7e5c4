"""Polynomial families: displayed forms against direct rational summation."""

import itertools
import random
from fractions import Fraction

import gmpy2
import pytest

from qverify import scalar
from qverify.qpolynomials import (
    AWParams,
    EvalPoint,
    LatticePoint,
    asc,
    asc_alt,
    askey_wilson,
    binom2,
    cbq_hermite,
    cbq_hermite_alt,
    cbqi_hermite,
    cdq_hahn,
    cdqi_hahn,
    cq_hermite,
    qi_asc,
    qi_asc_genfun_check,
    qi_asc_lattice,
)
from qverify.qseries import DomainError

from oracles import phi_bf, poch_bf, poch_multi_bf, rand_frac, rand_q

F = Fraction


def setup_function(fn):
    scalar.set_precision(128)


# ------------------------------------------------------------ domain types

def test_eval_point_x_and_inverse():
    pt = EvalPoint(F(2))
    assert pt.x == F(5, 4)
    assert pt.inverse().z == F(1, 2)
    with pytest.raises(DomainError):
        EvalPoint(0)


def test_lattice_point_resolves_z():
    lat = LatticePoint(F(4), 3)
    assert lat.z(F(1, 2)) == F(32)
    assert lat.to_eval(F(1, 2)).z == F(32)
    with pytest.raises(DomainError):
        LatticePoint(0, 1)
    with pytest.raises(DomainError):
        LatticePoint(F(4), -1)


def test_lattice_point_round_trips_through_z():
    rng = random.Random(20260821)
    for _ in range(20):
        a = rand_frac(rng, signed=True)
        q = rand_q(rng)
        m = rng.randint(0, 8)
        z = LatticePoint(a, m).z(q)
        assert z / a == q ** -m


def test_aw_params_reject_zero():
    with pytest.raises(DomainError):
        AWParams(F(1, 2), 0, F(1, 3), F(1, 5))


# -------------------------------------------------------------- base family

def test_askey_wilson_degree_zero_is_one():
    assert askey_wilson(0, EvalPoint(F(2, 3)), AWParams(F(1, 5), F(1, 7), F(1, 3), F(1, 11)), F(1, 2)) == 1


def test_askey_wilson_collapses_at_z_inverse_a():
    q = F(1, 2)
    a, b, c, d = F(1, 5), F(1, 7), F(1, 3), F(1, 11)
    pt = EvalPoint(1 / a)
    for n in range(5):
        expect = a ** -n * poch_multi_bf((a * b, a * c, a * d), q, n)
        assert askey_wilson(n, pt, AWParams(a, b, c, d), q) == expect


def test_askey_wilson_two_term_point():
    q = F(1, 2)
    v = askey_wilson(1, EvalPoint(F(1)), AWParams(F(1, 5), F(1, 7), F(1, 3), F(1, 11)), q)
    assert v == F(1448, 1155)


def test_askey_wilson_matches_bruteforce():
    rng = random.Random(20260822)
    for _ in range(12):
        q = rand_q(rng)
        a, b, c, d = (rand_frac(rng, signed=True) for _ in range(4))
        z = rand_frac(rng, signed=True)
        n = rng.randint(0, 6)
        got = askey_wilson(n, EvalPoint(z), AWParams(a, b, c, d), q)
        pref = a ** -n * poch_multi_bf((a * b, a * c, a * d), q, n)
        want = pref * phi_bf(
            (q ** -n, q ** (n - 1) * a * b * c * d, a * z, a / z),
            (a * b, a * c, a * d), q, q, n)
        assert got == want


def test_askey_wilson_parameter_symmetry_exact():
    q = F(2, 5)
    p = AWParams(F(1, 2), F(-1, 3), F(2, 7), F(3, 5))
    pt = EvalPoint(F(5, 4))
    for n in (1, 2, 4):
        base = askey_wilson(n, pt, p, q)
        for order in itertools.permutations(range(4)):
            assert askey_wilson(n, pt, p.permuted(order), q) == base


def test_askey_wilson_parameter_symmetry_float():
    rng = random.Random(20260823)
    tol = scalar.ulp_tol(4)
    for _ in range(4):
        q = scalar.make(rng.uniform(0.2, 0.7))
        p = AWParams(*(scalar.make(rng.uniform(0.2, 0.8) * (1 if i % 2 else -1))
                       for i in range(4)))
        pt = EvalPoint(scalar.make(rng.uniform(0.4, 0.9), rng.uniform(0.2, 0.8)))
        n = rng.randint(1, 6)
        base = askey_wilson(n, pt, p, q)
        for order in itertools.permutations(range(4)):
            other = askey_wilson(n, pt, p.permuted(order), q)
            assert scalar.mag(other - base) <= tol * scalar.mag(base)


# -------------------------------------------------------------- subfamilies

def test_cdq_hahn_examples():
    q = F(1, 2)
    a, b, c = F(1, 5), F(1, 7), F(1, 3)
    assert cdq_hahn(0, EvalPoint(F(3, 4)), a, b, c, q) == 1
    for n in range(4):
        assert cdq_hahn(n, EvalPoint(1 / a), a, b, c, q) == \
            a ** -n * poch_multi_bf((a * b, a * c), q, n)
    z, n = F(2, 3), 2
    want = a ** -n * poch_multi_bf((a * b, a * c), q, n) * phi_bf(
        (q ** -n, a * z, a / z), (a * b, a * c), q, q, n)
    assert cdq_hahn(n, EvalPoint(z), a, b, c, q) == want


def test_asc_examples_and_forms_agree():
    q = F(1, 2)
    a, b = F(1, 3), F(1, 4)
    assert asc(0, EvalPoint(F(2)), a, b, q) == 1
    for n in range(4):
        assert asc(n, EvalPoint(1 / a), a, b, q) == a ** -n * poch_bf(a * b, q, n)
    v1 = asc(3, EvalPoint(F(2)), a, b, q)
    v2 = asc_alt(3, EvalPoint(F(2)), a, b, q)
    assert v1 == v2 == F(103787, 13824)


def test_asc_forms_agree_on_random_rationals():
    rng = random.Random(20260824)
    hits = 0
    while hits < 10:
        q = rand_q(rng)
        a, b, z = (rand_frac(rng, signed=True) for _ in range(3))
        n = rng.randint(0, 6)
        try:
            v1 = asc(n, EvalPoint(z), a, b, q)
            v2 = asc_alt(n, EvalPoint(z), a, b, q)
        except Exception:
            continue
        assert v1 == v2
        hits += 1


def test_cbq_hermite_examples_and_forms_agree():
    q = F(1, 2)
    a = F(1, 2)
    assert cbq_hermite(0, EvalPoint(F(3, 2)), a, q) == 1
    for n in range(4):
        assert cbq_hermite(n, EvalPoint(1 / a), a, q) == a ** -n
    rng = random.Random(20260825)
    for _ in range(10):
        qq = rand_q(rng)
        aa, zz = rand_frac(rng, signed=True), rand_frac(rng, signed=True)
        n = rng.randint(0, 6)
        assert cbq_hermite(n, EvalPoint(zz), aa, qq) == cbq_hermite_alt(n, EvalPoint(zz), aa, qq)


def test_cq_hermite_small_cases():
    q = F(1, 2)
    assert cq_hermite(0, EvalPoint(F(5, 7)), q) == 1
    z = F(3, 2)
    assert cq_hermite(1, EvalPoint(z), q) == z + 1 / z
    assert cq_hermite(3, EvalPoint(F(2)), q) == F(25, 2)


def test_cq_hermite_is_small_a_end_of_cbq_hermite():
    q = scalar.make("0.5")
    pt = EvalPoint(scalar.make("0.8", "0.6"))
    for n in (1, 3, 5):
        tiny = cbq_hermite(n, pt, scalar.make("1e-20"), q)
        plain = cq_hermite(n, pt, q)
        assert scalar.mag(tiny - plain) <= scalar.make("1e-15") * scalar.mag(plain)


def test_cdqi_hahn_examples():
    q = F(1, 2)
    a, b, c = F(3, 2), F(5, 2), F(7, 3)
    assert cdqi_hahn(0, EvalPoint(F(4, 3)), a, b, c, q) == 1
    z, n = F(4, 3), 2
    want = (q ** (-2 * binom2(n)) * (a * b * c) ** n
            * poch_multi_bf((1 / (a * b), 1 / (a * c)), q, n)
            * phi_bf((q ** -n, z / a, 1 / (a * z)), (1 / (a * b), 1 / (a * c)),
                     q, q ** n / (b * c), n))
    assert cdqi_hahn(n, EvalPoint(z), a, b, c, q) == want


def test_cdqi_hahn_is_limit_of_base_family():
    q = scalar.make("0.5")
    a, b, c = scalar.make("3.0"), scalar.make("2.5"), scalar.make("1.8")
    pt = EvalPoint(scalar.make("0.7", "0.3"))
    d = scalar.make("1e-25")
    for n in (1, 2, 3):
        direct = cdqi_hahn(n, pt, a, b, c, q)
        through_limit = (
            q ** (-3 * binom2(n)) * (-a * b * c) ** n * d ** n
            * askey_wilson(n, pt, AWParams(1 / a, 1 / b, 1 / c, 1 / d), q)
        )
        assert scalar.mag(direct - through_limit) <= scalar.make("1e-18") * scalar.mag(direct)


def test_qi_asc_examples():
    q = F(1, 2)
    a, b = F(4), F(5)
    assert qi_asc(0, EvalPoint(F(3)), a, b, q) == 1
    z, n = F(3), 1
    want = (q ** (-binom2(n)) * (-b) ** n * poch_bf(1 / (a * b), q, n)
            * phi_bf((q ** -n, z / a, 1 / (a * z)), (1 / (a * b),), q, q ** n * a / b, n))
    assert qi_asc(n, EvalPoint(z), a, b, q) == want
    for m in range(5):
        closed = q ** (-binom2(m)) * (-b) ** m * poch_bf(1 / (a * b), q, m)
        assert qi_asc(m, EvalPoint(a), a, b, q) == closed


def test_qi_asc_lattice_base_cases():
    q = F(1, 2)
    a, b = F(4), F(5)
    for n in range(5):
        closed = q ** (-binom2(n)) * (-b) ** n * poch_bf(1 / (a * b), q, n)
        assert qi_asc_lattice(n, LatticePoint(a, 0), b, q) == closed
    for m in range(5):
        assert qi_asc_lattice(0, LatticePoint(a, m), b, q) == \
            qi_asc(0, EvalPoint(a * q ** -m), a, b, q)


def test_qi_asc_lattice_matches_direct_evaluation():
    q = F(1, 2)
    v = qi_asc_lattice(2, LatticePoint(F(4), 3), F(5), q)
    assert v == qi_asc(2, EvalPoint(F(32)), F(4), F(5), q)
    assert v == F(311457, 1024)


def test_qi_asc_lattice_consistency_sweep():
    rng = random.Random(20260826)
    for _ in range(6):
        q = rand_q(rng)
        a = rand_frac(rng) + 1  # keep the lattice away from z = 0 collapses
        b = rand_frac(rng, signed=True)
        for n in range(0, 9, 2):
            for m in range(0, 9, 3):
                lhs = qi_asc_lattice(n, LatticePoint(a, m), b, q)
                rhs = qi_asc(n, EvalPoint(a * q ** -m), a, b, q)
                assert lhs == rhs


def test_cbqi_hermite_examples():
    q = F(1, 2)
    a = F(4)
    assert cbqi_hermite(0, EvalPoint(F(3)), a, q) == 1
    for n in range(5):
        assert cbqi_hermite(n, LatticePoint(a, 0), a, q) == a ** -n
    z, n = F(3), 2
    want = a ** -n * phi_bf((q ** -n, z / a, 1 / (a * z)), (), q, q ** n * a ** 2, n)
    assert cbqi_hermite(n, EvalPoint(z), a, q) == want


def test_cbqi_hermite_is_small_b_end_of_qi_asc():
    q = scalar.make("0.5")
    a = scalar.make(4)
    b = scalar.make("1e-25")
    for n in (1, 2, 4):
        lhs = qi_asc_lattice(n, LatticePoint(a, 0), b, q)
        rhs = cbqi_hermite(n, LatticePoint(a, 0), a, q)
        assert scalar.mag(lhs - rhs) <= scalar.make("1e-18") * scalar.mag(rhs)


# ---------------------------------------------------------------- symmetry

def _family_evaluators():
    f = scalar.make
    q = f("0.45")
    return q, [
        lambda pt, n: askey_wilson(n, pt, AWParams(f("0.3"), f("0.55"), f("-0.2"), f("0.62")), q),
        lambda pt, n: cdq_hahn(n, pt, f("0.3"), f("0.55"), f("-0.2"), q),
        lambda pt, n: asc(n, pt, f("0.3"), f("0.55"), q),
        lambda pt, n: cbq_hermite(n, pt, f("0.3"), q),
        lambda pt, n: cq_hermite(n, pt, q),
        lambda pt, n: cdqi_hahn(n, pt, f("3.1"), f("2.2"), f("1.9"), q),
        lambda pt, n: qi_asc(n, pt, f("3.1"), f("2.2"), q),
        lambda pt, n: cbqi_hermite(n, pt, f("3.1"), q),
    ]


def test_z_inversion_invariance():
    q, evaluators = _family_evaluators()
    pt = EvalPoint(scalar.make("0.7", "0.4"))
    tol = scalar.ulp_tol(16)
    for ev in evaluators:
        for n in (1, 3, 5):
            v = ev(pt, n)
            w = ev(pt.inverse(), n)
            assert scalar.mag(v - w) <= tol * max(scalar.mag(v), 1)


def test_z_inversion_invariance_exact():
    q = F(2, 5)
    z = F(7, 4)
    pairs = [
        (EvalPoint(z), EvalPoint(1 / z)),
    ]
    for pt, ipt in pairs:
        assert askey_wilson(3, pt, AWParams(F(1, 2), F(1, 3), F(1, 5), F(1, 7)), q) == \
            askey_wilson(3, ipt, AWParams(F(1, 2), F(1, 3), F(1, 5), F(1, 7)), q)
        assert cdq_hahn(3, pt, F(1, 2), F(1, 3), F(1, 5), q) == cdq_hahn(3, ipt, F(1, 2), F(1, 3), F(1, 5), q)
        assert asc(3, pt, F(1, 2), F(1, 3), q) == asc(3, ipt, F(1, 2), F(1, 3), q)
        assert cbq_hermite(3, pt, F(1, 2), q) == cbq_hermite(3, ipt, F(1, 2), q)
        assert cq_hermite(3, pt, q) == cq_hermite(3, ipt, q)
        assert cdqi_hahn(3, pt, F(3, 2), F(5, 2), F(7, 3), q) == cdqi_hahn(3, ipt, F(3, 2), F(5, 2), F(7, 3), q)
        assert qi_asc(3, pt, F(4), F(5), q) == qi_asc(3, ipt, F(4), F(5), q)
        assert cbqi_hermite(3, pt, F(4), q) == cbqi_hermite(3, ipt, F(4), q)


def _divided_difference_top(xs, ys):
    rows = [list(ys)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        order = len(rows)
        rows.append([
            (prev[i + 1] - prev[i]) / (xs[i + order] - xs[i])
            for i in range(len(prev) - 1)
        ])
    return rows


def test_every_family_has_exact_degree():
    q, evaluators = _family_evaluators()
    for ev in evaluators:
        for n in (1, 2, 4):
            npts = n + 2
            zs, xs = [], []
            for j in range(npts):
                theta = gmpy2.const_pi() * (2 * j + 1) / (2 * npts)
                z = gmpy2.mpc(gmpy2.cos(theta), gmpy2.sin(theta))
                zs.append(z)
                xs.append(EvalPoint(z).x)
            ys = [ev(EvalPoint(z), n) for z in zs]
            rows = _divided_difference_top(xs, ys)
            leading = max(scalar.mag(v) for v in rows[n])
            overshoot = scalar.mag(rows[n + 1][0])
            assert leading > 0
            assert overshoot <= scalar.make("1e-20") * max(leading, scalar.make(1))


# -------------------------------------------------------- generating function

def test_genfun_trivial_at_t_zero():
    q = scalar.make("0.5")
    lhs, rhs = qi_asc_genfun_check(0, EvalPoint(scalar.make("0.9", "0.3")),
                                   scalar.make(4), scalar.make("0.75"), q, 3)
    assert lhs == 1 and rhs == 1


def test_genfun_generic_point():
    q = scalar.make("0.5")
    t = scalar.make("0.2")
    pt = EvalPoint(scalar.make("0.62", "0.784"))
    lhs, rhs = qi_asc_genfun_check(t, pt, scalar.make("0.9"), scalar.make("0.7"), q, 60)
    assert scalar.mag(lhs - rhs) <= scalar.make("1e-25") * scalar.mag(rhs)


def test_genfun_lattice_points():
    q = scalar.make("0.5")
    t = scalar.make("0.15")
    for m in (0, 2, 4):
        lat = LatticePoint(scalar.make(4), m)
        lhs, rhs = qi_asc_genfun_check(t, lat, scalar.make(4), scalar.make("0.75"), q, 60)
        assert scalar.mag(lhs - rhs) <= scalar.make("1e-25") * scalar.mag(rhs)


def test_genfun_partial_sum_is_settled():
    q = scalar.make("0.5")
    t = scalar.make("0.2")
    pt = EvalPoint(scalar.make("0.62", "0.784"))
    a, b = scalar.make("0.9"), scalar.make("0.7")
    lhs1, _ = qi_asc_genfun_check(t, pt, a, b, q, 55)
    lhs2, _ = qi_asc_genfun_check(t, pt, a, b, q, 60)
    assert scalar.mag(lhs1 - lhs2) <= scalar.make("1e-29") * scalar.mag(lhs2)


def test_genfun_lattice_base_mismatch_rejected():
    q = scalar.make("0.5")
    with pytest.raises(DomainError):
        qi_asc_genfun_check(scalar.make("0.2"), LatticePoint(scalar.make(4), 1),
                            scalar.make(3), scalar.make("0.75"), q, 10)
