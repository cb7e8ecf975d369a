"""Arithmetic primitives against independent oracles.

The Kronecker oracle here goes through the Euler criterion prime by prime
and never touches the library's reciprocity loop.
"""

import math
import random

import pytest

from diagqf.arith import (
    PrimeSubset,
    ShapeZ,
    divisors,
    fundamental_divisors,
    is_fundamental_discriminant,
    is_squarefree,
    kronecker,
    mobius,
    primes_1mod4,
    squarefree_part,
    tau,
)


# ---------------------------------------------------------------- oracles


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _legendre(a, p):
    # Euler criterion for odd prime p
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


_KRON2 = {1: 1, 7: 1, 3: -1, 5: -1}


def kronecker_oracle(d, n):
    if n == 0:
        return 1 if abs(d) == 1 else 0
    out = 1
    for p, e in _factor(n).items():
        if p == 2:
            s = _KRON2.get(d % 8, 0)
        else:
            s = _legendre(d, p)
        if s == 0:
            return 0
        out *= s**e
    return out


def _is_fundamental_oracle(d):
    if d == 0:
        return False
    if d % 4 == 1:
        return all(e == 1 for e in _factor(abs(d)).values())
    if d % 4 == 0 and (d // 4) % 4 in (2, 3):
        return all(e == 1 for e in _factor(abs(d) // 4).values())
    return False


# ------------------------------------------------------------- kronecker


def test_kronecker_worked_values():
    assert kronecker(-20, 3) == 1
    assert kronecker(-20, 5) == 0
    assert kronecker(-4, 3) == -1
    for d in (-20, -4, 1, 5, 12, -84):
        assert kronecker(d, 1) == 1


def test_kronecker_at_zero():
    assert kronecker(1, 0) == 1
    assert kronecker(-1, 0) == 1
    assert kronecker(-20, 0) == 0
    with pytest.raises(ValueError):
        kronecker(0, 5)


def test_kronecker_matches_euler_criterion_oracle():
    for d in range(-60, 61):
        if d == 0:
            continue
        for n in range(0, 200):
            assert kronecker(d, n) == kronecker_oracle(d, n), (d, n)


def test_kronecker_completely_multiplicative():
    rng = random.Random(1729)
    for _ in range(1000):
        d = rng.choice([x for x in range(-300, 301) if x])
        n1 = rng.randrange(0, 500)
        n2 = rng.randrange(0, 500)
        assert kronecker(d, n1 * n2) == kronecker(d, n1) * kronecker(d, n2)


def test_kronecker_periodic_for_discriminants():
    for d in (-20, -4, 5, -84, 8, -52, 13):
        assert d % 4 in (0, 1)
        for n in range(1, 3 * abs(d)):
            assert kronecker(d, n) == kronecker(d, n + abs(d)), (d, n)


def test_quadratic_reciprocity_for_prime_pairs():
    # chi_{p1*} chi_{p2*}(n) = (n / p1 p2) for odd n when p1 p2 = 1 (mod 4)
    pairs = [(5, 13), (5, 17), (13, 29), (3, 7), (7, 11), (5, 29)]
    for p1, p2 in pairs:
        assert (p1 * p2) % 4 == 1
        for n in range(1, 400, 2):
            lhs = kronecker(-4 * p1, n) * kronecker(-4 * p2, n)
            assert lhs == kronecker(n, p1 * p2), (p1, p2, n)


# ------------------------------------------------- mobius / tau / squarefree


def test_mobius_tau_against_factorization():
    for n in range(1, 2000):
        fac = _factor(n)
        mu = 0 if any(e > 1 for e in fac.values()) else (-1) ** len(fac)
        assert mobius(n) == mu
        assert tau(n) == math.prod(e + 1 for e in fac.values())


def test_mobius_tau_worked_values():
    assert mobius(12) == 0
    assert tau(12) == 6
    assert mobius(1) == 1
    assert tau(1) == 1


def test_mobius_inversion_identity():
    # sum over e | m of mu(e) tau(m/e) = 1
    for m in range(1, 10**4 + 1):
        assert sum(mobius(e) * tau(m // e) for e in divisors(m)) == 1, m


def test_squarefree_part():
    assert squarefree_part(45) == (5, 3)
    for n in range(1, 2000):
        n1, n2 = squarefree_part(n)
        assert n == n1 * n2 * n2
        assert is_squarefree(n1)


# -------------------------------------------------- fundamental discriminants


def test_fundamental_examples():
    for d in (1, -3, -4, 5, 8, -8, -20, 12, 13, -84):
        assert is_fundamental_discriminant(d), d
    for d in (0, -1, 2, 3, 4, -5, 6, 9, 20, 25, -12):
        assert not is_fundamental_discriminant(d), d


def test_fundamental_divisors_worked_values():
    assert fundamental_divisors(4) == [1, -4]
    assert fundamental_divisors(20) == [1, -4, 5, -20]
    assert fundamental_divisors(1) == [1]


def test_fundamental_divisors_against_brute_filter():
    for m in (1, 4, 12, 20, 60, 84, 420, 1092):
        brute = sorted(
            (
                s * t
                for t in range(1, m + 1)
                if m % t == 0
                for s in (1, -1)
                if _is_fundamental_oracle(s * t)
            ),
            key=lambda d: (abs(d), d),
        )
        got = fundamental_divisors(m)
        assert got == brute, m
        assert len(set(got)) == len(got)
        assert all(m % abs(d) == 0 for d in got)
        assert 1 in got


# --------------------------------------------------------------- primes


def _sieve_oracle(limit):
    flags = [True] * (limit + 1)
    flags[0:2] = [False, False]
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            for q in range(p * p, limit + 1, p):
                flags[q] = False
    return [n for n in range(2, limit + 1) if flags[n]]


def test_primes_1mod4_worked_values():
    assert primes_1mod4(30).primes == (5, 13, 17, 29)
    assert primes_1mod4(5).primes == (5,)
    ps = primes_1mod4(100).primes
    assert len(ps) == 11 and ps[-1] == 97
    assert primes_1mod4(4).primes == ()


def test_primes_1mod4_against_sieve_oracle():
    expected = tuple(p for p in _sieve_oracle(2000) if p % 4 == 1)
    assert primes_1mod4(2000).primes == expected


def test_q_kind_stride_thinning():
    full = primes_1mod4(500).primes
    thinned = primes_1mod4(500, kind="Q", stride=3).primes
    assert thinned == full[::3]
    assert primes_1mod4(500, kind="Q", stride=1).primes == full


def test_explicit_subset_validation():
    s = PrimeSubset.explicit([13, 5])
    assert s.primes == (5, 13)
    with pytest.raises(ValueError):
        PrimeSubset.explicit([9])  # not prime
    with pytest.raises(ValueError):
        PrimeSubset.explicit([7])  # wrong residue class


# --------------------------------------------------------------- shapes


def test_shape_z_membership():
    for z in (1, 5, 13, 17, 21, 29, 33, 65):
        s = ShapeZ(z)
        assert s.z_star == -4 * z
        assert s.g_z == 2
    for z in (0, -5, 2, 6, 9, 25, 45, 12):
        with pytest.raises(ValueError):
            ShapeZ(z)
