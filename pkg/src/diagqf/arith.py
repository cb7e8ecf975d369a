"""Exact integer arithmetic primitives.

Kronecker symbols, fundamental discriminants, Moebius / divisor-count
functions, squarefree decomposition, and primes p = 1 (mod 4).  All
operations are pure functions of their inputs and safe to call from any
number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "kronecker",
    "is_fundamental_discriminant",
    "fundamental_divisors",
    "factorize",
    "divisors",
    "prime_factors",
    "is_prime",
    "is_squarefree",
    "mobius",
    "tau",
    "squarefree_part",
    "primes_upto",
    "primes_1mod4",
    "PrimeSubset",
    "ShapeZ",
]


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for d != 0 and n >= 0.

    Completely multiplicative in both arguments; for d = 0, 1 (mod 4) this
    is the quadratic character of discriminant d, periodic in n with
    period |d|.
    """
    if d == 0:
        raise ValueError("Kronecker symbol (d/n) requires d != 0")
    if n < 0:
        raise ValueError("Kronecker symbol (d/n) requires n >= 0 here")
    if n == 0:
        return 1 if d in (1, -1) else 0
    if d % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    # (d/2) factors: depends on d mod 8 (d odd once we get here with n even)
    while n % 2 == 0:
        n //= 2
        if d % 8 in (3, 5):
            result = -result
    # Jacobi part, n odd > 0; (d/n) depends only on d mod n
    a = d % n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {p: exponent} by trial division."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_factors(n: int) -> list[int]:
    return sorted(factorize(n))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_squarefree(n: int) -> bool:
    """True if no square of a prime divides |n| (and n != 0)."""
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def tau(n: int) -> int:
    """Number of positive divisors."""
    return math.prod(e + 1 for e in factorize(n).values())


def squarefree_part(n: int) -> tuple[int, int]:
    """Decompose n >= 1 as n1 * n2**2 with n1 squarefree; returns (n1, n2)."""
    n1 = n2 = 1
    for p, e in factorize(n).items():
        if e % 2:
            n1 *= p
        n2 *= p ** (e // 2)
    return n1, n2


def is_fundamental_discriminant(d: int) -> bool:
    """True for d = 1, squarefree d = 1 (mod 4), or d = 4m with m = 2, 3
    (mod 4) squarefree.  These are the discriminants of quadratic fields,
    with 1 admitted as the trivial one."""
    if d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_divisors(m: int) -> list[int]:
    """All fundamental discriminants d of either sign with d | m, sorted by
    (|d|, d).  Always contains 1."""
    if m < 1:
        raise ValueError("fundamental_divisors requires m >= 1")
    out = []
    for t in divisors(m):
        for d in (t, -t):
            if is_fundamental_discriminant(d):
                out.append(d)
    return sorted(out, key=lambda d: (abs(d), d))


def primes_upto(limit: int) -> np.ndarray:
    """Primes <= limit via a boolean Eratosthenes sieve (int64 array)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


@dataclass(frozen=True)
class ShapeZ:
    """A form shape z: squarefree, z = 1 (mod 4).

    For z > 1 the ring of integers of Q(sqrt(-z)) has exactly two units,
    and the normalization g_z = 2 is applied uniformly across the shape
    set (z = 1, where the Gaussian integers have four units, included).
    """

    z: int

    def __post_init__(self):
        z = self.z
        if z < 1 or z % 4 != 1 or not is_squarefree(z):
            raise ValueError(
                f"z = {z} is not admissible: need z >= 1 squarefree with z = 1 (mod 4)"
            )

    @property
    def z_star(self) -> int:
        return -4 * self.z

    @property
    def g_z(self) -> int:
        return 2


@dataclass(frozen=True)
class PrimeSubset:
    """A finite set of primes p = 1 (mod 4) below a cutoff Z.

    kind is "P" (all such primes), "Q" (a deterministic stride thinning of
    P), or "explicit".
    """

    Z: float
    kind: str
    primes: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("P", "Q", "explicit"):
            raise ValueError(f"unknown prime subset kind {self.kind!r}")
        prev = 0
        for p in self.primes:
            if p % 4 != 1 or p > self.Z or p <= prev:
                raise ValueError(f"bad member {p} in prime subset")
            if self.kind == "explicit" and not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    @classmethod
    def explicit(cls, primes, Z: float | None = None) -> "PrimeSubset":
        primes = tuple(sorted(primes))
        if Z is None:
            Z = primes[-1] if primes else 5
        return cls(Z=Z, kind="explicit", primes=primes)


def primes_1mod4(Z: float, kind: str = "P", stride: int = 1) -> PrimeSubset:
    """Primes p = 1 (mod 4), p <= Z.

    kind "P" keeps them all; kind "Q" keeps those whose index in the
    ordered list is a multiple of `stride` (a deterministic thinning whose
    counting function still grows like Z/log Z).  Z < 5 gives the empty
    subset.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if Z < 5:
        return PrimeSubset(Z=Z, kind=kind if kind in ("P", "Q") else "P", primes=())
    ps = primes_upto(int(Z))
    ps = ps[ps % 4 == 1]
    if kind == "P":
        pass
    elif kind == "Q":
        ps = ps[::stride]
    else:
        raise ValueError(f"unknown prime subset kind {kind!r}")
    return PrimeSubset(Z=Z, kind=kind, primes=tuple(int(p) for p in ps))
