"""Dirichlet coefficients of genus-character series, exactly.

a(n, chi_{f,g}) is the Dirichlet convolution of the Kronecker characters
chi_f and chi_g; the same values come from the prime-power case analysis
(inert / split / ramified), and averaging over all genus characters
recovers r(n, z) when one class per genus holds.  Also here: the Moebius
five-fold convolution identity for products of two such series, its
rearrangement into a product of four character series times an inverse
L-factor on squares, and the generic Dirichlet quotient recursion.

All arithmetic is exact in 64-bit integers; coefficients stay tiny (a
genus coefficient is bounded by the divisor count).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arith import (
    ShapeZ,
    divisors,
    is_fundamental_discriminant,
    kronecker,
    mobius,
    primes_upto,
)
from .classgroup import GenusPair, class_group_info
from .errors import GenusReconstructionError

__all__ = [
    "CoefficientSeries",
    "character_array",
    "product_character_array",
    "dirichlet_convolve",
    "split_type",
    "genus_coeffs",
    "prime_power_coeff",
    "reconstruct_r",
    "mobius_identity_lhs_rhs",
    "mobius_identity_table",
    "factorization_check",
    "quotient_prime_powers",
    "quotient_series",
    "multiplicative_series",
]


@dataclass(frozen=True)
class CoefficientSeries:
    """First N coefficients of a Dirichlet series, exact integers.

    coeffs has length N + 1 with coeffs[0] = 0 unused; provenance records
    how the values were produced (convolution, prime-power, product,
    quotient, reconstruction).
    """

    coeffs: np.ndarray
    provenance: str

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return int(self.coeffs[n])

    def write_csv(self, stream) -> None:
        stream.write("n,a_n\n")
        for n in range(1, self.N + 1):
            stream.write(f"{n},{int(self.coeffs[n])}\n")


def character_array(d: int, N: int) -> np.ndarray:
    """kronecker(d, n) for n = 0..N as an int64 array (index 0 is 0)."""
    out = np.zeros(N + 1, dtype=np.int64)
    for n in range(1, N + 1):
        out[n] = kronecker(d, n)
    return out


def product_character_array(factors, N: int) -> np.ndarray:
    """Pointwise product of Kronecker character arrays, never reduced to a
    primitive character."""
    out = np.zeros(N + 1, dtype=np.int64)
    out[1:] = 1
    for d in factors:
        out *= character_array(d, N)
    return out


def dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)[n] = sum over n = u*v of a[u] b[v], arrays indexed from 1."""
    N = len(a) - 1
    if len(b) != N + 1:
        raise ValueError("length mismatch")
    out = np.zeros_like(a)
    for u in range(1, N + 1):
        au = a[u]
        if au:
            out[u::u] += au * b[1 : N // u + 1]
    return out


def split_type(z: int | ShapeZ, p: int) -> str:
    """How p behaves in the order of discriminant -4z: "inert", "split" or
    "ramified", matching the sign of kronecker(-4z, p)."""
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    t = kronecker(shape.z_star, p)
    return {1: "split", -1: "inert", 0: "ramified"}[t]


def _check_pair(shape: ShapeZ, pair: GenusPair) -> None:
    if pair.product != shape.z_star:
        raise ValueError(f"pair ({pair.f}, {pair.g}) does not factor z* = {shape.z_star}")


def genus_coeffs(z: int | ShapeZ, pair: GenusPair, N: int) -> CoefficientSeries:
    """a(n, chi_{f,g}) = sum over n = u*v of chi_f(u) chi_g(v), n <= N."""
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    _check_pair(shape, pair)
    if N < 1:
        raise ValueError("N must be >= 1")
    conv = dirichlet_convolve(character_array(pair.f, N), character_array(pair.g, N))
    return CoefficientSeries(coeffs=conv, provenance="convolution")


def prime_power_coeff(z: int | ShapeZ, pair: GenusPair, p: int, k: int) -> int:
    """a(p^k, chi_{f,g}) from the split-type case analysis.

    Inert p: ((-1)^k + 1) / 2.  Split p: the symmetric sum over the two
    primes above p collapses to (k + 1) * chi(p)^k because genus characters
    depend only on the ideal norm.  Ramified p: chi evaluated at the prime
    above p via whichever of chi_f, chi_g is unramified there, to the k-th
    power.
    """
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    _check_pair(shape, pair)
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return 1
    t = kronecker(shape.z_star, p)
    if t == -1:
        return ((-1) ** k + 1) // 2
    if t == 1:
        s = kronecker(pair.f, p)
        assert s == kronecker(pair.g, p) != 0
        return (k + 1) * s**k
    s = kronecker(pair.f, p) if pair.f % p != 0 else kronecker(pair.g, p)
    assert s != 0
    return s**k


def reconstruct_r(z: int | ShapeZ, N: int) -> CoefficientSeries:
    """r(n, z) for n <= N from character orthogonality.

    Averages the genus-character coefficient series over all genus pairs
    and divides by the class number.  Only valid when genus characters span
    the whole dual group (one class per genus); refuses otherwise, since
    the missing complex characters cannot be built from Kronecker symbols.
    """
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    info = class_group_info(shape)
    if not info.one_class_per_genus:
        raise GenusReconstructionError(
            f"z = {shape.z}: class number {info.h} exceeds genus count "
            f"{len(info.genus_pairs)}; complex characters would be needed"
        )
    total = np.zeros(N + 1, dtype=np.int64)
    for pair in info.genus_pairs:
        total += genus_coeffs(shape, pair, N).coeffs
    if (total % info.h).any():
        raise GenusReconstructionError(f"z = {shape.z}: character sum not divisible by h")
    return CoefficientSeries(coeffs=total // info.h, provenance="reconstruction")


def _five_fold_rhs(f1: int, g1: int, f2: int, g2: int, N: int, e_weights: np.ndarray) -> np.ndarray:
    """sum over n = a*b*c*d*e^2 of
    chi_{f1 f2}(a) chi_{f1 g2}(b) chi_{g1 f2}(c) chi_{g1 g2}(d) * e_weights[e],
    with chi_{uv} meaning the pointwise product chi_u * chi_v."""
    F1 = character_array(f1, N)
    G1 = character_array(g1, N)
    F2 = character_array(f2, N)
    G2 = character_array(g2, N)
    pa = F1 * F2
    pb = F1 * G2
    pc = G1 * F2
    pd = G1 * G2
    acc = dirichlet_convolve(dirichlet_convolve(dirichlet_convolve(pa, pb), pc), pd)
    sq = np.zeros(N + 1, dtype=np.int64)
    for e in range(1, math.isqrt(N) + 1):
        sq[e * e] = e_weights[e]
    return dirichlet_convolve(acc, sq)


def mobius_identity_lhs_rhs(
    quad: tuple[int, int, int, int], n: int
) -> tuple[int, int]:
    """Both sides of the five-variable Moebius expansion of a product of two
    character convolutions at a single n.

    LHS = (chi_{f1} * chi_{g1})(n) * (chi_{f2} * chi_{g2})(n); RHS sums
    mu(e) chi_{f1}(abe) chi_{g1}(cde) chi_{f2}(ace) chi_{g2}(bde) over
    ordered tuples with n = a*b*c*d*e^2.  The contract is LHS == RHS.
    """
    f1, g1, f2, g2 = quad
    for disc in quad:
        if not is_fundamental_discriminant(disc):
            raise ValueError(f"{disc} is not a fundamental discriminant")
    lhs1 = sum(kronecker(f1, u) * kronecker(g1, n // u) for u in divisors(n))
    lhs2 = sum(kronecker(f2, u) * kronecker(g2, n // u) for u in divisors(n))
    rhs = 0
    for e in divisors(n):
        e2 = e * e
        if n % e2:
            continue
        mu = mobius(e)
        if mu == 0:
            continue
        m = n // e2
        for a in divisors(m):
            ma = m // a
            for b in divisors(ma):
                mb = ma // b
                for c in divisors(mb):
                    d = mb // c
                    rhs += (
                        mu
                        * kronecker(f1, a * b * e)
                        * kronecker(g1, c * d * e)
                        * kronecker(f2, a * c * e)
                        * kronecker(g2, b * d * e)
                    )
    return lhs1 * lhs2, rhs


def mobius_identity_table(quad: tuple[int, int, int, int], N: int) -> tuple[np.ndarray, np.ndarray]:
    """Vector version of mobius_identity_lhs_rhs for all n <= N."""
    f1, g1, f2, g2 = quad
    lhs = dirichlet_convolve(character_array(f1, N), character_array(g1, N)) * dirichlet_convolve(
        character_array(f2, N), character_array(g2, N)
    )
    e_max = math.isqrt(N)
    e_weights = np.zeros(e_max + 1, dtype=np.int64)
    for e in range(1, e_max + 1):
        mu = mobius(e)
        if mu:
            e_weights[e] = (
                mu * kronecker(f1, e) * kronecker(g1, e) * kronecker(f2, e) * kronecker(g2, e)
            )
    rhs = _five_fold_rhs(f1, g1, f2, g2, N, e_weights)
    return lhs, rhs


def factorization_check(
    z1: int | ShapeZ,
    z2: int | ShapeZ,
    pair1: GenusPair,
    pair2: GenusPair,
    N: int,
) -> tuple[bool, int | None]:
    """Coefficientwise check that the product of two genus series factors as
    four product-character series times the inverse quadratic L-factor.

    Verifies, for n <= N, that a1(n) * a2(n) equals the sum over
    n = a*b*c*d*e^2 of chi_{f1 f2}(a) chi_{f1 g2}(b) chi_{g1 f2}(c)
    chi_{g1 g2}(d) mu(e) chi_{z1* z2*}(e), all characters read as literal
    pointwise products of Kronecker symbols.  Returns (ok, first mismatch).
    """
    s1 = z1 if isinstance(z1, ShapeZ) else ShapeZ(z1)
    s2 = z2 if isinstance(z2, ShapeZ) else ShapeZ(z2)
    if s1.z == s2.z:
        raise ValueError("the two shapes must be distinct")
    _check_pair(s1, pair1)
    _check_pair(s2, pair2)
    lhs = genus_coeffs(s1, pair1, N).coeffs * genus_coeffs(s2, pair2, N).coeffs
    e_max = math.isqrt(N)
    e_weights = np.zeros(e_max + 1, dtype=np.int64)
    for e in range(1, e_max + 1):
        mu = mobius(e)
        if mu:
            e_weights[e] = mu * kronecker(s1.z_star, e) * kronecker(s2.z_star, e)
    rhs = _five_fold_rhs(pair1.f, pair1.g, pair2.f, pair2.g, N, e_weights)
    diff = np.flatnonzero(lhs[1:] != rhs[1:])
    if diff.size:
        return False, int(diff[0]) + 1
    return True, None


PrimePowerFn = Callable[[int, int], int]


def quotient_prime_powers(pp_a: PrimePowerFn, pp_b: PrimePowerFn, p: int, k_max: int) -> list[int]:
    """g_k(p) for 1 <= k <= k_max from the quotient recursion
    g_k = a_k - b_k - sum_{m=1}^{k-1} b_m g_{k-m}."""
    g: list[int] = []
    for k in range(1, k_max + 1):
        val = pp_a(p, k) - pp_b(p, k)
        for m in range(1, k):
            val -= pp_b(p, m) * g[k - m - 1]
        g.append(val)
    return g


def multiplicative_series(pp: PrimePowerFn, N: int, provenance: str = "prime-power") -> CoefficientSeries:
    """Expand a multiplicative function given on prime powers to n <= N."""
    arr = np.zeros(N + 1, dtype=np.int64)
    arr[1] = 1
    for p in primes_upto(N):
        p = int(p)
        old = arr.copy()
        pk, k = p, 1
        while pk <= N:
            v = pp(p, k)
            if v:
                arr[pk::pk] += v * old[1 : N // pk + 1]
            pk *= p
            k += 1
    return CoefficientSeries(coeffs=arr, provenance=provenance)


def quotient_series(pp_a: PrimePowerFn, pp_b: PrimePowerFn, N: int) -> CoefficientSeries:
    """The multiplicative series G with A = B * G (Dirichlet product), where
    A and B are multiplicative series given by their prime-power values.

    The recursion needs no division, so G is exact whenever the inputs are
    integers; convolving B with the result reproduces A identically.
    """
    cache: dict[int, list[int]] = {}

    def pp_g(p: int, k: int) -> int:
        if p not in cache:
            k_max = int(math.log(N) / math.log(p)) + 1
            while p**k_max > N:
                k_max -= 1
            cache[p] = quotient_prime_powers(pp_a, pp_b, p, max(k_max, 1))
        return cache[p][k - 1]

    return multiplicative_series(pp_g, N, provenance="quotient")
