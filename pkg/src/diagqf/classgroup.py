"""Class groups of imaginary quadratic discriminants via reduced forms.

Class numbers come from an exhaustive scan for reduced binary quadratic
forms; genus characters are enumerated as unordered factorizations of the
discriminant into two fundamental discriminants.  Form composition is
deliberately not implemented: every identity checked downstream needs only
the real (genus) characters, which Kronecker symbols realize directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import (
    ShapeZ,
    divisors,
    factorize,
    is_fundamental_discriminant,
)

__all__ = ["ReducedForm", "GenusPair", "ClassGroupInfo", "reduced_forms", "genus_pairs", "class_group_info"]


@dataclass(frozen=True, order=True)
class ReducedForm:
    """A reduced positive-definite form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


@dataclass(frozen=True)
class GenusPair:
    """An unordered factorization z* = f * g into fundamental discriminants.

    chi_{f,g} = chi_{g,f}, so the constructor normalizes the order; the
    pair (1, z*) is the principal character.
    """

    f: int
    g: int

    def __post_init__(self):
        for d in (self.f, self.g):
            if not is_fundamental_discriminant(d):
                raise ValueError(f"{d} is not a fundamental discriminant")
        if (abs(self.f), self.f) > (abs(self.g), self.g):
            a, b = self.g, self.f
            object.__setattr__(self, "f", a)
            object.__setattr__(self, "g", b)

    @property
    def product(self) -> int:
        return self.f * self.g

    @property
    def is_principal(self) -> bool:
        return self.f == 1


def reduced_forms(D: int) -> list[ReducedForm]:
    """All reduced forms of negative discriminant D.

    Reduction: |b| <= a <= c, with b >= 0 whenever |b| = a or a = c.  The
    scan is the direct O(|D|) triple loop; |b| <= a <= sqrt(|D|/3) bounds it.
    """
    if D >= 0:
        raise ValueError("discriminant must be negative")
    if D % 4 not in (0, 1):
        raise ValueError("discriminant must be 0 or 1 (mod 4)")
    forms = []
    for a in range(1, math.isqrt(-D // 3) + 1):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            forms.append(ReducedForm(a, b, c))
    return sorted(forms)


def genus_pairs(z: int | ShapeZ) -> list[GenusPair]:
    """All unordered factorizations of z* = -4z into two fundamental
    discriminants, the principal pair (1, z*) included."""
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    z_star = shape.z_star
    pairs = set()
    for t in divisors(-z_star):
        for f in (t, -t):
            g, r = divmod(z_star, f)
            if r == 0 and is_fundamental_discriminant(f) and is_fundamental_discriminant(g):
                pairs.add(GenusPair(f, g))
    return sorted(pairs, key=lambda p: (abs(p.f), p.f))


@dataclass(frozen=True)
class ClassGroupInfo:
    z: ShapeZ
    forms: tuple[ReducedForm, ...]
    h: int
    genus_pairs: tuple[GenusPair, ...]
    one_class_per_genus: bool


def class_group_info(z: int | ShapeZ) -> ClassGroupInfo:
    """Assemble forms, class number h and genus characters for discriminant
    z* = -4z.  one_class_per_genus is h == #genus_pairs; the pair count is
    always 2^(omega - 1) with omega the number of primes dividing z*."""
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    forms = tuple(reduced_forms(shape.z_star))
    pairs = tuple(genus_pairs(shape))
    npairs = len(pairs)
    omega = len(factorize(-shape.z_star))
    assert npairs == 2 ** (omega - 1), (shape.z, npairs, omega)
    return ClassGroupInfo(
        z=shape,
        forms=forms,
        h=len(forms),
        genus_pairs=pairs,
        one_class_per_genus=(len(forms) == npairs),
    )
