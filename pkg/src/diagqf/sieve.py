"""Representation-count tables for x^2 + z*y^2 and derived statistics.

The sieve enumerates lattice points (x, y) in the first quadrant, adds
multiplicity 2^(#nonzero coordinates), and halves the total: for z in the
admissible shape set the automorphism count is exactly 2, and every raw
per-n total is even (asserted).  Tables are built segment by segment over
n-ranges, so memory stays bounded and any shard split of [1, X] merges to
a bit-identical result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import PrimeSubset, ShapeZ
from .errors import InvariantViolation

__all__ = [
    "RepTable",
    "MomentReport",
    "rep_counts",
    "union_count",
    "union_count_from_tables",
    "weighted_sum_table",
    "weighted_table_from_tables",
    "moment_report",
    "moment_report_from_tables",
    "DEFAULT_SEGMENT_WIDTH",
]

DEFAULT_SEGMENT_WIDTH = 1 << 24
COUNT_DTYPE = np.uint16


@dataclass(frozen=True)
class RepTable:
    """Exact representation counts r(n, z) for 1 <= n <= X.

    counts has length X + 1 with counts[0] = 0 unused; entries are the
    lattice-point counts divided by g_z = 2 and fit in 16 bits.
    """

    X: int
    z: ShapeZ
    counts: np.ndarray

    @property
    def g_z(self) -> int:
        return self.z.g_z

    def first_moment(self) -> int:
        """Sum of r(n, z) over n <= X, exact."""
        return int(self.counts.sum(dtype=np.int64))

    def second_moment(self) -> int:
        """Sum of r(n, z)^2 over n <= X, exact."""
        c = self.counts.astype(np.int64)
        return int(np.dot(c, c))

    def prefix(self, X: int) -> "RepTable":
        """The table truncated to n <= X (shares no data with self)."""
        if not 1 <= X <= self.X:
            raise ValueError("prefix bound out of range")
        return RepTable(X=X, z=self.z, counts=self.counts[: X + 1].copy())


def _ceil_sqrt(t: int) -> int:
    s = math.isqrt(t)
    return s if s * s == t else s + 1


def _accumulate_segment(scratch: np.ndarray, lo: int, hi: int, z: int, squares: np.ndarray) -> None:
    """Add raw lattice multiplicities for z*y^2 + x^2 = n, lo <= n <= hi."""
    y = 0
    while True:
        base = z * y * y
        if base > hi:
            break
        x_lo = 0 if base >= lo else _ceil_sqrt(lo - base)
        x_hi = math.isqrt(hi - base)
        if x_lo <= x_hi:
            wy = 2 if y else 1
            idx = squares[x_lo : x_hi + 1] + (base - lo)
            scratch[idx] += 2 * wy
            if x_lo == 0:
                # the x = 0 point has half the generic multiplicity
                scratch[base - lo] -= wy
        y += 1


def _segments(X: int, shards: int, segment_width: int):
    """Contiguous (lo, hi) covering [1, X]: shard split first, then chop."""
    base, rem = divmod(X, shards)
    lo = 1
    for i in range(shards):
        size = base + (1 if i < rem else 0)
        if size == 0:
            continue
        shard_hi = lo + size - 1
        while lo <= shard_hi:
            hi = min(lo + segment_width - 1, shard_hi)
            yield lo, hi
            lo = hi + 1


def rep_counts(
    X: int,
    z: int | ShapeZ,
    *,
    shards: int = 1,
    segment_width: int = DEFAULT_SEGMENT_WIDTH,
) -> RepTable:
    """Exact table of r(n, z) for n <= X.

    Deterministic regardless of the shard count or segment width: segments
    partition [1, X] and each lattice point lands in exactly one of them.
    Raises InvariantViolation if a raw count is odd or overflows 16 bits.
    """
    shape = z if isinstance(z, ShapeZ) else ShapeZ(z)
    if X < 1:
        raise ValueError("X must be >= 1")
    if shards < 1 or segment_width < 1:
        raise ValueError("shards and segment_width must be >= 1")
    counts = np.zeros(X + 1, dtype=COUNT_DTYPE)
    squares = np.arange(math.isqrt(X) + 1, dtype=np.int64) ** 2
    for lo, hi in _segments(X, shards, segment_width):
        scratch = np.zeros(hi - lo + 1, dtype=np.int64)
        _accumulate_segment(scratch, lo, hi, shape.z, squares)
        if (scratch & 1).any():
            raise InvariantViolation(f"odd raw lattice count in [{lo}, {hi}] for z={shape.z}")
        scratch >>= 1
        if scratch.max(initial=0) >= 1 << 16:
            raise InvariantViolation(f"r(n, z) overflows 16 bits in [{lo}, {hi}] for z={shape.z}")
        counts[lo : hi + 1] = scratch.astype(COUNT_DTYPE)
    return RepTable(X=X, z=shape, counts=counts)


def _as_tables(X, zs, shards=1, segment_width=DEFAULT_SEGMENT_WIDTH) -> dict[int, RepTable]:
    out = {}
    for z in zs:
        zz = z.z if isinstance(z, ShapeZ) else int(z)
        if zz not in out:
            out[zz] = rep_counts(X, zz, shards=shards, segment_width=segment_width)
    return out


def union_count_from_tables(tables: dict[int, RepTable]) -> int:
    """#{n <= X represented by at least one of the shapes}."""
    mask = None
    for t in tables.values():
        m = t.counts[1:] > 0
        mask = m if mask is None else (mask | m)
    return 0 if mask is None else int(mask.sum())


def union_count(X: int, zs, **kw) -> int:
    return union_count_from_tables(_as_tables(X, zs, **kw))


def weighted_table_from_tables(X: int, tables: dict[int, RepTable]) -> np.ndarray:
    """R(n) = sum over p of sqrt(p) * r(n, p), float64 array indexed by n."""
    R = np.zeros(X + 1, dtype=np.float64)
    for p, t in tables.items():
        R[1:] += math.sqrt(p) * t.counts[1:].astype(np.float64)
    return R


def weighted_sum_table(X: int, primes: PrimeSubset, **kw) -> np.ndarray:
    return weighted_table_from_tables(X, _as_tables(X, primes, **kw))


@dataclass(frozen=True)
class MomentReport:
    """First and second moments of the weighted counts R(n).

    diagonal is the exact integer sum over p of p * r(n,p)^2; off_diagonal
    carries the sqrt(p1*p2)-weighted cross sums (exact integer cross sums,
    irrational weights).  cs_lower_bound is the Cauchy-Schwarz bound
    (sum R)^2 / (sum R^2), computed from one float table so the inequality
    against the union count holds as stated between computed numbers.
    """

    X: int
    Z: float
    primes: tuple[int, ...]
    first_moment: float
    diagonal: int
    off_diagonal: float
    cs_lower_bound: float
    regime_ok: bool

    @property
    def second_moment(self) -> float:
        return self.diagonal + self.off_diagonal


def moment_report_from_tables(X: int, Z: float, tables: dict[int, RepTable]) -> MomentReport:
    ps = sorted(tables)
    diagonal = 0
    for p in ps:
        diagonal += p * tables[p].second_moment()
    off = 0.0
    for i, p1 in enumerate(ps):
        c1 = tables[p1].counts.astype(np.int64)
        for p2 in ps[i + 1 :]:
            cross = int(np.dot(c1, tables[p2].counts.astype(np.int64)))
            off += 2.0 * math.sqrt(p1 * p2) * cross
    R = weighted_table_from_tables(X, tables)
    fm = float(R.sum())
    sm = float(np.dot(R, R))
    cs = (fm * fm / sm) if sm > 0 else 0.0
    regime_ok = (not ps) or max(ps) <= X ** 0.1
    return MomentReport(
        X=X,
        Z=Z,
        primes=tuple(ps),
        first_moment=fm,
        diagonal=diagonal,
        off_diagonal=off,
        cs_lower_bound=cs,
        regime_ok=regime_ok,
    )


def moment_report(X: int, primes: PrimeSubset, **kw) -> MomentReport:
    """Moments of R(n) for n <= X over the given prime subset.

    The recommended regime Z <= X^(1/10) is reported via regime_ok, not
    enforced.
    """
    tables = _as_tables(X, primes, **kw)
    return moment_report_from_tables(X, float(primes.Z), tables)
