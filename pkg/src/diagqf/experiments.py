"""Experiment drivers: correlation main-term checks, density scans and
character-sum diagnostics.

Everything here is deterministic given its inputs; sieve tables may be
shared across ladder points because a table for a larger bound restricts
to the table for any smaller bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import (
    ShapeZ,
    is_squarefree,
    kronecker,
    primes_1mod4,
)
from . import cache as qcache
from .errors import InvariantViolation
from .lseries import main_term_report
from .sieve import (
    DEFAULT_SEGMENT_WIDTH,
    RepTable,
    moment_report_from_tables,
    rep_counts,
    union_count_from_tables,
)

__all__ = [
    "ExperimentConfig",
    "CorrelationReport",
    "BernaysPoint",
    "DensityReport",
    "DiagnosticsReport",
    "correlation_ladder",
    "bernays_scan",
    "density_run",
    "density_policy_z",
    "char_sum_diagnostics",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared run options for the experiment drivers behind the CLI."""

    xs: tuple[int, ...]
    eps: float = 1e-8
    fmt: str = "csv"
    cache_dir: str | None = None
    shards: int = 1
    segment_width: int = DEFAULT_SEGMENT_WIDTH
    z_cap: float | None = None

    def __post_init__(self):
        if not self.xs:
            raise ValueError("at least one X is required")
        if min(self.xs) < 10:
            raise ValueError("X must be >= 10")
        if self.shards < 1:
            raise ValueError("shard count must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        if self.z_cap is not None and self.z_cap > max(self.xs):
            raise ValueError("Z must not exceed X")


def _table(X: int, z: int, *, shards=1, segment_width=DEFAULT_SEGMENT_WIDTH, cache_dir=None) -> RepTable:
    if cache_dir:
        path = qcache.cache_path(cache_dir, X, z)
        if path.exists():
            return qcache.read_table(path)
    t = rep_counts(X, z, shards=shards, segment_width=segment_width)
    if cache_dir:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        qcache.write_table(t, qcache.cache_path(cache_dir, X, z))
    return t


def _dot_prefix(t1: RepTable, t2: RepTable, X: int) -> int:
    total = 0
    lo = 1
    while lo <= X:
        hi = min(lo + (1 << 22) - 1, X)
        total += int(
            np.dot(
                t1.counts[lo : hi + 1].astype(np.int64),
                t2.counts[lo : hi + 1].astype(np.int64),
            )
        )
        lo = hi + 1
    return total


@dataclass
class CorrelationReport:
    """One ladder point of the correlation-sum check."""

    z1: int
    z2: int
    X: int
    lhs: int
    main_term: float
    abs_err: float
    rel_err: float
    fitted_exponent: float | None = None

    def to_dict(self) -> dict:
        return {
            "z1": self.z1,
            "z2": self.z2,
            "X": self.X,
            "lhs": self.lhs,
            "main_term": self.main_term,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "fitted_exponent": self.fitted_exponent,
        }


def fitted_exponent(xs, errs) -> float | None:
    """Least-squares slope of log(err) against log(X); None if degenerate."""
    pts = [(x, e) for x, e in zip(xs, errs) if e > 0]
    if len(pts) < 2:
        return None
    lx = np.log([p[0] for p in pts])
    le = np.log([p[1] for p in pts])
    return float(np.polyfit(lx, le, 1)[0])


def correlation_ladder(
    z1: int,
    z2: int,
    X_ladder,
    *,
    eps: float = 1e-8,
    shards: int = 1,
    segment_width: int = DEFAULT_SEGMENT_WIDTH,
    cache_dir: str | None = None,
) -> list[CorrelationReport]:
    """Exact sum_{n<=X} r(n, z1) r(n, z2) against its closed-form main term
    along an ascending X ladder, plus the fitted error exponent."""
    s1, s2 = ShapeZ(z1), ShapeZ(z2)
    if s1.z == s2.z:
        raise ValueError("z1 and z2 must be distinct")
    ladder = [int(x) for x in X_ladder]
    if not ladder or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("X ladder must be non-empty and strictly ascending")
    Xmax = ladder[-1]
    t1 = _table(Xmax, s1.z, shards=shards, segment_width=segment_width, cache_dir=cache_dir)
    t2 = _table(Xmax, s2.z, shards=shards, segment_width=segment_width, cache_dir=cache_dir)
    unit = main_term_report(s1, s2, 1.0, eps)
    reports = []
    for X in ladder:
        lhs = _dot_prefix(t1, t2, X)
        main = unit.value * X
        abs_err = abs(lhs - main)
        reports.append(
            CorrelationReport(
                z1=s1.z,
                z2=s2.z,
                X=X,
                lhs=lhs,
                main_term=main,
                abs_err=abs_err,
                rel_err=abs_err / main if main else math.inf,
            )
        )
    slope = fitted_exponent([r.X for r in reports], [r.abs_err for r in reports])
    for r in reports:
        r.fitted_exponent = slope
    return reports


@dataclass(frozen=True)
class BernaysPoint:
    X: int
    count: int
    kappa_hat: float

    def to_dict(self) -> dict:
        return {"X": self.X, "count": self.count, "kappa_hat": self.kappa_hat}


def bernays_scan(
    z: int,
    X_ladder,
    *,
    shards: int = 1,
    segment_width: int = DEFAULT_SEGMENT_WIDTH,
    cache_dir: str | None = None,
) -> list[BernaysPoint]:
    """Counts N(X, {z}) of integers represented by x^2 + z y^2 along a
    ladder, with the normalized density N * sqrt(log X) / X.

    No convergence is asserted: the normalized values drift on a log
    scale and are only expected positive and bounded.
    """
    shape = ShapeZ(z)
    ladder = [int(x) for x in X_ladder]
    if not ladder or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("X ladder must be non-empty and strictly ascending")
    Xmax = ladder[-1]
    t = _table(Xmax, shape.z, shards=shards, segment_width=segment_width, cache_dir=cache_dir)
    represented = np.cumsum(t.counts > 0)
    out = []
    for X in ladder:
        N = int(represented[X])
        kappa = N * math.sqrt(math.log(X)) / X if X > 1 else 0.0
        out.append(BernaysPoint(X=X, count=N, kappa_hat=kappa))
    return out


def density_policy_z(X: int) -> float:
    """The density-experiment cutoff Z = log X * log log X (natural logs);
    needs X >= 100 so the inner log is positive."""
    if X < 100:
        raise ValueError("the log-log policy needs X >= 100")
    return math.log(X) * math.log(math.log(X))


@dataclass(frozen=True)
class DensityReport:
    X: int
    Z: float
    kind: str
    subset: tuple[int, ...]
    subset_size: int
    union: int
    ratio: float
    cs_bound: float
    first_moment: float
    diagonal: int
    off_diagonal: float

    def to_dict(self) -> dict:
        return {
            "X": self.X,
            "Z": self.Z,
            "kind": self.kind,
            "subset": list(self.subset),
            "count_S": self.subset_size,
            "N": self.union,
            "ratio": self.ratio,
            "cs_bound": self.cs_bound,
            "first_moment": self.first_moment,
            "diagonal": self.diagonal,
            "off_diagonal": self.off_diagonal,
        }


def density_run(
    X: int,
    *,
    policy: str = "paper",
    Z: float | None = None,
    kind: str = "P",
    stride: int = 1,
    shards: int = 1,
    segment_width: int = DEFAULT_SEGMENT_WIDTH,
    cache_dir: str | None = None,
) -> DensityReport:
    """Union count over the prime shapes p <= Z with its Cauchy-Schwarz
    lower bound from the weighted moments.

    policy "paper" sets Z = log X * log log X; policy "explicit" takes Z
    as given (capped by X).  The report always satisfies
    union >= cs_bound; a violation would be a broken computation and
    raises InvariantViolation.
    """
    if policy == "paper":
        Z = density_policy_z(X)
    elif policy == "explicit":
        if Z is None:
            raise ValueError("explicit policy needs Z")
    else:
        raise ValueError(f"unknown policy {policy!r}")
    if Z > X:
        raise ValueError("Z must not exceed X")
    primes = primes_1mod4(Z, kind=kind, stride=stride)
    tables = {
        p: _table(X, p, shards=shards, segment_width=segment_width, cache_dir=cache_dir)
        for p in primes
    }
    union = union_count_from_tables(tables)
    mom = moment_report_from_tables(X, float(Z), tables)
    if union < mom.cs_lower_bound:
        raise InvariantViolation(
            f"union count {union} fell below its Cauchy-Schwarz bound {mom.cs_lower_bound}"
        )
    return DensityReport(
        X=X,
        Z=float(Z),
        kind=kind,
        subset=tuple(primes),
        subset_size=len(primes),
        union=union,
        ratio=union / X,
        cs_bound=mom.cs_lower_bound,
        first_moment=mom.first_moment,
        diagonal=mom.diagonal,
        off_diagonal=mom.off_diagonal,
    )


@dataclass(frozen=True)
class DiagRow:
    n: int
    T: int
    orth_sum: int | None

    def to_dict(self) -> dict:
        return {"n": self.n, "T": self.T, "orth_sum": self.orth_sum}


@dataclass(frozen=True)
class DiagnosticsReport:
    """Character-sum diagnostics over odd squarefree non-square moduli.

    T(n) sums the symbols (p/n) over the prime subset; the starred sum
    aggregates |T(n)|^2.  hb_ratio normalizes it by Z^2.1 (quadratic large
    sieve envelope), elliott_ratio by (Z^2 + N^2 log N) N.  orth_sum is the
    exact character sum over residues d = 1 (mod 4) modulo 4n, zero for
    every valid n.
    """

    Z: float
    n_max: int
    subset: tuple[int, ...]
    rows: tuple[DiagRow, ...]
    starred_sum: int
    hb_ratio: float
    elliott_lhs: int
    elliott_ratio: float
    all_orthogonality_zero: bool
    two_way_checked: int
    two_way_ok: bool
    reciprocity_ok: bool


def _orthogonality_sum(n: int) -> int:
    return sum(kronecker(d, 4 * n) for d in range(1, 4 * n, 4))


def _pi_class_recount(primes, n: int) -> int:
    """T(n) recomputed through prime counts per residue class mod 4n."""
    counts: dict[int, int] = {}
    for p in primes:
        counts[p % (4 * n)] = counts.get(p % (4 * n), 0) + 1
    return sum(kronecker(d, 4 * n) * c for d, c in counts.items())


def char_sum_diagnostics(
    Z: float,
    n_max: int,
    *,
    orth_limit: int = 500,
    two_way_limit: int = 200,
) -> DiagnosticsReport:
    if Z < 5:
        raise ValueError("Z must be at least 5")
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    primes = primes_1mod4(Z, kind="P")
    ns = [n for n in range(3, n_max + 1, 2) if is_squarefree(n)]
    plist = list(primes)
    M = np.array([[kronecker(p, n) for n in ns] for p in plist], dtype=np.int64)
    if M.size == 0:
        M = M.reshape(len(plist), len(ns))
    T = M.sum(axis=0) if plist else np.zeros(len(ns), dtype=np.int64)

    rows = []
    all_zero = True
    two_way_ok = True
    two_way_checked = 0
    for j, n in enumerate(ns):
        orth = _orthogonality_sum(n) if n <= orth_limit else None
        if orth is not None and orth != 0:
            all_zero = False
        if n <= two_way_limit:
            two_way_checked += 1
            if _pi_class_recount(plist, n) != int(T[j]):
                two_way_ok = False
        rows.append(DiagRow(n=n, T=int(T[j]), orth_sum=orth))

    starred = int(np.dot(T, T))
    hb_ratio = starred / Z**2.1
    if len(plist) >= 2:
        G = M @ M.T
        diag = np.diag(G)
        elliott_lhs = int(np.dot(G.ravel(), G.ravel()) - np.dot(diag, diag))
    else:
        elliott_lhs = 0
    envelope = (Z**2 + n_max**2 * math.log(n_max)) * n_max
    elliott_ratio = elliott_lhs / envelope

    reciprocity_ok = True
    for i, p1 in enumerate(plist[:6]):
        for p2 in plist[i + 1 : 6]:
            for n in (3, 7, 9, 15, 21, 35):
                lhs = kronecker(-4 * p1, n) * kronecker(-4 * p2, n)
                if lhs != kronecker(n, p1 * p2):
                    reciprocity_ok = False

    return DiagnosticsReport(
        Z=float(Z),
        n_max=n_max,
        subset=tuple(plist),
        rows=tuple(rows),
        starred_sum=starred,
        hb_ratio=hb_ratio,
        elliott_lhs=elliott_lhs,
        elliott_ratio=elliott_ratio,
        all_orthogonality_zero=all_zero,
        two_way_checked=two_way_checked,
        two_way_ok=two_way_ok,
        reciprocity_ok=reciprocity_ok,
    )
