"""Figure rendering for the report paths.

Every experiment that emits a delimited report can also render a summary
figure to a file; matplotlib runs on the Agg backend so this works
headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_correlation", "plot_bernays", "plot_density", "plot_diagnostics"]

_DPI = 150


def plot_correlation(reports, path) -> None:
    xs = [r.X for r in reports]
    errs = [r.abs_err for r in reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(xs, errs, "o-", label="|lhs - main term|")
    slope = reports[0].fitted_exponent if reports else None
    if slope is not None and len(xs) >= 2 and errs[0] > 0:
        ref = [errs[0] * (x / xs[0]) ** slope for x in xs]
        ax.loglog(xs, ref, "--", color="gray", label=f"fitted slope {slope:.3f}")
    ax.set_xlabel("X")
    ax.set_ylabel("absolute error")
    ax.set_title(f"Correlation sum error, z1={reports[0].z1}, z2={reports[0].z2}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_bernays(points, z, path) -> None:
    xs = [p.X for p in points]
    ks = [p.kappa_hat for p in points]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(xs, ks, "o-")
    ax.set_xlabel("X")
    ax.set_ylabel("N(X) * sqrt(log X) / X")
    ax.set_title(f"Normalized represented-integer density, z={z}")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_density(report, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    bars = ["N/X", "cs_bound/X"]
    vals = [report.ratio, report.cs_bound / report.X]
    ax.bar(bars, vals, color=["tab:blue", "tab:orange"])
    for i, v in enumerate(vals):
        ax.text(i, v, f"{v:.4f}", ha="center", va="bottom")
    ax.set_ylabel("fraction of X")
    ax.set_title(
        f"Union density at X={report.X}, Z={report.Z:.2f} "
        f"({report.subset_size} primes)"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_diagnostics(report, path) -> None:
    ns = [row.n for row in report.rows]
    t2 = [row.T**2 for row in report.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, t2, ".", markersize=3)
    mean = np.mean(t2) if t2 else 0.0
    ax.axhline(mean, color="gray", linestyle="--", label=f"mean {mean:.1f}")
    ax.set_xlabel("n (odd squarefree)")
    ax.set_ylabel("|T(n)|^2")
    ax.set_title(f"Character sums over primes <= {report.Z:g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
