"""Plots for a verification run: a verdict grid over groups and checks,
tensor growth against group order, and time spent per check family."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .verify import CheckResult  # noqa: E402

VERDICT_COLORS = {"pass": (0.22, 0.55, 0.24), "fail": (0.78, 0.16, 0.16),
                  "skipped": (0.93, 0.69, 0.13)}
_WORST = {"fail": 2, "skipped": 1, "pass": 0}


def verdict_matrix(results: list[CheckResult], path: str) -> None:
    """One cell per (group, check), colored by the worst verdict among
    that cell's parameter variants."""
    groups = sorted({r.group for r in results})
    checks = sorted({r.check for r in results})
    cell: dict[tuple[str, str], str] = {}
    for r in results:
        key = (r.group, r.check)
        prev = cell.get(key)
        if prev is None or _WORST[r.verdict] > _WORST[prev]:
            cell[key] = r.verdict
    grid = [[VERDICT_COLORS[cell[(g, c)]] if (g, c) in cell else
             (0.92, 0.92, 0.92) for c in checks] for g in groups]
    fig, ax = plt.subplots(
        figsize=(1.2 + 0.42 * len(checks), 1.0 + 0.30 * len(groups)))
    ax.imshow(grid, aspect="auto", interpolation="nearest")
    ax.set_xticks(range(len(checks)))
    ax.set_xticklabels(checks, rotation=45, ha="right", fontsize=7)
    ax.set_yticks(range(len(groups)))
    ax.set_yticklabels(groups, fontsize=7)
    ax.set_title("verdicts (green pass, yellow skip, red fail)", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def order_scatter(results: list[CheckResult], path: str) -> None:
    """Tensor square order against group order, from the ambient-order
    identity rows that completed."""
    pts = []
    for r in results:
        if r.check == "nu-order" and r.verdict == "pass":
            pts.append((r.group, r.witness["group_order"],
                        r.witness["tensor_order"]))
    pts.sort()
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    if pts:
        xs = [p[1] for p in pts]
        ys = [p[2] for p in pts]
        ax.scatter(xs, ys, s=18)
        for gid, x, y in pts:
            ax.annotate(gid, (x, y), fontsize=6,
                        textcoords="offset points", xytext=(3, 3))
        ax.set_xscale("log", base=2)
        ax.set_yscale("log", base=2)
    ax.set_xlabel("|G|")
    ax.set_ylabel("|G (x) G|")
    ax.set_title("tensor square growth", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def timing_bars(results: list[CheckResult], path: str) -> None:
    totals: dict[str, float] = {}
    for r in results:
        totals[r.check] = totals.get(r.check, 0.0) + r.seconds
    checks = sorted(totals)
    fig, ax = plt.subplots(figsize=(5.2, max(1.8, 0.6 + 0.28 * len(checks))))
    ax.barh(range(len(checks)), [totals[c] for c in checks])
    ax.set_yticks(range(len(checks)))
    ax.set_yticklabels(checks, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    ax.set_title("time per check family", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_all(results: list[CheckResult], outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for name, fn in (("verdicts.png", verdict_matrix),
                     ("orders.png", order_scatter),
                     ("timings.png", timing_bars)):
        target = os.path.join(outdir, name)
        fn(results, target)
        paths.append(target)
    return paths
