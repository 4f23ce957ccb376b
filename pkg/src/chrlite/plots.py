"""Render benchmark results to a figure file next to the table output."""

from __future__ import annotations

from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchResult, MODE_ORDER


def render_results_figure(results: Iterable[BenchResult], path) -> str:
    """Plot mean runtime and completion rate against problem size.

    One column of axes per problem: runtimes on top (log scale once the
    spread warrants it, arms with no completed query are simply gaps),
    completion rates below.  Writes a bitmap to `path` and returns it.
    """
    results = list(results)
    if not results:
        raise ValueError("no results to plot")
    problems = list(dict.fromkeys(r.problem for r in results))
    fig, axes = plt.subplots(
        2, len(problems), figsize=(5.0 * len(problems), 6.0), squeeze=False, sharex="col"
    )
    for col, problem in enumerate(problems):
        ax_time, ax_rate = axes[0][col], axes[1][col]
        sub = [r for r in results if r.problem == problem]
        sizes = sorted({r.size for r in sub})
        spread = [r.mean_ms for r in sub if r.mean_ms is not None]
        for mode in MODE_ORDER:
            arm = {r.size: r for r in sub if r.mode is mode}
            if not arm:
                continue
            xs = [s for s in sizes if s in arm]
            ax_time.plot(
                xs,
                [arm[s].mean_ms for s in xs],
                marker="o",
                label=mode.value,
            )
            ax_rate.plot(
                xs,
                [arm[s].completion_rate for s in xs],
                marker="o",
                label=mode.value,
            )
        if spread and max(spread) > 50 * min(spread):
            ax_time.set_yscale("log")
        ax_time.set_title(problem)
        ax_time.set_ylabel("mean runtime (ms)")
        ax_rate.set_ylabel("completion rate")
        ax_rate.set_ylim(-0.05, 1.05)
        ax_rate.set_xlabel("problem size")
        ax_time.grid(True, alpha=0.3)
        ax_rate.grid(True, alpha=0.3)
    axes[0][0].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
