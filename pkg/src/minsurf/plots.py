"""Optional SVG line plots of singular traces and convergence studies."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_tables(tables: dict, out: Path) -> dict[str, Path]:
    paths = {}
    traces = {n: t for n, t in tables.items() if n.startswith("singularity-")}
    if traces:
        fig, ax = plt.subplots(figsize=(6, 4))
        for name, tab in sorted(traces.items()):
            ux = tab.column("u_x")
            dist = [abs(s / u) if u else 0.0 for s, u in zip(tab.column("scaled"), ux)]
            ax.loglog(dist, [abs(u) for u in ux], label=name[len("singularity-"):])
        ax.set_xlabel("distance to singular line")
        ax.set_ylabel("|u_x| at x = 0")
        ax.legend(fontsize=7)
        paths["plot-singularity"] = _save(fig, out / "singularity.svg")

    studies = {n: t for n, t in tables.items() if n.startswith("convergence-") and t.rows}
    if studies:
        fig, ax = plt.subplots(figsize=(6, 4))
        for name, tab in sorted(studies.items()):
            devs = [max(d, 1e-18) for d in tab.column("deviation")]
            ax.loglog(tab.column("h"), devs, "o-", label=name[len("convergence-"):])
        ax.set_xlabel("h")
        ax.set_ylabel("max interior deviation")
        ax.legend(fontsize=7)
        paths["plot-convergence"] = _save(fig, out / "convergence.svg")
    return paths
