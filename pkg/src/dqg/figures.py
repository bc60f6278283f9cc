"""Report figures: a Gram-matrix heatmap and a check-status matrix (headless, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

_STATUS_CODE = {"fail": 0, "n/a": 1, "pass": 2}
_STATUS_COLORS = ListedColormap(["#c0392b", "#bdc3c7", "#27ae60"])


def gram_heatmap(gram, path, title: str = "", labels=None) -> Path:
    """Heatmap of the real part of an exact Hermitian Gram matrix."""
    data = np.array([[float(x.re) for x in row] for row in gram], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 5))
    lim = float(np.abs(data).max()) or 1.0
    im = ax.imshow(data, cmap="RdBu_r", vmin=-lim, vmax=lim)
    fig.colorbar(im, ax=ax, shrink=0.8)
    if labels is not None and len(labels) <= 40:
        ax.set_xticks(range(len(labels)), labels, rotation=90, fontsize=6)
        ax.set_yticks(range(len(labels)), labels, fontsize=6)
    ax.set_title(title or "Gram matrix")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def status_matrix(reports: dict, path, title: str = "check status") -> Path:
    """Checks down, instances across; reports maps instance name to a list of results."""
    names = list(reports)
    ids: list = []
    for res in reports.values():
        for r in res:
            if r.check_id not in ids:
                ids.append(r.check_id)
    grid = np.full((len(ids), len(names)), _STATUS_CODE["n/a"], dtype=float)
    for j, name in enumerate(names):
        for r in reports[name]:
            grid[ids.index(r.check_id), j] = _STATUS_CODE[r.status]
    fig, ax = plt.subplots(figsize=(2 + 1.2 * len(names), 2 + 0.16 * len(ids)))
    ax.imshow(grid, cmap=_STATUS_COLORS, vmin=0, vmax=2, aspect="auto", interpolation="nearest")
    ax.set_xticks(range(len(names)), names, rotation=30, ha="right")
    ax.set_yticks(range(len(ids)), ids, fontsize=6)
    ax.set_title(title)
    handles = [plt.Rectangle((0, 0), 1, 1, color=_STATUS_COLORS(k)) for k in range(3)]
    ax.legend(handles, ["fail", "n/a", "pass"], loc="upper left", bbox_to_anchor=(1.02, 1), fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def report_figures(inst, results, directory) -> list:
    """Write the status matrix and, when it can be built, the heatmap of the balanced tensor Gram."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [status_matrix({inst.name: results}, out_dir / f"{inst.name}_status.png",
                             title=f"{inst.name}: check status")]
    try:
        P = inst.fundamental.P_ba
        g = P.space.gram
    except Exception:  # instance without a measured GNS space
        return written
    written.append(gram_heatmap(g, out_dir / f"{inst.name}_gram.png",
                                title=f"{inst.name}: {P.name} Gram (dim {len(g)}, rank {P.space.quotient_dim})"))
    return written
