"""Report figures.  Uses the non-interactive Agg backend and writes PNG files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

PASS_FAIL = ListedColormap(["#c0392b", "#27ae60"])


def axiom_matrix_figure(matrix: dict, rules: list, axioms: list, path) -> None:
    """Grid of pass (green) and counterexample (red) cells, rules by axioms."""
    grid = [[1 if matrix[(r, a)].passed else 0 for a in axioms] for r in rules]
    fig, ax = plt.subplots(figsize=(1.0 + 0.7 * len(axioms), 0.8 + 0.45 * len(rules)))
    ax.imshow(grid, cmap=PASS_FAIL, vmin=0, vmax=1, aspect="auto")
    ax.set_xticks(range(len(axioms)), labels=axioms)
    ax.set_yticks(range(len(rules)), labels=rules)
    ax.tick_params(top=True, bottom=False, labeltop=True, labelbottom=False)
    for i, row in enumerate(grid):
        for j, ok in enumerate(row):
            ax.text(j, i, "ok" if ok else "x", ha="center", va="center", color="white", fontsize=8)
    ax.set_xticks([x - 0.5 for x in range(1, len(axioms))], minor=True)
    ax.set_yticks([y - 0.5 for y in range(1, len(rules))], minor=True)
    ax.grid(which="minor", color="white", linewidth=1.5)
    ax.tick_params(which="minor", length=0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def divergence_figure(rows: list, path, title: str = "") -> None:
    """Horizontal bars of the failing fraction; ``rows`` holds (label, checked, failed)."""
    labels = [r[0] for r in rows]
    rates = [r[2] / r[1] if r[1] else 0.0 for r in rows]
    fig, ax = plt.subplots(figsize=(6, 0.8 + 0.4 * len(rows)))
    bars = ax.barh(range(len(rows)), rates, color=["#c0392b" if x else "#27ae60" for x in rates])
    ax.set_yticks(range(len(rows)), labels=labels)
    ax.invert_yaxis()
    top = max(rates, default=0.0)
    ax.set_xlim(0, top * 1.25 if top else 1.0)
    ax.set_xlabel("fraction of checks that failed")
    for bar, (_, checked, failed) in zip(bars, rows):
        ax.text(bar.get_width(), bar.get_y() + bar.get_height() / 2, f" {failed}/{checked}",
                va="center", fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def quota_lifting_figure(rows: list, path, title: str = "") -> None:
    """Predicted versus observed lifting per quota; ``rows`` holds (label, predicted, lifted)."""
    fig, ax = plt.subplots(figsize=(1.5 + 0.9 * len(rows), 2.8))
    xs = range(len(rows))
    ax.scatter(xs, [int(r[1]) for r in rows], marker="o", s=140, facecolors="none",
               edgecolors="#34495e", label="predicted")
    ax.scatter(xs, [int(r[2]) for r in rows], marker="x", s=60, color="#e67e22", label="observed")
    ax.set_xticks(list(xs), labels=[r[0] for r in rows], rotation=20)
    ax.set_yticks([0, 1], labels=["not lifted", "lifted"])
    ax.set_ylim(-0.5, 1.5)
    ax.legend(loc="center right", fontsize=8, frameon=False)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
