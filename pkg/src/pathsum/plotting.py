"""Figure rendering for normal forms and dense matrices.

Amplitudes are embedded into the complex plane purely for display; the
engine itself never leaves exact arithmetic.
"""

from __future__ import annotations

import cmath

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .oracle import DenseMatrix
from .rewriting import NormalForm
from .rings import Ring


def render_normal_form(nf: NormalForm, ring: Ring, path: str,
                       title: str | None = None) -> None:
    """Bar chart of amplitude magnitudes over basis states, phase annotated."""
    values = [ring.to_complex(e) for e in nf.entries]
    mags = [abs(v) for v in values]
    phases = [cmath.phase(v) if abs(v) > 1e-12 else 0.0 for v in values]
    labels = [nf.bits(i) for i in range(len(values))]

    width = max(4.0, 0.45 * len(values))
    fig, ax = plt.subplots(figsize=(width, 3.2))
    bars = ax.bar(range(len(values)), mags, color="#4878a8")
    for bar, mag, ph in zip(bars, mags, phases):
        if mag > 1e-12:
            ax.text(
                bar.get_x() + bar.get_width() / 2,
                mag,
                f"{ph / cmath.pi:+.2f}π",
                ha="center",
                va="bottom",
                fontsize=7,
            )
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=90 if nf.n_bits > 3 else 0, fontsize=8)
    ax.set_ylabel("|amplitude|")
    ax.set_xlabel("basis state")
    if title:
        ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_matrix(mat: DenseMatrix, ring: Ring, path: str,
                  title: str | None = None) -> None:
    """Heatmap of entry magnitudes."""
    grid = [[abs(ring.to_complex(e)) for e in row] for row in mat.rows]
    rows, cols = mat.shape
    fig, ax = plt.subplots(figsize=(max(3.5, 0.5 * cols), max(3.0, 0.5 * rows)))
    im = ax.imshow(grid, cmap="viridis", aspect="equal")
    ax.set_xticks(range(cols))
    ax.set_xticklabels([format(j, f"0{mat.n_in}b") for j in range(cols)],
                       rotation=90 if mat.n_in > 2 else 0, fontsize=8)
    ax.set_yticks(range(rows))
    ax.set_yticklabels([format(i, f"0{mat.n_out}b") for i in range(rows)],
                       fontsize=8)
    ax.set_xlabel("input")
    ax.set_ylabel("output")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, label="|entry|", shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
