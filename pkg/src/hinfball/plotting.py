"""Figures written next to the sweep and Turan-Nazarov reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .admissibility import SweepReport  # noqa: E402

__all__ = ["plot_sweep", "plot_tn_ratios"]


def plot_sweep(report: SweepReport, path: Path) -> Path:
    """Bracket against both closed-form bounds, one panel per ``N``.

    Cells run along the x axis ordered by ``(eta, gamma)``; the y axis is
    logarithmic because the lower bound shrinks geometrically in ``N``.
    """
    rows = [r for r in report.rows if r.bracket is not None]
    Ns = sorted({r.N for r in rows})
    fig, axes = plt.subplots(1, max(len(Ns), 1), figsize=(4.2 * max(len(Ns), 1), 3.6),
                             sharey=True, squeeze=False)
    for ax, N in zip(axes[0], Ns):
        cells = [r for r in rows if r.N == N]
        x = np.arange(len(cells))
        ax.semilogy(x, [r.lower_closed_form for r in cells], "v", color="C0", label="(cγ)^N(1-η)")
        ax.semilogy(x, [r.bracket.lower for r in cells], "_", color="C0", ms=12, label="eps_lower")
        ax.semilogy(x, [r.bracket.upper for r in cells], "_", color="C3", ms=12, label="eps_upper")
        ax.semilogy(x, [r.upper_closed_form for r in cells], "^", color="C3", label="sqrt(1-η²)")
        norm_g = [min(s["norm_g"] for s in r.witness_stats) for r in cells]
        ax.semilogy(x, norm_g, "o", mfc="none", color="k", label="witness ||g||")
        ax.set_xticks(x)
        ax.set_xticklabels([f"{r.eta:g}/{r.gamma:g}" for r in cells], rotation=60, fontsize=7)
        ax.set_title(f"N = {N}")
        ax.set_xlabel("η / γ")
    axes[0][0].set_ylabel("epsilon")
    handles, labels = axes[0][0].get_legend_handles_labels()
    fig.legend(handles, labels, fontsize=7, loc="lower center", ncol=len(labels),
               frameon=False)
    fig.tight_layout(rect=(0, 0.07, 1, 1))
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_tn_ratios(ratios, n_terms, path: Path) -> Path:
    """Scatter of ``lhs/bound`` for the Turan-Nazarov corpus, by sparsity."""
    ratios = np.asarray(ratios, dtype=float)
    n_terms = np.asarray(n_terms)
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.semilogy(n_terms + np.random.default_rng(0).uniform(-0.15, 0.15, n_terms.size),
                ratios, ".", ms=3, alpha=0.6)
    ax.axhline(1.0, color="C3", lw=1)
    ax.set_xlabel("number of nonzero terms")
    ax.set_ylabel("||q|| / bound")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
