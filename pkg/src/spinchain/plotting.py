"""Figure rendering for the CLI report paths (written to files, never shown)."""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_timing_table(rows, path: str) -> None:
    """Step-time comparison of the three strategies versus chain length."""
    plt = _pyplot()
    ns = [row.n for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(ns, [r.step_conv for r in rows], "D-", color="tab:blue",
            label="sequential isotropic mixing")
    ax.plot(ns, [r.step_swap for r in rows], "s-", color="tab:orange",
            label="indirect pair swaps")
    ax.plot(ns, [r.step_soliton for r in rows], "o-", color="tab:green",
            label="soliton encoding")
    ax.set_xlabel("chain length n")
    ax.set_ylabel(r"average step time  $\tau/(n-1)$  [s]")
    ax.set_xticks(ns)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_track(snapshots, n: int, path: str) -> None:
    """Operator flow: one column per snapshot, letters at their spin rows."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(1.0 + 0.8 * len(snapshots), 0.8 + 0.5 * n))
    for col, snap in enumerate(snapshots):
        for letters, coeff in snap.operator.sorted_terms():
            mag = abs(coeff)
            for i, c in enumerate(letters):
                if c != "I":
                    ax.text(col, i + 1, c.lower(), ha="center", va="center",
                            fontsize=11, alpha=min(1.0, 0.25 + 1.5 * mag))
    ax.set_xticks(range(len(snapshots)))
    ax.set_xticklabels([f"{snap.time:g}" for snap in snapshots], fontsize=8)
    ax.set_yticks(range(1, n + 1))
    ax.set_xlim(-0.5, len(snapshots) - 0.5)
    ax.set_ylim(n + 0.5, 0.5)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("spin")
    ax.grid(True, alpha=0.2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
