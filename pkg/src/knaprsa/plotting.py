"""Matplotlib figures for harness reports.

Figures are written with the non-interactive Agg backend; each function
takes the already-computed result and a destination path.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .harness import wilson_interval  # noqa: E402

_STYLE = {
    "figure.figsize": (7.0, 4.2),
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 120,
}

# strip the version stamp so reruns produce identical files
_METADATA = {"Software": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, metadata=_METADATA)
    plt.close(fig)


def plot_game(rows, path, title=None):
    """Running win rate over trials with a 95% Wilson band around it."""
    wins = np.cumsum([r["win"] for r in rows])
    n = np.arange(1, len(rows) + 1)
    bands = np.array([wilson_interval(int(w), int(t)) for w, t in zip(wins, n)])
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(n, wins / n, color="tab:blue", lw=1.2, label="win rate")
        ax.fill_between(n, bands[:, 0], bands[:, 1], color="tab:blue", alpha=0.2, label="95% interval")
        ax.axhline(0.5, color="k", ls="--", lw=0.8, label="coin flip")
        ax.set_xscale("log")
        ax.set_ylim(0, 1)
        ax.set_xlabel("trials")
        ax.set_ylabel("Pr[b' = b]")
        ax.set_title(title or "CCA2 game")
        ax.legend(loc="upper right", frameon=False)
        _save(fig, path)


def plot_probe(rep, path):
    """Exact-match rate against prediction, and per-bit agreement with m_b."""
    lo, hi = rep.match_ci
    with plt.rc_context(_STYLE):
        fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 4.0), gridspec_kw={"width_ratios": [1, 2.5]})
        left.bar([0], [rep.match_rate], yerr=[[rep.match_rate - lo], [hi - rep.match_rate]],
                 color="tab:orange", capsize=6, width=0.5)
        left.axhline(rep.predicted_rate, color="k", ls="--", lw=0.8, label="predicted")
        left.set_xticks([0], ["measured"])
        left.set_ylabel("exact match rate")
        left.legend(frameon=False)
        n = max(rep.answered, 1)
        agree = np.array(rep.bit_agree) / n
        right.bar(np.arange(1, len(agree) + 1), agree, color="tab:green")
        right.axhline(0.5, color="k", ls="--", lw=0.8)
        right.set_ylim(0, 1)
        right.set_xlabel("bit position")
        right.set_ylabel("agreement with m_b")
        fig.suptitle(f"{rep.which} probe, k={rep.params.k}, nbits={rep.params.n_bits}")
        _save(fig, path)


def plot_legitimacy(rep, path):
    """Mauled-ciphertext survival rates, log scale, next to the claimed rate."""
    labels = ["knapsack pass", "full decrypt", "claimed"]
    values = [rep.rate_knapsack_pass, rep.rate_full_decrypt_pass, rep.claimed_rate]
    if rep.exhaustive_rate is not None:
        labels.insert(1, "exhaustive")
        values.insert(1, rep.exhaustive_rate)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.bar(labels, [max(v, 1e-300) for v in values], color=["tab:blue"] * (len(values) - 1) + ["tab:gray"])
        ax.set_yscale("log")
        ax.set_ylabel("rate")
        ax.set_title(f"c2* + a_i legitimacy, k={rep.params.k}")
        _save(fig, path)
