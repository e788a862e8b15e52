"""matplotlib figures written next to the CSV/text reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_threshold_scan(rows, path):
    """2r/n against n, with the large-n limit as a reference line."""
    ns = np.array([row.n for row in rows])
    ratios = np.array([row.ratio for row in rows])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, ratios, ".-", lw=1, ms=3, label="2r/n")
    ax.axhline(0.7420, color="0.5", ls="--", lw=1, label="0.7420")
    ax.set_xlabel("n")
    ax.set_ylabel("2r / n")
    ax.legend(frameon=False)
    _finish(fig, path)


def plot_trajectory(traj, path):
    """Phase of every node relative to node 0."""
    rel = traj.thetas - traj.thetas[:, :1]
    fig, ax = plt.subplots(figsize=(6, 4))
    for i in range(1, rel.shape[1]):
        ax.plot(traj.times, rel[:, i], lw=1, label=f"node {i}")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\theta_i - \theta_0$")
    if rel.shape[1] <= 10:
        ax.legend(frameon=False, fontsize=8)
    _finish(fig, path)


def plot_spectrum(eigenvalues, tau, path):
    fig, ax = plt.subplots(figsize=(6, 2.5))
    ev = np.asarray(eigenvalues)
    colors = np.where(ev > tau, "#c0392b", np.where(ev < -tau, "#1f4e79", "0.5"))
    ax.scatter(ev, np.zeros_like(ev), c=colors, s=25)
    ax.axvline(0.0, color="0.7", lw=1)
    ax.set_yticks([])
    ax.set_xlabel("eigenvalue of the linearization")
    _finish(fig, path)
