"""Matplotlib renderings for the report commands; files only, no display."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    # drop the version stamp so repeated renders are byte-identical
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_heights(curve, path, upto=None):
    ns = list(range(1, (upto or curve.n_max) + 1))
    logs = [math.log(curve.den_x(n)) if curve.den_x(n) > 1 else 0.0 for n in ns]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([n * n for n in ns], logs, "o", ms=3)
    ax.set_xlabel("n^2")
    ax.set_ylabel("log den x_n")
    ax.set_title("Denominator growth of [n]P")
    return _save(fig, path)


def plot_apparition(records, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    qs = [r.q for r in records]
    ax.plot(qs, [r.n_q for r in records], ".", ms=2, label="n_q")
    ax.plot(qs, [q + 1 + 2 * math.sqrt(q) for q in qs], "-", lw=1, label="q + 1 + 2 sqrt(q)")
    ax.set_xlabel("q")
    ax.set_ylabel("rank of apparition")
    ax.legend(loc="upper left")
    return _save(fig, path)


def plot_census(rows, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx([r.X for r in rows], [float(r.ratio) for r in rows], "o-", ms=3)
    ax.set_xlabel("X")
    ax.set_ylabel("indicator primes <= X / pi(X)")
    ax.set_title("Indicator census")
    return _save(fig, path)
