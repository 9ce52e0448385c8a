"""Standard figures rendered to files, with their data as CSV.

Five figures: two volume-curve comparisons across all methods, the
approximation error of the two erf surrogates, the Hellinger distance
between the surrogates versus dimension, and a distortion-rate plot. Every
PNG gets a CSV of the exact plotted numbers next to it, so nothing in the
images is unavailable to scripts.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import asymptotic, coding, exact, montecarlo
from .geometry import Params, max_radius_sq

_DPI = 150


def _write_csv(path: Path, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _fig_volume(outdir: Path, triple, samples: int, seed: int) -> list[Path]:
    params = Params(*triple)
    tmax = float(max_radius_sq(params))
    radii = np.sqrt(np.linspace(0.0, tmax, 61))
    quad, _ = exact.volume_curve(params, radii)
    rmt = asymptotic.volume_rmt(params, radii)
    fin = asymptotic.volume_finite(params, radii)
    mc_radii = np.sqrt(np.linspace(0.0, tmax, 16)[1:-1])
    mc, mc_err = montecarlo.estimate_volume_curve(params, mc_radii, samples, seed)

    name = "volume_{}_{}_{}".format(*triple)
    columns = ["r", "mu_quadrature", "mu_rmt", "mu_finite"]
    rows = [
        [_fmt(r), _fmt(quad[i]), _fmt(rmt[i]), _fmt(fin[i])]
        for i, r in enumerate(radii)
    ]
    _write_csv(outdir / f"{name}.csv", columns, rows)
    _write_csv(
        outdir / f"{name}_mc.csv",
        ["r", "mu_mc", "stderr"],
        [[_fmt(r), _fmt(mc[i]), _fmt(mc_err[i])] for i, r in enumerate(mc_radii)],
    )

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(radii, quad, "k-", label="exact (quadrature)")
    ax.plot(radii, rmt, "C0--", label="erf, bulk variance")
    ax.plot(radii, fin, "C1-.", label="erf, exact moments")
    ax.errorbar(
        mc_radii, mc, yerr=3 * mc_err, fmt="C2o", ms=3, lw=1,
        label=f"Monte Carlo ({samples} samples)",
    )
    ax.set_xlabel("r")
    ax.set_ylabel("ball volume")
    ax.set_title("Ball volume, (n, p, q) = {}".format(triple))
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(outdir / f"{name}.png", dpi=_DPI)
    plt.close(fig)
    return [outdir / f"{name}.csv", outdir / f"{name}_mc.csv", outdir / f"{name}.png"]


def _fig_approx_error(outdir: Path) -> list[Path]:
    triples = [(6, 3, 3), (8, 4, 4)]
    fig, ax = plt.subplots(figsize=(6, 4))
    rows = []
    for k, triple in enumerate(triples):
        params = Params(*triple)
        tmax = float(max_radius_sq(params))
        radii = np.sqrt(np.linspace(0.0, tmax, 41)[1:-1])
        quad, _ = exact.volume_curve(params, radii)
        err_rmt = np.abs(asymptotic.volume_rmt(params, radii) - quad)
        err_fin = np.abs(asymptotic.volume_finite(params, radii) - quad)
        label = "{},{},{}".format(*triple)
        ax.semilogy(radii, err_rmt, f"C{k}--", label=f"bulk erf, ({label})")
        ax.semilogy(radii, err_fin, f"C{k}-", label=f"exact-moment erf, ({label})")
        rows += [
            [label, _fmt(r), _fmt(err_rmt[i]), _fmt(err_fin[i])]
            for i, r in enumerate(radii)
        ]
    ax.set_xlabel("r")
    ax.set_ylabel("|approximation - exact|")
    ax.set_title("Error of the erf approximations")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    _write_csv(
        outdir / "approx_error.csv",
        ["triple", "r", "err_rmt", "err_finite"],
        rows,
    )
    fig.savefig(outdir / "approx_error.png", dpi=_DPI)
    plt.close(fig)
    return [outdir / "approx_error.csv", outdir / "approx_error.png"]


def _fig_hellinger(outdir: Path, pmax: int) -> list[Path]:
    pairs = [(0, 0), (1, 1), (3, 3)]
    ps = np.arange(1, pmax + 1)
    fig, ax = plt.subplots(figsize=(6, 4))
    series = []
    for a, b in pairs:
        h = [
            asymptotic.surrogate_hellinger(Params(2 * p + a + b, p, p + a))
            for p in ps
        ]
        series.append(h)
        ax.plot(ps, h, marker=".", label=f"a = {a}, b = {b}")
    ax.set_xlabel("p")
    ax.set_ylabel("Hellinger distance")
    ax.set_title("Bulk vs exact-moment surrogate")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    rows = [
        [str(p)] + [_fmt(series[j][i]) for j in range(len(pairs))]
        for i, p in enumerate(ps)
    ]
    _write_csv(
        outdir / "hellinger.csv",
        ["p"] + ["h_a{}_b{}".format(a, b) for a, b in pairs],
        rows,
    )
    fig.savefig(outdir / "hellinger.png", dpi=_DPI)
    plt.close(fig)
    return [outdir / "hellinger.csv", outdir / "hellinger.png"]


def _fig_distortion(
    outdir: Path, samples: int, trials: int, iters: int,
    lloyd_bits: tuple[int, ...], seed: int,
) -> list[Path]:
    params = Params(8, 4, 4)
    bound_bits = np.linspace(1.0, 8.0, 57)
    bound = [coding.distortion_lower_bound(params, 2.0 ** b) for b in bound_bits]
    rows = [
        ["bound", _fmt(b), "", _fmt(v), ""] for b, v in zip(bound_bits, bound)
    ]

    rnd_bits = (2, 4, 6, 8)
    rnd = [
        coding.random_code_distortion(params, 2 ** b, samples, trials, seed)
        for b in rnd_bits
    ]
    rows += [
        ["random", _fmt(b), str(2 ** b), _fmt(rep.distortion), _fmt(rep.stderr)]
        for b, rep in zip(rnd_bits, rnd)
    ]
    lloyd = [
        coding.lloyd_quantizer(params, 2 ** b, samples, iters, seed)[1]
        for b in lloyd_bits
    ]
    rows += [
        ["lloyd", _fmt(b), str(2 ** b), _fmt(rep.distortion), _fmt(rep.stderr)]
        for b, rep in zip(lloyd_bits, lloyd)
    ]
    _write_csv(
        outdir / "distortion_8_4.csv",
        ["method", "bits", "N", "distortion", "stderr"],
        rows,
    )

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(bound_bits, bound, "k-", label="lower bound")
    ax.errorbar(
        rnd_bits, [r.distortion for r in rnd],
        yerr=[3 * r.stderr for r in rnd], fmt="C0o", label="random codes",
    )
    ax.errorbar(
        lloyd_bits, [r.distortion for r in lloyd],
        yerr=[3 * r.stderr for r in lloyd], fmt="C1s", label="Lloyd codebooks",
    )
    ax.set_xlabel("rate (bits)")
    ax.set_ylabel("mean squared distortion")
    ax.set_title("Distortion vs rate, (n, p) = (8, 4)")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(outdir / "distortion_8_4.png", dpi=_DPI)
    plt.close(fig)
    return [outdir / "distortion_8_4.csv", outdir / "distortion_8_4.png"]


def generate_report(outdir, quick: bool = False, seed: int = 0) -> list[Path]:
    """Render all report figures into ``outdir``; returns the written paths.

    ``quick`` shrinks every Monte Carlo budget for smoke tests; curve shapes
    stay the same, error bars grow.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    mc_samples = 20000 if quick else 200000
    dist_samples = 2000 if quick else 10000
    trials = 2 if quick else 4
    iters = 6 if quick else 15
    lloyd_bits = (2, 4) if quick else (2, 4, 6)

    written: list[Path] = []
    written += _fig_volume(outdir, (4, 2, 2), mc_samples, seed)
    written += _fig_volume(outdir, (5, 2, 3), mc_samples, seed)
    written += _fig_approx_error(outdir)
    written += _fig_hellinger(outdir, pmax=30)
    written += _fig_distortion(
        outdir, dist_samples, trials, iters, lloyd_bits, seed
    )
    return written
