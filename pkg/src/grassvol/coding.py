"""Packing bounds, quantization, and rate-distortion tools for subspace codes.

A code is a finite set of p-dimensional subspaces of C^n. Ball volumes turn
into cardinality bounds (sphere covering gives a lower bound, sphere packing
an upper bound), and into a closed-form lower bound on the distortion-rate
trade-off of subspace quantizers. Monte Carlo routines measure the actual
distortion of random codes and of codebooks optimized by Lloyd iteration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from scipy.special import erf, erfinv

from .asymptotic import cumulants_closed, expected_sq_distance
from .exceptions import ParameterError
from .geometry import Params, SubspaceBasis, canonicalize, haar_stack
from .exact import volume_quadrature

# XOR mask applied to the seed when drawing held-out evaluation samples, so
# reported distortions are never measured on the training set.
HELD_OUT_SEED_MASK = 0x9E3779B9

_DISTORTION_METHODS = ("bound", "random", "lloyd")


# ============================================================
# Codebooks
# ============================================================

@dataclass(frozen=True)
class Codebook:
    """An ordered collection of equal-dimension subspaces."""

    codewords: tuple[SubspaceBasis, ...]
    seed: int | None = None
    iterations: int | None = None

    def __post_init__(self):
        if not self.codewords:
            raise ParameterError("a codebook needs at least one codeword")
        n, k = self.codewords[0].n, self.codewords[0].k
        for i, c in enumerate(self.codewords):
            if (c.n, c.k) != (n, k):
                raise ParameterError(
                    f"codeword {i} has shape ({c.n}, {c.k}), expected ({n}, {k})"
                )

    @property
    def N(self) -> int:
        return len(self.codewords)

    @property
    def n(self) -> int:
        return self.codewords[0].n

    @property
    def p(self) -> int:
        return self.codewords[0].k

    def stack(self) -> NDArray:
        return np.stack([c.matrix for c in self.codewords])

    def to_json(self) -> dict:
        meta = {"n": self.n, "p": self.p, "N": self.N}
        if self.seed is not None:
            meta["seed"] = self.seed
        if self.iterations is not None:
            meta["iterations"] = self.iterations
        return {**meta, "codewords": [c.to_json() for c in self.codewords]}

    @classmethod
    def from_json(cls, data: dict) -> "Codebook":
        words = tuple(SubspaceBasis.from_json(d) for d in data["codewords"])
        return cls(
            codewords=words,
            seed=data.get("seed"),
            iterations=data.get("iterations"),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "Codebook":
        return cls.from_json(json.loads(Path(path).read_text()))


def random_codebook(n: int, p: int, N: int, seed: int) -> Codebook:
    """N independent Haar-distributed codewords in G(n, p)."""
    if N < 1:
        raise ParameterError(f"codebook size must be positive, got {N}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    stack = haar_stack(rng, N, n, p)
    return Codebook(tuple(SubspaceBasis(m) for m in stack), seed=seed)


def _alignments(codestack: NDArray, sources: NDArray) -> NDArray:
    """|C_i^* Q_s|_F^2 for every codeword/source pair, shape (N, S).

    Evaluated as one complex matrix product per source chunk; chunking only
    bounds memory and cannot change any output value, since each (i, s)
    reduction is independent.
    """
    N, n, p = codestack.shape
    S, _, q = sources.shape
    if sources.shape[1] != n:
        raise ParameterError(
            f"ambient dimension mismatch: codewords in C^{n}, sources in "
            f"C^{sources.shape[1]}"
        )
    left = np.transpose(codestack.conj(), (0, 2, 1)).reshape(N * p, n)
    out = np.empty((N, S))
    chunk = max(32, (1 << 26) // max(1, N * p * q * 16))
    for lo in range(0, S, chunk):
        hi = min(S, lo + chunk)
        right = np.transpose(sources[lo:hi], (1, 0, 2)).reshape(n, (hi - lo) * q)
        prod = left @ right
        sq = (prod.real ** 2 + prod.imag ** 2).reshape(N, p, hi - lo, q)
        out[:, lo:hi] = sq.sum(axis=(1, 3))
    return out


def _min_sq_distances(codestack: NDArray, sources: NDArray) -> tuple[NDArray, NDArray]:
    """Per-source minimum squared chordal distance and nearest index."""
    p, q = codestack.shape[2], sources.shape[2]
    d2 = min(p, q) - _alignments(codestack, sources)
    idx = np.argmin(d2, axis=0)
    return d2[idx, np.arange(sources.shape[0])], idx


def quantize(code: Codebook, point: SubspaceBasis) -> int:
    """Index of the nearest codeword in chordal distance, lowest index on ties."""
    if point.n != code.n:
        raise ParameterError(
            f"point lives in C^{point.n}, codebook in C^{code.n}"
        )
    _, idx = _min_sq_distances(code.stack(), point.matrix[None, :, :])
    return int(idx[0])


# ============================================================
# Cardinality bounds
# ============================================================

def _bound_params(params: Params) -> Params:
    c = canonicalize(params)
    if c.p != c.q:
        raise ParameterError(
            f"packing bounds are defined for equal dimensions, got {params}"
        )
    return c


def gv_bound(params: Params, delta: float, volume_fn=volume_quadrature) -> float:
    """Sphere-covering lower bound 1/mu(B(delta)) on the size of a code
    with minimum distance delta."""
    c = _bound_params(params)
    if not 0 < delta <= math.sqrt(c.p) + 1e-9:
        raise ParameterError(
            f"need 0 < delta <= sqrt({c.p}), got {delta}"
        )
    mu = float(volume_fn(c, min(delta, math.sqrt(c.p))))
    return math.inf if mu <= 0 else 1.0 / mu


def hamming_bound(params: Params, delta: float, volume_fn=volume_quadrature) -> float:
    """Sphere-packing upper bound 1/mu(B(delta/2)) on the size of a code
    with minimum distance delta."""
    c = _bound_params(params)
    if not 0 < delta <= 2.0 * math.sqrt(c.p) + 1e-9:
        raise ParameterError(
            f"need 0 < delta <= 2 sqrt({c.p}), got {delta}"
        )
    mu = float(volume_fn(c, min(delta / 2.0, math.sqrt(c.p))))
    return math.inf if mu <= 0 else 1.0 / mu


# ============================================================
# Distortion-rate
# ============================================================

@dataclass(frozen=True)
class DistortionReport:
    """Distortion of a quantizer of size N, with provenance metadata."""

    N: int
    bits: float
    distortion: float
    method: str
    samples: int | None = None
    trials: int | None = None
    seed: int | None = None
    stderr: float | None = None
    training_curve: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.method not in _DISTORTION_METHODS:
            raise ParameterError(
                f"method must be one of {_DISTORTION_METHODS}, got {self.method!r}"
            )
        if self.distortion < 0:
            raise ParameterError(f"distortion must be >= 0, got {self.distortion}")


def distortion_lower_bound(params: Params, N) -> float:
    """Gaussian-approximation lower bound on the distortion of any size-N code.

    Evaluates beta - N sqrt(k2/(2 pi)) (e^(-erfinv(t)^2) - e^(-beta^2/(2 k2)))
    with t = erf(beta/sqrt(2 k2)) - 2/N, where beta and k2 are the exact mean
    and variance of the squared distance. For t <= -1 (possible only at
    N = 1) the first exponential is taken at its erfinv -> -inf limit, 0.
    Real N >= 1 is accepted for smooth rate sweeps; only integers correspond
    to actual codes.
    """
    c = canonicalize(params)
    if N < 1:
        raise ParameterError(f"need N >= 1, got {N}")
    _, k2, _ = cumulants_closed(c)
    beta = float(expected_sq_distance(c))
    v = float(k2)
    t = erf(beta / math.sqrt(2.0 * v)) - 2.0 / N
    first = 0.0 if t <= -1.0 else math.exp(-float(erfinv(t)) ** 2)
    value = beta - N * math.sqrt(v / (2.0 * math.pi)) * (
        first - math.exp(-beta * beta / (2.0 * v))
    )
    return float(value)


def random_code_distortion(
    params: Params,
    N: int,
    source_samples: int,
    trials: int,
    seed: int,
) -> DistortionReport:
    """Mean squared quantization error of Haar-random codebooks.

    Each trial draws a fresh codebook of N Haar codewords of dimension p and
    quantizes ``source_samples`` Haar sources of dimension q; the reported
    distortion averages over all trials, an upper bound on the optimal D(N).
    """
    if N < 1 or source_samples < 1 or trials < 1:
        raise ParameterError("N, source_samples, and trials must be positive")
    n, p, q = params.n, params.p, params.q
    trial_means = []
    pooled_var = 0.0
    for trial in range(trials):
        code_rng = np.random.default_rng(np.random.SeedSequence([seed, trial, 0]))
        src_rng = np.random.default_rng(np.random.SeedSequence([seed, trial, 1]))
        codestack = haar_stack(code_rng, N, n, p)
        sources = haar_stack(src_rng, source_samples, n, q)
        mins, _ = _min_sq_distances(codestack, sources)
        trial_means.append(float(np.mean(mins)))
        pooled_var += float(np.var(mins))
    # Sources within a trial share a codebook, so the honest error bar is the
    # spread of per-trial means; with a single trial only the within-trial
    # term is available and understates codebook-to-codebook variation.
    if trials >= 2:
        stderr = float(np.std(trial_means, ddof=1) / math.sqrt(trials))
    else:
        stderr = math.sqrt(pooled_var / source_samples)
    return DistortionReport(
        N=N,
        bits=math.log2(N),
        distortion=float(np.mean(trial_means)),
        method="random",
        samples=source_samples,
        trials=trials,
        seed=seed,
        stderr=stderr,
    )


def lloyd_quantizer(
    params: Params,
    N: int,
    training_samples: int,
    iterations: int,
    seed: int,
) -> tuple[Codebook, DistortionReport]:
    """Codebook optimized by Lloyd iteration on a fixed Haar training set.

    Each round assigns every training subspace to its nearest codeword, then
    replaces each codeword by the chordal centroid of its cell: the span of
    the p dominant eigenvectors of the cell's summed projector, which
    minimizes the cell's total squared distance. A codeword whose cell is
    empty is re-seeded at the training point currently farthest from its
    assigned codeword. The recorded training distortions are therefore
    nonincreasing. Requires q = p; the reported distortion is measured on a
    fresh held-out sample set.
    """
    n, p, q = params.n, params.p, params.q
    if p != q:
        raise ParameterError(
            f"Lloyd optimization needs q = p (codewords and sources of one "
            f"dimension), got {params}"
        )
    if N < 1 or training_samples < N or iterations < 1:
        raise ParameterError(
            "need N >= 1, training_samples >= N, iterations >= 1"
        )
    train_rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    init_rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    train = haar_stack(train_rng, training_samples, n, p)
    codestack = haar_stack(init_rng, N, n, p)

    curve = []
    for _ in range(iterations):
        mins, idx = _min_sq_distances(codestack, train)
        curve.append(float(np.mean(mins)))
        updated = codestack.copy()
        empty = []
        for i in range(N):
            cell = train[idx == i]
            if cell.shape[0] == 0:
                empty.append(i)
                continue
            projector_sum = np.einsum("sja,ska->jk", cell, cell.conj())
            _, vecs = np.linalg.eigh(projector_sum)
            updated[i] = vecs[:, : -p - 1 : -1]
        if empty:
            farthest = np.argsort(-mins)
            for rank, i in enumerate(empty):
                updated[i] = train[farthest[rank]]
        codestack = updated

    held_rng = np.random.default_rng(
        np.random.SeedSequence([seed ^ HELD_OUT_SEED_MASK, 0])
    )
    held = haar_stack(held_rng, training_samples, n, p)
    held_mins, _ = _min_sq_distances(codestack, held)
    code = Codebook(
        tuple(SubspaceBasis(m) for m in codestack), seed=seed, iterations=iterations
    )
    report = DistortionReport(
        N=N,
        bits=math.log2(N),
        distortion=float(np.mean(held_mins)),
        method="lloyd",
        samples=training_samples,
        trials=iterations,
        seed=seed,
        stderr=float(np.std(held_mins) / math.sqrt(held_mins.size)),
        training_curve=tuple(curve),
    )
    return code, report


def error_cdf(
    code: Codebook, z_grid, samples: int, seed: int
) -> list[float]:
    """Empirical CDF of the squared quantization error at each z in z_grid.

    Sources are Haar subspaces of the codeword dimension; the value at z is
    the fraction with min_k d_c^2(C_k, Q) <= z.
    """
    z = np.atleast_1d(np.asarray(z_grid, dtype=float))
    if np.any(z < -1e-12) or np.any(z > code.p + 1e-9):
        raise ParameterError(f"z_grid must lie in [0, {code.p}]")
    if samples < 1:
        raise ParameterError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    sources = haar_stack(rng, samples, code.n, code.p)
    mins, _ = _min_sq_distances(code.stack(), sources)
    mins.sort()
    return (np.searchsorted(mins, z, side="right") / samples).tolist()
