"""Monte Carlo estimates of ball volumes and distance moments.

By unitary invariance the distance from a Haar-random subspace to a fixed
reference has the same law as the distance between two independent Haar
subspaces, so one Haar draw per sample suffices. Every supported squared
distance is an affine function A - B * g of the alignment g = |P0* Q|_F^2
with the reference, so no per-sample decomposition is needed.

Sampling is split into fixed-size blocks, each seeded independently from
(seed, block index) and merged in block order, which makes results
bit-identical for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .exceptions import ParameterError
from .geometry import (
    DISTANCE_VARIANTS,
    Params,
    fivepointed_constants,
    haar_stack,
)

BLOCK_SIZE = 8192


def _affine_coefficients(params: Params, variant: str) -> tuple[float, float]:
    """(A, B) such that the squared distance equals A - B * sum cos^2."""
    n, p, q = params.n, params.p, params.q
    if variant == "dc":
        return float(min(p, q)), 1.0
    if variant == "dc_sharp":
        return float(max(p, q)), 1.0
    if variant == "dc_star":
        return float(p + q), 2.0
    if variant == "dc_fivepointed":
        return fivepointed_constants(n, p, q)
    raise ParameterError(
        f"unknown distance variant {variant!r}; expected one of {DISTANCE_VARIANTS}"
    )


def _block_counts(samples: int) -> list[int]:
    full, rest = divmod(samples, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _validate_radii(params: Params, rv: NDArray, variant: str) -> None:
    """Reject radii outside the attainable range of the chosen variant."""
    a, b = _affine_coefficients(params, variant)
    n, p, q = params.n, params.p, params.q
    d2_max = a - b * max(0, p + q - n)
    if np.any(rv < 0) or np.any(rv**2 > d2_max + 1e-9):
        raise ParameterError(
            f"radius out of range: need 0 <= r^2 <= {d2_max} for {variant} on {params}"
        )


def sample_distances_sq(
    params: Params,
    samples: int,
    seed: int,
    variant: str = "dc",
    threads: int = 1,
) -> NDArray:
    """Squared distances from ``samples`` Haar subspaces to a fixed reference.

    The reference is the span of the first p coordinate axes; the random
    subspace is q dimensional. Parameters are used as given (no
    canonicalization), since only the plain chordal distance is invariant
    under the complement map.
    """
    if samples < 1:
        raise ParameterError(f"samples must be positive, got {samples}")
    if threads < 1:
        raise ParameterError(f"threads must be positive, got {threads}")
    a, b = _affine_coefficients(params, variant)
    n, p, q = params.n, params.p, params.q

    def run_block(index: int, count: int) -> NDArray:
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        bases = haar_stack(rng, count, n, q)
        align = np.einsum("sij,sij->s", bases[:, :p, :].real, bases[:, :p, :].real)
        align += np.einsum("sij,sij->s", bases[:, :p, :].imag, bases[:, :p, :].imag)
        return a - b * align

    counts = _block_counts(samples)
    if threads == 1:
        blocks = [run_block(i, c) for i, c in enumerate(counts)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(run_block, range(len(counts)), counts))
    return np.concatenate(blocks)


@dataclass(frozen=True)
class VolumeEstimate:
    """Empirical ball volume with its binomial standard error."""

    value: float
    stderr: float
    samples: int
    r: float
    variant: str


def estimate_volume(
    params: Params,
    r: float,
    samples: int,
    seed: int,
    variant: str = "dc",
    threads: int = 1,
) -> VolumeEstimate:
    """Fraction of random subspaces within distance r of a fixed one."""
    _validate_radii(params, np.array([float(r)]), variant)
    d2 = sample_distances_sq(params, samples, seed, variant, threads)
    hits = int(np.count_nonzero(d2 <= r * r))
    value = hits / samples
    stderr = float(np.sqrt(value * (1.0 - value) / samples))
    return VolumeEstimate(value=value, stderr=stderr, samples=samples, r=float(r), variant=variant)


def estimate_volume_curve(
    params: Params,
    r_values,
    samples: int,
    seed: int,
    variant: str = "dc",
    threads: int = 1,
) -> tuple[NDArray, NDArray]:
    """Empirical volumes at several radii from one shared sample set.

    Estimates at different radii are correlated since they count the same
    draws; each is individually unbiased with the usual binomial error.
    """
    rv = np.atleast_1d(np.asarray(r_values, dtype=float))
    _validate_radii(params, rv, variant)
    d2 = np.sort(sample_distances_sq(params, samples, seed, variant, threads))
    hits = np.searchsorted(d2, rv ** 2, side="right")
    values = hits / samples
    stderrs = np.sqrt(values * (1.0 - values) / samples)
    return values, stderrs


@dataclass(frozen=True)
class MomentEstimate:
    """Sample moments of the squared distance."""

    mean: float
    mean_stderr: float
    var: float
    var_stderr: float
    third_central: float
    samples: int


def empirical_moments(
    params: Params,
    samples: int,
    seed: int,
    variant: str = "dc",
    threads: int = 1,
) -> MomentEstimate:
    """Mean, variance, and third central moment of the squared distance."""
    if samples < 2:
        raise ParameterError(f"need at least two samples, got {samples}")
    d2 = sample_distances_sq(params, samples, seed, variant, threads)
    mean = float(np.mean(d2))
    centered = d2 - mean
    var = float(np.sum(centered ** 2) / (samples - 1))
    m3 = float(np.mean(centered ** 3))
    m4 = float(np.mean(centered ** 4))
    mean_stderr = float(np.sqrt(var / samples))
    var_stderr = float(np.sqrt(max(m4 - var ** 2, 0.0) / samples))
    return MomentEstimate(
        mean=mean,
        mean_stderr=mean_stderr,
        var=var,
        var_stderr=var_stderr,
        third_central=m3,
        samples=samples,
    )
