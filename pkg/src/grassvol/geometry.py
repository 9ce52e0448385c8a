"""Complex Grassmann manifold primitives.

Subspaces of C^n are represented by semi-unitary basis matrices (n x k with
orthonormal columns). Distances between subspaces are defined through the
principal angles of the basis pair; four squared chordal variants are
provided, all monotone functions of each other when the dimensions agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import qr as _qr
from scipy.linalg import svd as _svd

from .exceptions import (
    EmptyComplementError,
    ParameterError,
    UndefinedConstantError,
)

# Frobenius tolerance for accepting a matrix as semi-unitary.
ORTHONORMALITY_TOL = 1e-12

DISTANCE_VARIANTS = ("dc", "dc_sharp", "dc_star", "dc_fivepointed")


# ============================================================
# Parameters
# ============================================================

@dataclass(frozen=True)
class Params:
    """Ambient dimension n with subspace dimensions p and q.

    p is the dimension of the ball center's subspace, q the dimension of the
    subspaces the ball lives in. Canonical form has p <= q and p + q <= n;
    every triple is equivalent to a canonical one (see ``canonicalize``).
    """

    n: int
    p: int
    q: int

    def __post_init__(self):
        for name in ("n", "p", "q"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise ParameterError(f"{name} must be an integer, got {v!r}")
        if self.n < 2:
            raise ParameterError(f"need n >= 2, got n={self.n}")
        if not (1 <= self.p <= self.n - 1):
            raise ParameterError(f"need 1 <= p <= n-1, got p={self.p}, n={self.n}")
        if not (1 <= self.q <= self.n - 1):
            raise ParameterError(f"need 1 <= q <= n-1, got q={self.q}, n={self.n}")

    @property
    def is_canonical(self) -> bool:
        return self.p <= self.q and self.p + self.q <= self.n

    @property
    def a(self) -> int:
        """Jacobi weight exponent q - p (canonical triples only)."""
        return self.q - self.p

    @property
    def b(self) -> int:
        """Jacobi weight exponent n - p - q (canonical triples only)."""
        return self.n - self.p - self.q


def canonicalize(params: Params) -> Params:
    """Return the equivalent triple with p <= q and p + q <= n.

    Reduction order: complement both dimensions if p + q > n, then swap if
    p > q. Ball volumes are invariant under both moves.
    """
    n, p, q = params.n, params.p, params.q
    if p + q > n:
        p, q = n - p, n - q
    if p > q:
        p, q = q, p
    return Params(n, p, q)


def max_radius_sq(params: Params) -> int:
    """Largest attainable squared chordal distance, min(p, q, n-p, n-q)."""
    n, p, q = params.n, params.p, params.q
    return min(p, q, n - p, n - q)


# ============================================================
# Subspace bases
# ============================================================

class SubspaceBasis:
    """Semi-unitary n x k matrix whose columns span a k-dimensional subspace."""

    __slots__ = ("matrix", "n", "k")

    def __init__(self, matrix: NDArray):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2:
            raise ParameterError(f"basis must be a 2-d array, got shape {m.shape}")
        n, k = m.shape
        if not (1 <= k <= n):
            raise ParameterError(f"need 1 <= k <= n, got shape {m.shape}")
        gram = m.conj().T @ m
        defect = np.linalg.norm(gram - np.eye(k), "fro")
        if defect > ORTHONORMALITY_TOL:
            raise ParameterError(
                f"columns are not orthonormal (Frobenius defect {defect:.3e})"
            )
        self.matrix = m
        self.matrix.setflags(write=False)
        self.n = n
        self.k = k

    def to_json(self) -> dict:
        """Serialize as {n, k, re, im} with row-major coefficient lists."""
        return {
            "n": self.n,
            "k": self.k,
            "re": [float(x) for x in self.matrix.real.ravel()],
            "im": [float(x) for x in self.matrix.imag.ravel()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SubspaceBasis":
        n, k = int(doc["n"]), int(doc["k"])
        re = np.asarray(doc["re"], dtype=float).reshape(n, k)
        im = np.asarray(doc["im"], dtype=float).reshape(n, k)
        return cls(re + 1j * im)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_stack(rng: np.random.Generator, count: int, n: int, k: int) -> NDArray:
    """Draw ``count`` independent Haar bases as a (count, n, k) complex array.

    Complex Ginibre entries followed by QR; the R diagonal's phases are
    absorbed into Q so the factor is the unique positive-diagonal one, which
    makes the map Ginibre -> basis measurable and the output Haar-invariant.
    """
    g = rng.standard_normal((count, n, k)) + 1j * rng.standard_normal((count, n, k))
    qf, rf = np.linalg.qr(g)
    d = np.einsum("...ii->...i", rf)
    phase = d / np.abs(d)
    return qf * phase.conj()[:, None, :]


def sample_haar(n: int, k: int, seed=None) -> SubspaceBasis:
    """Draw one Haar-distributed k-dimensional subspace basis in C^n."""
    if not (1 <= k <= n):
        raise ParameterError(f"need 1 <= k <= n, got n={n}, k={k}")
    rng = _as_rng(seed)
    return SubspaceBasis(haar_stack(rng, 1, n, k)[0])


# ============================================================
# Principal angles and chordal distances
# ============================================================

@dataclass(frozen=True)
class PrincipalAngles:
    """Nondecreasing principal angles (radians) between two subspaces."""

    angles: NDArray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 1:
            raise ParameterError("angles must be a 1-d array")
        if np.any(a < -1e-12) or np.any(a > np.pi / 2 + 1e-12):
            raise ParameterError("angles must lie in [0, pi/2]")
        object.__setattr__(self, "angles", np.clip(a, 0.0, np.pi / 2))

    @property
    def cosines_sq(self) -> NDArray:
        return np.cos(self.angles) ** 2


def _basis_matrix(x) -> NDArray:
    if isinstance(x, SubspaceBasis):
        return x.matrix
    return np.asarray(x, dtype=complex)


def principal_angles(P, Q) -> PrincipalAngles:
    """Principal angles between span(P) and span(Q).

    Computed from the singular values of P* Q, clamped into [0, 1] before the
    arccos so that roundoff on (near-)identical subspaces can never produce a
    NaN. min(p, q) angles are returned, smallest first.
    """
    Pm, Qm = _basis_matrix(P), _basis_matrix(Q)
    if Pm.shape[0] != Qm.shape[0]:
        raise ParameterError(
            f"ambient dimensions differ: {Pm.shape[0]} vs {Qm.shape[0]}"
        )
    s = _svd(Pm.conj().T @ Qm, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    return PrincipalAngles(np.arccos(s))


def fivepointed_constants(n: int, p: int, q: int) -> tuple[float, float]:
    """Normalization pair (K1, K2) for the fivepointed chordal variant."""
    if p >= n or q >= n:
        raise UndefinedConstantError(
            f"fivepointed constants undefined for p={p}, q={q}, n={n}"
        )
    root = math.sqrt(p * q * (n - p) * (n - q))
    k1 = 2.0 + 2.0 * math.sqrt((p * q) / ((n - p) * (n - q)))
    k2 = 2.0 * n / root
    return k1, k2


def chordal_distance_sq(P, Q, variant: str = "dc") -> float:
    """Squared chordal distance between span(P) and span(Q).

    Variants (theta_i are the principal angles, c2 = sum cos^2 theta_i):

    - ``dc``:           min(p, q) - c2   (sum of squared sines)
    - ``dc_sharp``:     max(p, q) - c2
    - ``dc_star``:      p + q - 2 c2     (squared projector Frobenius distance)
    - ``dc_fivepointed``: K1 - K2 c2 with the constants from
      ``fivepointed_constants``.

    For p = q the variants coincide up to constants: dc_sharp = dc,
    dc_star^2 = 2 dc^2, dc_fivepointed^2 = K2 dc^2 (as squared quantities).
    """
    if variant not in DISTANCE_VARIANTS:
        raise ParameterError(
            f"unknown variant {variant!r}, expected one of {DISTANCE_VARIANTS}"
        )
    Pm, Qm = _basis_matrix(P), _basis_matrix(Q)
    n = Pm.shape[0]
    p, q = Pm.shape[1], Qm.shape[1]
    if variant == "dc":
        # c2 equals the squared Frobenius norm of P* Q; no SVD needed.
        c2 = float(np.linalg.norm(Pm.conj().T @ Qm, "fro") ** 2)
        return max(min(p, q) - c2, 0.0)
    c2 = float(np.sum(principal_angles(Pm, Qm).cosines_sq))
    if variant == "dc_sharp":
        return max(max(p, q) - c2, 0.0)
    if variant == "dc_star":
        return max(p + q - 2.0 * c2, 0.0)
    k1, k2 = fivepointed_constants(n, p, q)
    return max(k1 - k2 * c2, 0.0)


def orthogonal_complement(P) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of span(P)."""
    Pm = _basis_matrix(P)
    n, k = Pm.shape
    if k >= n:
        raise EmptyComplementError(f"complement of a {k}-dim subspace of C^{n} is empty")
    qfull, _ = _qr(Pm, mode="full")
    comp = qfull[:, k:]
    # Guard against a pathological QR: the complement must annihilate P.
    if np.linalg.norm(Pm.conj().T @ comp) > 1e-10:
        raise RuntimeError("complement construction failed orthogonality check")
    return SubspaceBasis(comp)


# ============================================================
# Invariant measure
# ============================================================

def grassmannian_log_volume(n: int, q: int) -> float:
    """log of the total invariant volume of the q-planes in C^n."""
    if not (1 <= q <= n - 1):
        raise ParameterError(f"need 1 <= q <= n-1, got n={n}, q={q}")
    out = q * (n - q) * math.log(math.pi)
    for i in range(1, q + 1):
        out += math.lgamma(q - i + 1) - math.lgamma(n - i + 1)
    return out


def grassmannian_volume(n: int, q: int) -> float:
    """Total invariant volume pi^{q(n-q)} prod_i (q-i)!/(n-i)!.

    Overflows to inf for large n*q; use ``grassmannian_log_volume`` then.
    """
    return math.exp(grassmannian_log_volume(n, q))


def jacobi_normalization_log(params: Params) -> float:
    """log of the constant normalizing the squared-cosine joint density.

    This is the constant v such that v * prod_{i<j} (x_i - x_j)^2 *
    prod_i x_i^b (1-x_i)^a integrates to 1 over the unit box [0, 1]^p.
    """
    n, p, q = params.n, params.p, params.q
    out = 0.0
    for j in range(1, p + 1):
        out += (
            math.lgamma(n - j + 1)
            - math.lgamma(j + 1)
            - math.lgamma(n - q - j + 1)
            - math.lgamma(q - j + 1)
        )
    return out


def jacobi_normalization_exact(params: Params) -> Fraction:
    """Exact rational value of the density normalization constant."""
    n, p, q = params.n, params.p, params.q
    out = Fraction(1)
    for j in range(1, p + 1):
        out *= Fraction(
            math.factorial(n - j),
            math.factorial(j) * math.factorial(n - q - j) * math.factorial(q - j),
        )
    return out
