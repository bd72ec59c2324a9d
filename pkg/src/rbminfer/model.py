"""Generative model, datasets and estimators.

The data model: a single hidden binary unit h coupled to N visible binary
units through a binary coupling vector xi in {+1,-1}^N,

    P(sigma, h) ~ exp(beta * h * xi^T sigma / sqrt(N)),

so each visible configuration is drawn by first flipping h fairly and then
sampling every sigma_i independently with

    P(sigma_i = +1 | h) = (1 + tanh(beta * h * xi_i / sqrt(N))) / 2.

M such samples form the quenched disorder for the inference problem of
recovering xi; everything downstream (message passing, mean-field theory,
temperature learning) consumes the `Dataset` produced here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Variant",
    "ModelParams",
    "Dataset",
    "ConvergenceReport",
    "sample_dataset",
    "sample_feature",
    "mpm_estimate",
    "overlaps",
    "Overlaps",
    "derive_seed",
]

# Samples per Philox substream. Sample k only ever consumes counters from
# stream (seed, k // _BLOCK), so datasets generated with different M share
# their common prefix and blocks can be produced independently/in parallel.
_BLOCK = 4096
_U64 = np.uint64


class Variant(str, Enum):
    RBM = "rbm"
    HOPFIELD = "hopfield"


@dataclass(frozen=True)
class ModelParams:
    """Inference-side model parameters.

    beta is the inverse temperature (feature strength). For the Hopfield
    variant the effective quadratic coupling is beta_tilde = beta**2,
    derived, never stored. hidden_field is the magnitude phi0 of the
    binary external field on the hidden unit (0 = plain model).
    """

    beta: float
    variant: Variant = Variant.RBM
    hidden_field: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise ValueError(f"beta must be finite and positive, got {self.beta}")

    @property
    def beta_tilde(self) -> float:
        return self.beta**2


@dataclass(frozen=True)
class Dataset:
    """M x N matrix of +-1 samples (the quenched disorder)."""

    samples: np.ndarray  # (M, N) int8, entries in {+1, -1}

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim != 2 or s.size == 0:
            raise ValueError("samples must be a non-empty M x N matrix")
        if not np.isin(s, (-1, 1)).all():
            raise ValueError("samples must contain only +1 / -1 entries")
        object.__setattr__(self, "samples", np.ascontiguousarray(s, dtype=np.int8))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_visible(self) -> int:
        return self.samples.shape[1]

    @property
    def alpha(self) -> float:
        return self.n_samples / self.n_visible

    def spins(self) -> np.ndarray:
        """Samples as a float64 matrix (for the numerical engines)."""
        return np.asarray(self.samples, dtype=np.float64)


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    iterations: int
    max_delta: float


def _as_feature(xi) -> np.ndarray:
    xi = np.asarray(xi)
    if xi.ndim != 1 or xi.size == 0:
        raise ValueError("feature vector must be a non-empty 1-d array")
    if not np.isin(xi, (-1, 1)).all():
        raise ValueError("feature vector entries must be +1 or -1")
    return np.asarray(xi, dtype=np.float64)


def derive_seed(seed: int, *indices: int) -> int:
    """Deterministic 64-bit child seed for (seed, index, ...).

    Used to hand independent streams to ensemble instances; based on
    numpy's SeedSequence so children never collide with the parent.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(int(i) for i in indices))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([_U64(int(seed) & (2**64 - 1)), _U64(block)], dtype=_U64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_feature(n_visible: int, seed: int) -> np.ndarray:
    """Draw a uniform +-1 coupling vector of length n_visible."""
    if n_visible < 1:
        raise ValueError("n_visible must be >= 1")
    rng = _block_rng(seed, 0)
    return np.where(rng.random(n_visible) < 0.5, 1.0, -1.0)


def sample_dataset(xi, beta: float, n_samples: int, seed: int) -> Dataset:
    """Generate n_samples two-stage samples from the planted model.

    Counter-based RNG (Philox 4x64, key = (seed, block)): sample k uses
    row k % _BLOCK of stream k // _BLOCK, drawing N+1 uniforms row-major
    (first for h, the rest for the sigma_i). Bit-identical re-runs for a
    given (xi, beta, n_samples, seed); prefixes agree across different
    n_samples.
    """
    xi = _as_feature(xi)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    n = xi.size
    # P(sigma_i=+1 | h) = (1 + h * tanh(beta xi_i / sqrt(N))) / 2
    t = np.tanh(beta * xi / np.sqrt(n))
    out = np.empty((n_samples, n), dtype=np.int8)
    for block in range(0, n_samples, _BLOCK):
        m_b = min(_BLOCK, n_samples - block)
        u = _block_rng(seed, 1 + block // _BLOCK).random((m_b, n + 1))
        h = np.where(u[:, 0] < 0.5, 1.0, -1.0)
        p_plus = 0.5 * (1.0 + h[:, None] * t[None, :])
        out[block : block + m_b] = np.where(u[:, 1:] < p_plus, 1, -1)
    return Dataset(out)


def mpm_estimate(m) -> np.ndarray:
    """Componentwise sign of the marginal means; ties at 0 map to +1."""
    m = np.asarray(m, dtype=np.float64)
    return np.where(m >= 0.0, 1, -1).astype(np.int8)


@dataclass(frozen=True)
class Overlaps:
    q_mag: float   # (1/N) sum_i xi_i^true * m_i
    q_mpm: float   # (1/N) sum_i xi_i^true * sign(m_i)
    q_abs: float   # |q_mag|; the posterior is invariant under xi -> -xi,
                   # so the converged sign is spontaneous and unreported
    Q: float       # (1/N) sum_i m_i^2  (self-overlap)


def overlaps(xi_true, m) -> Overlaps:
    """Alignment of marginal means m with the planted coupling vector."""
    xi_true = _as_feature(xi_true)
    m = np.asarray(m, dtype=np.float64)
    if m.shape != xi_true.shape:
        raise ValueError(f"length mismatch: xi has {xi_true.size}, m has {m.size}")
    n = xi_true.size
    q_mag = float(xi_true @ m) / n
    q_mpm = float(xi_true @ mpm_estimate(m)) / n
    return Overlaps(q_mag=q_mag, q_mpm=q_mpm, q_abs=abs(q_mag), Q=float(m @ m) / n)
