"""Disordered model Hamiltonians and deterministic disorder sampling.

Three ensembles are supported:

* a 1D quasiperiodic chain (cosine on-site potential with irrational wave
  number, hopping J), localization transition at potential amplitude 2J;
* the 3D cubic-lattice Anderson model with box-distributed on-site energies;
* a spin-1/2 "dot plus chain" avalanche model: an all-to-all random-matrix
  dot of N spins coupled with exponentially decaying strengths to L outside
  spins in random fields.

All builders return dense, exactly symmetric float64 matrices and are pure
functions of (config, draws), so they can run concurrently from many workers.
Disorder draws come from a counter-based Philox generator keyed by a 64-bit
seed; `derive_seed` produces per-realization seeds from a master seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .errors import ConfigError

# Inverse golden ratio: wave number of the quasiperiodic potential.
GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0

# Dense-matrix memory guard for the spin model (bytes for one float64 matrix).
DEFAULT_MATRIX_BYTES_LIMIT = 4 << 30

_M64 = (1 << 64) - 1


class ModelKind(str, Enum):
    AUBRY_ANDRE = "aubry_andre"
    ANDERSON3D = "anderson3d"
    AVALANCHE = "avalanche"


class Boundary(str, Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class ModelConfig:
    """Full parameterization of one Hamiltonian ensemble.

    `L` is the linear size for the quadratic models (Hilbert dimension L and
    L^3 respectively) and the number of outside spins for the avalanche model
    (dimension 2^(N+L)).  Fields irrelevant to a given kind are ignored.
    """

    kind: ModelKind
    L: int
    J: float = 1.0
    lam: float = 0.0          # quasiperiodic potential amplitude
    W: float = 0.0            # Anderson box-disorder width
    N: int = 5                # dot spins (avalanche)
    g0: float = 1.0           # dot-chain coupling prefactor (avalanche)
    alpha: float = 1.0        # coupling decay base (avalanche), in (0, 1]
    beta_goe: float = 0.3     # GOE scale of the dot matrix
    boundary: Boundary | None = None  # None: open for the 1D chain, periodic for Anderson

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.boundary is not None:
            object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.L < 1:
            raise ConfigError(f"L must be positive, got {self.L}")
        for name in ("J", "lam", "W", "g0", "alpha", "beta_goe"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.lam < 0:
            raise ConfigError("lam must be >= 0")
        if self.W < 0:
            raise ConfigError("W must be >= 0")
        if self.kind is ModelKind.AUBRY_ANDRE:
            if self.L < 2:
                raise ConfigError("aubry_andre needs L >= 2")
            if self.resolved_boundary is Boundary.PERIODIC and self.L < 3:
                raise ConfigError("periodic chain needs L >= 3")
        if self.kind is ModelKind.ANDERSON3D and self.L < 2:
            raise ConfigError("anderson3d needs L >= 2 (periodic wrap degenerates)")
        if self.kind is ModelKind.AVALANCHE:
            if self.N < 1:
                raise ConfigError("avalanche needs N >= 1")
            if not 0.0 < self.alpha <= 1.0:
                raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha}")
        # dim is a Python int, so it cannot overflow; the guard is on memory.
        if self.kind is ModelKind.AVALANCHE:
            bytes_needed = 8 * self.dim * self.dim
            if bytes_needed > DEFAULT_MATRIX_BYTES_LIMIT:
                raise ConfigError(
                    f"dense dimension 2^{self.N + self.L} = {self.dim} exceeds the "
                    f"matrix memory guard ({DEFAULT_MATRIX_BYTES_LIMIT >> 30} GiB)"
                )

    @property
    def resolved_boundary(self) -> Boundary:
        if self.boundary is not None:
            return self.boundary
        return Boundary.OPEN if self.kind is ModelKind.AUBRY_ANDRE else Boundary.PERIODIC

    @property
    def dim(self) -> int:
        """Hilbert-space dimension D."""
        if self.kind is ModelKind.AUBRY_ANDRE:
            return self.L
        if self.kind is ModelKind.ANDERSON3D:
            return self.L**3
        return 1 << (self.N + self.L)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind.value,
            "L": self.L,
            "J": self.J,
            "lam": self.lam,
            "W": self.W,
            "N": self.N,
            "g0": self.g0,
            "alpha": self.alpha,
            "beta_goe": self.beta_goe,
            "boundary": None if self.boundary is None else self.boundary.value,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)


@dataclass(frozen=True)
class AubryAndreDraws:
    phi: float  # global potential phase, uniform on [0, 2*pi)


@dataclass(frozen=True)
class Anderson3DDraws:
    eps: np.ndarray  # L^3 on-site energies, uniform on [-W/2, W/2]


@dataclass(frozen=True)
class AvalancheDraws:
    h: np.ndarray        # outside fields, uniform on [0.5, 1.5]
    u: np.ndarray        # coupling exponents, u[0] = 0, u[i] in [i-0.2, i+0.2]
    dot_of: np.ndarray   # dot spin paired with each outside spin, in {0..N-1}
    goe: np.ndarray      # symmetrized dot matrix beta*(A+A^T)/2, 2^N x 2^N


Draws = Union[AubryAndreDraws, Anderson3DDraws, AvalancheDraws]


@dataclass(frozen=True)
class Realization:
    """One disorder realization: the seed and every random quantity drawn from it."""

    seed: int
    draws: Draws


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Fold indices into a master seed with a splitmix64 chain.

    Stable across platforms and versions: checkpoints and the worker-count
    determinism guarantee rely on this exact mixing.
    """
    s = _splitmix64(master_seed & _M64)
    for ix in indices:
        s = _splitmix64(s ^ _splitmix64(ix & _M64))
    return s


def realization_rng(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) for one realization."""
    return np.random.Generator(np.random.Philox(key=seed & _M64))


def sample_realization(config: ModelConfig, seed: int) -> Realization:
    """Draw every random quantity of one realization, in a fixed documented order.

    Order (avalanche): fields h, exponents u (u[0] fixed to 0 without a draw),
    dot assignments, then the GOE matrix.  Changing the order changes the
    ensemble stream, so it is part of the reproducibility contract.
    """
    rng = realization_rng(seed)
    if config.kind is ModelKind.AUBRY_ANDRE:
        return Realization(seed, AubryAndreDraws(phi=rng.uniform(0.0, 2.0 * math.pi)))
    if config.kind is ModelKind.ANDERSON3D:
        eps = rng.uniform(-config.W / 2.0, config.W / 2.0, size=config.L**3)
        return Realization(seed, Anderson3DDraws(eps=eps))
    h = rng.uniform(0.5, 1.5, size=config.L)
    u = np.zeros(config.L)
    if config.L > 1:
        i = np.arange(1, config.L, dtype=float)
        u[1:] = rng.uniform(i - 0.2, i + 0.2)
    dot_of = rng.integers(0, config.N, size=config.L)
    goe = _symmetrized_goe(rng, 1 << config.N, config.beta_goe)
    return Realization(seed, AvalancheDraws(h=h, u=u, dot_of=dot_of, goe=goe))


def _symmetrized_goe(rng: np.random.Generator, n: int, beta: float) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return beta * (a + a.T) / 2.0


def sample_goe(n: int, beta_goe: float, seed: int) -> np.ndarray:
    """Gaussian-orthogonal-ensemble matrix beta*(A+A^T)/2 with A_ij ~ N(0,1)."""
    if n < 1:
        raise ConfigError(f"n must be positive, got {n}")
    return _symmetrized_goe(realization_rng(seed), n, beta_goe)


def build_aubry_andre(config: ModelConfig, phi: float) -> np.ndarray:
    """Dense chain Hamiltonian: hopping -J, diagonal lam*cos(2*pi*q*i + phi), i = 1..L."""
    if config.kind is not ModelKind.AUBRY_ANDRE:
        raise ConfigError(f"expected aubry_andre config, got {config.kind.value}")
    if not math.isfinite(phi):
        raise ConfigError("phi must be finite")
    L = config.L
    H = np.zeros((L, L))
    sites = np.arange(1, L + 1, dtype=float)
    np.fill_diagonal(H, config.lam * np.cos(2.0 * math.pi * GOLDEN_MEAN * sites + phi))
    idx = np.arange(L - 1)
    H[idx, idx + 1] = -config.J
    H[idx + 1, idx] = -config.J
    if config.resolved_boundary is Boundary.PERIODIC:
        H[L - 1, 0] = -config.J
        H[0, L - 1] = -config.J
    return H


def build_anderson3d(config: ModelConfig, eps: np.ndarray) -> np.ndarray:
    """Dense 3D cubic-lattice Hamiltonian with periodic (or open) boundaries.

    Site (x, y, z) maps to index x + L*y + L^2*z.  Bonds are assigned, not
    accumulated, so at L = 2 the +/- periodic neighbors merge into a single
    -J bond per pair.
    """
    if config.kind is not ModelKind.ANDERSON3D:
        raise ConfigError(f"expected anderson3d config, got {config.kind.value}")
    L = config.L
    D = L**3
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (D,):
        raise ConfigError(f"eps must have length L^3 = {D}, got shape {eps.shape}")
    if not np.all(np.isfinite(eps)):
        raise ConfigError("eps must be finite")
    if config.W > 0 and np.any(np.abs(eps) > config.W / 2.0 + 1e-12):
        raise ConfigError("on-site energies exceed the box [-W/2, W/2]")
    H = np.zeros((D, D))
    np.fill_diagonal(H, eps)
    periodic = config.resolved_boundary is Boundary.PERIODIC
    coords = np.arange(D)
    x = coords % L
    y = (coords // L) % L
    z = coords // (L * L)
    for axis, c in ((1, x), (L, y), (L * L, z)):
        nbr = coords + axis * (1 - L * (c == L - 1))  # +1 step with wrap in this axis
        if periodic:
            keep = nbr != coords
        else:
            keep = c != L - 1
        i, j = coords[keep], nbr[keep]
        H[i, j] = -config.J
        H[j, i] = -config.J
    return H


def build_avalanche(config: ModelConfig, real: Realization) -> np.ndarray:
    """Dense avalanche Hamiltonian on the 2^(N+L) tensor-product basis.

    Basis ordering puts the dot spins in the most significant bits (dot
    factors leftmost in the Kronecker product), so the dot matrix R embeds as
    R (x) I_{2^L}.  Spin operators are one-half times the Pauli matrices; a
    cleared bit is spin up (+1/2 for S^z).  Flip terms write H[s, s XOR mask]
    for every basis state s, which covers both triangles symmetrically.
    """
    if config.kind is not ModelKind.AVALANCHE:
        raise ConfigError(f"expected avalanche config, got {config.kind.value}")
    draws = real.draws
    if not isinstance(draws, AvalancheDraws):
        raise ConfigError("realization draws do not match the avalanche model")
    N, L = config.N, config.L
    D = 1 << (N + L)
    expected = 1 << N
    if draws.goe.shape != (expected, expected):
        raise ConfigError(f"dot matrix must be {expected}x{expected}, got {draws.goe.shape}")

    H = np.zeros((D, D))
    states = np.arange(D, dtype=np.int64)

    # Dot block: R (x) I over the outside-spin factor.
    dim_out = 1 << L
    view = H.reshape(expected, dim_out, expected, dim_out)
    out_idx = np.arange(dim_out)
    view[:, out_idx, :, out_idx] += draws.goe

    # Field term: sum_i h_i * S^z_i on the outside spins.
    diag = np.zeros(D)
    for i in range(L):
        bit = (states >> (L - 1 - i)) & 1
        diag += draws.h[i] * (0.5 - bit)
    H[states, states] += diag

    # Coupling: g0 * alpha^{u_i} * S^x_{dot_of[i]} S^x_i, u_0 = 0.
    for i in range(L):
        mask = (1 << (L - 1 - i)) | (1 << (L + N - 1 - draws.dot_of[i]))
        coeff = 0.25 * config.g0 * config.alpha ** draws.u[i]
        H[states, states ^ mask] += coeff
    return H


def build_hamiltonian(config: ModelConfig, real: Realization) -> np.ndarray:
    """Dispatch to the model-specific builder."""
    if config.kind is ModelKind.AUBRY_ANDRE:
        assert isinstance(real.draws, AubryAndreDraws)
        return build_aubry_andre(config, real.draws.phi)
    if config.kind is ModelKind.ANDERSON3D:
        assert isinstance(real.draws, Anderson3DDraws)
        return build_anderson3d(config, real.draws.eps)
    return build_avalanche(config, real)
