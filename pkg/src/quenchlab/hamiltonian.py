"""Spin-chain Hamiltonians, Haar scramblings, and matched random matrices.

The local model is an Ising chain in mixed transverse and longitudinal
fields,

    H = -J sum_i sz_i sz_{i+1} - h sum_i sx_i - g sum_i sz_i + sum_i d_i sz_i,

with d_i drawn uniformly from [-disorder_width, disorder_width]. The default
couplings put the model deep in the nonintegrable regime with a transverse
field strong enough that a product-state quench occupies an essentially
Gaussian band of levels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import _freeze

DEFAULT_J = 1.0
DEFAULT_H = 4.2
DEFAULT_G = 2.0

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class ChainParams:
    """Couplings and geometry of the local chain."""

    n_sites: int
    J: float = DEFAULT_J
    h: float = DEFAULT_H
    g: float = DEFAULT_G
    disorder_width: float = 0.0
    boundary: str = "open"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError("n_sites must be at least 2")
        if self.disorder_width < 0:
            raise ValueError("disorder_width must be nonnegative")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be open or periodic, got {self.boundary!r}")


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix with a tag recording how it was built."""

    matrix: np.ndarray
    locality_tag: str

    def __post_init__(self) -> None:
        m = np.ascontiguousarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        if self.locality_tag not in ("local", "scrambled", "random"):
            raise ValueError(f"unknown locality_tag {self.locality_tag!r}")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise ValueError("operator is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _sz_signs(n_sites: int) -> np.ndarray:
    """signs[i, j] = <i| sz_j |i> with |0> the +1 eigenstate of sz."""
    idx = np.arange(2**n_sites)
    bits = (idx[:, None] >> np.arange(n_sites)[None, :]) & 1
    return 1.0 - 2.0 * bits


def build_local_chain(p: ChainParams) -> HermitianOperator:
    """Assemble the dense chain Hamiltonian for the given parameters.

    The matrix is real symmetric: all sz terms are diagonal in the
    computational basis and the transverse field only flips single bits.
    """
    n, dim = p.n_sites, 2**p.n_sites
    signs = _sz_signs(n)
    rng = np.random.default_rng(p.seed)
    d = rng.uniform(-p.disorder_width, p.disorder_width, size=n)

    diag = -p.J * np.sum(signs[:, :-1] * signs[:, 1:], axis=1)
    if p.boundary == "periodic":
        diag -= p.J * signs[:, -1] * signs[:, 0]
    diag += np.sum((d - p.g)[None, :] * signs, axis=1)

    mat = np.zeros((dim, dim))
    idx = np.arange(dim)
    mat[idx, idx] = diag
    for j in range(n):
        mat[idx, idx ^ (1 << j)] += -p.h
    return HermitianOperator(mat, "local")


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The diagonal of R is phase-fixed so the distribution is exactly Haar
    rather than QR-gauge dependent.
    """
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    lam = np.diagonal(r)
    return q * (lam / np.abs(lam))[None, :]


def scramble(h: HermitianOperator, seed: int) -> HermitianOperator:
    """Conjugate by a seeded Haar unitary: same spectrum, no locality left."""
    u = haar_unitary(h.dim, np.random.default_rng(seed))
    m = u @ h.matrix @ u.conj().T
    m = (m + m.conj().T) / 2.0
    return HermitianOperator(m, "scrambled")


def build_goe(dim: int, mean: float, width: float, seed: int) -> HermitianOperator:
    """Real symmetric Gaussian-ensemble matrix with matched eigenvalue moments.

    The raw draw is affinely rescaled so the empirical eigenvalue mean and
    standard deviation equal the requested values (up to float rounding).
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    if width < 0:
        raise ValueError("width must be nonnegative")
    if dim == 1:
        return HermitianOperator(np.array([[float(mean)]]), "random")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    m = (a + a.T) / 2.0
    ev = np.linalg.eigvalsh(m)
    sd = ev.std()
    if sd < 1e-300 or width == 0.0:
        m = float(mean) * np.eye(dim)
    else:
        m = (width / sd) * (m - ev.mean() * np.eye(dim)) + mean * np.eye(dim)
    return HermitianOperator(m, "random")
