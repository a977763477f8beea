"""The three observable classes of a quench and relaxation-time estimation.

Typical observables dephase within a few Boltzmann times. The slow
observable couples adjacent occupied levels with phase factors chosen so
every term starts aligned; its expectation is a sum of cosines of
neighboring-gap frequencies and survives until the Heisenberg time. Local
observables are single-site Paulis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import HilbertSpec, _freeze
from .dynamics import TimeSeries
from .errors import SiteOutOfBounds
from .spectral import DEFAULT_WEIGHT_FLOOR, EigenSystem, SpectralData

_HERM_TOL = 1e-12

PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class ObservableMatrix:
    """Hermitian observable with basis and class annotations."""

    matrix: np.ndarray
    basis_tag: str  # site_basis | eigen_basis
    class_tag: str  # typical | slow | local

    def __post_init__(self) -> None:
        m = np.ascontiguousarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got {m.shape}")
        if self.basis_tag not in ("site_basis", "eigen_basis"):
            raise ValueError(f"unknown basis_tag {self.basis_tag!r}")
        if self.class_tag not in ("typical", "slow", "local", "identity"):
            raise ValueError(f"unknown class_tag {self.class_tag!r}")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise ValueError("observable is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", _freeze(m))


@dataclass(frozen=True)
class RelaxationReport:
    """First sustained entry of a series into its equilibrium band.

    relaxation_time is None when the series never settles into the band
    within the grid (not relaxed). A zero initial deviation reports time 0
    with the flag set.
    """

    relaxation_time: float | None
    equilibrium_value: float
    initial_deviation: float
    threshold_fraction: float
    zero_initial_deviation: bool = False

    @property
    def relaxed(self) -> bool:
        return self.relaxation_time is not None


def slow_observable(
    spec: SpectralData, weight_floor: float = DEFAULT_WEIGHT_FLOOR
) -> ObservableMatrix:
    """Hermitian coupling of consecutive occupied levels with aligned phases.

    For occupied levels a < b adjacent in the sorted occupied spectrum the
    matrix carries O[a, b] = e^{i(phi_a - phi_b)} and the conjugate below the
    diagonal, so each pair contributes |c_a||c_b| with zero initial phase and
    <O(0)> = 2 sum |c_n||c_{n+1}|. Levels below the weight floor carry no
    dynamical weight and are skipped.
    """
    dim = spec.eigenvalues.size
    occ = np.nonzero(spec.occupied_mask(weight_floor))[0]
    mat = np.zeros((dim, dim), dtype=complex)
    ph = spec.phases
    for a, b in zip(occ[:-1], occ[1:]):
        mat[a, b] = np.exp(1j * (ph[a] - ph[b]))
        mat[b, a] = np.conj(mat[a, b])
    return ObservableMatrix(mat, "eigen_basis", "slow")


def typical_observable(
    dim: int, seed: int, phases: np.ndarray | None = None
) -> ObservableMatrix:
    """Random Gaussian-ensemble Hermitian observable with unit operator norm.

    With phases given (the initial-state phases of a quench), the entries are
    the magnitudes of a Gaussian draw dressed as e^{i phi_n}|G_nm|e^{-i phi_m}.
    Every term of the t = 0 double sum then starts positive, giving the
    observable a macroscopic initial deviation that dephases on the Boltzmann
    time. A bare zero-mean draw starts at a value statistically identical to
    its late-time fluctuations, so there is no deviation to relax; the
    dressed form is what the dephasing experiments use.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    m = (a + a.T) / 2.0
    if phases is not None:
        ph = np.asarray(phases, dtype=float)
        if ph.shape != (dim,):
            raise ValueError(f"phases shape {ph.shape} does not match dim {dim}")
        unit = np.exp(1j * ph)
        m = unit[:, None] * np.abs(m) * np.conj(unit)[None, :]
    norm = float(np.max(np.abs(np.linalg.eigvalsh(m))))
    return ObservableMatrix(m / norm, "eigen_basis", "typical")


def local_observable(spec: HilbertSpec, site: int, axis: str) -> ObservableMatrix:
    """Single-site Pauli operator padded with identities."""
    if not 0 <= site < spec.n_sites:
        raise SiteOutOfBounds(f"site {site} outside chain of {spec.n_sites}")
    if axis not in PAULI:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    left = np.eye(2 ** (spec.n_sites - site - 1))
    right = np.eye(2**site)
    mat = np.kron(left, np.kron(PAULI[axis], right))
    return ObservableMatrix(mat, "site_basis", "local")


def identity_observable(dim: int) -> ObservableMatrix:
    return ObservableMatrix(np.eye(dim), "eigen_basis", "identity")


def to_eigenbasis(obs: ObservableMatrix, eig: EigenSystem) -> ObservableMatrix:
    """Rotate a site-basis observable into the eigenbasis."""
    if obs.basis_tag == "eigen_basis":
        return obs
    v = eig.eigenvectors
    m = v.conj().T @ obs.matrix @ v
    m = (m + m.conj().T) / 2.0
    return ObservableMatrix(m, "eigen_basis", obs.class_tag)


def relaxation_time(
    series: TimeSeries,
    equilibrium: float,
    threshold_fraction: float = 1.0 / math.e,
) -> RelaxationReport:
    """Earliest grid time after which the series stays inside the band.

    The band is threshold_fraction times the initial deviation around the
    equilibrium value; the entry must be sustained through the end of the
    grid, since oscillatory series cross the band many times before settling.
    """
    if not 0.0 < threshold_fraction < 1.0:
        raise ValueError("threshold_fraction must be in (0, 1)")
    v = series.values
    dev0 = abs(float(v[0]) - equilibrium)
    if dev0 < 1e-12:
        return RelaxationReport(0.0, equilibrium, dev0, threshold_fraction, True)
    inside = np.abs(v - equilibrium) <= threshold_fraction * dev0
    outside = np.nonzero(~inside)[0]
    k = 0 if outside.size == 0 else int(outside[-1]) + 1
    if k >= len(v):
        return RelaxationReport(None, equilibrium, dev0, threshold_fraction)
    return RelaxationReport(
        float(series.times[k]), equilibrium, dev0, threshold_fraction
    )
