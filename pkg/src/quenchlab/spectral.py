"""Diagonalization, occupied-spectrum statistics, and quench timescales.

A quench from |psi0> occupies the spectrum with weights |c_n|^2 where
c_n = <n|psi0>. Two times govern the subsequent dynamics: the Boltzmann
time 1/Delta_E set by the occupied energy width, and the Heisenberg time
1/delta_eps set by the mean spacing of occupied levels, which shrinks
exponentially with system size. Units are hbar = k_B = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .core import PureState, _freeze
from .errors import (
    ConvergenceFailure,
    DegenerateWidth,
    DimensionMismatch,
    TooFewOccupied,
)
from .hamiltonian import HermitianOperator

DEFAULT_WEIGHT_FLOOR = 1e-8


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the unitary matrix of eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        ev = np.ascontiguousarray(self.eigenvalues, dtype=float)
        vec = np.ascontiguousarray(self.eigenvectors)
        if vec.shape != (ev.size, ev.size):
            raise DimensionMismatch(
                f"eigenvector matrix {vec.shape} does not match {ev.size} eigenvalues"
            )
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", _freeze(ev))
        object.__setattr__(self, "eigenvectors", _freeze(vec))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class SpectralData:
    """Occupied-spectrum overlaps of an initial state: weights and phases.

    weights[n] = |c_n|^2 and phases[n] = arg c_n in (-pi, pi], with
    c_n = <n|psi0> against the eigenbasis the data was built from.
    """

    eigenvalues: np.ndarray
    weights: np.ndarray
    phases: np.ndarray

    def __post_init__(self) -> None:
        ev = np.ascontiguousarray(self.eigenvalues, dtype=float)
        w = np.ascontiguousarray(self.weights, dtype=float)
        ph = np.ascontiguousarray(self.phases, dtype=float)
        if not (ev.shape == w.shape == ph.shape):
            raise DimensionMismatch("eigenvalues, weights, phases must share a shape")
        total = w.sum()
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {total!r}, expected 1 within 1e-10")
        if np.any(ph <= -np.pi) or np.any(ph > np.pi):
            raise ValueError("phases must lie in (-pi, pi]")
        object.__setattr__(self, "eigenvalues", _freeze(ev))
        object.__setattr__(self, "weights", _freeze(w))
        object.__setattr__(self, "phases", _freeze(ph))

    def amplitudes(self) -> np.ndarray:
        """Reconstruct c_n = |c_n| e^{i phase_n}."""
        return np.sqrt(self.weights) * np.exp(1j * self.phases)

    def occupied_mask(self, weight_floor: float) -> np.ndarray:
        return self.weights > weight_floor


@dataclass(frozen=True)
class Timescales:
    """Energy width and the two characteristic times of a quench."""

    energy_mean: float
    energy_width: float
    boltzmann_time: float
    mean_occupied_spacing: float
    heisenberg_time: float


@dataclass(frozen=True)
class GaussianFit:
    """Weighted moments of the occupied density of states and a normal-CDF sup distance."""

    mean: float
    sigma: float
    skewness: float
    excess_kurtosis: float
    max_cdf_deviation: float


def diagonalize(h: HermitianOperator) -> EigenSystem:
    """Full dense eigendecomposition.

    Real symmetric input takes the real LAPACK path automatically, which is
    several times faster than the complex one at the largest chain sizes.
    """
    try:
        ev, vec = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return EigenSystem(ev, vec)


def occupied_spectrum(eig: EigenSystem, psi0: PureState) -> SpectralData:
    """Project the initial state onto the eigenbasis: c_n = <n|psi0>."""
    if eig.dim != psi0.spec.dim:
        raise DimensionMismatch(
            f"eigensystem dimension {eig.dim} does not match state {psi0.spec.dim}"
        )
    c = eig.eigenvectors.conj().T @ psi0.amplitudes
    w = np.abs(c) ** 2
    w = w / w.sum()
    ph = np.angle(c)
    ph = np.where(ph <= -np.pi, np.pi, ph)  # fold the -pi edge onto +pi
    return SpectralData(eig.eigenvalues, w, ph)


def timescales(
    spec: SpectralData, weight_floor: float = DEFAULT_WEIGHT_FLOOR
) -> Timescales:
    """Energy width, Boltzmann time, occupied level spacing, Heisenberg time.

    The width is the full weighted spectral standard deviation; the spacing
    averages only over levels carrying weight above weight_floor, since
    levels without weight never contribute to dephasing.
    """
    e, w = spec.eigenvalues, spec.weights
    mean = float(np.sum(w * e))
    var = float(np.sum(w * (e - mean) ** 2))
    width = math.sqrt(max(var, 0.0))
    if width < 1e-12:
        raise DegenerateWidth(
            "energy width is numerically zero (eigenstate initial condition)"
        )
    occ = spec.occupied_mask(weight_floor)
    count = int(occ.sum())
    if count < 2:
        raise TooFewOccupied(f"only {count} levels above weight floor {weight_floor}")
    eo = e[occ]
    spacing = float(eo.max() - eo.min()) / (count - 1)
    return Timescales(
        energy_mean=mean,
        energy_width=width,
        boltzmann_time=1.0 / width,
        mean_occupied_spacing=spacing,
        heisenberg_time=1.0 / spacing,
    )


def dos_fit(spec: SpectralData, weight_floor: float = DEFAULT_WEIGHT_FLOOR) -> GaussianFit:
    """Gaussianity diagnostics of the occupied density of states.

    Weighted skewness and excess kurtosis of rho(E) = sum_n |c_n|^2
    delta(E - eps_n), plus the sup-norm distance between the weighted
    empirical CDF and the normal CDF with the fitted mean and sigma.
    """
    occ = spec.occupied_mask(weight_floor)
    if int(occ.sum()) < 10:
        raise TooFewOccupied(
            f"need at least 10 occupied levels, found {int(occ.sum())}"
        )
    e = spec.eigenvalues[occ]
    w = spec.weights[occ]
    w = w / w.sum()

    mean = float(np.sum(w * e))
    var = float(np.sum(w * (e - mean) ** 2))
    sigma = math.sqrt(max(var, 0.0))
    if sigma == 0.0:
        raise DegenerateWidth("occupied spectrum has zero width")
    z = (e - mean) / sigma
    skew = float(np.sum(w * z**3))
    kurt = float(np.sum(w * z**4) - 3.0)

    order = np.argsort(e, kind="stable")
    zs = z[order]
    cum = np.cumsum(w[order])
    fitted = ndtr(zs)
    # the empirical CDF jumps at each level: compare both jump sides
    below = np.concatenate([[0.0], cum[:-1]])
    dev = float(max(np.max(np.abs(cum - fitted)), np.max(np.abs(below - fitted))))
    return GaussianFit(
        mean=mean,
        sigma=sigma,
        skewness=skew,
        excess_kurtosis=kurt,
        max_cdf_deviation=dev,
    )
