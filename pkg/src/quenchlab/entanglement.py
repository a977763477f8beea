"""Entanglement entropy scans, growth fits, and correlation light cones.

Under a local Hamiltonian a separable initial state builds entanglement
across a cut at a rate set by the cut's boundary, so in a chain every
interior cut grows at nearly the same rate and the profile stays flat in
the cut position. A scrambled Hamiltonian has no notion of locality and
fills every bipartition toward its maximal entropy within a Boltzmann
time, so the profile scales with the smaller block. Connected two-point
correlators expose the finite propagation speed of the local dynamics.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import PureState, SiteRegion, partial_trace, _freeze
from .dynamics import TimeGrid, evolve_spectral
from .errors import NoFrontDetected
from .spectral import EigenSystem, SpectralData

_EIG_CLIP = 1e-14


@dataclass(frozen=True)
class EntanglementProfile:
    """Entropy in nats for prefix cuts [0, l) sampled over a time grid."""

    cuts: tuple[int, ...]
    grid: TimeGrid
    entropies: np.ndarray  # shape (n_cuts, n_times)

    def __post_init__(self) -> None:
        s = np.ascontiguousarray(self.entropies, dtype=float)
        if s.shape != (len(self.cuts), len(self.grid)):
            raise ValueError(
                f"entropies shape {s.shape} does not match "
                f"({len(self.cuts)}, {len(self.grid)})"
            )
        object.__setattr__(self, "cuts", tuple(int(c) for c in self.cuts))
        object.__setattr__(self, "entropies", _freeze(s))


@dataclass(frozen=True)
class CutGrowth:
    """Linear-growth fit for one cut."""

    cut: int
    rate: float
    intercept: float
    r_squared: float
    fit_window: tuple[float, float]
    saturation_value: float
    window_too_small: bool


@dataclass(frozen=True)
class GrowthFit:
    fits: tuple[CutGrowth, ...]
    saturation_fraction: float

    def for_cut(self, cut: int) -> CutGrowth:
        for f in self.fits:
            if f.cut == cut:
                return f
        raise KeyError(f"no fit for cut {cut}")


@dataclass(frozen=True)
class CorrelationFront:
    """Connected sigma-z correlator magnitudes C[r][t] and the fitted front."""

    radii: tuple[int, ...]
    grid: TimeGrid
    correlator: np.ndarray  # shape (n_radii, n_times)
    arrival_times: np.ndarray  # nan where the threshold is never crossed
    velocity: float
    threshold: float

    def __post_init__(self) -> None:
        c = np.ascontiguousarray(self.correlator, dtype=float)
        if c.shape != (len(self.radii), len(self.grid)):
            raise ValueError("correlator shape does not match radii and grid")
        if self.velocity < 0:
            raise ValueError("velocity must be nonnegative")
        object.__setattr__(self, "correlator", _freeze(c))
        object.__setattr__(
            self, "arrival_times", _freeze(np.asarray(self.arrival_times, float))
        )


def _entropy_from_eigs(lam: np.ndarray) -> float:
    lam = lam[lam > _EIG_CLIP]  # below the clip the weights are numerically zero
    if lam.size == 0:
        return 0.0
    return float(-np.sum(lam * np.log(lam)))


def entropy(psi: PureState, region: SiteRegion) -> float:
    """Von Neumann entropy of the reduced state on a region, in nats.

    For a pure state the two sides of a cut carry identical spectra, so the
    reduction is taken on the smaller block; for a prefix region [0, l) the
    complement is [l, N), which keeps the diagonalization at most half the
    chain.
    """
    n = psi.spec.n_sites
    comp_size = n - region.size
    if comp_size < region.size:
        # complementary interval exists because regions are contiguous
        if region.start == 0:
            region = SiteRegion(region.stop, n, n)
        elif region.stop == n:
            region = SiteRegion(0, region.start, n)
        # interior regions keep their orientation; both sides cost the same
    rho = partial_trace(psi, region)
    lam = np.linalg.eigvalsh(rho.matrix)
    return _entropy_from_eigs(lam)


def entropy_scan(
    eig: EigenSystem,
    spec: SpectralData,
    cuts: Sequence[int],
    grid: TimeGrid,
    n_workers: int = 1,
) -> EntanglementProfile:
    """Entropy of every prefix cut [0, l) at every grid time.

    Each time point is an independent work item (evolve once, reduce every
    cut); results are written to preassigned columns so any worker count
    produces identical values.
    """
    cuts = tuple(int(c) for c in cuts)
    n = int(np.log2(eig.dim).round())
    regions = [SiteRegion(0, c, n) for c in cuts]
    out = np.empty((len(cuts), len(grid)))

    def fill(k: int) -> None:
        psi = evolve_spectral(eig, spec, float(grid.times[k]))
        for i, region in enumerate(regions):
            out[i, k] = entropy(psi, region)

    if n_workers <= 1:
        for k in range(len(grid)):
            fill(k)
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            list(pool.map(fill, range(len(grid))))
    return EntanglementProfile(cuts, grid, out)


def growth_fit(profile: EntanglementProfile, saturation_fraction: float = 0.8) -> GrowthFit:
    """Least-squares line per cut over the pre-saturation window.

    The plateau is the mean entropy over the last 10% of grid times; the fit
    window runs from the first nonzero point to the first point exceeding
    saturation_fraction of the plateau. Cuts whose window holds fewer than
    5 points are flagged rather than fitted.
    """
    if not 0.0 < saturation_fraction < 1.0:
        raise ValueError("saturation_fraction must be in (0, 1)")
    t = profile.grid.times
    n_t = t.size
    tail_start = min(n_t - 1, int(np.ceil(0.9 * n_t)))
    fits = []
    for i, cut in enumerate(profile.cuts):
        s = profile.entropies[i]
        plateau = float(np.mean(s[tail_start:]))
        nonzero = np.nonzero(s > 1e-12)[0]
        if nonzero.size == 0:
            fits.append(CutGrowth(cut, 0.0, 0.0, 0.0, (0.0, 0.0), plateau, True))
            continue
        i0 = int(nonzero[0])
        above = np.nonzero(s > saturation_fraction * plateau)[0]
        i1 = int(above[0]) if above.size else n_t
        if i1 - i0 < 5:
            fits.append(CutGrowth(cut, 0.0, 0.0, 0.0, (0.0, 0.0), plateau, True))
            continue
        tw, sw = t[i0:i1], s[i0:i1]
        a = np.vstack([tw, np.ones_like(tw)]).T
        coef, *_ = np.linalg.lstsq(a, sw, rcond=None)
        pred = a @ coef
        ss_res = float(np.sum((sw - pred) ** 2))
        ss_tot = float(np.sum((sw - sw.mean()) ** 2))
        r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
        fits.append(
            CutGrowth(
                cut,
                float(coef[0]),
                float(coef[1]),
                r2,
                (float(t[i0]), float(t[i1 - 1])),
                plateau,
                False,
            )
        )
    return GrowthFit(tuple(fits), saturation_fraction)


def _sz_expectations(prob: np.ndarray, signs: np.ndarray) -> np.ndarray:
    return signs.T @ prob


def fit_front(
    radii: Sequence[int],
    times: np.ndarray,
    correlator: np.ndarray,
    threshold: float,
) -> tuple[np.ndarray, float]:
    """Arrival times per radius and the least-squares front velocity.

    The arrival at radius r is the first grid time where C[r] reaches the
    threshold; the velocity is the slope of r against arrival time over the
    radii that ever arrive.
    """
    radii = np.asarray(radii, dtype=float)
    arrivals = np.full(radii.size, np.nan)
    for i in range(radii.size):
        hit = np.nonzero(correlator[i] >= threshold)[0]
        if hit.size:
            arrivals[i] = times[hit[0]]
    defined = ~np.isnan(arrivals)
    if int(defined.sum()) < 3:
        raise NoFrontDetected(
            f"only {int(defined.sum())} radii crossed threshold {threshold}"
        )
    ts = arrivals[defined]
    rs = radii[defined]
    a = np.vstack([ts, np.ones_like(ts)]).T
    coef, *_ = np.linalg.lstsq(a, rs, rcond=None)
    return arrivals, float(coef[0])


def light_cone(
    eig: EigenSystem,
    spec: SpectralData,
    reference_site: int,
    grid: TimeGrid,
    threshold: float = 0.01,
) -> CorrelationFront:
    """Connected correlation front from a reference site.

    C[r][t] = |<sz_ref sz_{ref+r}> - <sz_ref><sz_{ref+r}>| for every radius
    that fits in the chain. Both operators are diagonal, so the correlators
    come from the evolved probability distribution directly.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    n = int(np.log2(eig.dim).round())
    if not 0 <= reference_site < n:
        raise ValueError(f"reference site {reference_site} outside chain of {n}")
    radii = tuple(range(1, n - reference_site))
    if not radii:
        raise ValueError("reference site has no sites to its right")
    idx = np.arange(eig.dim)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    signs = 1.0 - 2.0 * bits

    out = np.empty((len(radii), len(grid)))
    for k in range(len(grid)):
        psi = evolve_spectral(eig, spec, float(grid.times[k]))
        p = np.abs(psi.amplitudes) ** 2
        z = _sz_expectations(p, signs)
        s_ref = signs[:, reference_site]
        for i, r in enumerate(radii):
            zz = float(np.sum(p * s_ref * signs[:, reference_site + r]))
            out[i, k] = abs(zz - z[reference_site] * z[reference_site + r])

    arrivals, velocity = fit_front(radii, grid.times, out, threshold)
    return CorrelationFront(radii, grid, out, arrivals, max(velocity, 0.0), threshold)
