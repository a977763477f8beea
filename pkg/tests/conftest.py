"""Session fixtures: diagonalized default chains and their nonlocal partners.

Everything heavy is computed once per session. The scrambled partners are
built in factored form: the eigenvectors of U H U^dag are U V when H = V E
V^dag, so a single unitary-times-matrix product replaces a fresh dense
diagonalization at the largest sizes.
"""
from typing import NamedTuple

import numpy as np
import pytest

import quenchlab as ql

SCRAMBLE_SEED = 20240817
GOE_SEED = 424242
TYPICAL_SEEDS = tuple(range(8))


class Quench(NamedTuple):
    params: ql.ChainParams
    chain: ql.HermitianOperator
    eig: ql.EigenSystem
    psi0: ql.PureState
    sdata: ql.SpectralData
    ts: ql.Timescales


class Partner(NamedTuple):
    eig: ql.EigenSystem
    sdata: ql.SpectralData
    ts: ql.Timescales


def neel_state(n: int) -> ql.PureState:
    return ql.product_state([(1, 0) if j % 2 == 0 else (0, 1) for j in range(n)])


def _quench(n: int) -> Quench:
    params = ql.ChainParams(n_sites=n)
    chain = ql.build_local_chain(params)
    eig = ql.diagonalize(chain)
    psi0 = neel_state(n)
    sdata = ql.occupied_spectrum(eig, psi0)
    ts = ql.timescales(sdata)
    return Quench(params, chain, eig, psi0, sdata, ts)


def _scrambled_partner(q: Quench) -> Partner:
    u = ql.haar_unitary(q.eig.dim, np.random.default_rng(SCRAMBLE_SEED))
    eig = ql.EigenSystem(q.eig.eigenvalues, u @ q.eig.eigenvectors)
    sdata = ql.occupied_spectrum(eig, q.psi0)
    return Partner(eig, sdata, ql.timescales(sdata))


@pytest.fixture(scope="session")
def quench6() -> Quench:
    return _quench(6)


@pytest.fixture(scope="session")
def quench8() -> Quench:
    return _quench(8)


@pytest.fixture(scope="session")
def quench10() -> Quench:
    return _quench(10)


@pytest.fixture(scope="session")
def quench12() -> Quench:
    return _quench(12)


@pytest.fixture(scope="session")
def scrambled10(quench10) -> Partner:
    return _scrambled_partner(quench10)


@pytest.fixture(scope="session")
def scrambled12(quench12) -> Partner:
    return _scrambled_partner(quench12)


@pytest.fixture(scope="session")
def goe10(quench10) -> Partner:
    op = ql.build_goe(
        quench10.eig.dim, quench10.ts.energy_mean, quench10.ts.energy_width, GOE_SEED
    )
    eig = ql.diagonalize(op)
    sdata = ql.occupied_spectrum(eig, quench10.psi0)
    return Partner(eig, sdata, ql.timescales(sdata))


def typical_runs(partner, seeds=TYPICAL_SEEDS):
    """Aligned typical observables with their series and equilibrium values."""
    grid = ql.default_relax_grid(partner.ts)
    runs = []
    for seed in seeds:
        obs = ql.typical_observable(partner.eig.dim, seed, phases=partner.sdata.phases)
        series = ql.expectation_series(partner.eig, partner.sdata, obs, grid)
        runs.append((series, ql.diagonal_ensemble(partner.sdata, obs)))
    return runs


@pytest.fixture(scope="session")
def typical_runs10(quench10):
    return typical_runs(quench10)


@pytest.fixture(scope="session")
def typical_runs10_goe(goe10):
    return typical_runs(goe10)
