"""Experiment runner: declarative configs in, CSV series and a manifest out.

A config names a model (local chain, Haar-scrambled chain, or a
moment-matched random matrix), an initial product state, and one of five
experiment kinds. Results are written as CSV files with a YAML manifest
carrying the normalized config, the quench timescales, summary statistics,
and a digest of every emitted file. All randomness is derived per task from
the master seed, and parallel workers write to preassigned slots, so reruns
are byte-identical for any worker count.
"""
from __future__ import annotations

import argparse
import hashlib
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import yaml

from . import __version__
from .core import HilbertSpec, PureState, product_state
from .dynamics import (
    TimeGrid,
    default_relax_grid,
    default_slow_grid,
    diagonal_ensemble,
    expectation_series,
    linear_grid,
)
from .entanglement import entropy_scan, growth_fit, light_cone
from .errors import QuenchError, ValidationFailed
from .hamiltonian import ChainParams, HermitianOperator, build_local_chain, build_goe, scramble
from .observables import (
    identity_observable,
    local_observable,
    relaxation_time,
    slow_observable,
    to_eigenbasis,
    typical_observable,
)
from .spectral import (
    DEFAULT_WEIGHT_FLOOR,
    EigenSystem,
    SpectralData,
    Timescales,
    diagonalize,
    dos_fit,
    occupied_spectrum,
    timescales,
)

KINDS = ("relax", "dos", "entropy_scan", "light_cone", "equivalence")
VARIANTS = ("local", "scrambled", "goe")
STATES = ("all_up", "neel", "all_plus_x", "custom")

DEFAULT_FRONT_THRESHOLD = 0.01
DEFAULT_THRESHOLD_FRACTION = 1.0 / math.e
DEFAULT_SCAN_POINTS = 46
DEFAULT_FRONT_POINTS = 61
SCAN_SPAN = 3.0  # in units of 1/|J|: the window where local growth is linear


@dataclass(frozen=True)
class ExperimentConfig:
    """Normalized experiment description; all defaults filled."""

    kind: str
    variant: str
    chain: ChainParams
    initial_state: str
    custom_state: tuple | None
    grid_kind: str  # default | linear
    grid_t_max: float | None
    grid_points: int | None
    typical_count: int
    typical_seeds: tuple[int, ...] | None
    include_slow: bool
    include_identity: bool
    local_observables: tuple[tuple[int, str], ...]
    cuts: tuple[int, ...]
    reference_site: int
    front_threshold: float
    threshold_fraction: float
    weight_floor: float
    out_dir: str
    master_seed: int


@dataclass(frozen=True)
class RunManifest:
    """What a run produced: config echo, timescales, summaries, file digests."""

    version: str
    config: dict
    timescales: dict
    results: dict
    files: tuple[dict, ...]


def derive_seed(master_seed: int, label: str) -> int:
    """Per-task seed as a pure function of (master_seed, task label)."""
    digest = hashlib.sha256(f"{master_seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _yaml_float(x: float) -> str:
    # keep a dot in the mantissa so the YAML resolver sees a float untagged
    s = _fmt(x)
    if "e" in s:
        mantissa, exp = s.split("e")
        if "." not in mantissa:
            mantissa += ".0"
        return mantissa + "e" + exp
    if "." not in s:
        s += ".0"
    return s


def _get(raw: dict, key: str, default: Any) -> Any:
    v = raw.get(key)
    return default if v is None else v


def validate(raw: dict) -> tuple[ExperimentConfig | None, list[str]]:
    """Normalize a parsed config, aggregating every violation.

    Returns (config, []) on success or (None, errors); errors name the
    offending field.
    """
    errors: list[str] = []
    if not isinstance(raw, dict):
        return None, ["config: expected a mapping at top level"]

    kind = _get(raw, "kind", None)
    if kind not in KINDS:
        errors.append(f"kind: must be one of {KINDS}, got {kind!r}")

    model = _get(raw, "model", {})
    if not isinstance(model, dict):
        errors.append("model: expected a mapping")
        model = {}
    variant = _get(model, "variant", "local")
    if variant not in VARIANTS:
        errors.append(f"model.variant: must be one of {VARIANTS}, got {variant!r}")
    n_sites = _get(model, "n_sites", 10)
    chain = None
    try:
        candidate = ChainParams(
            n_sites=int(n_sites),
            J=float(_get(model, "J", ChainParams.J)),
            h=float(_get(model, "h", ChainParams.h)),
            g=float(_get(model, "g", ChainParams.g)),
            disorder_width=float(_get(model, "disorder_width", 0.0)),
            boundary=str(_get(model, "boundary", "open")),
            seed=int(_get(model, "seed", 0)),
        )
        HilbertSpec(candidate.n_sites)  # enforces the desk-scale site bound
        chain = candidate
    except (ValueError, TypeError) as exc:
        errors.append(f"model: {exc}")

    state_raw = _get(raw, "initial_state", "neel")
    custom_state = None
    if isinstance(state_raw, dict):
        initial_state = "custom"
        custom = state_raw.get("custom")
        if custom is None:
            errors.append("initial_state: mapping form must carry a 'custom' list")
        else:
            try:
                custom_state = tuple(
                    tuple(complex(c[0]) + 1j * complex(c[1]) for c in site)
                    for site in custom
                )
                if chain is not None and len(custom_state) != chain.n_sites:
                    errors.append(
                        f"initial_state.custom: {len(custom_state)} sites listed, "
                        f"model has {chain.n_sites}"
                    )
                for j, site in enumerate(custom_state):
                    if len(site) != 2:
                        errors.append(f"initial_state.custom[{j}]: need 2 components")
                    elif abs(math.sqrt(sum(abs(c) ** 2 for c in site)) - 1.0) > 1e-10:
                        errors.append(f"initial_state.custom[{j}]: not normalized")
            except (TypeError, ValueError, IndexError):
                errors.append(
                    "initial_state.custom: expected per-site [[re, im], [re, im]] pairs"
                )
    else:
        initial_state = str(state_raw)
        if initial_state not in STATES or initial_state == "custom":
            errors.append(
                f"initial_state: must be one of {STATES[:-1]} or a custom mapping, "
                f"got {state_raw!r}"
            )

    grid = _get(raw, "time_grid", {})
    if not isinstance(grid, dict):
        errors.append("time_grid: expected a mapping")
        grid = {}
    grid_kind = _get(grid, "kind", "default")
    grid_t_max = grid.get("t_max")
    grid_points = grid.get("points")
    if grid_kind not in ("default", "linear"):
        errors.append(f"time_grid.kind: must be default or linear, got {grid_kind!r}")
    if grid_kind == "linear":
        if grid_t_max is None or float(grid_t_max) <= 0:
            errors.append("time_grid.t_max: linear grids need a positive t_max")
        if grid_points is None or int(grid_points) < 2:
            errors.append("time_grid.points: linear grids need at least 2 points")
    grid_t_max = None if grid_t_max is None else float(grid_t_max)
    grid_points = None if grid_points is None else int(grid_points)

    obs = _get(raw, "observables", {})
    if not isinstance(obs, dict):
        errors.append("observables: expected a mapping")
        obs = {}
    seeds_raw = obs.get("typical_seeds")
    typical_seeds: tuple[int, ...] | None = None
    if seeds_raw is not None:
        if not isinstance(seeds_raw, list) or not all(
            isinstance(s, int) for s in seeds_raw
        ):
            errors.append("observables.typical_seeds: expected a list of integers")
        else:
            typical_seeds = tuple(seeds_raw)
    default_count = len(typical_seeds) if typical_seeds is not None else 1
    typical_count = int(_get(obs, "typical_count", default_count))
    if typical_count < 0:
        errors.append("observables.typical_count: must be nonnegative")
    if typical_seeds is not None and len(typical_seeds) != typical_count:
        errors.append(
            f"observables.typical_seeds: {len(typical_seeds)} seeds listed for "
            f"typical_count {typical_count}"
        )
    include_slow = bool(_get(obs, "slow", False))
    include_identity = bool(_get(obs, "identity", False))
    locals_raw = _get(obs, "local", [])
    local_observables: list[tuple[int, str]] = []
    if not isinstance(locals_raw, list):
        errors.append("observables.local: expected a list of {site, axis}")
    else:
        for i, entry in enumerate(locals_raw):
            if not isinstance(entry, dict) or "site" not in entry:
                errors.append(f"observables.local[{i}]: expected a {{site, axis}} mapping")
                continue
            site = int(entry["site"])
            axis = str(entry.get("axis", "z"))
            if chain is not None and not 0 <= site < chain.n_sites:
                errors.append(
                    f"observables.local[{i}].site: {site} outside [0, {chain.n_sites})"
                )
            if axis not in ("x", "y", "z"):
                errors.append(f"observables.local[{i}].axis: must be x, y, or z")
            local_observables.append((site, axis))
    if kind in ("relax",) and typical_count == 0 and not (
        include_slow or include_identity or local_observables
    ):
        errors.append("observables: relax runs need at least one observable")
    if kind == "equivalence" and typical_count < 1:
        errors.append("observables.typical_count: equivalence runs need at least 1")

    cuts_raw = _get(raw, "cuts", [])
    cuts: list[int] = []
    if not isinstance(cuts_raw, list):
        errors.append("cuts: expected a list of cut positions")
    else:
        for c in cuts_raw:
            c = int(c)
            if chain is not None and not 1 <= c <= chain.n_sites - 1:
                errors.append(f"cuts: cut {c} must lie in [1, {chain.n_sites - 1}]")
            cuts.append(c)
    if not cuts and chain is not None and kind == "entropy_scan":
        cuts = list(range(1, chain.n_sites))

    reference_site = int(_get(raw, "reference_site", 0))
    if chain is not None and not 0 <= reference_site < chain.n_sites - 1:
        errors.append(
            f"reference_site: {reference_site} leaves no radii in a chain of "
            f"{chain.n_sites}"
        )

    front_threshold = float(_get(raw, "front_threshold", DEFAULT_FRONT_THRESHOLD))
    if front_threshold <= 0:
        errors.append("front_threshold: must be positive")
    threshold_fraction = float(
        _get(raw, "threshold_fraction", DEFAULT_THRESHOLD_FRACTION)
    )
    if not 0 < threshold_fraction < 1:
        errors.append("threshold_fraction: must be in (0, 1)")
    weight_floor = float(_get(raw, "weight_floor", DEFAULT_WEIGHT_FLOOR))
    if weight_floor < 0:
        errors.append("weight_floor: must be nonnegative")

    out_dir = str(_get(raw, "out_dir", "runs"))
    master_seed = int(_get(raw, "master_seed", 0))

    known = {
        "kind", "model", "initial_state", "time_grid", "observables", "cuts",
        "reference_site", "front_threshold", "threshold_fraction", "weight_floor",
        "out_dir", "master_seed",
    }
    for key in sorted(set(raw) - known):
        errors.append(f"{key}: unknown field")

    if errors or chain is None or kind is None:
        return None, errors
    cfg = ExperimentConfig(
        kind=kind,
        variant=variant,
        chain=chain,
        initial_state=initial_state,
        custom_state=custom_state,
        grid_kind=grid_kind,
        grid_t_max=grid_t_max,
        grid_points=grid_points,
        typical_count=typical_count,
        typical_seeds=typical_seeds,
        include_slow=include_slow,
        include_identity=include_identity,
        local_observables=tuple(local_observables),
        cuts=tuple(cuts),
        reference_site=reference_site,
        front_threshold=front_threshold,
        threshold_fraction=threshold_fraction,
        weight_floor=weight_floor,
        out_dir=out_dir,
        master_seed=master_seed,
    )
    return cfg, []


def parse_config(raw: dict) -> ExperimentConfig:
    """Like validate, but raises ValidationFailed carrying every violation."""
    cfg, errors = validate(raw)
    if errors:
        raise ValidationFailed(errors)
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Canonical plain-data form of a normalized config."""
    return {
        "kind": cfg.kind,
        "model": {
            "variant": cfg.variant,
            "n_sites": cfg.chain.n_sites,
            "J": cfg.chain.J,
            "h": cfg.chain.h,
            "g": cfg.chain.g,
            "disorder_width": cfg.chain.disorder_width,
            "boundary": cfg.chain.boundary,
            "seed": cfg.chain.seed,
        },
        "initial_state": (
            {"custom": [[[c.real, c.imag] for c in site] for site in cfg.custom_state]}
            if cfg.initial_state == "custom"
            else cfg.initial_state
        ),
        "time_grid": {
            "kind": cfg.grid_kind,
            "t_max": cfg.grid_t_max,
            "points": cfg.grid_points,
        },
        "observables": {
            "typical_count": cfg.typical_count,
            "typical_seeds": (
                None if cfg.typical_seeds is None else list(cfg.typical_seeds)
            ),
            "slow": cfg.include_slow,
            "identity": cfg.include_identity,
            "local": [{"site": s, "axis": a} for s, a in cfg.local_observables],
        },
        "cuts": list(cfg.cuts),
        "reference_site": cfg.reference_site,
        "front_threshold": cfg.front_threshold,
        "threshold_fraction": cfg.threshold_fraction,
        "weight_floor": cfg.weight_floor,
        "out_dir": cfg.out_dir,
        "master_seed": cfg.master_seed,
    }


def build_initial_state(cfg: ExperimentConfig) -> PureState:
    n = cfg.chain.n_sites
    up = (1.0, 0.0)
    down = (0.0, 1.0)
    plus = (1.0 / math.sqrt(2), 1.0 / math.sqrt(2))
    if cfg.initial_state == "all_up":
        return product_state([up] * n)
    if cfg.initial_state == "neel":
        return product_state([up if j % 2 == 0 else down for j in range(n)])
    if cfg.initial_state == "all_plus_x":
        return product_state([plus] * n)
    return product_state(list(cfg.custom_state))


def build_operator(cfg: ExperimentConfig) -> HermitianOperator:
    """The Hamiltonian the config names, including DOS-matched random partners."""
    chain = build_local_chain(cfg.chain)
    if cfg.variant == "local":
        return chain
    if cfg.variant == "scrambled":
        return scramble(chain, derive_seed(cfg.master_seed, "scramble"))
    # moment-match the random matrix to the local chain's occupied spectrum
    psi0 = build_initial_state(cfg)
    sdata = occupied_spectrum(diagonalize(chain), psi0)
    ts = timescales(sdata, cfg.weight_floor)
    return build_goe(
        chain.dim, ts.energy_mean, ts.energy_width, derive_seed(cfg.master_seed, "goe")
    )


def _timescales_dict(ts: Timescales) -> dict:
    return {
        "energy_mean": ts.energy_mean,
        "energy_width": ts.energy_width,
        "boltzmann_time": ts.boltzmann_time,
        "mean_occupied_spacing": ts.mean_occupied_spacing,
        "heisenberg_time": ts.heisenberg_time,
    }


class _RunWriter:
    """Collects output files, hashes them, and removes them all on failure."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.records: list[dict] = []

    def write_csv(self, name: str, header: str, rows) -> None:
        path = self.out_dir / name
        lines = [header]
        lines.extend(",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row) for row in rows)
        data = ("\n".join(lines) + "\n").encode()
        path.write_bytes(data)
        self.records.append(
            {"path": name, "sha256": hashlib.sha256(data).hexdigest()}
        )

    def cleanup(self) -> None:
        for rec in self.records:
            try:
                (self.out_dir / rec["path"]).unlink()
            except OSError:
                pass


def _typical_seed(cfg: ExperimentConfig, i: int) -> int:
    if cfg.typical_seeds is not None:
        return cfg.typical_seeds[i]
    return derive_seed(cfg.master_seed, f"typical:{i}")


def _observable_menu(cfg: ExperimentConfig, sdata: SpectralData, eig: EigenSystem):
    """Labelled eigenbasis observables for a relax run."""
    menu = []
    dim = eig.dim
    for i in range(cfg.typical_count):
        seed = _typical_seed(cfg, i)
        menu.append((f"typical_{i}", typical_observable(dim, seed, phases=sdata.phases)))
    if cfg.include_slow:
        menu.append(("slow", slow_observable(sdata, cfg.weight_floor)))
    if cfg.include_identity:
        menu.append(("identity", identity_observable(dim)))
    hspec = HilbertSpec(cfg.chain.n_sites)
    for site, axis in cfg.local_observables:
        obs = to_eigenbasis(local_observable(hspec, site, axis), eig)
        menu.append((f"local_{axis}{site}", obs))
    return menu


def _series_grid(cfg: ExperimentConfig, ts: Timescales, label: str) -> TimeGrid:
    if cfg.grid_kind == "linear":
        return linear_grid(cfg.grid_t_max, cfg.grid_points)
    if label == "slow":
        return default_slow_grid(ts)
    return default_relax_grid(ts)


def _scan_grid(cfg: ExperimentConfig, points: int) -> TimeGrid:
    if cfg.grid_kind == "linear":
        return linear_grid(cfg.grid_t_max, cfg.grid_points)
    j = abs(cfg.chain.J)
    t_max = SCAN_SPAN / j if j > 0 else SCAN_SPAN
    return linear_grid(t_max, points)


def _report_dict(rep) -> dict:
    return {
        "relaxation_time": rep.relaxation_time,
        "equilibrium_value": rep.equilibrium_value,
        "initial_deviation": rep.initial_deviation,
        "threshold_fraction": rep.threshold_fraction,
        "zero_initial_deviation": rep.zero_initial_deviation,
        "relaxed": rep.relaxed,
    }


def _gaussian_dict(fit) -> dict:
    return {
        "mean": fit.mean,
        "sigma": fit.sigma,
        "skewness": fit.skewness,
        "excess_kurtosis": fit.excess_kurtosis,
        "max_cdf_deviation": fit.max_cdf_deviation,
    }


def _relax_outputs(cfg, eig, sdata, ts, writer, n_workers) -> dict:
    reports = {}
    for label, obs in _observable_menu(cfg, sdata, eig):
        grid = _series_grid(cfg, ts, label)
        series = expectation_series(eig, sdata, obs, grid, n_workers=n_workers)
        equilibrium = diagonal_ensemble(sdata, obs)
        rep = relaxation_time(series, equilibrium, cfg.threshold_fraction)
        writer.write_csv(
            f"series_{label}.csv",
            "t,value",
            zip(series.times.tolist(), series.values.tolist()),
        )
        reports[label] = _report_dict(rep)
    return {"reports": reports}


def _dos_outputs(cfg, sdata, writer, prefix: str = "") -> dict:
    name = f"dos_{prefix}.csv" if prefix else "dos.csv"
    writer.write_csv(
        name,
        "energy,weight",
        zip(sdata.eigenvalues.tolist(), sdata.weights.tolist()),
    )
    fit = dos_fit(sdata, cfg.weight_floor)
    return {"gaussian_fit": _gaussian_dict(fit)}


def _entropy_outputs(cfg, eig, sdata, writer, n_workers) -> dict:
    grid = _scan_grid(cfg, DEFAULT_SCAN_POINTS)
    profile = entropy_scan(eig, sdata, cfg.cuts, grid, n_workers=n_workers)
    rows = []
    for k, t in enumerate(grid.times.tolist()):
        for i, cut in enumerate(profile.cuts):
            rows.append((t, cut, float(profile.entropies[i, k])))
    writer.write_csv("entropy.csv", "t,cut,entropy_nats", rows)
    fit = growth_fit(profile)
    per_cut = {
        str(f.cut): {
            "rate": f.rate,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "fit_window": list(f.fit_window),
            "saturation_value": f.saturation_value,
            "window_too_small": f.window_too_small,
        }
        for f in fit.fits
    }
    return {"growth_fit": per_cut, "saturation_fraction": fit.saturation_fraction}


def _front_outputs(cfg, eig, sdata, writer) -> dict:
    grid = _scan_grid(cfg, DEFAULT_FRONT_POINTS)
    front = light_cone(eig, sdata, cfg.reference_site, grid, cfg.front_threshold)
    rows = []
    for k, t in enumerate(grid.times.tolist()):
        for i, r in enumerate(front.radii):
            rows.append((t, r, float(front.correlator[i, k])))
    writer.write_csv("front.csv", "t,r,correlation", rows)
    arrivals = {
        str(r): (None if np.isnan(a) else float(a))
        for r, a in zip(front.radii, front.arrival_times)
    }
    return {
        "velocity": front.velocity,
        "threshold": front.threshold,
        "arrival_times": arrivals,
    }


def run(cfg: ExperimentConfig, n_workers: int = 1, log=None) -> RunManifest:
    """Execute a validated config; emit files and the manifest into out_dir."""
    log = log or (lambda msg: None)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    writer = _RunWriter(out_dir)
    psi0 = build_initial_state(cfg)
    try:
        if cfg.kind == "equivalence":
            results: dict = {"dos_fits": {}, "reports": {}}
            ts_dict = {}
            for tag in ("local", "goe"):
                sub = ExperimentConfig(**{**cfg.__dict__, "variant": tag})
                op = build_operator(sub)
                eig = diagonalize(op)
                sdata = occupied_spectrum(eig, psi0)
                ts = timescales(sdata, cfg.weight_floor)
                ts_dict[tag] = _timescales_dict(ts)
                log(f"{tag}: diagonalized dim {op.dim}")
                results["dos_fits"][tag] = _dos_outputs(cfg, sdata, writer, prefix=tag)[
                    "gaussian_fit"
                ]
                reports = {}
                for i in range(cfg.typical_count):
                    obs = typical_observable(
                        op.dim, _typical_seed(cfg, i), phases=sdata.phases
                    )
                    grid = _series_grid(cfg, ts, f"typical_{i}")
                    series = expectation_series(eig, sdata, obs, grid, n_workers=n_workers)
                    rep = relaxation_time(
                        series, diagonal_ensemble(sdata, obs), cfg.threshold_fraction
                    )
                    writer.write_csv(
                        f"series_{tag}_typical_{i}.csv",
                        "t,value",
                        zip(series.times.tolist(), series.values.tolist()),
                    )
                    reports[f"typical_{i}"] = _report_dict(rep)
                results["reports"][tag] = reports
            timescale_info = ts_dict
        else:
            op = build_operator(cfg)
            eig = diagonalize(op)
            sdata = occupied_spectrum(eig, psi0)
            ts = timescales(sdata, cfg.weight_floor)
            timescale_info = _timescales_dict(ts)
            log(f"diagonalized dim {op.dim}")
            if cfg.kind == "relax":
                results = _relax_outputs(cfg, eig, sdata, ts, writer, n_workers)
            elif cfg.kind == "dos":
                results = _dos_outputs(cfg, sdata, writer)
            elif cfg.kind == "entropy_scan":
                results = _entropy_outputs(cfg, eig, sdata, writer, n_workers)
            else:
                results = _front_outputs(cfg, eig, sdata, writer)
        manifest = RunManifest(
            version=__version__,
            config=config_to_dict(cfg),
            timescales=timescale_info,
            results=results,
            files=tuple(writer.records),
        )
        _write_manifest(out_dir / "manifest.yaml", manifest)
        log(f"wrote {len(writer.records)} data files + manifest to {out_dir}")
        return manifest
    except Exception:
        writer.cleanup()
        raise


class _ManifestDumper(yaml.SafeDumper):
    pass


def _float_representer(dumper: yaml.SafeDumper, value: float):
    if math.isnan(value) or math.isinf(value):
        return dumper.represent_float(value)
    return dumper.represent_scalar("tag:yaml.org,2002:float", _yaml_float(value))


_ManifestDumper.add_representer(float, _float_representer)


def _write_manifest(path: Path, manifest: RunManifest) -> None:
    data = {
        "version": manifest.version,
        "config": manifest.config,
        "timescales": manifest.timescales,
        "results": manifest.results,
        "files": list(manifest.files),
    }
    text = yaml.dump(
        data, Dumper=_ManifestDumper, sort_keys=True, default_flow_style=False
    )
    path.write_bytes(text.encode())


def _load_config(path: str) -> tuple[ExperimentConfig | None, list[str]]:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        return None, [f"config: cannot read {path}: {exc}"]
    except yaml.YAMLError as exc:
        return None, [f"config: parse error: {exc}"]
    if raw is None:
        raw = {}
    return validate(raw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="quenchlab",
        description="Quench experiments on spin chains: relaxation, DOS, entanglement, light cones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config", help="path to a YAML experiment config")
    p_run.add_argument("--out-dir", help="override the config's output directory")
    p_run.add_argument("--seed", type=int, help="override the config's master_seed")
    p_run.add_argument("--threads", type=int, default=1, help="worker threads")

    p_val = sub.add_parser("validate", help="check a config and print its normalized form")
    p_val.add_argument("config", help="path to a YAML experiment config")

    sub.add_parser("info", help="print version and desk-scale limits")

    args = parser.parse_args(argv)

    if args.command == "info":
        from .core import MAX_SITES

        print(f"quenchlab {__version__}")
        print(f"max sites: {MAX_SITES} (dense spectral path)")
        print(
            f"default chain: J={ChainParams.J}, h={ChainParams.h}, g={ChainParams.g}, "
            "open boundary"
        )
        return 0

    cfg, errors = _load_config(args.config)
    if args.command == "validate":
        if errors:
            for e in errors:
                print(f"invalid: {e}", file=sys.stderr)
            return 1
        print(yaml.dump(config_to_dict(cfg), Dumper=_ManifestDumper, sort_keys=True), end="")
        return 0

    if errors:
        for e in errors:
            print(f"invalid: {e}", file=sys.stderr)
        return 1
    if args.out_dir is not None or args.seed is not None:
        updates: dict = {}
        if args.out_dir is not None:
            updates["out_dir"] = args.out_dir
        if args.seed is not None:
            updates["master_seed"] = int(args.seed)
        cfg = ExperimentConfig(**{**cfg.__dict__, **updates})
    if args.threads < 1:
        print("invalid: --threads must be at least 1", file=sys.stderr)
        return 1
    try:
        run(cfg, n_workers=args.threads, log=lambda m: print(m, file=sys.stderr))
    except QuenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures keep diagnostics on stderr
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
