"""Command-line front end.

Every run resolves its parameters in the order defaults < config file < flags,
writes ``manifest.json`` describing the resolved :class:`RunConfig`, then the
data files. A manifest is itself a valid ``--config``, so
``quadising <cmd> --config old/manifest.json --out new`` reproduces a run byte
for byte.

Exit codes: 0 success, 1 usage or parameter error, 2 numerical or runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .io import NonFiniteOutputError, write_csv, write_json
from .majorana import check_chiral_pairing, spectrum, write_spectrum_csv
from .model import ChainParams, DisorderSpec, FieldProfile, build_profile, interface_sites
from .tridiag import EigensolverError

SUBCOMMANDS = ("spectrum", "zeromodes", "observables", "ldos", "quench", "sweep")

MODEL_DEFAULTS = {"N": 80, "g": 5e-4, "delta": 0.3, "J": 1.0, "w": 0.0, "seed": 0}
MODEL_DEFAULTS_BY_COMMAND = {"quench": {"N": 5, "g": 0.1, "delta": 0.5}}

# name -> (type, default, choices, help)
OPTIONS: dict[str, dict[str, tuple]] = {
    "spectrum": {},
    "zeromodes": {},
    "observables": {
        "kind": (str, "uniform", ("uniform", "local"), "susceptibility definition"),
        "step": (float, 1e-3, None, "susceptibility finite-difference step"),
        "mag_step": (float, 1e-5, None, "magnetization finite-difference step (relative)"),
    },
    "ldos": {
        "method": (str, "histogram", ("histogram", "recursion"), "LDOS route"),
        "depth": (int, 150, None, "recursion depth M"),
        "eta": (float, 0.02, None, "Lorentzian broadening"),
        "bins": (int, 500, None, "energy bins"),
    },
    "quench": {
        "kappa": (float, None, None, "pre-quench coupling (default 10 eps0)"),
        "beta": (float, None, None, "inverse temperature (default 1/J)"),
        "tmax": (float, None, None, "final time (default 2.5 periods)"),
        "steps": (int, 400, None, "number of time points"),
    },
    "sweep": {
        "kind": (str, None, ("figure4a", "disorder", "scaling"), "sweep type"),
        "g_min": (float, 0.05, None, "figure4a: smallest g"),
        "g_max": (float, 0.35, None, "figure4a: largest g"),
        "points": (int, 30, None, "figure4a: grid points"),
        "n_seeds": (int, 50, None, "disorder: number of seeds, starting at --seed"),
        "N_values": (str, "30,60,120", None, "scaling: comma-separated chain sizes"),
        "gN": (float, 3.0, None, "scaling: g N^2"),
        "chi_kind": (str, "uniform", ("uniform", "local"), "scaling: susceptibility definition"),
    },
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    N: int
    g: float
    delta: float
    J: float = 1.0
    w: float = 0.0
    seed: int = 0
    options: dict = field(default_factory=dict)
    out: str = "out"
    workers: int = 1
    version: str = __version__

    @property
    def params(self) -> ChainParams:
        return ChainParams(self.N, self.g, self.delta, self.J)

    @property
    def disorder(self) -> DisorderSpec | None:
        return DisorderSpec(self.w, self.seed) if self.w > 0 else None

    def profile(self) -> FieldProfile:
        return build_profile(self.params, self.disorder)

    def to_manifest(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "model": {"N": self.N, "g": self.g, "delta": self.delta, "J": self.J},
            "disorder": {"w": self.w, "seed": self.seed},
            "options": dict(self.options),
            "out": self.out,
            "workers": self.workers,
            "version": self.version,
        }

    @classmethod
    def from_manifest(cls, data: dict) -> RunConfig:
        flat = _flatten(data)
        try:
            sub = flat.pop("subcommand")
        except KeyError:
            raise UsageError("manifest lacks 'subcommand'") from None
        return resolve(sub, flat, {})


def _flatten(data: dict) -> dict:
    """Config/manifest mapping to flat keys (``disorder.w`` -> ``w``, options inlined)."""
    if not isinstance(data, dict):
        raise UsageError("config must be a key/value mapping")
    flat: dict = {}
    for key, val in data.items():
        key = str(key).replace("-", "_")
        if key in ("model", "options") and isinstance(val, dict):
            flat.update(_flatten(val))
        elif key == "disorder" and isinstance(val, dict):
            flat.update({k: v for k, v in val.items()})
        elif key.startswith("disorder."):
            flat[key.split(".", 1)[1]] = val
        else:
            flat[key] = val
    return flat


def _coerce(name: str, value, typ):
    if value is None:
        return None
    try:
        if typ is int and isinstance(value, float) and not value.is_integer():
            raise ValueError
        return typ(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: cannot interpret {value!r} as {typ.__name__}") from None


def resolve(subcommand: str, file_values: dict, flag_values: dict) -> RunConfig:
    """Merge defaults < file < flags into a validated RunConfig."""
    if subcommand not in SUBCOMMANDS:
        raise UsageError(f"unknown subcommand {subcommand!r}")
    spec = OPTIONS[subcommand]
    model = {**MODEL_DEFAULTS, **MODEL_DEFAULTS_BY_COMMAND.get(subcommand, {})}
    opts = {k: v[1] for k, v in spec.items()}
    extra = {"out": "out", "workers": 1, "version": __version__}
    model_types = {"N": int, "g": float, "delta": float, "J": float, "w": float, "seed": int}
    for layer_name, layer in (("config", file_values), ("flags", flag_values)):
        for key, val in layer.items():
            if val is None:
                continue
            if key in model_types:
                model[key] = _coerce(key, val, model_types[key])
            elif key in spec:
                typ, _, choices, _ = spec[key]
                val = _coerce(key, val, typ)
                if choices and val not in choices:
                    raise UsageError(f"{key}: {val!r} not one of {', '.join(choices)}")
                opts[key] = val
            elif key in ("out", "version"):
                extra[key] = str(val)
            elif key == "workers":
                extra[key] = _coerce(key, val, int)
            elif key == "subcommand":
                if val != subcommand:
                    raise UsageError(f"{layer_name} is for subcommand {val!r}, not {subcommand!r}")
            else:
                raise UsageError(f"{layer_name}: unknown key {key!r} for {subcommand}")
    if subcommand == "sweep" and opts["kind"] is None:
        raise UsageError("sweep needs a kind: figure4a, disorder or scaling")
    try:
        ChainParams(model["N"], model["g"], model["delta"], model["J"])
        DisorderSpec(model["w"], model["seed"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(subcommand=subcommand, options=opts, **model, **extra)


def load_config_file(path) -> dict:
    """YAML (or JSON) mapping from ``path``; parse errors carry line context."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise UsageError(f"config {path}: {exc}") from None
    return _flatten(data or {})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message} (see '{self.prog} --help')")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="YAML/JSON file with model and option keys (or a manifest)")
    common.add_argument("--out", help="output directory (default ./out)")
    common.add_argument("--N", type=int, help="half-length; sites j = -N..N")
    common.add_argument("--g", type=float, help="field curvature")
    common.add_argument("--delta", type=float, help="field offset at the center")
    common.add_argument("--J", type=float, help="Ising coupling")
    common.add_argument("--w", type=float, help="multiplicative disorder amplitude")
    common.add_argument("--seed", type=int, help="disorder seed")
    common.add_argument("--workers", type=int, help="process pool size for sweeps")

    parser = _Parser(prog="quadising", description="Ising chain in a quadratic transverse field")
    parser.add_argument("--version", action="version", version=f"quadising {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common])
        for opt, (typ, default, choices, help_) in OPTIONS[name].items():
            if name == "sweep" and opt == "kind":
                p.add_argument("kind", nargs="?", choices=choices, help=help_)
                continue
            flag = "--" + opt.replace("_", "-")
            p.add_argument(flag, dest=opt, type=typ, choices=choices, help=f"{help_} (default {default})")
    return parser


def parse_config(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop("subcommand")
    cfg_path = args.pop("config")
    file_values = load_config_file(cfg_path) if cfg_path else {}
    return resolve(subcommand, file_values, args)


# ---------------------------------------------------------------- runners


def _run_spectrum(cfg: RunConfig, out: Path) -> None:
    s = spectrum(cfg.profile())
    rep = check_chiral_pairing(s)
    write_spectrum_csv(out / "spectrum.csv", s)
    pair = s.near_zero_pair()
    write_json(
        out / "spectrum.json",
        {
            "ground_energy": s.ground_energy,
            "epsilon0": s.epsilon0,
            "numerically_degenerate": s.numerically_degenerate,
            "near_zero_lambdas": s.lambdas[pair],
            "spectral_radius": s.spectral_radius,
            "chiral_ok": rep.ok,
            "max_pairing_residual": rep.max_pairing_residual,
            "max_partner_gap": rep.max_partner_gap,
        },
    )


def _run_zeromodes(cfg: RunConfig, out: Path) -> None:
    from .zeromodes import analytic_modes, gaussian_fit, pair_fidelity, write_modes_csv, write_summary_json

    interface_sites(cfg.params)  # g = 0 or delta >= J: no interior interface
    prof = cfg.profile()
    data = analytic_modes(prof)
    s = spectrum(prof)
    extra = {"epsilon0_numeric": s.epsilon0, "pair_fidelity": pair_fidelity(data, s)}
    if not data.clamped and data.m_plus < data.N:
        fit = gaussian_fit(data)
        extra.update(
            gaussian_center=fit.center,
            gaussian_curvature=fit.curvature,
            gaussian_curvature_predicted=fit.predicted_curvature,
        )
    write_modes_csv(out / "modes.csv", data, s)
    write_summary_json(out / "zeromodes.json", data, **extra)


def _run_observables(cfg: RunConfig, out: Path) -> None:
    from .observables import chi_peak, susceptibility, write_observables_csv

    o = cfg.options
    s = susceptibility(cfg.profile(), kind=o["kind"], step=o["step"], mag_step=o["mag_step"])
    write_observables_csv(out / "observables.csv", s)
    write_json(out / "observables.json", {"chi_kind": s.chi_kind, "chi_peak_plus": chi_peak(s, 1), "chi_peak_minus": chi_peak(s, -1)})


def _run_ldos(cfg: RunConfig, out: Path) -> None:
    from .ldos import ldos_histogram, ldos_recursion_grid, write_heatmap_csv

    o = cfg.options
    prof = cfg.profile()
    if o["method"] == "histogram":
        grid = ldos_histogram(spectrum(prof), o["bins"], o["eta"])
    else:
        from .majorana import build_h_m

        grid = ldos_recursion_grid(build_h_m(prof), o["depth"], o["eta"], o["bins"])
    write_heatmap_csv(out / "ldos.csv", grid)
    write_json(
        out / "ldos.json",
        {
            "method": o["method"],
            "norm_lambda": grid.norm_lambda,
            "bandwidth": grid.bandwidth,
            "bin_width": grid.bin_width,
            "cells": grid.cells,
            "total_weight": grid.total_weight(),
            "midgap_weight": grid.window_weight(-2.5 * max(o["eta"], grid.bin_width), 2.5 * max(o["eta"], grid.bin_width)),
        },
    )


def _run_quench(cfg: RunConfig, out: Path) -> None:
    from .quench import evolve_and_fidelity, extract_period, quench_setup
    from .zeromodes import analytic_modes

    o = cfg.options
    prof = cfg.profile()
    times = None
    if o["tmax"] is not None:
        times = np.linspace(0.0, o["tmax"], o["steps"])
    else:
        eps = analytic_modes(prof).epsilon0_analytic
        times = np.linspace(0.0, 2.5 * 2 * np.pi / eps, o["steps"])
    res = evolve_and_fidelity(quench_setup(prof, kappa=o["kappa"], beta=o["beta"], times=times))
    summary = res.summary()
    try:
        summary["period_extracted"] = extract_period(res.times, res.fidelity).period
    except ValueError as exc:
        summary["period_extracted"] = None
        summary["period_error"] = str(exc)
    write_csv(out / "quench.csv", ["t", "L"], [res.times, res.fidelity])
    write_json(out / "quench.json", summary)


def _run_sweep(cfg: RunConfig, out: Path) -> None:
    from . import sweeps
    from .observables import write_observables_csv

    o = cfg.options
    if o["kind"] == "figure4a":
        t = sweeps.figure4a_sweep(cfg.N, cfg.delta, o["g_min"], o["g_max"], o["points"], cfg.J)
        write_csv(out / "figure4a.csv", ["g", "epsilon0_analytic", "epsilon0_numeric"], [t.g, t.epsilon0_analytic, t.epsilon0_numeric])
        write_json(out / "figure4a.json", {"N": t.N, "delta": t.delta, "monotone_numeric": t.is_monotone("numeric"), "monotone_analytic": t.is_monotone("analytic")})
    elif o["kind"] == "disorder":
        if cfg.w <= 0:
            raise UsageError("disorder sweep needs --w > 0")
        seeds = range(cfg.seed, cfg.seed + o["n_seeds"])
        e = sweeps.disorder_ensemble(cfg.params, cfg.w, seeds, workers=cfg.workers)
        write_csv(
            out / "disorder.csv",
            ["seed", "epsilon0_numeric", "epsilon0_analytic", "center_A", "center_B"],
            [e.seeds, e.epsilon0_numeric, e.epsilon0_analytic, e.centers_A, e.centers_B],
        )
        write_json(out / "disorder.json", e.summary())
    else:
        try:
            Ns = [int(x) for x in str(o["N_values"]).split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"N_values: cannot parse {o['N_values']!r}") from None
        sw = sweeps.scaling_sweep(Ns, o["gN"], cfg.delta, cfg.J, kind=o["chi_kind"], workers=cfg.workers)
        for s in sw.series:
            write_observables_csv(out / f"N{s.N:04d}" / "observables.csv", s)
        write_json(out / "scaling.json", sw.summary())


RUNNERS = {
    "spectrum": _run_spectrum,
    "zeromodes": _run_zeromodes,
    "observables": _run_observables,
    "ldos": _run_ldos,
    "quench": _run_quench,
    "sweep": _run_sweep,
}


def _numerical_errors() -> tuple[type[BaseException], ...]:
    from .quench import NoOscillationError, NumericalDegradationError

    return (
        EigensolverError,
        NumericalDegradationError,
        NoOscillationError,
        NonFiniteOutputError,
        MemoryError,
        FloatingPointError,
        np.linalg.LinAlgError,
        OSError,
    )


def run(cfg: RunConfig) -> int:
    """Execute a resolved configuration; returns the exit status."""
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "manifest.json", cfg.to_manifest())
        RUNNERS[cfg.subcommand](cfg, out)
    except UsageError as exc:
        print(f"quadising: error: {exc}", file=sys.stderr)
        return 1
    except _numerical_errors() as exc:
        print(f"quadising: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"quadising: invalid parameters: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"quadising: error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


def read_manifest(path) -> RunConfig:
    return RunConfig.from_manifest(json.loads(Path(path).read_text()))


if __name__ == "__main__":
    sys.exit(main())
