"""Command-line front end.

Subcommands: evolve, steady, qfunc, sweep-r, scaling, disorder.  Each run is
described by a YAML config (nested sections model/placement/run/...); every
output table embeds the config echo, seed, and code version needed to re-run
it exactly.  Exit codes: 0 success, 2 config error, 3 solver error, 4 IO
error.
"""

import argparse
import copy
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .couplings import Placement, WaveguideGeometry, build_couplings, ideal_placement
from .dynamics import (COLLECTIVE, FULL_MODE, ModelSpec, SolverError,
                       SqueezedReservoir, evolve, steady_state_numeric)
from .experiments import (DisorderSpec, disorder_ensemble, ideal_reference,
                          scaling_study, sweep_r)
from .observables import husimi_q, project_q_perp, squeezing_report
from .spinspace import collective_ops, dicke_state, embed_symmetric, full_ops
from .steadystate import steady_state_analytic
from .tableio import ResultTable, write_table

COMMANDS = ("evolve", "steady", "qfunc", "sweep-r", "scaling", "disorder")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


class ConfigError(ValueError):
    pass


# section -> {key: (type, default)}; None default means required
_SCHEMA = {
    "model": {
        "N": (int, 10),
        "r": ((int, float), 0.5),
        "alpha": ((int, float), 0.5),
        "delta": ((int, float), 1.0),
        "A": ((int, float), 1.0),
        "mode": (str, COLLECTIVE),
    },
    "placement": {
        "ideal": (bool, True),
        "z": (list, None),
    },
    "run": {
        "initial_m": ((int, float), None),  # default: -j (ground)
        "t_end": ((int, float), 20.0),
        "n_samples": (int, 201),
        "series": (list, None),
    },
    "qfunc": {
        "times": (list, [0.0]),
        "planar_grid": (int, 201),
        "n_theta": (int, 181),
        "n_phi": (int, 361),
    },
    "sweep": {
        "r_min": ((int, float), 0.0),
        "r_max": ((int, float), 2.0),
        "r_step": ((int, float), 0.02),
    },
    "scaling": {
        "N_min": (int, 4),
        "N_max": (int, 60),
        "N_step": (int, 2),
    },
    "disorder": {
        "w": ((int, float), 0.0),
        "w_values": (list, None),
        "n_configs": (int, 100),
        "steady": (bool, False),
        "steady_w_values": (list, None),
        "n_configs_steady": (int, None),
        "t_end": ((int, float), 10.0),
        "n_samples": (int, 101),
    },
    "output": {
        "prefix": (str, "run"),
    },
}


@dataclass
class RunConfig:
    command: str
    sections: dict
    seed: int = 0

    def __getitem__(self, key):
        return self.sections[key]


def _validate_section(name: str, given: dict) -> dict:
    schema = _SCHEMA[name]
    out = {}
    for key, value in given.items():
        if key not in schema:
            raise ConfigError(f"unknown key {name}.{key!r}")
        typ, _ = schema[key]
        if value is not None and not isinstance(value, typ):
            if isinstance(value, int) and typ == (int, float):
                value = float(value)
            else:
                raise ConfigError(
                    f"{name}.{key} has type {type(value).__name__}, "
                    f"expected {typ}")
        out[key] = value
    for key, (_, default) in schema.items():
        out.setdefault(key, copy.deepcopy(default))
    return out


def parse_config(doc: dict, command: str | None = None) -> RunConfig:
    """Validate a config mapping: unknown keys are rejected and physical
    ranges checked before any compute."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")
    doc = dict(doc)
    cfg_command = doc.pop("command", None)
    seed = doc.pop("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a nonnegative integer")
    if cfg_command is not None and cfg_command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg_command!r}")
    if command is None:
        command = cfg_command
    elif cfg_command is not None and cfg_command != command:
        raise ConfigError(
            f"config file says command {cfg_command!r}, invoked as {command!r}")
    if command is None:
        raise ConfigError("no command given")

    sections = {}
    for name, body in doc.items():
        if name not in _SCHEMA:
            raise ConfigError(f"unknown section {name!r}")
        if not isinstance(body, dict):
            raise ConfigError(f"section {name!r} must be a mapping")
        sections[name] = _validate_section(name, body)
    for name in _SCHEMA:
        sections.setdefault(name, _validate_section(name, {}))

    m = sections["model"]
    if m["N"] < 1:
        raise ConfigError(f"model.N must be >= 1, got {m['N']}")
    if m["r"] < 0:
        raise ConfigError(f"model.r must be >= 0, got {m['r']}")
    if m["A"] <= 0:
        raise ConfigError(f"model.A must be > 0, got {m['A']}")
    if m["mode"] not in (COLLECTIVE, FULL_MODE):
        raise ConfigError(f"model.mode must be collective or full")
    run = sections["run"]
    if run["t_end"] < 0:
        raise ConfigError("run.t_end must be >= 0")
    if run["n_samples"] < 2:
        raise ConfigError("run.n_samples must be >= 2")
    dis = sections["disorder"]
    if dis["w"] < 0:
        raise ConfigError("disorder.w must be >= 0")
    if dis["n_configs"] < 1:
        raise ConfigError("disorder.n_configs must be >= 1")
    return RunConfig(command=command, sections=sections, seed=seed)


def load_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc


def _echo(cfg: RunConfig) -> dict:
    return {"command": cfg.command, "seed": cfg.seed, "config": cfg.sections}


def _model_spec(cfg: RunConfig, r=None, alpha=None):
    m = cfg["model"]
    res = SqueezedReservoir(r=m["r"] if r is None else r,
                            alpha=m["alpha"] if alpha is None else alpha)
    if m["mode"] == COLLECTIVE:
        return ModelSpec(mode=COLLECTIVE, N=m["N"], reservoir=res,
                         delta=m["delta"], A=m["A"])
    geom = WaveguideGeometry.for_collective_rate(A=m["A"])
    pl = cfg["placement"]
    placement = (ideal_placement(m["N"], geom) if pl["z"] is None
                 else Placement(z=np.asarray(pl["z"], dtype=float)))
    if placement.N != m["N"]:
        raise ConfigError("placement.z length does not match model.N")
    cs = build_couplings(geom, placement)
    return ModelSpec(mode=FULL_MODE, N=m["N"], reservoir=res,
                     delta=m["delta"], A=m["A"], couplings=cs)


def _initial_state(cfg: RunConfig, spec: ModelSpec, m_override=None):
    m = cfg["run"]["initial_m"] if m_override is None else m_override
    if m is None:
        m = -spec.N / 2
    rho = dicke_state(spec.N, float(m))
    if spec.mode == FULL_MODE:
        rho = embed_symmetric(rho, spec.N)
    return rho


def _run_evolve(cfg: RunConfig):
    run = cfg["run"]
    series = run["series"] or [{}]
    t = np.linspace(0.0, float(run["t_end"]), run["n_samples"])
    cols, units, data = ["t"], ["1/A"], [t]
    for k, over in enumerate(series):
        if not isinstance(over, dict):
            raise ConfigError("run.series entries must be mappings")
        unknown = set(over) - {"label", "r", "alpha", "initial_m"}
        if unknown:
            raise ConfigError(f"unknown series keys {sorted(unknown)}")
        spec = _model_spec(cfg, r=over.get("r"), alpha=over.get("alpha"))
        rho0 = _initial_state(cfg, spec, over.get("initial_m"))
        traj = evolve(spec, rho0, t[-1], t_eval=t)
        label = over.get("label", f"series{k}" if len(series) > 1 else "inv_xi")
        cols.append(f"inv_xi[{label}]" if label != "inv_xi" else label)
        units.append("dimensionless")
        data.append(traj.inv_xi())
    table = ResultTable(name="trajectory", columns=cols, units=units,
                        rows=np.column_stack(data), metadata=_echo(cfg))
    return {"trajectory": table}


def _run_steady(cfg: RunConfig):
    m = cfg["model"]
    spec = _model_spec(cfg)
    if spec.mode == COLLECTIVE:
        rho = steady_state_analytic(m["N"], spec.reservoir, A=m["A"],
                                    delta=m["delta"])
        ops = collective_ops(m["N"])
    else:
        rho = steady_state_numeric(spec)
        ops = full_ops(m["N"])
    rep = squeezing_report(rho, ops, m["N"])
    row = [m["N"], m["r"], 1.0 / rep.xi_R_sq, rep.xi_R_sq, rep.theta_min,
           float(np.linalg.norm(rep.mean_spin))]
    table = ResultTable(
        name="steady",
        columns=["N", "r", "inv_xi", "xi_sq", "theta_min", "mean_spin_len"],
        units=["count", "dimensionless", "dimensionless", "dimensionless",
               "rad", "hbar"],
        rows=[row], metadata=_echo(cfg))
    return {"steady": table}


def _run_qfunc(cfg: RunConfig):
    q = cfg["qfunc"]
    spec = _model_spec(cfg)
    if spec.mode != COLLECTIVE:
        raise ConfigError("qfunc requires model.mode = collective")
    rho0 = _initial_state(cfg, spec)
    times = [float(t) for t in q["times"]]
    if any(t < 0 for t in times) or times != sorted(times):
        raise ConfigError("qfunc.times must be sorted and nonnegative")
    traj = evolve(spec, rho0, times[-1] if times[-1] > 0 else 0.0,
                  t_eval=np.array(times) if times[-1] > 0 else np.array([0.0]),
                  compute_reports=True)
    ops = collective_ops(spec.N)
    out = {}
    for k, t in enumerate(times):
        st = traj.states[k if times[-1] > 0 else 0]
        grid = husimi_q(st, n_theta=q["n_theta"], n_phi=q["n_phi"])
        tt, pp = np.meshgrid(grid.theta, grid.phi, indexing="ij")
        sphere = ResultTable(
            name=f"qsphere_t{k}",
            columns=["theta", "phi", "Q"],
            units=["rad", "rad", "1/sr"],
            rows=np.column_stack([tt.ravel(), pp.ravel(),
                                  grid.values.ravel()]),
            metadata={**_echo(cfg), "t": t})
        out[f"qsphere_t{k}"] = sphere
        rep = traj.reports[k if times[-1] > 0 else 0]
        if rep is None:
            rep = squeezing_report(st, ops, spec.N)
        planar = project_q_perp(grid, rep, n_grid=q["planar_grid"])
        uu, vv = np.meshgrid(planar.u, planar.v, indexing="ij")
        out[f"qperp_t{k}"] = ResultTable(
            name=f"qperp_t{k}",
            columns=["u", "v", "Q"],
            units=["dimensionless", "dimensionless", "1/sr"],
            rows=np.column_stack([uu.ravel(), vv.ravel(),
                                  planar.values.ravel()]),
            metadata={**_echo(cfg), "t": t})
    return out


def _run_sweep_r(cfg: RunConfig):
    m, sw = cfg["model"], cfg["sweep"]
    if sw["r_min"] < 0 or sw["r_max"] <= sw["r_min"] or sw["r_step"] <= 0:
        raise ConfigError("sweep needs 0 <= r_min < r_max and r_step > 0")
    grid = np.arange(sw["r_min"], sw["r_max"] + 1e-12, sw["r_step"])
    pts, window = sweep_r(m["N"], grid, m["alpha"], m["delta"], m["A"])
    meta = _echo(cfg)
    if window is not None:
        meta["squeezing_window"] = [float(window[0]), float(window[1])]
    table = ResultTable(name="sweep_r", columns=["r", "inv_xi"],
                        units=["dimensionless", "dimensionless"],
                        rows=pts, metadata=meta)
    return {"sweep_r": table}


def _run_scaling(cfg: RunConfig):
    m, sc = cfg["model"], cfg["scaling"]
    if sc["N_min"] < 2 or sc["N_max"] < sc["N_min"] or sc["N_step"] < 1:
        raise ConfigError("scaling needs 2 <= N_min <= N_max and N_step >= 1")
    N_values = range(sc["N_min"], sc["N_max"] + 1, sc["N_step"])
    table, xi_fit, ropt_fit = scaling_study(N_values, m["alpha"], m["delta"],
                                            m["A"])
    scaling = ResultTable(
        name="scaling",
        columns=["N", "r_opt", "inv_xi_max", "xi_min"],
        units=["count", "dimensionless", "dimensionless", "dimensionless"],
        rows=table, metadata=_echo(cfg))
    fits = ResultTable(
        name="fits",
        columns=["xi_prefactor", "xi_exponent", "xi_residual_rms",
                 "ropt_slope", "ropt_intercept", "ropt_residual_rms"],
        units=["dimensionless"] * 6,
        rows=[[xi_fit.param_a, xi_fit.param_b, xi_fit.residual_rms,
               ropt_fit.param_a, ropt_fit.param_b, ropt_fit.residual_rms]],
        metadata=_echo(cfg))
    return {"scaling": scaling, "fits": fits}


def _steady_sweep_table(cfg, geom, base, res, w_values, n_configs):
    m = cfg["model"]
    rows = []
    for w in w_values:
        spec = DisorderSpec(w=float(w), n_configs=n_configs,
                            seed=cfg.seed, base_placement=base)
        ens = disorder_ensemble(spec, geom, res, delta=m["delta"],
                                steady=True)
        rows.append([w, ens.mean[0], ens.std[0], ens.n_failed])
    return ResultTable(
        name="disorder_steady",
        columns=["w", "mean_inv_xi", "std_inv_xi", "n_failed"],
        units=["pi*zeta", "dimensionless", "dimensionless", "count"],
        rows=rows, metadata=_echo(cfg))


def _run_disorder(cfg: RunConfig):
    m, dis = cfg["model"], cfg["disorder"]
    geom = WaveguideGeometry.for_collective_rate(A=m["A"])
    base = ideal_placement(m["N"], geom)
    res = SqueezedReservoir(r=m["r"], alpha=m["alpha"])
    if dis["steady"]:
        w_values = dis["w_values"] or [dis["w"]]
        return {"disorder_steady": _steady_sweep_table(
            cfg, geom, base, res, w_values, dis["n_configs"])}
    out = {}
    t = np.linspace(0.0, float(dis["t_end"]), dis["n_samples"])
    ideal = ideal_reference(m["N"], res, m["delta"], m["A"], t)
    w_values = dis["w_values"] or [dis["w"]]
    for k, w in enumerate(w_values):
        spec = DisorderSpec(w=float(w), n_configs=dis["n_configs"],
                            seed=cfg.seed, base_placement=base)
        ens = disorder_ensemble(spec, geom, res, delta=m["delta"], t_grid=t)
        meta = {**_echo(cfg), "w": float(w), "n_failed": ens.n_failed}
        key = ("disorder_trajectory" if dis["w_values"] is None
               else f"disorder_trajectory_w{k}")
        out[key] = ResultTable(
            name=key,
            columns=["t", "mean_inv_xi", "std_inv_xi", "ideal_inv_xi"],
            units=["1/A", "dimensionless", "dimensionless", "dimensionless"],
            rows=np.column_stack([t, ens.mean, ens.std, ideal]),
            metadata=meta)
    if dis["steady_w_values"]:
        n_steady = dis["n_configs_steady"] or dis["n_configs"]
        out["disorder_steady"] = _steady_sweep_table(
            cfg, geom, base, res, dis["steady_w_values"], n_steady)
    return out


_RUNNERS = {
    "evolve": _run_evolve,
    "steady": _run_steady,
    "qfunc": _run_qfunc,
    "sweep-r": _run_sweep_r,
    "scaling": _run_scaling,
    "disorder": _run_disorder,
}


def run(cfg: RunConfig, out_dir, fmt: str = "csv") -> list:
    """Execute a validated config and write one file per result table.
    Returns the written paths."""
    out_dir = Path(out_dir)
    tables = _RUNNERS[cfg.command](cfg)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        prefix = cfg["output"]["prefix"]
        paths = []
        for key, table in tables.items():
            path = out_dir / f"{prefix}_{key}.{fmt}"
            write_table(table, path, fmt)
            paths.append(path)
    except OSError as exc:
        raise IOError(f"cannot write outputs to {out_dir}: {exc}") from exc
    return paths


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgss",
        description="Dissipative spin-squeezing simulator for "
                    "waveguide-coupled emitters in a squeezed reservoir.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None,
                       help="YAML run configuration")
        p.add_argument("--out", type=Path, default=Path("out"))
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--r", type=float, default=None)
        p.add_argument("--w", type=float, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_config(args.config) if args.config else {}
        if args.N is not None:
            doc.setdefault("model", {})["N"] = args.N
        if args.r is not None:
            doc.setdefault("model", {})["r"] = args.r
        if args.w is not None:
            doc.setdefault("disorder", {})["w"] = args.w
        if args.seed is not None:
            doc["seed"] = args.seed
        cfg = parse_config(doc, command=args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    t0 = time.perf_counter()
    try:
        paths = run(cfg, args.out, fmt=args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except IOError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    elapsed = time.perf_counter() - t0
    for p in paths:
        print(p)
    print(f"done in {elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
