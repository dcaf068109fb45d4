"""Command-line scenario runner.

    artifact list
    artifact schemas
    artifact run --config run.cfg --out results/ [--threads N] [--grid-scale coarse|default|fine]

Configs are flat `key = value` files; `#` starts a comment. Physical keys carry
their unit as a suffix (gamma_sp_hz, t_min_k, ...). Nothing here draws random numbers.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from collections.abc import Callable
from pathlib import Path

from attrs import field, frozen

from . import crosstalk, ftcore, hardware, noise, optimizer, workloads
from .errors import ArtifactError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


class ConfigError(ArtifactError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


# --- config ----------------------------------------------------------------


def _bool(s: str) -> bool:
    low = s.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",") if x.strip())


def _opt_float(s: str) -> float | None:
    return None if s.lower() in ("none", "") else float(s)


# config key -> (parser, HardwareProfile field)
PROFILE_KEYS: dict[str, tuple[Callable, str]] = {
    "gamma_sp_hz": (float, "gamma_sp"),
    "omega0_rad_per_s": (float, "omega0"),
    "tau_1qb_s": (float, "tau_1qb"),
    "tau_timestep_s": (float, "tau_timestep"),
    "tau_meas_s": (float, "tau_meas"),
    "q_gen_per_qubit_w": (float, "q_gen_per_qubit"),
    "q_amp_per_qubit_w": (float, "q_amp_per_qubit"),
    "qubits_per_xy_cable": (float, "qubits_per_xy_cable"),
    "cable_length_m": (float, "cable_length"),
    "efficiency_exponent": (int, "efficiency_exponent"),
    "hot_temperature_k": (float, "hot_temperature"),
    "n_stages": (int, "n_stages"),
    "cable_model": (str, "cable_model"),
    "noise_boundary_temperature_k": (_opt_float, "noise_boundary_temperature"),
    "charge_stage_below_top": (_bool, "charge_stage_below_top"),
}

SETTING_KEYS: dict[str, Callable] = {
    "scenario": str,
    "electronics_scale": float,
    "eta_thr": float,
    "m_target": float,
    "m_targets": _floats,
    "metric_kinds": lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
    "q_l": int,
    "n_qubits": int,
    "p_success": float,
    "t_min_k": float,
    "t_max_k": float,
    "t_points": int,
    "k_values": _ints,
    "depths": _ints,
    "q_l_min": float,
    "q_l_max": float,
    "d_l_min": float,
    "d_l_max": float,
    "map_points": int,
    "lifetimes_ms": _floats,
    "electronics_scales": _floats,
    "n_photons_min": float,
    "n_photons_max": float,
    "n_photons_points": int,
    "crosstalk_n": float,
    "crosstalk_delta_rad_per_s": float,
    "kmax_levels": int,
    "identity_noise": _bool,
}


@frozen
class ScenarioConfig:
    scenario: str
    profile: dict = field(factory=dict)
    settings: dict = field(factory=dict)

    def get(self, key: str, default=None):
        return self.settings.get(key, default)

    def hardware_profile(self) -> hardware.HardwareProfile:
        base = hardware.HardwareProfile(**self.profile)
        eps = self.settings.get("electronics_scale")
        return base if eps is None else base.with_electronics_scale(eps)


def parse_config(text: str) -> ScenarioConfig:
    profile: dict = {}
    settings: dict = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ConfigError("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        val_col = len(key_part) + 2 + len(value_part) - len(value_part.lstrip())
        value = value_part.strip()
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno, key_col)
        seen.add(key)
        if key in PROFILE_KEYS:
            conv, name = PROFILE_KEYS[key]
            target = profile
        elif key in SETTING_KEYS:
            conv, name = SETTING_KEYS[key], key
            target = settings
        else:
            raise ConfigError(f"unknown key {key!r}", lineno, key_col)
        try:
            target[name] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno, val_col) from None
    scenario = settings.pop("scenario", None)
    if scenario is None:
        raise ConfigError("missing required key 'scenario'")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    try:
        hardware.HardwareProfile(**profile)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid hardware profile: {exc}") from None
    return ScenarioConfig(scenario, profile, settings)


# --- output ----------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


@frozen
class ScenarioOutput:
    rows: list
    summary: dict
    feasible: bool = True


@frozen
class Scenario:
    name: str
    description: str
    columns: tuple[tuple[str, str], ...]
    run: Callable[[ScenarioConfig, str, int | None], ScenarioOutput]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.columns)


def _grid(cfg: ScenarioConfig, scale: str, points: int | None = None) -> optimizer.GridSpec:
    n = cfg.get("t_points") or points or optimizer.GRID_POINTS[scale]
    pts = optimizer.log_grid(cfg.get("t_min_k", 0.01), cfg.get("t_max_k", 300.0), n)
    return optimizer.GridSpec(pts, pts, cfg.get("k_values", tuple(range(7))), cfg.get("depths"))


def _result_summary(res: optimizer.OptimizationResult) -> dict:
    return {
        "p_min": res.p_min,
        "argmin": res.argmin,
        "constraint_residual": res.constraint_residual,
        "feasible": res.feasible,
        "flatness": res.flatness,
        "feasibility_counts": res.counts(),
    }


def _eta_thr(cfg) -> float:
    return cfg.get("eta_thr", ftcore.ThresholdModel().eta_thr)


def run_single_gate(cfg, scale, threads):
    prof = cfg.hardware_profile()
    grid = _grid(cfg, scale)
    rows = []
    any_ok = False
    for kind in cfg.get("metric_kinds", ("worst", "average")):
        for m in cfg.get("m_targets", (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)):
            r = optimizer.minimize_power_single_gate(prof, m, kind, grid)
            any_ok |= r.feasible
            a = r.argmin.get("a_total", math.nan)
            rows.append(
                [kind, m, r.p_min, r.argmin.get("tq_k", math.nan), a,
                 hardware.attenuation_db(a) if r.feasible else math.nan, r.constraint_residual, r.feasible]
            )
    return ScenarioOutput(rows, {"feasible_targets": sum(r[-1] for r in rows)}, any_ok)


def run_nisq(cfg, scale, threads):
    prof = cfg.hardware_profile()
    n = cfg.get("n_qubits", 30)
    res = optimizer.minimize_power_nisq(prof, n, cfg.get("m_target", 1 / 3), _grid(cfg, scale), cfg.get("identity_noise", True))
    rows = []
    for d, e in sorted(optimizer.nisq_depth_profile(res).items()):
        if e is None:
            rows.append([d, math.inf, math.nan, math.nan, False])
        else:
            rows.append([d, e.power, e.point["tq_k"], e.point["a_total"], True])
    return ScenarioOutput(rows, _result_summary(res), res.feasible)


def run_ft_qft(cfg, scale, threads):
    prof = cfg.hardware_profile()
    wl = workloads.qft_workload(cfg.get("q_l", 2048))
    res = optimizer.minimize_power_ft(prof, wl, cfg.get("m_target", 1 / 3), _grid(cfg, scale), _eta_thr(cfg), threads)
    rows = [
        [e.point["k"], e.point["t1_k"], e.point["tk_k"], e.point["a_total"], e.power, e.metric, e.reason]
        for e in res.evaluated
    ]
    return ScenarioOutput(rows, _result_summary(res), res.feasible)


def _int_log_grid(lo, hi, n) -> list[int]:
    return [int(round(x)) for x in optimizer.log_grid(lo, hi, n)]


def run_memory_map(cfg, scale, threads):
    prof = cfg.hardware_profile()
    n = cfg.get("map_points", 20)
    grid = _grid(cfg, scale, points=max(4, optimizer.GRID_POINTS[scale] // 4))
    rows = []
    feasible = 0
    for q in _int_log_grid(cfg.get("q_l_min", 10), cfg.get("q_l_max", 1e4), n):
        for d in _int_log_grid(cfg.get("d_l_min", 10), cfg.get("d_l_max", 1e6), n):
            res = optimizer.minimize_power_ft(prof, workloads.memory_workload(q, d), cfg.get("m_target", 1 / 3), grid, _eta_thr(cfg), threads)
            feasible += res.feasible
            a = res.argmin
            rows.append([q, d, a.get("k", -1), res.p_min, a.get("t1_k", math.nan), a.get("tk_k", math.nan), a.get("a_total", math.nan), res.feasible])
    return ScenarioOutput(rows, {"cells": len(rows), "feasible_cells": feasible}, feasible > 0)


def run_lifetime_sweep(cfg, scale, threads):
    wl = workloads.qft_workload(cfg.get("q_l", 2048))
    grid = _grid(cfg, scale)
    rows = []
    feasible = 0
    for life in cfg.get("lifetimes_ms", (1.0, 10.0, 100.0)):
        for eps in cfg.get("electronics_scales", (1.0, 1e-2, 1e-4)):
            prof = hardware.HardwareProfile(**{**cfg.profile, "gamma_sp": 1e3 / life}).with_electronics_scale(eps)
            res = optimizer.minimize_power_ft(prof, wl, cfg.get("m_target", 1 / 3), grid, _eta_thr(cfg), threads)
            feasible += res.feasible
            a = res.argmin
            rows.append([life, eps, a.get("k", -1), res.p_min, a.get("t1_k", math.nan), a.get("tk_k", math.nan), a.get("a_total", math.nan), res.feasible])
    return ScenarioOutput(rows, {"runs": len(rows), "feasible_runs": feasible}, feasible > 0)


def run_energy_floor(cfg, scale, threads):
    prof = cfg.hardware_profile()
    sc = workloads.ch3_energy_scenario(cfg.get("n_qubits", 10**5), cfg.get("p_success", 2 / 3), _eta_thr(cfg))
    budget = 1 - cfg.get("p_success", 2 / 3)
    ks = cfg.get("k_values", tuple(range(7)))
    pts = optimizer.log_grid(cfg.get("n_photons_min", 1e6), cfg.get("n_photons_max", 1e14), cfg.get("n_photons_points", 161))
    res = optimizer.minimize_resource(optimizer.photon_budget_family(sc), sc.n_l, cfg.get("p_success", 2 / 3), pts, ks, sc.eta_thr)
    rows = []
    for k in ks:
        # Largest eta meeting N_L p_L = budget at this level, then the photons it takes.
        log_eta = math.log(sc.eta_thr) + (math.log(budget / sc.n_l) - math.log(sc.eta_thr)) / 2.0**k
        eta = math.exp(log_eta)
        n_ph = sc.eta(k, 1.0) / eta
        rows.append([k, eta, n_ph, optimizer.total_pulse_energy(sc, n_ph, prof.omega0)])
    summary = _result_summary(res)
    summary.pop("flatness")
    summary["energy_j"] = optimizer.total_pulse_energy(sc, res.p_min, prof.omega0) if res.feasible else math.inf
    return ScenarioOutput(rows, summary, res.feasible)


CROSSTALK_CASES = ((1, 0.0), (1, 0.25), (1, 0.5), (2, 0.5), (2, 1.0))


def run_crosstalk(cfg, scale, threads):
    n = cfg.get("crosstalk_n", 1e6)
    delta = cfg.get("crosstalk_delta_rad_per_s", 1.0)
    rows = []
    for d, z in CROSSTALK_CASES:
        p = crosstalk.CrosstalkParams(delta=delta, z=z, d=d, Q_L=int(n))
        ex = crosstalk.delta_exact(p, n)
        asym = crosstalk.delta_asymptotic(p, 0)
        rows.append([d, z, n, ex, asym, ex / asym - 1])
    worst = max(abs(r[-1]) for r in rows)
    return ScenarioOutput(rows, {"max_abs_rel_error": worst})


def run_kmax_scan(cfg, scale, threads):
    levels = cfg.get("kmax_levels", 8)
    sched = noise.appendix_fixture(max(levels, 1))
    thr = _eta_thr(cfg)
    rows = []
    for k in range(levels + 1):
        eta = sched.eta(k)
        rows.append([k, eta, ftcore.logical_error(eta, thr, k)])
    res = ftcore.kmax_scan(sched, ftcore.ThresholdModel(thr, levels))
    return ScenarioOutput(
        rows,
        {"k_max": res.k_max, "p_min": res.p_min, "local_minima": list(res.local_minima)},
    )


def _scenario(name, description, columns, run) -> Scenario:
    return Scenario(name, description, tuple(columns), run)


_SCENARIO_LIST = [
    _scenario(
        "single-gate-pmin",
        "minimum cooling power of one pi pulse versus target infidelity",
        [("metric_kind", "worst or average infidelity"), ("m_target", "target infidelity"),
         ("p_min_w", "minimum electrical power (W)"), ("tq_opt_k", "optimal attenuator/qubit temperature (K)"),
         ("a_opt", "optimal attenuation (linear)"), ("a_opt_db", "optimal attenuation (dB)"),
         ("residual", "relative constraint residual at the optimum"), ("feasible", "target reachable on the grid")],
        run_single_gate,
    ),
    _scenario(
        "nisq-qft-depth",
        "unencoded QFT: minimum attenuator power per circuit depth",
        [("depth", "circuit depth in timesteps"), ("p_min_w", "minimum power at this depth (W)"),
         ("tq_opt_k", "optimal qubit temperature (K)"), ("a_opt", "optimal attenuation (linear)"),
         ("feasible", "target reachable at this depth")],
        run_nisq,
    ),
    _scenario(
        "ft-qft-pmin",
        "fault-tolerant QFT: full evaluated power grid over (k, T1, TK, A)",
        [("k", "concatenation level"), ("t1_k", "coldest stage temperature (K)"), ("tk_k", "hottest stage temperature (K)"),
         ("a_total", "total attenuation (linear), empty-valued as nan when infeasible"),
         ("power_w", "total electrical power (W), inf when infeasible"), ("metric", "N_L p_L at this point"),
         ("reason", "ok, target-below-floor, no-root or negative-photon-target")],
        run_ft_qft,
    ),
    _scenario(
        "memory-map",
        "quantum-memory proxy: optimal level and power over a (Q_L, D_L) grid",
        [("q_l", "logical qubits"), ("d_l", "logical depth"), ("k_opt", "optimal level, -1 when infeasible"),
         ("p_min_w", "minimum power (W)"), ("t1_opt_k", "optimal T1 (K)"), ("tk_opt_k", "optimal TK (K)"),
         ("a_opt", "optimal total attenuation"), ("feasible", "any feasible configuration")],
        run_memory_map,
    ),
    _scenario(
        "lifetime-sweep",
        "fault-tolerant QFT minimum power versus qubit lifetime and electronics load",
        [("lifetime_ms", "1/gamma_sp in ms"), ("electronics_scale", "scale on the 5 mW / 50 uW loads"),
         ("k_opt", "optimal level, -1 when infeasible"), ("p_min_w", "minimum power (W)"),
         ("t1_opt_k", "optimal T1 (K)"), ("tk_opt_k", "optimal TK (K)"), ("a_opt", "optimal total attenuation"),
         ("feasible", "any feasible configuration")],
        run_lifetime_sweep,
    ),
    _scenario(
        "ch3-energy",
        "energy-limited QFT: photons per logical gate needed at each level",
        [("k", "concatenation level"), ("eta_required", "largest physical fault probability meeting the target"),
         ("n_photons", "photons per logical gate needed at this level"), ("energy_j", "total pulse energy (J)")],
        run_energy_floor,
    ),
    _scenario(
        "crosstalk-accuracy",
        "exact lattice sums against the large-N crosstalk law",
        [("d", "lattice dimension"), ("z", "coupling decay exponent"), ("n_qubits", "number of qubits"),
         ("delta_exact", "exact summed coupling"), ("delta_asymptotic", "large-N closed form"),
         ("rel_error", "exact / asymptotic - 1")],
        run_crosstalk,
    ),
    _scenario(
        "kmax-scan",
        "logical error per level for the non-monotone example schedule",
        [("k", "concatenation level"), ("eta_k", "physical fault probability at level k"),
         ("p_l_k", "logical error at level k")],
        run_kmax_scan,
    ),
]

SCENARIOS: dict[str, Scenario] = {s.name: s for s in _SCENARIO_LIST}


def list_scenarios() -> str:
    return "\n".join(f"{s.name:20s} {s.description}" for s in _SCENARIO_LIST)


def schemas_markdown() -> str:
    out = ["# CSV schemas", "", "Generated by `artifact schemas`. Numbers use 17 significant digits.", ""]
    for s in _SCENARIO_LIST:
        out += [f"## {s.name}", "", s.description, "", "| column | meaning |", "|---|---|"]
        out += [f"| {c} | {d} |" for c, d in s.columns]
        out.append("")
    return "\n".join(out)


def run_scenario(config: ScenarioConfig, out_dir: Path, threads: int | None = None, grid_scale: str = "default") -> int:
    scen = SCENARIOS[config.scenario]
    result = scen.run(config, grid_scale, threads)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / f"{scen.name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(scen.column_names)
            for row in result.rows:
                w.writerow([fmt(x) for x in row])
        summary = {"scenario": scen.name, "grid_scale": grid_scale, "rows": len(result.rows), "feasible": result.feasible}
        summary.update(result.summary)
        with open(out_dir / "summary.json", "w") as fh:
            json.dump(_json_safe(summary), fh, indent=2, sort_keys=True)
            fh.write("\n")
        (out_dir / "SCHEMAS.md").write_text(schemas_markdown())
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description="Power and accuracy limits of concatenated fault-tolerant computing.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list scenarios")
    sub.add_parser("schemas", help="print CSV schemas as markdown")
    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    run.add_argument("--grid-scale", choices=tuple(optimizer.GRID_POINTS), default="default")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print(list_scenarios())
        return EXIT_OK
    if args.command == "schemas":
        print(schemas_markdown())
        return EXIT_OK
    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run_scenario(cfg, args.out, args.threads, args.grid_scale)


if __name__ == "__main__":
    sys.exit(main())
