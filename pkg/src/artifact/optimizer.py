"""Minimum power (or resource) under an accuracy constraint.

Every engine is a brute-force grid search in which the constraint is eliminated
analytically, so each grid cell either yields exact-constraint configurations or a
reason-coded infeasible row. Results never depend on evaluation order.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from attrs import field, frozen

from . import accounting, ftcore, hardware, noise
from .constants import DEFAULT_OMEGA0
from .errors import ConsistencyError, Infeasible, InvalidArgument
from .hardware import HardwareProfile
from .workloads import Workload, nisq_depth_range, nisq_qft_census

OK = "ok"
TARGET_BELOW_FLOOR = "target-below-floor"
NO_ROOT = "no-root"
NEGATIVE_PHOTON_TARGET = "negative-photon-target"
UNATTAINABLE = "unattainable"

GRID_POINTS = {"coarse": 20, "default": 60, "fine": 120}


def log_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    if n == 1:
        return (float(lo),)
    pts = np.logspace(math.log10(lo), math.log10(hi), n)
    pts[0], pts[-1] = lo, hi
    return tuple(float(x) for x in pts)


def _sorted_unique(xs) -> tuple:
    out = tuple(sorted(set(xs)))
    if not out:
        raise InvalidArgument("grid axes must be nonempty")
    return out


def _sorted_unique_or_none(xs):
    return None if xs is None else _sorted_unique(xs)


@frozen
class GridSpec:
    """Axes of the brute-force search. Every axis is stored sorted and deduplicated,
    so permuting the input never changes a result."""

    t1_points: tuple[float, ...] = field(converter=_sorted_unique)
    tk_points: tuple[float, ...] = field(converter=_sorted_unique)
    k_values: tuple[int, ...] = field(default=tuple(range(7)), converter=_sorted_unique)
    depth_points: tuple[int, ...] | None = field(default=None, converter=_sorted_unique_or_none)
    resource_points: tuple[float, ...] | None = field(default=None, converter=_sorted_unique_or_none)

    @classmethod
    def default(cls, scale: str = "default", t_min: float = 0.01, t_max: float = 300.0, **kw) -> GridSpec:
        if scale not in GRID_POINTS:
            raise InvalidArgument(f"unknown grid scale {scale!r}")
        pts = log_grid(t_min, t_max, GRID_POINTS[scale])
        return cls(pts, pts, **kw)

    def refined(self) -> GridSpec:
        """Insert the log-midpoint between neighbours on both temperature axes."""

        def mid(xs):
            out = list(xs)
            out += [math.sqrt(a * b) for a, b in zip(xs, xs[1:])]
            return out

        return GridSpec(mid(self.t1_points), mid(self.tk_points), self.k_values, self.depth_points, self.resource_points)


@frozen
class Evaluation:
    """One evaluated grid row; `reason` is "ok" for a feasible configuration."""

    point: dict
    power: float
    metric: float
    reason: str = OK

    @property
    def feasible(self) -> bool:
        return self.reason == OK


@frozen
class OptimizationResult:
    """Outcome of a constrained minimization.

    `flatness` is the relative power spread across the alternative roots of the
    argmin cell (0 when there is a single root), a hint that the optimal A is blurred.
    """

    p_min: float
    argmin: dict
    constraint_residual: float
    evaluated: tuple[Evaluation, ...]
    feasible: bool
    flatness: float = 0.0

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.evaluated:
            out[e.reason] = out.get(e.reason, 0) + 1
        return dict(sorted(out.items()))


def _map(fn, items: Sequence, threads: int | None):
    if threads is not None and threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _key(e: Evaluation, order: tuple[str, ...]) -> tuple:
    # NaN (no attenuation for an infeasible cell) would poison tuple ordering.
    return tuple(-math.inf if isinstance(v, float) and math.isnan(v) else v for v in (e.point[n] for n in order))


def _select(rows: list[Evaluation], order: tuple[str, ...], residual_fn, cell_of=None) -> OptimizationResult:
    """Deterministic reduction: least power, ties broken lexicographically on `order`."""
    rows = sorted(rows, key=lambda e: _key(e, order))
    good = [e for e in rows if e.feasible]
    if not good:
        return OptimizationResult(math.inf, {}, math.nan, tuple(rows), False)
    best = min(good, key=lambda e: (e.power, *_key(e, order)))
    flat = 0.0
    if cell_of is not None:
        same = [e.power for e in good if cell_of(e) == cell_of(best)]
        flat = (max(same) - min(same)) / min(same) if min(same) > 0 else 0.0
    return OptimizationResult(best.power, dict(best.point), residual_fn(best), tuple(rows), True, flat)


# --- fault-tolerant full stack ---------------------------------------------


def ft_metric(stack: hardware.StageStack, profile: HardwareProfile, workload: Workload, eta_thr: float, k: int) -> float:
    """N_L p_L with the physical fault probability set by the chain's photon number."""
    n_tot = noise.chain_noise(stack, profile.omega0)
    eta = noise.pauli_strength(n_tot, profile.gamma_sp, profile.tau_timestep)
    return workload.n_l * ftcore.logical_error(eta, eta_thr, k)


def _ft_cell(profile, workload, M_target, eta_thr, k, t1, tk) -> list[Evaluation]:
    base = {"k": k, "t1_k": t1, "tk_k": tk}
    try:
        n_t = hardware.target_photon_number(M_target, workload.n_l, profile, eta_thr, k)
        roots = hardware.solve_attenuation(
            t1, tk, profile.n_stages, n_t, profile.omega0, profile.noise_boundary_temperature
        )
    except Infeasible as exc:
        return [Evaluation({**base, "a_total": math.nan}, math.inf, math.nan, exc.reason)]
    if not roots:
        return [Evaluation({**base, "a_total": math.nan}, math.inf, math.nan, NO_ROOT)]
    out = []
    for A in roots:
        stack = hardware.stage_layout(t1, tk, profile.n_stages, A, profile.noise_boundary_temperature)
        coeffs = hardware.power_coefficients(stack, profile)
        power = hardware.total_power(coeffs, workload, k)
        metric = ft_metric(stack, profile, workload, eta_thr, k)
        out.append(Evaluation({**base, "a_total": A}, power, metric))
    return out


def minimize_power_ft(
    profile: HardwareProfile,
    workload: Workload,
    M_target: float,
    grid: GridSpec | None = None,
    eta_thr: float = ftcore.ThresholdModel().eta_thr,
    threads: int | None = 1,
) -> OptimizationResult:
    """Least total power of a fault-tolerant run meeting N_L p_L = M_target.

    Searches (k, T_1, T_K) with T_K > T_1; the total attenuation solves the
    photon-number polynomial, and every physical root is a candidate.
    """
    if not 0 < M_target < 1:
        raise InvalidArgument("M_target must lie in (0, 1)")
    grid = grid or GridSpec.default()
    cells = [
        (k, t1, tk) for k in grid.k_values for t1 in grid.t1_points for tk in grid.tk_points if tk > t1
    ]
    rows = [r for rs in _map(lambda c: _ft_cell(profile, workload, M_target, eta_thr, *c), cells, threads) for r in rs]

    def residual(e: Evaluation) -> float:
        p = e.point
        stack = hardware.stage_layout(p["t1_k"], p["tk_k"], profile.n_stages, p["a_total"], profile.noise_boundary_temperature)
        return abs(ft_metric(stack, profile, workload, eta_thr, p["k"]) / M_target - 1)

    return _select(
        rows, ("k", "t1_k", "tk_k", "a_total"), residual, cell_of=lambda e: (e.point["k"], e.point["t1_k"], e.point["tk_k"])
    )


# --- single-qubit gate -----------------------------------------------------


def single_gate_metric(T_q: float, A: float, profile: HardwareProfile, kind: str) -> float:
    n_tot = noise.two_stage_noise(T_q, profile.hot_temperature, A, profile.omega0)
    return noise.infidelity(n_tot, profile.gamma_sp, profile.tau_1qb, kind)


def single_gate_attenuation(T_q: float, M_target: float, profile: HardwareProfile, kind: str) -> float:
    """A such that a pi pulse behind one attenuator at T_q has infidelity M_target."""
    X, Y = noise.INFIDELITY_COEFFS[kind]
    n_target = (M_target / (profile.gamma_sp * profile.tau_1qb) - X) / Y
    if n_target < 0:
        raise Infeasible("target below the spontaneous-emission floor", reason=NEGATIVE_PHOTON_TARGET)
    nq = noise.bose_einstein(T_q, profile.omega0)
    n_hot = noise.bose_einstein(profile.hot_temperature, profile.omega0)
    if n_target <= nq:
        raise Infeasible("qubit stage too hot for the target", reason=TARGET_BELOW_FLOOR)
    A = (n_hot - nq) / (n_target - nq)
    if A < 1:
        raise Infeasible("target met without attenuation", reason=NO_ROOT)
    return A


def minimize_power_single_gate(
    profile: HardwareProfile,
    M_target: float,
    metric_kind: str = "worst",
    grid: GridSpec | None = None,
) -> OptimizationResult:
    """Least ((T_hot - T_Q)/T_Q) A P_g over T_Q at infidelity exactly M_target."""
    if metric_kind not in noise.INFIDELITY_COEFFS:
        raise InvalidArgument(f"unknown metric {metric_kind!r}")
    grid = grid or GridSpec.default()
    rows = []
    for tq in grid.t1_points:
        if tq >= profile.hot_temperature:
            rows.append(Evaluation({"tq_k": tq, "a_total": math.nan}, math.inf, math.nan, TARGET_BELOW_FLOOR))
            continue
        try:
            A = single_gate_attenuation(tq, M_target, profile, metric_kind)
        except Infeasible as exc:
            rows.append(Evaluation({"tq_k": tq, "a_total": math.nan}, math.inf, math.nan, exc.reason))
            continue
        rows.append(
            Evaluation(
                {"tq_k": tq, "a_total": A},
                hardware.single_gate_power(tq, A, profile),
                single_gate_metric(tq, A, profile, metric_kind),
            )
        )

    def residual(e):
        return abs(single_gate_metric(e.point["tq_k"], e.point["a_total"], profile, metric_kind) / M_target - 1)

    return _select(rows, ("tq_k", "a_total"), residual)


# --- NISQ QFT depth --------------------------------------------------------


def nisq_metric(n: int, depth: int, T_q: float, A: float, profile: HardwareProfile, identity_noise: bool = True) -> float:
    """Worst-case infidelity bound: 2 IF per two-qubit gate plus IF per identity."""
    census = nisq_qft_census(n, depth).totals
    n_tot = noise.two_stage_noise(T_q, profile.hot_temperature, A, profile.omega0)
    inf = noise.infidelity(n_tot, profile.gamma_sp, profile.tau_1qb, "worst")
    return float(census.cnot) * 2 * inf + (float(census.identity) * inf if identity_noise else 0.0)


def _nisq_attenuation(n, depth, T_q, M_target, profile, identity_noise) -> float:
    census = nisq_qft_census(n, depth).totals
    weight = 2 * float(census.cnot) + (float(census.identity) if identity_noise else 0.0)
    n_target = M_target / (weight * profile.gamma_sp * profile.tau_1qb) - 1
    if n_target < 0:
        raise Infeasible("target below the spontaneous-emission floor", reason=NEGATIVE_PHOTON_TARGET)
    nq = noise.bose_einstein(T_q, profile.omega0)
    if n_target <= nq:
        raise Infeasible("qubit stage too hot for the target", reason=TARGET_BELOW_FLOOR)
    A = (noise.bose_einstein(profile.hot_temperature, profile.omega0) - nq) / (n_target - nq)
    if A < 1:
        raise Infeasible("target met without attenuation", reason=NO_ROOT)
    return A


def nisq_power(n: int, depth: int, T_q: float, A: float, profile: HardwareProfile) -> float:
    """Average parallel two-qubit gates times carnot * A * 2 P_g."""
    par = n * (n - 1) / 2 / depth
    return par * hardware.carnot_cost(2 * A * hardware.gate_drive_power(profile), T_q, profile)


def minimize_power_nisq(
    profile: HardwareProfile,
    n: int,
    M_target: float = 1 / 3,
    grid: GridSpec | None = None,
    identity_noise: bool = True,
) -> OptimizationResult:
    """Least attenuator power of an n-qubit QFT over (T_Q, A, depth).

    Depths default to every value from full compression to no compression.
    """
    grid = grid or GridSpec.default()
    d_min, d_max = nisq_depth_range(n)
    depths = grid.depth_points or tuple(range(d_min, d_max + 1))
    rows = []
    for d in depths:
        for tq in grid.t1_points:
            pt = {"depth": d, "tq_k": tq}
            if tq >= profile.hot_temperature:
                rows.append(Evaluation({**pt, "a_total": math.nan}, math.inf, math.nan, TARGET_BELOW_FLOOR))
                continue
            try:
                A = _nisq_attenuation(n, d, tq, M_target, profile, identity_noise)
            except Infeasible as exc:
                rows.append(Evaluation({**pt, "a_total": math.nan}, math.inf, math.nan, exc.reason))
                continue
            rows.append(
                Evaluation(
                    {**pt, "a_total": A},
                    nisq_power(n, d, tq, A, profile),
                    nisq_metric(n, d, tq, A, profile, identity_noise),
                )
            )

    def residual(e):
        p = e.point
        return abs(nisq_metric(n, p["depth"], p["tq_k"], p["a_total"], profile, identity_noise) / M_target - 1)

    return _select(rows, ("depth", "tq_k", "a_total"), residual)


def nisq_depth_profile(result: OptimizationResult) -> dict[int, Evaluation | None]:
    """Best feasible row per depth (None where a depth is infeasible everywhere)."""
    best: dict[int, Evaluation | None] = {}
    for e in result.evaluated:
        d = e.point["depth"]
        best.setdefault(d, None)
        if e.feasible and (best[d] is None or e.power < best[d].power):
            best[d] = e
    return best


# --- minimum resource ------------------------------------------------------


def minimize_resource(
    schedule_family: Callable[[float], noise.NoiseSchedule],
    N_L: float,
    p_target: float,
    resource_points: Iterable[float],
    k_values: Iterable[int] = range(7),
    eta_thr: float = ftcore.ThresholdModel().eta_thr,
    refine: bool = True,
) -> OptimizationResult:
    """Smallest resource R with min_k N_L p_L(eta(k; R)) <= 1 - p_target.

    `schedule_family(R)` must get less noisy as R grows. After the grid scan the
    boundary between the last failing and first passing grid point is bisected,
    so R_min is not quantized to the grid.
    """
    if not 0 <= p_target < 1:
        raise InvalidArgument("p_target must lie in [0, 1)")
    budget = 1 - p_target
    ks = _sorted_unique(k_values)
    grid = _sorted_unique(resource_points)

    def best_k(R: float) -> tuple[float, int]:
        sched = schedule_family(R)
        vals = [(N_L * ftcore.logical_error(sched.eta(k), eta_thr, k), k) for k in ks]
        return min(vals)

    rows = []
    first = None
    for i, R in enumerate(grid):
        sched = schedule_family(R)
        for k in ks:
            m = N_L * ftcore.logical_error(sched.eta(k), eta_thr, k)
            rows.append(Evaluation({"resource": R, "k": k}, R, m, OK if m <= budget else UNATTAINABLE))
        if first is None and best_k(R)[0] <= budget:
            first = i
    if first is None:
        return OptimizationResult(math.inf, {}, math.nan, tuple(rows), False)

    R = grid[first]
    if refine and first > 0:
        from scipy.optimize import brentq

        def f(r):
            return math.log(best_k(r)[0]) - math.log(budget)

        R = brentq(f, grid[first - 1], grid[first], xtol=1e-300, rtol=1e-14, maxiter=200)
        # Land on the passing side of the boundary.
        while best_k(R)[0] > budget:
            R = math.nextafter(R, math.inf)
    metric, k_opt = best_k(R)
    return OptimizationResult(R, {"resource": R, "k": k_opt}, abs(metric / budget - 1), tuple(rows), True)


def photon_budget_family(scenario) -> Callable[[float], noise.NoiseSchedule]:
    """Photon budget n per logical gate -> eta(k) = (pi^2/16) D^k / n."""

    def family(n_photons: float):
        return noise.PowerLawSchedule(noise.eta_from_photons(n_photons), scenario.D, 1.0)

    return family


def total_pulse_energy(scenario, n_photons: float, omega0: float = DEFAULT_OMEGA0) -> float:
    """Total pulse energy N_L hbar w n of the whole computation."""
    from .constants import HBAR

    return scenario.n_l * HBAR * omega0 * n_photons


# --- P_min curves ----------------------------------------------------------


@frozen
class PminCurve:
    targets: tuple[float, ...]
    p_min: tuple[float, ...]
    argmins: tuple[dict, ...]

    def max_accuracy(self, budget: float) -> float | None:
        """Smallest tabulated target whose minimum power fits in `budget`."""
        for m, p in zip(self.targets, self.p_min):
            if p <= budget:
                return m
        return None


def pmin_curve(minimizer: Callable[[float], OptimizationResult], targets: Sequence[float]) -> PminCurve:
    """Tabulate P_min(M_target); the table reads both as min power and max accuracy."""
    ts = tuple(targets)
    if list(ts) != sorted(ts):
        raise InvalidArgument("targets must be sorted ascending")
    results = [minimizer(t) for t in ts]
    ps = tuple(r.p_min for r in results)
    for a, b in zip(ps, ps[1:]):
        if math.isfinite(a) and b > a:
            raise ConsistencyError("P_min increased with a looser target")
    return PminCurve(ts, ps, tuple(r.argmin for r in results))


def physical_qubit_count(workload: Workload, k: int) -> int:
    return accounting.physical_qubits(workload.q_l, k).count
