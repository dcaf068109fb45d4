"""Error arithmetic for concatenated codes.

Logical error rates and the best concatenation level, including the case where the
physical error rate itself grows with the level.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

from attrs import field, frozen, validators

from .constants import DEFAULT_ETA_THR
from .errors import InvalidArgument

if TYPE_CHECKING:
    from .noise import NoiseSchedule

# 2**k overflows a double just past k = 1023; anything near that is meaningless anyway.
MAX_LEVEL = 64

# Two log-probabilities closer than this are treated as a tie (relative 1e-12 in p).
_TIE_TOL = 1e-12


def _in_open_unit(instance, attribute, value):
    if not 0 < value < 1:
        raise InvalidArgument(f"{attribute.name} must lie in (0, 1), got {value}")


@frozen
class ThresholdModel:
    """Threshold of the concatenated construction and the range of levels to scan."""

    eta_thr: float = field(default=DEFAULT_ETA_THR, validator=_in_open_unit)
    k_range_max: int = field(default=20, validator=validators.ge(0))


@frozen
class KmaxResult:
    """Outcome of a concatenation-level scan.

    `p_of_k` holds `(k, eta_k, p_l_k)` triples with `p_l_k` clamped to 1.
    `local_minima` lists every level whose clamped log-error is strictly lower than
    each existing neighbour, so boundary levels may appear.
    """

    k_max: int
    p_min: float
    p_of_k: tuple[tuple[int, float, float], ...]
    local_minima: tuple[int, ...]
    log_p_of_k: tuple[float, ...] = ()
    k_tilde: float | None = None
    k_st: float | None = None

    def local_minimum_from(self, k_min: int) -> int:
        """Lowest-error level among `k >= k_min` (lowest k on ties)."""
        candidates = [(lp, k) for k, lp in enumerate(self.log_p_of_k) if k >= k_min]
        if not candidates:
            raise InvalidArgument(f"no scanned level at or above {k_min}")
        best = min(lp for lp, _ in candidates)
        return min(k for lp, k in candidates if lp <= best + _TIE_TOL)


def _check_level(k: int) -> None:
    if int(k) != k or k < 0:
        raise InvalidArgument(f"concatenation level must be a non-negative integer, got {k}")
    if k > MAX_LEVEL:
        raise InvalidArgument(f"concatenation level {k} exceeds the overflow guard {MAX_LEVEL}")


def log_logical_error(eta: float, eta_thr: float, k: int) -> float:
    """Natural log of the level-k logical error; `-inf` when eta is 0."""
    if eta < 0 or eta_thr <= 0:
        raise InvalidArgument("eta must be >= 0 and eta_thr > 0")
    _check_level(k)
    if eta == 0:
        return -math.inf
    if k == 0:
        return math.log(eta)
    return math.log(eta_thr) + (2.0**k) * math.log(eta / eta_thr)


def logical_error(eta: float, eta_thr: float, k: int) -> float:
    """Logical error per gate after k levels, eta_thr * (eta / eta_thr) ** (2 ** k).

    Evaluated in log-space so that deep levels underflow cleanly to 0 instead of
    raising. Above threshold the value can exceed 1 (or overflow to inf); callers
    that need a probability should clamp.
    """
    if k == 0:
        _check_level(k)
        if eta < 0 or eta_thr <= 0:
            raise InvalidArgument("eta must be >= 0 and eta_thr > 0")
        return float(eta)
    lp = log_logical_error(eta, eta_thr, k)
    if lp > 709.0:
        return math.inf
    return math.exp(lp)


def algorithm_failure(n_logical_gates: float, p_l: float) -> float:
    """First-order union bound on the failure of an algorithm, clamped to 1."""
    if n_logical_gates < 0:
        raise InvalidArgument("gate count must be non-negative")
    if not 0 <= p_l <= 1:
        raise InvalidArgument(f"p_l must be a probability, got {p_l}")
    if n_logical_gates == 0:
        return 0.0
    return min(1.0, n_logical_gates * p_l)


def _local_minima(log_p: list[float]) -> tuple[int, ...]:
    out = []
    n = len(log_p)
    for k, lp in enumerate(log_p):
        left = k == 0 or lp < log_p[k - 1] - _TIE_TOL
        right = k == n - 1 or lp < log_p[k + 1] - _TIE_TOL
        if left and right:
            out.append(k)
    return tuple(out)


def scan_levels(eta_of_k, eta_thr: float, k_range_max: int) -> KmaxResult:
    """Scan k = 0..k_range_max for an arbitrary callable eta(k)."""
    rows = []
    log_p = []
    for k in range(k_range_max + 1):
        eta = float(eta_of_k(k))
        if eta >= 1:
            lp = 0.0
        else:
            lp = min(0.0, log_logical_error(eta, eta_thr, k))
        log_p.append(lp)
        rows.append((k, eta, math.exp(lp)))
    best = min(log_p)
    k_max = min(k for k, lp in enumerate(log_p) if lp <= best + _TIE_TOL)
    return KmaxResult(
        k_max=k_max,
        p_min=rows[k_max][2],
        p_of_k=tuple(rows),
        local_minima=_local_minima(log_p),
        log_p_of_k=tuple(log_p),
    )


def kmax_scan(schedule: NoiseSchedule, thr: ThresholdModel | None = None) -> KmaxResult:
    """Brute-force search for the level that minimises the logical error."""
    from .noise import eval_schedule

    thr = thr or ThresholdModel()
    return scan_levels(lambda k: eval_schedule(schedule, k), thr.eta_thr, thr.k_range_max)


def _check_power_law(eta0: float, D: float, beta: float) -> None:
    if eta0 <= 0:
        raise InvalidArgument("eta0 must be positive")
    if D <= 1 or beta <= 0:
        raise InvalidArgument(
            "power-law analytics need D > 1 and beta > 0; scan a constant schedule instead"
        )


def k_tilde(eta0: float, eta_thr: float, D: float, beta: float) -> float:
    """Level at which the power-law noise reaches threshold after one more level."""
    _check_power_law(eta0, D, beta)
    c = beta * math.log(D)
    return -(math.log(eta0 / eta_thr) + c) / c


def k_stationary(eta0: float, eta_thr: float, D: float, beta: float) -> float:
    """Stationary point of the continuous extension of log p_L(k)."""
    _check_power_law(eta0, D, beta)
    return -1 / math.log(2) - math.log(eta0 / eta_thr) / (beta * math.log(D))


def kmax_powerlaw(
    eta0: float, eta_thr: float, D: float, beta: float, k_range_max: int = 20
) -> KmaxResult:
    """Closed-form optimal level for eta(k) = eta0 * D ** (beta * k).

    Also runs the scan so the per-level table is available; the analytic level is
    what gets reported.
    """
    kt = k_tilde(eta0, eta_thr, D, beta)
    # An integral k_tilde is an exact tie between two levels; rounding noise must not
    # push it to the upper one.
    kt_snapped = round(kt) if abs(kt - round(kt)) < 1e-9 else kt
    k_max = max(0, math.ceil(kt_snapped) - 1)
    scanned = scan_levels(lambda k: eta0 * D ** (beta * k), eta_thr, max(k_range_max, k_max))
    return KmaxResult(
        k_max=k_max,
        p_min=scanned.p_of_k[k_max][2],
        p_of_k=scanned.p_of_k,
        local_minima=scanned.local_minima,
        log_p_of_k=scanned.log_p_of_k,
        k_tilde=kt,
        k_st=k_stationary(eta0, eta_thr, D, beta),
    )


def concat_useful_bound(eta_thr: float, D: float, beta: float) -> float:
    """Largest eta0 for which one level of concatenation still helps: eta_thr * D**(-2 beta)."""
    if D <= 1:
        raise InvalidArgument("D must exceed 1")
    return eta_thr * D ** (-2 * beta)
