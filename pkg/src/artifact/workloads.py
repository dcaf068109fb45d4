"""Logical-level workload descriptors."""

from __future__ import annotations

import math

from attrs import field, frozen, validators

from .accounting import GateCensus
from .constants import DEFAULT_D
from .errors import InvalidArgument


@frozen
class Workload:
    """An algorithm seen through its logical size.

    Args:
        q_l: logical qubits.
        d_l: logical depth in timesteps.
        n_l: total logical gates, which sets the failure metric.
        par: average logical gates active per timestep, which sets the dynamic power.
        name: free-form label.
    """

    q_l: int = field(validator=validators.ge(1))
    d_l: int = field(validator=validators.ge(1))
    n_l: float = field(validator=validators.ge(0))
    par: GateCensus = field(factory=GateCensus)
    name: str = ""


def qft_workload(q_l: int) -> Workload:
    """Compressed QFT with controlled phases counted as cNOTs.

    Depth 2(Q_L - 2) + 1, about Q_L/2 gates per step, and Q_L^2 gates in total.
    """
    if q_l < 3:
        raise InvalidArgument("the compressed QFT layout needs at least 3 qubits")
    return Workload(
        q_l=q_l,
        d_l=2 * (q_l - 2) + 1,
        n_l=q_l * q_l,
        par=GateCensus(cnot=q_l / 2),
        name=f"qft-{q_l}",
    )


def memory_workload(q_l: int, d_l: int) -> Workload:
    """Every logical qubit idles through every step."""
    if q_l < 1 or d_l < 1:
        raise InvalidArgument("need q_l, d_l >= 1")
    return Workload(q_l=q_l, d_l=d_l, n_l=q_l * d_l, par=GateCensus(identity=q_l), name="memory")


def nisq_depth_range(n: int) -> tuple[int, int]:
    """(fully compressed, uncompressed) depth of an n-qubit QFT without Hadamards."""
    if n < 3:
        raise InvalidArgument("need at least 3 qubits")
    return 2 * (n - 2) + 1, n * (n - 1) // 2


@frozen
class NisqCensus:
    per_step: GateCensus
    totals: GateCensus
    depth: int


def nisq_qft_census(n: int, depth: int) -> NisqCensus:
    """Physical-level QFT spread uniformly over `depth` steps.

    The n(n-1)/2 two-qubit gates are fixed; idle qubits fill the rest of each step.
    """
    d_min, d_max = nisq_depth_range(n)
    if not d_min <= depth <= d_max:
        raise InvalidArgument(f"depth must lie in [{d_min}, {d_max}], got {depth}")
    n_cnot = n * (n - 1) // 2
    cnot_avg = n_cnot / depth
    per_step = GateCensus(cnot=cnot_avg, identity=n - 2 * cnot_avg)
    totals = GateCensus(cnot=n_cnot, identity=n * depth - n * (n - 1))
    return NisqCensus(per_step, totals, depth)


@frozen
class PhotonBudgetScenario:
    """Energy-limited QFT: every gate is a pi pulse funded from a per-logical-gate budget."""

    n: int
    n_l: float
    p_l_target: float
    eta_thr: float
    D: float

    def eta(self, k: int, n_photons: float) -> float:
        """(pi^2/16) D^k / n for a budget of n photons per logical gate."""
        return math.pi**2 / 16 * self.D**k / n_photons


def ch3_energy_scenario(
    n: int, p_target_success: float = 2 / 3, eta_thr: float = 1e-4, D: float = DEFAULT_D
) -> PhotonBudgetScenario:
    if n < 2:
        raise InvalidArgument("need at least 2 qubits")
    if not 0 < p_target_success <= 1:
        raise InvalidArgument("success probability must lie in (0, 1]")
    n_l = float(n) ** 2
    return PhotonBudgetScenario(n, n_l, (1 - p_target_success) / n_l, eta_thr, D)
