"""Physical noise sources.

Thermal photons travel down attenuator chains and set gate infidelities. Noise can
also be limited by pulse energy or change with the concatenation level.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from typing import Protocol

from attrs import field, frozen

from .constants import HBAR, K_B
from .errors import InvalidArgument

# Beyond this the -1 in exp(x) - 1 is lost below double precision anyway.
_BE_ASYMPTOTIC_X = 40.0


def bose_einstein(T: float, omega0: float) -> float:
    """Mean thermal photon number 1 / (exp(hbar w / k_B T) - 1); exactly 0 at T = 0."""
    if T < 0:
        raise InvalidArgument(f"temperature must be >= 0, got {T}")
    if omega0 <= 0:
        raise InvalidArgument("omega0 must be positive")
    if T == 0:
        return 0.0
    x = HBAR * omega0 / (K_B * T)
    if x >= _BE_ASYMPTOTIC_X:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@frozen
class ThermalPoint:
    temperature: float
    frequency: float
    n_be: float


def thermal_point(T: float, omega0: float) -> ThermalPoint:
    return ThermalPoint(T, omega0, bose_einstein(T, omega0))


def two_stage_noise(T_q: float, T_gen: float, A: float, omega0: float) -> float:
    """Photons reaching a qubit behind one attenuator A held at T_q (exact mixing form)."""
    if A < 1:
        raise InvalidArgument(f"attenuation must be >= 1, got {A}")
    return (A - 1) / A * bose_einstein(T_q, omega0) + bose_einstein(T_gen, omega0) / A


class _Stack(Protocol):
    temperatures: Sequence[float]
    attenuations: Sequence[float]
    boundary_override: float | None


def chain_noise(stack: _Stack, omega0: float) -> float:
    """Photons at the coldest stage after propagating down an attenuator chain.

    The top stage contributes its own thermal population, or that of
    `stack.boundary_override` when set.
    """
    temps = list(stack.temperatures)
    atts = list(stack.attenuations)
    if len(temps) < 2:
        raise InvalidArgument("a stage stack needs at least two stages")
    if len(atts) != len(temps) - 1:
        raise InvalidArgument("need one attenuation per stage below the top")
    if any(a < 1 for a in atts):
        raise InvalidArgument("attenuations must be >= 1")
    top = stack.boundary_override if stack.boundary_override is not None else temps[-1]
    n = bose_einstein(top, omega0)
    for T, A in zip(reversed(temps[:-1]), reversed(atts)):
        n = bose_einstein(T, omega0) * (A - 1) / A + n / A
    return n


def pauli_strength(n_tot: float, gamma_sp: float, tau: float) -> float:
    """Pauli error strength (1 + 2 n) gamma tau / 4 of a thermal amplitude-damping map."""
    if min(n_tot, gamma_sp, tau) < 0:
        raise InvalidArgument("inputs must be non-negative")
    return (1 + 2 * n_tot) * gamma_sp * tau / 4


INFIDELITY_COEFFS = {"worst": (1.0, 1.0), "average": (1 / 3, 2 / 3)}


def infidelity(
    n_tot: float, gamma_sp: float, tau: float, kind: str = "worst", qubits: int = 1
) -> float:
    """(X + Y n) gamma tau per qubit involved in the gate."""
    if kind not in INFIDELITY_COEFFS:
        raise InvalidArgument(f"unknown infidelity kind {kind!r}")
    if qubits not in (1, 2):
        raise InvalidArgument("qubits must be 1 or 2")
    if min(n_tot, gamma_sp, tau) < 0:
        raise InvalidArgument("inputs must be non-negative")
    X, Y = INFIDELITY_COEFFS[kind]
    return (X + Y * n_tot) * gamma_sp * tau * qubits


def eta_from_pulse_energy(E: float, omega0: float) -> float:
    """Fault probability of a pi pulse limited by its energy: (pi^2/16) hbar w / E."""
    if E <= 0:
        raise InvalidArgument("pulse energy must be positive")
    return math.pi**2 / 16 * HBAR * omega0 / E


def eta_from_photons(n_photons: float) -> float:
    if n_photons <= 0:
        raise InvalidArgument("photon number must be positive")
    return math.pi**2 / (16 * n_photons)


# ---------------------------------------------------------------------------
# Level-dependent schedules eta(k) = eta0 * f(k)
# ---------------------------------------------------------------------------


class NoiseSchedule(Protocol):
    eta0: float

    def eta(self, k: int) -> float: ...


def _nonneg(instance, attribute, value) -> None:
    if value < 0:
        raise InvalidArgument(f"{attribute.name} must be non-negative")


def _check_k(k: int) -> None:
    if int(k) != k or k < 0:
        raise InvalidArgument(f"level must be a non-negative integer, got {k}")


@frozen
class ConstantSchedule:
    eta0: float = field(validator=_nonneg)

    def eta(self, k: int) -> float:
        _check_k(k)
        return self.eta0


@frozen
class PowerLawSchedule:
    """eta0 * D ** (beta * k)."""

    eta0: float = field(validator=_nonneg)
    D: float = 291
    beta: float = 1.0

    def eta(self, k: int) -> float:
        _check_k(k)
        return self.eta0 * self.D ** (self.beta * k)


@frozen
class TabulatedSchedule:
    """eta0 * f[k] with f given only at integer levels 0..len(f)-1."""

    eta0: float = field(validator=_nonneg)
    multipliers: tuple[float, ...] = field(converter=tuple)

    def __attrs_post_init__(self):
        if not self.multipliers or self.multipliers[0] != 1:
            raise InvalidArgument("a tabulated schedule must start with f(0) = 1")

    def eta(self, k: int) -> float:
        _check_k(k)
        if k >= len(self.multipliers):
            raise InvalidArgument(f"level {k} is outside the table (max {len(self.multipliers) - 1})")
        return self.eta0 * self.multipliers[k]


@frozen
class ResourceSchedule:
    """eta(k) = g(R_total / N(k)): a fixed resource budget shared by N(k) elements."""

    g: Callable[[float], float]
    r_total: float
    n_of_k: Callable[[int], float]

    @property
    def eta0(self) -> float:
        return self.g(self.r_total / self.n_of_k(0))

    def multiplier(self, k: int) -> float:
        return self.eta(k) / self.eta0

    def eta(self, k: int) -> float:
        _check_k(k)
        return self.g(self.r_total / self.n_of_k(k))


def eval_schedule(schedule: NoiseSchedule, k: int) -> float:
    return schedule.eta(k)


def appendix_fixture(k_max: int = 20) -> TabulatedSchedule:
    """Non-monotone example: eta0 = 1e-8, f(0) = 1 and f(k >= 1) = 10 ** (3 + 0.21 k)."""
    mult = [1.0] + [10 ** (3 + 0.21 * k) for k in range(1, k_max + 1)]
    return TabulatedSchedule(1e-8, mult)
