"""Physical resource accounting for the concatenated Steane construction.

Counts are kept as Python ints or Fractions so that the recursion X_k = A^k X_0 is
exact at any level; floats appear only when a count feeds a power model.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

from attrs import field, frozen

from .errors import ConsistencyError, InvalidArgument, OutOfRegime, ResourceLimit

GATE_ORDER = ("cnot", "single", "identity", "measurement")

# Rows and columns in GATE_ORDER. Column j lists the physical gates inside one
# level-1 logical gate of type j.
_A = (
    (135, 64, 64, 0),
    (56, 35, 28, 0),
    (72, 36, 43, 0),
    (56, 28, 28, 7),
)

DEFAULT_K_CAP = 8
# Level up to which every exact count is checked against the closed form.
CLOSED_FORM_CHECK_MAX_K = 6


def _exact(x) -> int | Fraction:
    if isinstance(x, bool):
        raise InvalidArgument("counts must be numbers")
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def _count(instance, attribute, value):
    if value < 0:
        raise InvalidArgument(f"{attribute.name} must be non-negative")


@frozen
class GateCensus:
    """Gate counts by type. Entries may be exact or float averages."""

    cnot: int | Fraction | float = field(default=0, validator=_count)
    single: int | Fraction | float = field(default=0, validator=_count)
    identity: int | Fraction | float = field(default=0, validator=_count)
    measurement: int | Fraction | float = field(default=0, validator=_count)

    @classmethod
    def from_tuple(cls, xs) -> GateCensus:
        return cls(*xs)

    def as_tuple(self) -> tuple:
        return (self.cnot, self.single, self.identity, self.measurement)

    def as_floats(self) -> tuple[float, float, float, float]:
        return tuple(float(x) for x in self.as_tuple())

    @property
    def total(self):
        return sum(self.as_tuple())

    @property
    def weighted_activity(self):
        """2 cNOT + single + identity: the gate weight that drives dynamic power."""
        return 2 * self.cnot + self.single + self.identity


@frozen
class ScalingFactors:
    t: float
    u: float
    v: float
    w: float


def breakdown_matrix() -> tuple[tuple[int, ...], ...]:
    return _A


def _matvec(m, x):
    return tuple(sum(m[i][j] * x[j] for j in range(4)) for i in range(4))


def _check_k(k: int, cap: int | None = None) -> None:
    if int(k) != k or k < 0:
        raise InvalidArgument(f"level must be a non-negative integer, got {k}")
    if cap is not None and k > cap:
        raise ResourceLimit(f"level {k} exceeds the cap {cap}")


def matrix_power_counts(x0: GateCensus, k: int) -> tuple:
    x = tuple(_exact(v) for v in x0.as_tuple())
    for _ in range(k):
        x = _matvec(_A, x)
    return x


def closed_form_counts(x0: GateCensus, k: int) -> tuple:
    """Eigen-decomposed form with the 199**k and 7**k modes written out."""
    c, s, i, m = (Fraction(_exact(v)) for v in x0.as_tuple())
    big = Fraction(199) ** k * (2 * c + i + s)
    small = Fraction(7) ** k
    out = (
        big / 3 + small / 3 * (c - i - s),
        Fraction(7, 48) * big + small / 48 * (-14 * c - 7 * i + 41 * s),
        Fraction(3, 16) * big + small / 16 * (-6 * c + 13 * i - 3 * s),
        Fraction(7, 48) * big + small / 48 * (-14 * c - 7 * i + 48 * m - 7 * s),
    )
    return tuple(v.numerator if v.denominator == 1 else v for v in out)


def physical_gate_counts(x0: GateCensus, k: int, k_cap: int = DEFAULT_K_CAP) -> GateCensus:
    """Physical gates needed for the logical census x0 at level k, A^k x0 exactly.

    Up to level 6 the result is cross-checked against the closed form and any
    disagreement raises ConsistencyError.
    """
    _check_k(k, k_cap)
    x = matrix_power_counts(x0, k)
    if k <= CLOSED_FORM_CHECK_MAX_K:
        cf = closed_form_counts(x0, k)
        if tuple(Fraction(v) for v in x) != tuple(Fraction(v) for v in cf):
            raise ConsistencyError(f"closed form disagrees with A^k at k={k}: {x} vs {cf}")
    return GateCensus(*x)


_LEADING = (Fraction(1, 3), Fraction(7, 48), Fraction(3, 16), Fraction(7, 48))


def parallel_physical_gates(par0: GateCensus, k: int, mode: str = "exact") -> GateCensus:
    """Average physical gates active per physical timestep at level k.

    `exact` is A^k par0 / 3^k. `leading` keeps only the 199**k mode, which scales
    2 cnot + identity + single by (199/3)**k.
    """
    _check_k(k)
    if mode == "exact":
        x = matrix_power_counts(par0, k)
        return GateCensus(*(Fraction(v) / 3**k for v in x))
    if mode == "leading":
        g = Fraction(_exact(par0.weighted_activity)) * Fraction(199, 3) ** k
        return GateCensus(*(c * g for c in _LEADING))
    raise InvalidArgument(f"unknown mode {mode!r}")


@frozen
class PhysicalQubits:
    count: int
    unencoded: bool = False


def physical_qubits(q_l: int, k: int) -> PhysicalQubits:
    """(112/199) 199^k Q_L physical qubits for k >= 1; Q_L itself, flagged, at k = 0."""
    if q_l < 1:
        raise InvalidArgument("need at least one logical qubit")
    _check_k(k)
    if k == 0:
        return PhysicalQubits(int(q_l), unencoded=True)
    return PhysicalQubits(112 * 199 ** (k - 1) * int(q_l))


def physical_qubits_exact(q_l, k: int) -> Fraction:
    """Unrounded (112/199) 199^k Q_L, valid as a formula for every k >= 0."""
    _check_k(k)
    return Fraction(112, 199) * 199**k * Fraction(_exact(q_l))


def scaling_factors(k: int) -> ScalingFactors:
    _check_k(k)
    r = (199 / 3) ** k
    return ScalingFactors(t=112 / 199 * 199.0**k, u=7 / 48 * r, v=r / 3, w=7 / 48 * r)


def logical_timestep(tau_p: float, k: int) -> float:
    _check_k(k)
    return 3**k * tau_p


class AncillaSchedule(NamedTuple):
    timesteps: int
    overlap: float


def ancilla_timesteps(k: int) -> AncillaSchedule:
    """Physical timesteps an ancilla block stays alive, 4 * 3^k - 3, and its ratio to 3^k."""
    _check_k(k)
    if k == 0:
        raise InvalidArgument("there are no ancillae at level 0")
    n = 4 * 3**k - 3
    return AncillaSchedule(n, n / 3**k)


class RejectionOverhead(NamedTuple):
    mean_extra: float
    reservoir_min: int


def rejection_overhead(p_reject: float, q_l0: float, p_l_target: float) -> RejectionOverhead:
    """Mean extra ancilla preparations p/(1-p) and the smallest spare reservoir M.

    M is the least integer with (q_l0 p)^(M+1) < p_l_target.
    """
    if not 0 <= p_reject < 1:
        raise InvalidArgument("rejection probability must lie in [0, 1)")
    if not 0 < p_l_target < 1:
        raise InvalidArgument("target must lie in (0, 1)")
    x = q_l0 * p_reject
    if x >= 1:
        raise OutOfRegime("q_l0 * p must stay below 1 for the expansion to hold")
    if p_reject == 0:
        return RejectionOverhead(0.0, 0)
    ratio = math.log(p_l_target) / math.log(x)
    # The boundary is strict; snap values that are integers up to rounding.
    if abs(ratio - round(ratio)) < 1e-9:
        ratio = float(round(ratio))
    return RejectionOverhead(p_reject / (1 - p_reject), max(0, math.floor(ratio)))
