"""Cryostat and electronics power model.

A machine is a stack of temperature stages joined by cables. Attenuators on the
stages fix the thermal photon number seen by the qubits, and every watt of heat
is priced at its Carnot cost.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from attrs import evolve, field, frozen, validators

from . import accounting
from .constants import DEFAULT_OMEGA0, HBAR, ROOM_TEMPERATURE
from .errors import Infeasible, InvalidArgument
from .noise import bose_einstein, chain_noise
from .workloads import Workload

# --- cable materials -------------------------------------------------------

# log10 of stainless-steel conductivity (W/K/m) as a polynomial in log10(T), valid 4-300 K.
SS_FIT = (-1.4087, 1.3982, 0.2543, -0.6260, 0.2334, 0.4256, -0.4658, 0.1650, -0.0199)
SS_FIT_MIN_T = 4.0

# Metallic cross-section of a ULT-23 coax: 0.2 mm inner conductor plus the
# 0.66-0.86 mm outer shell.
COAX_AREA = math.pi * (0.1e-3) ** 2 + math.pi / 4 * ((0.86e-3) ** 2 - (0.66e-3) ** 2)
# Kapton around one NbTi stripline; its conduction dominates the superconductor's.
STRIPLINE_AREA = 1.3e-9
KAPTON_LOW = (4.6e-3, 0.56)  # below 4 K, extended down to 0 K
KAPTON_HIGH = (2.996e-3, 0.9794)  # 4 K and up
KAPTON_SWITCH_T = 4.0
# Below this temperature the composite cable is a superconducting stripline.
CABLE_SWITCH_T = 10.0

CABLE_MODELS = ("composite", "coax", "stripline")


def lambda_ss(T: float) -> float:
    """Stainless-steel conductivity; linear through the origin below 4 K."""
    if T < SS_FIT_MIN_T:
        return lambda_ss(SS_FIT_MIN_T) * T / SS_FIT_MIN_T
    x = math.log10(T)
    return 10 ** sum(a * x**i for i, a in enumerate(SS_FIT))


def lambda_kapton(T: float) -> float:
    c, e = KAPTON_LOW if T < KAPTON_SWITCH_T else KAPTON_HIGH
    return c * T**e


@lru_cache(maxsize=None)
def _ss_integral(T: float) -> float:
    """Integral of lambda_ss from 0 to T."""
    from scipy.integrate import quad

    lam4 = lambda_ss(SS_FIT_MIN_T)
    if T <= SS_FIT_MIN_T:
        return lam4 * T * T / (2 * SS_FIT_MIN_T)
    val, _ = quad(lambda_ss, SS_FIT_MIN_T, T, epsabs=0.0, epsrel=1e-12, limit=200)
    return lam4 * SS_FIT_MIN_T / 2 + val


def _kapton_integral(T: float) -> float:
    c0, e0 = KAPTON_LOW
    if T <= KAPTON_SWITCH_T:
        return c0 * T ** (e0 + 1) / (e0 + 1)
    c1, e1 = KAPTON_HIGH
    low = c0 * KAPTON_SWITCH_T ** (e0 + 1) / (e0 + 1)
    return low + c1 * (T ** (e1 + 1) - KAPTON_SWITCH_T ** (e1 + 1)) / (e1 + 1)


def cable_primitive(T: float, model: str = "composite") -> float:
    """Integral of A(T) lambda(T) from 0 to T in W m (divide by length for a heat flow)."""
    if T < 0:
        raise InvalidArgument("temperature must be >= 0")
    if model == "coax":
        return COAX_AREA * _ss_integral(float(T))
    if model == "stripline":
        return STRIPLINE_AREA * _kapton_integral(T)
    if model == "composite":
        if T <= CABLE_SWITCH_T:
            return STRIPLINE_AREA * _kapton_integral(T)
        return STRIPLINE_AREA * _kapton_integral(CABLE_SWITCH_T) + COAX_AREA * (
            _ss_integral(float(T)) - _ss_integral(CABLE_SWITCH_T)
        )
    raise InvalidArgument(f"unknown cable model {model!r}")


# --- profile and stages ----------------------------------------------------


@frozen
class HardwareProfile:
    """Qubit physics and wiring of one machine.

    Args:
        gamma_sp: qubit-waveguide coupling (1/s); its inverse is roughly the lifetime.
        omega0: qubit angular frequency.
        tau_1qb: single-qubit gate duration.
        tau_timestep: physical timestep, the duration of the slowest gate (cNOT).
        tau_meas: measurement duration.
        q_gen_per_qubit: heat from signal generation and (de)multiplexing per physical qubit.
        q_amp_per_qubit: heat from readout amplification per physical qubit.
        qubits_per_xy_cable: physical qubits sharing one drive line.
        cable_length: length of every inter-stage cable segment.
        efficiency_exponent: 1 for Carnot, 2 for the squared-efficiency variant.
        hot_temperature: where heat is finally rejected.
        n_stages: number of temperature stages K.
        cable_model: conduction model for inter-stage cables.
        noise_boundary_temperature: if set, the thermal noise entering the top of the
            attenuator chain is taken at this temperature instead of T_K.
        charge_stage_below_top: also charge stage K-1 for conduction and attenuator
            heat. The default formula leaves that stage out.
    """

    gamma_sp: float = field(default=1e3, validator=validators.gt(0))
    omega0: float = field(default=DEFAULT_OMEGA0, validator=validators.gt(0))
    tau_1qb: float = field(default=25e-9, validator=validators.gt(0))
    tau_timestep: float = field(default=100e-9, validator=validators.gt(0))
    tau_meas: float = field(default=100e-9, validator=validators.gt(0))
    q_gen_per_qubit: float = field(default=5e-3, validator=validators.ge(0))
    q_amp_per_qubit: float = field(default=50e-6, validator=validators.ge(0))
    qubits_per_xy_cable: float = field(default=25, validator=validators.gt(0))
    cable_length: float = field(default=0.2, validator=validators.gt(0))
    efficiency_exponent: int = field(default=1, validator=validators.in_((1, 2)))
    hot_temperature: float = field(default=ROOM_TEMPERATURE, validator=validators.gt(0))
    n_stages: int = field(default=5, validator=validators.ge(2))
    cable_model: str = field(default="composite", validator=validators.in_(CABLE_MODELS))
    noise_boundary_temperature: float | None = None
    charge_stage_below_top: bool = False

    def with_electronics_scale(self, eps: float) -> HardwareProfile:
        """Scale both electronics loads by eps relative to 5 mW and 50 uW."""
        return evolve(self, q_gen_per_qubit=eps * 5e-3, q_amp_per_qubit=eps * 50e-6)


DEFAULT_PROFILE = HardwareProfile()


def _nondecreasing(instance, attribute, value):
    if len(value) < 2:
        raise InvalidArgument("a stack needs at least two stages")
    if any(t <= 0 for t in value):
        raise InvalidArgument("stage temperatures must be positive")
    if any(b < a for a, b in zip(value, value[1:])):
        raise InvalidArgument("stage temperatures must increase upward")


@frozen
class StageStack:
    """Cryostat stages from the qubits (index 0) up to signal generation (index K-1).

    `attenuations[i]` sits on stage i. Temperatures only need to be non-decreasing,
    so degenerate isothermal stacks can be expressed.
    """

    temperatures: tuple[float, ...] = field(converter=tuple, validator=_nondecreasing)
    attenuations: tuple[float, ...] = field(converter=tuple)
    t_amp: float
    boundary_override: float | None = None

    def __attrs_post_init__(self):
        if len(self.attenuations) != len(self.temperatures) - 1:
            raise InvalidArgument("need exactly K-1 attenuations")
        if any(a < 1 for a in self.attenuations):
            raise InvalidArgument("attenuations must be >= 1")

    @property
    def K(self) -> int:
        return len(self.temperatures)

    @property
    def total_attenuation(self) -> float:
        return math.prod(self.attenuations)

    def cumulative(self) -> tuple[float, ...]:
        """A~_i = A_1 ... A_i; P_g A~_i is the drive power entering stage i's attenuator."""
        out, acc = [], 1.0
        for a in self.attenuations:
            acc *= a
            out.append(acc)
        return tuple(out)


def amplifier_temperature(T1: float, TK: float) -> float:
    return min(max(4.0, T1), TK)


def geometric_temperatures(T1: float, TK: float, K: int) -> tuple[float, ...]:
    temps = [T1 * (TK / T1) ** (i / (K - 1)) for i in range(K)]
    temps[0], temps[-1] = T1, TK
    return tuple(temps)


def stage_layout(
    T1: float, TK: float, K: int, A_total: float, boundary_override: float | None = None
) -> StageStack:
    """Log-spaced stage temperatures with the same attenuation on every stage."""
    if not 0 < T1 < TK:
        raise InvalidArgument("need 0 < T1 < TK")
    if K < 2:
        raise InvalidArgument("need K >= 2")
    if A_total < 1:
        raise InvalidArgument("total attenuation must be >= 1")
    y = A_total ** (1 / (K - 1))
    return StageStack(
        geometric_temperatures(T1, TK, K), (y,) * (K - 1), amplifier_temperature(T1, TK), boundary_override
    )


# --- costs -----------------------------------------------------------------


def carnot_cost(heat: float, T: float, profile: HardwareProfile = DEFAULT_PROFILE) -> float:
    """Electrical power to remove `heat` watts at temperature T."""
    if T <= 0:
        raise InvalidArgument("temperature must be positive")
    if T > profile.hot_temperature:
        raise InvalidArgument("stage cannot be hotter than the rejection temperature")
    return heat * ((profile.hot_temperature - T) / T) ** profile.efficiency_exponent


def conduction(
    T_cold: float, T_hot: float, profile: HardwareProfile = DEFAULT_PROFILE, model: str | None = None
) -> float:
    """Heat carried by one cable between two temperatures (Fourier law)."""
    if T_cold < 0 or T_hot <= T_cold:
        raise InvalidArgument("need 0 <= T_cold < T_hot")
    model = model or profile.cable_model
    return (cable_primitive(T_hot, model) - cable_primitive(T_cold, model)) / profile.cable_length


def gate_drive_power(profile: HardwareProfile = DEFAULT_PROFILE, theta: float = math.pi, tau: float | None = None) -> float:
    """Power of a resonant drive rotating the qubit by theta in time tau."""
    tau = profile.tau_1qb if tau is None else tau
    if tau <= 0:
        raise InvalidArgument("tau must be positive")
    omega = theta / tau
    return HBAR * profile.omega0 * omega**2 / (4 * profile.gamma_sp)


def target_photon_number(
    M_target: float, N_L: float, profile: HardwareProfile, eta_thr: float, k: int
) -> float:
    """Photons at the qubits for which N_L p_L equals M_target at level k."""
    if k < 0 or N_L < 1:
        raise InvalidArgument("need k >= 0 and N_L >= 1")
    if M_target <= 0:
        raise Infeasible("target must be positive", reason="negative-photon-target")
    gt = profile.gamma_sp * profile.tau_timestep
    n = 0.5 * (4 * eta_thr / gt * (M_target / (eta_thr * N_L)) ** (2.0**-k) - 1)
    if n < 0:
        raise Infeasible(f"no attenuation reaches the target at k={k}", reason="negative-photon-target")
    return n


def attenuation_polynomial(
    T1: float, TK: float, K: int, n_target: float, omega0: float, boundary_override: float | None = None
) -> list[float]:
    """Coefficients (highest degree first) of the polynomial in y = A^(1/(K-1))."""
    temps = geometric_temperatures(T1, TK, K)
    n = [bose_einstein(T, omega0) for T in temps]
    top = bose_einstein(boundary_override, omega0) if boundary_override is not None else n[-1]
    coeffs = [n_target - n[0]]
    for p in range(K - 2, 0, -1):
        coeffs.append(n[K - 2 - p] - n[K - 1 - p])
    coeffs.append(n[K - 2] - top)
    return coeffs


_ROOT_RTOL = 1e-9


def solve_attenuation(
    T1: float,
    TK: float,
    K: int,
    n_target: float,
    omega0: float = DEFAULT_OMEGA0,
    boundary_override: float | None = None,
) -> list[float]:
    """Total attenuations A >= 1 that bring the chain noise exactly to n_target.

    Companion-matrix roots get a few Newton steps. A root survives only if it
    reproduces the target through the chain recursion to 1e-9 relative.
    """
    if K < 2 or K > 8:
        raise InvalidArgument("K must lie in [2, 8]")
    if n_target < 0:
        raise InvalidArgument("photon target must be non-negative")
    if T1 == TK and boundary_override is None:
        return [1.0]
    if not 0 < T1 < TK:
        raise InvalidArgument("need 0 < T1 <= TK")
    floor = bose_einstein(T1, omega0)
    if n_target <= floor:
        raise Infeasible("target at or below the qubit-stage thermal floor", reason="target-below-floor")
    coeffs = np.array(attenuation_polynomial(T1, TK, K, n_target, omega0, boundary_override))
    deriv = np.polyder(coeffs)
    temps = geometric_temperatures(T1, TK, K)

    def residual(y: float) -> float:
        stack = StageStack(temps, (y,) * (K - 1), amplifier_temperature(T1, TK), boundary_override)
        return chain_noise(stack, omega0) - n_target

    found: list[float] = []
    for r in np.roots(coeffs):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r)):
            continue
        y = float(r.real)
        for _ in range(8):
            d = np.polyval(deriv, y)
            if d == 0:
                break
            step = np.polyval(coeffs, y) / d
            y = float(y - step)
            if abs(step) <= 1e-15 * abs(y):
                break
        if y < 1:
            if y > 1 - 1e-12:
                y = 1.0
            else:
                continue
        if abs(residual(y)) > _ROOT_RTOL * n_target:
            continue
        if any(abs(y - f) <= 1e-9 * f for f in found):
            continue
        found.append(y)
    return sorted(float(y) ** (K - 1) for y in found)


@frozen
class PowerCoefficients:
    """Static power per physical qubit (a) and dynamic power per active gate (b)."""

    a: float
    b_1qb: float
    b_cnot: float
    b_meas: float = 0.0


def power_coefficients(stack: StageStack, profile: HardwareProfile = DEFAULT_PROFILE) -> PowerCoefficients:
    """Coefficients a, b_1qb, b_cnot for a stage stack (b_meas is 0 in this model)."""
    T = stack.temperatures
    K = len(T)
    share = 1 / profile.qubits_per_xy_cable

    def c(heat: float, temp: float) -> float:
        return carnot_cost(heat, temp, profile)

    def q(i: int, j: int) -> float:
        return conduction(T[i], T[j], profile) if T[j] > T[i] else 0.0

    # Intermediate stages charged: 1 < i < K-1 in 1-based numbering, optionally K-1 too.
    last = K - 1 if profile.charge_stage_below_top else K - 2
    mid = range(1, last)

    a = c(profile.q_gen_per_qubit - share * q(K - 2, K - 1), T[-1])
    for i in mid:
        a += c(share * (q(i, i + 1) - q(i - 1, i)), T[i])
    a += c(profile.q_amp_per_qubit, stack.t_amp)
    a += c(share * q(0, 1), T[0])

    acc = stack.cumulative()
    att = c(acc[0] - 1, T[0])
    for i in mid:
        att += c(acc[i] - acc[i - 1], T[i])
    p_g = gate_drive_power(profile)
    b_cnot = p_g * att
    return PowerCoefficients(a=a, b_1qb=profile.tau_1qb / profile.tau_timestep * b_cnot, b_cnot=b_cnot)


def total_power(coeffs: PowerCoefficients, workload: Workload, k: int) -> float:
    """Total power of a workload run at level k.

    Static: physical qubits times a. Dynamic: b-weighted physical gate activity,
    using the leading-order growth factors for k >= 1 and logical counts at k = 0.
    """
    par = workload.par
    ncnot, n1, nid, nmeas = par.as_floats()
    if k == 0:
        return workload.q_l * coeffs.a + coeffs.b_1qb * n1 + coeffs.b_cnot * ncnot + coeffs.b_meas * nmeas
    s = accounting.scaling_factors(k)
    dyn = coeffs.b_1qb * s.u + coeffs.b_cnot * s.v + coeffs.b_meas * s.w
    return workload.q_l * s.t * coeffs.a + dyn * (n1 + nid + 2 * ncnot)


def single_gate_power(T_q: float, A: float, profile: HardwareProfile = DEFAULT_PROFILE) -> float:
    """Cost of removing the heat A P_g dissipated by one attenuator at T_q."""
    return carnot_cost(A * gate_drive_power(profile), T_q, profile)


def attenuation_db(A: float) -> float:
    return 10 * math.log10(A)
