"""Long-range crosstalk that grows with the number of qubits.

Couplings decay as delta / r**z on a 1-D chain or a square lattice. The summed
coupling felt by the central qubit, Delta(N), is available as an exact lattice sum
or as its large-N closed form, and maps onto an effective fault probability.
"""

from __future__ import annotations

import math

import numpy as np
from attrs import field, frozen, validators
from scipy.integrate import quad

from . import ftcore
from .constants import DEFAULT_D
from .errors import InvalidArgument, OutOfRegime, ResourceLimit

EPSILON = math.exp(1 + 1 / (2 * math.e)) * math.sqrt(2)

# Terms allowed in an exact sum before we insist on the asymptotic form.
MAX_EXACT_TERMS = 10**9
_CHUNK = 1 << 20


@frozen
class CrosstalkParams:
    delta: float = field(validator=validators.ge(0))
    a: float = field(default=1.0, validator=validators.gt(0))
    z: float = field(default=0.5, validator=validators.ge(0))
    d: int = field(default=1, validator=validators.in_((1, 2)))
    t0: float = field(default=100e-9, validator=validators.gt(0))
    Q_L: int = field(default=1, validator=validators.ge(1))
    D: float = DEFAULT_D

    def n_qubits(self, k: int) -> float:
        return self.Q_L * self.D**k


def _fsum_chunks(chunks) -> float:
    # fsum is exactly rounded, so the result does not depend on chunking or order.
    parts: list[float] = []
    for c in chunks:
        parts.extend(c.tolist())
    return math.fsum(parts)


def _sum_1d(m: int, z: float):
    for start in range(m, 0, -_CHUNK):
        j = np.arange(start, max(start - _CHUNK, 0), -1, dtype=np.float64)
        yield j ** (-z)


def _sum_2d(M: int, z: float):
    j = np.arange(-M, M + 1, dtype=np.float64)
    rows = max(1, _CHUNK // (2 * M + 1))
    for i0 in range(-M, M + 1, rows):
        i = np.arange(i0, min(i0 + rows, M + 1), dtype=np.float64)
        r2 = i[:, None] ** 2 + j[None, :] ** 2
        r2 = r2[r2 > 0]
        yield r2 ** (-z / 2)


def square_half_width(n_qubits: float) -> int:
    """Half-width M of the (2M+1) x (2M+1) window used for the 2-D sum."""
    return int(math.floor(math.sqrt(n_qubits) / 2))


def delta_exact(params: CrosstalkParams, n_qubits: float) -> float:
    """Summed coupling on the central qubit of a finite chain or square lattice."""
    if n_qubits < 2:
        raise InvalidArgument("need at least two qubits")
    z, pref = params.z, params.delta / params.a**params.z
    if params.d == 1:
        m = int(n_qubits // 2)
        if m > MAX_EXACT_TERMS:
            raise ResourceLimit(f"{m} terms exceed the exact-sum budget; use delta_asymptotic")
        return 2 * pref * _fsum_chunks(_sum_1d(m, z))
    M = square_half_width(n_qubits)
    if (2 * M + 1) ** 2 > MAX_EXACT_TERMS:
        raise ResourceLimit("2-D window exceeds the exact-sum budget; use delta_asymptotic")
    return pref * _fsum_chunks(_sum_2d(M, z))


def cz_coefficient(z: float) -> float:
    """(2 / (2 - z)) * integral of sin(t)**(z - 2) over [pi/4, pi/2]."""
    if not 0 <= z < 2:
        raise InvalidArgument("C_z is defined for 0 <= z < 2")
    val, _ = quad(lambda t: math.sin(t) ** (z - 2), math.pi / 4, math.pi / 2, epsabs=1e-13, epsrel=1e-13)
    return 2 / (2 - z) * val


def delta0(params: CrosstalkParams) -> float:
    """Prefactor of the large-N law Delta = Delta0 * D ** (k (1 - z/d))."""
    z, d = params.z, params.d
    if z >= d:
        raise OutOfRegime("the asymptotic law needs z < d; the z = d log case is not modelled")
    if d == 1:
        return params.delta * params.Q_L ** (1 - z) * 2**z / (params.a**z * (1 - z))
    return params.delta * 2**z * cz_coefficient(z) * params.Q_L ** (1 - z / 2) / params.a**z


def delta_asymptotic(params: CrosstalkParams, k: int) -> float:
    return delta0(params) * params.D ** (k * (1 - params.z / params.d))


def eta_from_delta(delta_val: float, t0: float) -> float:
    """Effective fault probability epsilon * sqrt(Delta t0)."""
    if delta_val < 0 or t0 < 0:
        raise InvalidArgument("inputs must be non-negative")
    return EPSILON * math.sqrt(delta_val * t0)


def delta_k(delta0_t0: float, eta_thr: float, k: int) -> float:
    """Crosstalk after k levels: (thr^2/eps^2) * (eps^2 x / thr^2) ** (2**k), x = t0 Delta."""
    if delta0_t0 < 0:
        raise InvalidArgument("t0 * Delta must be non-negative")
    return ftcore.logical_error(delta0_t0, (eta_thr / EPSILON) ** 2, k)
