import math
import random
from types import SimpleNamespace

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact import noise
from artifact.constants import DEFAULT_OMEGA0, HBAR, K_B
from artifact.errors import InvalidArgument

mpmath.mp.dps = 40
W0 = DEFAULT_OMEGA0


def be_oracle(T, w=W0):
    x = mpmath.mpf(HBAR) * w / (mpmath.mpf(K_B) * T)
    return float(1 / mpmath.expm1(x))


@given(T=st.floats(1e-3, 1e4))
def test_bose_einstein_matches_high_precision(T):
    assert noise.bose_einstein(T, W0) == pytest.approx(be_oracle(T), rel=1e-12, abs=1e-300)


def test_bose_einstein_edges():
    assert noise.bose_einstein(0.0, W0) == 0.0
    # Classical limit k T / (hbar w) - 1/2.
    T = 1e4
    assert noise.bose_einstein(T, W0) == pytest.approx(K_B * T / (HBAR * W0) - 0.5, rel=1e-9)
    with pytest.raises(InvalidArgument):
        noise.bose_einstein(-1.0, W0)


def chain_oracle(temps, atts, top=None):
    """Closed form: each stage's population weighted by the attenuation below it."""
    n = [mpmath.mpf(be_oracle(T)) if T > 0 else mpmath.mpf(0) for T in temps]
    n_top = mpmath.mpf(be_oracle(top)) if top is not None else n[-1]
    total, below = mpmath.mpf(0), mpmath.mpf(1)
    for i, A in enumerate(atts):
        total += n[i] * (1 - mpmath.mpf(1) / A) / below
        below *= A
    return float(total + n_top / below)


def stack(temps, atts, top=None):
    return SimpleNamespace(temperatures=temps, attenuations=atts, boundary_override=top)


@pytest.mark.parametrize("seed", range(10))
def test_chain_matches_closed_form(seed):
    rng = random.Random(seed)
    K = rng.randint(2, 6)
    temps = sorted(10 ** rng.uniform(-2, 2.4) for _ in range(K))
    atts = [10 ** rng.uniform(0, 3) for _ in range(K - 1)]
    top = rng.choice([None, 300.0])
    got = noise.chain_noise(stack(temps, atts, top), W0)
    assert got == pytest.approx(chain_oracle(temps, atts, top), rel=1e-12)


@given(T=st.floats(0.01, 300), atts=st.lists(st.floats(1, 1e4), min_size=1, max_size=6))
def test_uniform_temperature_is_fixed_point(T, atts):
    temps = [T] * (len(atts) + 1)
    assert noise.chain_noise(stack(temps, atts), W0) == pytest.approx(noise.bose_einstein(T, W0), rel=1e-12)


def test_two_stage_limit_forms():
    nq, nh = noise.bose_einstein(0.02, W0), noise.bose_einstein(300, W0)
    assert noise.two_stage_noise(0.02, 300, 1.0, W0) == pytest.approx(nh, rel=1e-15)
    assert noise.two_stage_noise(0.02, 300, 1e12, W0) == pytest.approx(nq + nh / 1e12, rel=1e-9)


@pytest.mark.parametrize(
    ("kind", "qubits", "expected"),
    [("worst", 1, (1 + 0.5) * 1e3 * 25e-9), ("average", 1, (1 / 3 + 2 / 3 * 0.5) * 1e3 * 25e-9), ("worst", 2, 2 * 1.5 * 25e-6)],
)
def test_infidelity_coefficients(kind, qubits, expected):
    assert noise.infidelity(0.5, 1e3, 25e-9, kind, qubits) == pytest.approx(expected, rel=1e-14)


def test_pauli_strength():
    assert noise.pauli_strength(0, 1e3, 100e-9) == pytest.approx(1e3 * 100e-9 / 4)


def test_pulse_energy_eta():
    E = 1e9 * HBAR * W0
    assert noise.eta_from_pulse_energy(E, W0) == pytest.approx(math.pi**2 / 16 / 1e9, rel=1e-12)
    assert noise.eta_from_photons(1e9) == pytest.approx(math.pi**2 / 16e9)


def test_schedules():
    pl = noise.PowerLawSchedule(1e-8, 291, 0.5)
    assert pl.eta(2) == pytest.approx(1e-8 * 291)
    tab = noise.TabulatedSchedule(1e-8, (1, 10, 100))
    assert tab.eta(2) == pytest.approx(1e-6)
    with pytest.raises(InvalidArgument):
        tab.eta(3)
    with pytest.raises(InvalidArgument):
        noise.TabulatedSchedule(1e-8, (2, 10))
    rs = noise.ResourceSchedule(lambda r: 1 / r, 1e6, lambda k: 10.0**k)
    assert rs.eta0 == pytest.approx(1e-6)
    assert rs.multiplier(3) == pytest.approx(1e3)


def test_fixture_schedule_values():
    f = noise.appendix_fixture(8)
    assert f.eta(0) == 1e-8
    assert f.eta(3) == pytest.approx(1e-8 * 10 ** (3 + 0.63))
