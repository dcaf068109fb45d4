"""Acceptance criteria 1-13, one check each.

Run under pytest for assertions plus a summary block, or directly with
`python tests/test_acceptance.py` for the pass/fail lines alone.
"""

import math
import random

import pytest

from artifact import accounting as acc
from artifact import crosstalk as ct
from artifact import ftcore, hardware, noise, optimizer as opt, workloads
from artifact.constants import DEFAULT_OMEGA0, HBAR

RESULTS: dict[int, tuple[bool, str]] = {}

# Level-1 gate -> physical (cNOT, single, identity, measurement), transcribed from the source table.
GATE_TABLE = {
    "cnot": (135, 56, 72, 56),
    "single": (64, 35, 36, 28),
    "identity": (64, 28, 43, 28),
    "measurement": (0, 0, 0, 7),
}


def _matpow_apply(k, x):
    m = [[GATE_TABLE[g][i] for g in acc.GATE_ORDER] for i in range(4)]
    for _ in range(k):
        x = tuple(sum(m[i][j] * x[j] for j in range(4)) for i in range(4))
    return x


def c1():
    bad = [g for g in acc.GATE_ORDER if acc.physical_gate_counts(acc.GateCensus(**{g: 1}), 1).as_tuple() != GATE_TABLE[g]]
    return not bad, f"rows mismatching the table: {bad or 'none'}"


def c2():
    rng = random.Random(2024)
    fails = 0
    for _ in range(20):
        x0 = acc.GateCensus(*(rng.randrange(10**30) for _ in range(4)))
        for k in range(7):
            cf = acc.closed_form_counts(x0, k)
            if cf != acc.matrix_power_counts(x0, k) or cf != _matpow_apply(k, x0.as_tuple()):
                fails += 1
    return fails == 0, f"20 censuses x k=0..6, {fails} mismatches"


def c3():
    want = {1: 5, 2: 7, 3: 10}
    got = {k: math.log10(acc.physical_qubits(2048, k).count) for k in want}
    ok = all(abs(got[k] - want[k]) < 1 for k in want)
    return ok, "log10 Q_P = " + ", ".join(f"k={k}: {got[k]:.2f} (quoted {want[k]})" for k in want)


def c4():
    thr, D = 1e-4, 291
    eta0s = [10**e for e in [-14 + 9 * i / 19 for i in range(20)]]
    betas = [0.1 + 0.1 * j for j in range(10)]
    disagree = misclass = 0
    for e0 in eta0s:
        for b in betas:
            analytic = ftcore.kmax_powerlaw(e0, thr, D, b, k_range_max=40).k_max
            scanned = ftcore.kmax_scan(noise.PowerLawSchedule(e0, D, b), ftcore.ThresholdModel(thr, 40)).k_max
            disagree += analytic != scanned
            misclass += (analytic >= 1) != (e0 < ftcore.concat_useful_bound(thr, D, b))
    return disagree == 0 and misclass == 0, f"200 points: {disagree} disagreements, {misclass} misclassifications"


def c5():
    f = noise.appendix_fixture(8)
    p = [ftcore.logical_error(f.eta(k), 1e-4, k) for k in range(7)]
    up1 = p[0] < p[1]
    down = p[1] > p[2] > p[3]
    up2 = p[3] < p[4] < p[5] < p[6]
    local = ftcore.kmax_scan(f, ftcore.ThresholdModel(1e-4, 8)).local_minimum_from(1)
    return up1 and down and up2 and local == 3, f"p_L(0..6) = {', '.join(f'{x:.3g}' for x in p)}; local min k={local}"


def c6():
    n = 10**6
    ratios = {}
    for d, z in [(1, 0.25), (1, 0.5), (2, 0.5), (2, 1.0)]:
        prm = ct.CrosstalkParams(delta=1.0, z=z, d=d, Q_L=n)
        ratios[(d, z)] = ct.delta_exact(prm, n) / ct.delta_asymptotic(prm, 0)
    c0 = ct.cz_coefficient(0.0)
    # z = 0 counts neighbours: N for the chain, and the full window when N = (2M+1)^2 - 1.
    z0 = []
    for d, nn in [(1, n), (2, 1001**2 - 1)]:
        prm = ct.CrosstalkParams(delta=1.0, z=0.0, d=d, Q_L=nn)
        z0.append(abs(ct.delta_exact(prm, nn) / ct.delta_asymptotic(prm, 0) - 1))
    ok = all(abs(r - 1) < 0.05 for r in ratios.values()) and abs(c0 - 1) < 1e-10 and max(z0) < 1e-12
    worst = max(abs(r - 1) for r in ratios.values())
    return ok, f"max |ratio-1| = {worst:.2e}; |C0-1| = {abs(c0 - 1):.1e}; z=0 max dev = {max(z0):.1e}"


def c7():
    w0 = DEFAULT_OMEGA0
    fixed = hardware.StageStack((2.0,) * 5, (3.0, 10.0, 100.0, 7.0), 2.0)
    e1 = abs(noise.chain_noise(fixed, w0) / noise.bose_einstein(2.0, w0) - 1)
    tele = hardware.StageStack((0.01, 0.1, 1, 10, 300), (1, 1, 1, 1), 4)
    e2 = abs(noise.chain_noise(tele, w0) / noise.bose_einstein(300, w0) - 1)
    k2 = hardware.stage_layout(0.02, 300, 2, 321.0)
    e3 = abs(noise.chain_noise(k2, w0) / noise.two_stage_noise(0.02, 300, 321.0, w0) - 1)
    rng = random.Random(7)
    worst, solved = 0.0, 0
    while solved < 100:
        K = rng.randint(2, 8)
        t1 = 10 ** rng.uniform(-2, 0.5)
        tk = min(300.0, t1 * 10 ** rng.uniform(0.3, 4.5))
        floor, top = noise.bose_einstein(t1, w0), noise.bose_einstein(tk, w0)
        n_t = floor + (top - floor) * 10 ** rng.uniform(-8, -0.05)
        for A in hardware.solve_attenuation(t1, tk, K, n_t):
            res = noise.chain_noise(hardware.stage_layout(t1, tk, K, A), w0)
            worst = max(worst, abs(res / n_t - 1))
        solved += 1
    ok = max(e1, e2, e3) < 1e-12 and worst < 1e-9
    return ok, f"identities max dev {max(e1, e2, e3):.1e}; 100 solves worst residual {worst:.1e}"


def c8():
    p = hardware.DEFAULT_PROFILE
    vals = {
        "coax 10-300 K": (hardware.conduction(10, 300, p, "coax"), 4e-3),
        "coax 0-10 K": (hardware.conduction(0, 10, p, "coax"), 5e-6),
        "stripline 0-10 K": (hardware.conduction(0, 10, p, "stripline"), 1e-9),
    }
    within = all(0.5 <= got / ref <= 1.5 for got, ref in vals.values())
    add = max(
        abs(hardware.conduction(a, c, p) / (hardware.conduction(a, b, p) + hardware.conduction(b, c, p)) - 1)
        for a, b, c in [(0.01, 1, 300), (0.1, 10, 50), (3, 4, 5), (0, 9.99, 10.01)]
    )
    desc = "; ".join(f"{k} {v[0]:.3g} W" for k, v in vals.items())
    return within and add < 1e-9, f"{desc}; additivity {add:.1e}"


def c9():
    pg = hardware.gate_drive_power(hardware.HardwareProfile(gamma_sp=1e3, tau_1qb=25e-9, omega0=2 * math.pi * 6e9))
    return 0.5e-11 <= pg <= 5e-11, f"P_g = {pg:.3g} W"


def c10():
    sc = workloads.ch3_energy_scenario(10**5)
    r = opt.minimize_resource(opt.photon_budget_family(sc), sc.n_l, 2 / 3, opt.log_grid(1e6, 1e14, 161))
    n_min = r.p_min
    energy = sc.n_l * HBAR * DEFAULT_OMEGA0 * n_min
    ok = r.feasible and 3e8 <= n_min <= 3e9 and 1e-5 <= energy <= 1e-4
    return ok, f"n_min = {n_min:.4g} photons at k={r.argmin.get('k')}, E = {energy:.3g} J"


def c11():
    p = hardware.DEFAULT_PROFILE
    ladder = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)
    msgs, ok = [], True
    residuals = []
    for kind in ("worst", "average"):
        res = [opt.minimize_power_single_gate(p, m, kind) for m in ladder]
        ps = [r.p_min for r in res]
        dec = all(b < a for a, b in zip(ps, ps[1:]))
        ok &= dec and all(r.feasible for r in res)
        residuals += [r.constraint_residual for r in res]
        msgs.append(f"{kind} ladder {'strict' if dec else 'NOT strict'}")
    nisq = opt.minimize_power_nisq(p, 30, 1 / 3)
    prof = opt.nisq_depth_profile(nisq)
    ends = [prof[57].power if prof[57] else math.inf, prof[435].power if prof[435] else math.inf]
    nisq_ok = all(e >= nisq.p_min for e in ends) and any(e > nisq.p_min for e in ends)
    residuals.append(nisq.constraint_residual)
    coarse = opt.GridSpec.default("coarse")
    qft = workloads.qft_workload(2048)
    ft = opt.minimize_power_ft(p, qft, 1 / 3, coarse)
    residuals.append(ft.constraint_residual)
    rng = random.Random(11)
    t1 = list(coarse.t1_points)
    rng.shuffle(t1)
    shuffled = opt.GridSpec(t1, list(reversed(coarse.tk_points)), list(reversed(coarse.k_values)))
    ft2 = opt.minimize_power_ft(p, qft, 1 / 3, shuffled, threads=4)
    sg1 = opt.minimize_power_single_gate(p, 1e-3, "worst", coarse)
    sg2 = opt.minimize_power_single_gate(p, 1e-3, "worst", shuffled)
    det = repr(ft) == repr(ft2) and repr(sg1) == repr(sg2)
    ok &= nisq_ok and max(residuals) < 1e-6 and det
    msgs += [
        f"NISQ d_opt={nisq.argmin.get('depth')} ends {'>=' if nisq_ok else '<'} p_min",
        f"max residual {max(residuals):.1e}",
        f"order determinism {'byte-exact' if det else 'BROKEN'}",
    ]
    return ok, "; ".join(msgs)


def c12():
    qft = workloads.qft_workload(2048)
    base = hardware.HardwareProfile(gamma_sp=1e3, efficiency_exponent=1)
    r1 = opt.minimize_power_ft(base.with_electronics_scale(1.0), qft, 1 / 3)
    r2 = opt.minimize_power_ft(base.with_electronics_scale(1e-2), qft, 1 / 3)
    ok = r1.feasible and r1.argmin["k"] == 3 and 1e6 <= r1.p_min <= 1e8 and r2.p_min <= r1.p_min / 10
    return ok, f"eps=1: k={r1.argmin.get('k')} P={r1.p_min:.3g} W; eps=1e-2: k={r2.argmin.get('k')} P={r2.p_min:.3g} W"


def c13():
    a1, a2 = acc.ancilla_timesteps(1).timesteps, acc.ancilla_timesteps(2).timesteps
    rej = acc.rejection_overhead(0.1, 1.0, 1e-12)
    half = acc.rejection_overhead(0.5, 1.0, 1e-3).mean_extra
    ok = a1 == 9 and a2 == 33 and rej.reservoir_min > 11 and half == 1.0
    return ok, f"timesteps {a1}, {a2}; reservoir M = {rej.reservoir_min}; mean_extra(1/2) = {half}"


CRITERIA = {1: c1, 2: c2, 3: c3, 4: c4, 5: c5, 6: c6, 7: c7, 8: c8, 9: c9, 10: c10, 11: c11, 12: c12, 13: c13}


def evaluate(n: int) -> tuple[bool, str]:
    ok, detail = CRITERIA[n]()
    RESULTS[n] = (bool(ok), detail)
    return RESULTS[n]


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = evaluate(n)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        ok, detail = evaluate(n)
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
