"""Acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section of the pytest summary.  Criteria 4 and 7
are expected to fail; the analysis is in the project decision ledger.
"""

import math
import shutil
import subprocess
import sys
import time

import numpy as np
import pytest

from crsing.approx import approx_report, fn_eval, polar_disc_grid, sector_scan, witness_for
from crsing.complexcore import Disc
from crsing.demos import SURFACES
from crsing.hull import OUTSIDE, graph_samples, hull_probe
from crsing.kallin import (
    average_over_roots,
    choose_C,
    containment_margins,
    disc_grid,
    epsilon_search,
    symmetrize,
    vertex_angle,
)
from crsing.polys import BihomPoly, Poly2
from crsing.sheets import all_sheets, annulus_grid, build_sheets, f0_unchecked, jacobian_gap, verify_product
from crsing.surface import CRSurface, certify

UNIT = Disc(0j, 1.0)
CERTIFIED = ("zbar3", "tilted-zbar4")


def surface(name):
    return CRSurface.from_dict(SURFACES[name])


@pytest.fixture(scope="module")
def systems():
    out = {}
    for name in CERTIFIED:
        s = surface(name)
        cert = certify(s)
        out[name] = (build_sheets(s, cert), cert)
    return out


@pytest.fixture(scope="module")
def hull_runs():
    """The two probes of criterion 8, shared with criterion 9."""
    elliptic = graph_samples(lambda z: np.abs(z) ** 2 + 0j, 1.0)
    conj = graph_samples(np.conj, 1.0)
    return {
        "elliptic (0, 0.25)": hull_probe(elliptic, (0, 0.25), d_max=8),
        "conj (0, 0.5)": hull_probe(conj, (0, 0.5), d_max=8),
    }


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def test_criterion_1_certificate(verdict):
    c3, t3 = timed(certify, surface("zbar3"))
    c4, t4 = timed(certify, surface("tilted-zbar4"), grid=32768)
    cf, tf = timed(certify, surface("zbar3-fail"))
    ok3 = c3.passed and c3.A == 0 and c3.delta == 3 and abs(c3.sizeRhs - 0.6339746) <= 1e-6
    ok4 = c4.passed and abs(c4.derivLhs - 2.0571) <= 1e-3 and c4.derivLhs < 4
    okf = not cf.passed and all(not d.passed for d in cf.perM)
    fast = max(t3, t4, tf) < 1.0
    verdict(
        "criterion 1 (certificate)",
        ok3 and ok4 and okf and fast,
        f"sizeRhs={c3.sizeRhs:.7f}, derivLhs={c4.derivLhs:.5f}, fail reasons=[{cf.reason}], "
        f"max runtime={max(t3, t4, tf):.3f}s",
    )


def test_criterion_2_sheet_identity(verdict, systems):
    rng = np.random.default_rng(2024)
    worst_prod, worst_sym = 0.0, 0.0
    for sys_, _ in systems.values():
        r = sys_.validityRadius * np.sqrt(rng.uniform(size=1000))
        z = r * np.exp(2j * np.pi * rng.uniform(size=1000))
        w = rng.normal(size=1000) + 1j * rng.normal(size=1000)
        worst_prod = max(worst_prod, verify_product(sys_, z, w))
        F = all_sheets(sys_, z)
        for j, om in enumerate(sys_.omegas):
            worst_sym = max(worst_sym, float(np.max(np.abs(F[j] - om * F[0]))))
    verdict(
        "criterion 2 (sheet identity)",
        worst_prod <= 1e-9 and worst_sym <= 1e-12,
        f"product residual={worst_prod:.2e}, symmetry error={worst_sym:.2e}",
    )


def test_criterion_3_jacobian(verdict, systems):
    mins = {}
    for name, (sys_, _) in systems.items():
        d = sys_.validityRadius
        mins[name] = jacobian_gap(sys_, annulus_grid(d / 100, d, 32, 128))
    dev = float(np.max(np.abs(mins["zbar3"] - 1)))
    lows = {k: float(np.min(v)) for k, v in mins.items()}
    verdict(
        "criterion 3 (Jacobian)",
        all(v > 0 for v in lows.values()) and dev <= 1e-6,
        f"min gap {lows}, zbar3 max |gap-1|={dev:.2e}",
    )


def test_criterion_4_approximant_bounds(verdict):
    grid = polar_disc_grid(UNIT, 40, 250)  # 10^4 points plus the centre
    worst_bound = 0.0
    ratios = {}
    for zeta in (0j, 0.3 + 0.1j):
        wit = witness_for(np.conj, zeta, grid)
        err = {}
        for n in range(1, 51):
            f = fn_eval(np.conj, zeta, wit, n, grid)
            worst_bound = max(worst_bound, float(np.max(np.abs(f) * np.abs(grid - zeta))))
            if n in (5, 50):
                err[n] = float(np.max(np.abs((grid - zeta) * f - 1)))
        ratios[zeta] = err[5] / err[50]
    bound_ok = worst_bound <= 4 + 1e-12
    ratio_ok = all(r >= 10 for r in ratios.values())
    verdict(
        "criterion 4 (approximant bounds)",
        bound_ok and ratio_ok,
        f"max |f_n||z-zeta|={worst_bound:.6f} (<= 4: {bound_ok}), "
        f"sup-error ratio n=5/n=50: {', '.join(f'{r:.3f}' for r in ratios.values())} (>= 10: {ratio_ok})",
    )


def test_criterion_5_sector(verdict, systems):
    conj = sector_scan(np.conj, UNIT)
    sheet_ok = {}
    for name, (sys_, cert) in systems.items():
        C = choose_C(cert.A, sys_.delta)
        eps = epsilon_search(sys_, C, A=cert.A).epsilon
        rep = sector_scan(lambda z, s=sys_: f0_unchecked(s, z), Disc(0j, eps), exclude=(0j,))
        sheet_ok[name] = rep.passed
    elliptic = sector_scan(lambda z: np.abs(z) ** 2 + 0j, UNIT, exclude=(0j,))
    verdict(
        "criterion 5 (sector condition)",
        conj.passed and conj.maxSpread <= 1e-9 and all(sheet_ok.values()) and bool(elliptic.fiberFlags),
        f"conj maxSpread={conj.maxSpread:.1e}, F_0 scans {sheet_ok}, |z|^2 fiber flags={len(elliptic.fiberFlags)}",
    )


def test_criterion_6_kallin(verdict, systems):
    sys_, cert = systems["tilted-zbar4"]
    eps = epsilon_search(sys_, 0.4, A=cert.A).epsilon
    margins = containment_margins(sys_, 0.4, eps, grid=disc_grid(eps))
    angle = vertex_angle(0.4)
    angle_ok = abs(angle - 2 * math.atan(2 / 3)) <= 1e-15 and angle < math.pi / 2

    rng = np.random.default_rng(6)
    terms = {(a, b): complex(*rng.normal(size=2)) for a in range(4) for b in range(9)}
    g = Poly2(terms)
    z = rng.uniform(-0.7, 0.7, 1000) + 1j * rng.uniform(-0.7, 0.7, 1000)
    w = rng.uniform(-0.7, 0.7, 1000) + 1j * rng.uniform(-0.7, 0.7, 1000)
    P = symmetrize(g, sys_.delta)
    rt = float(np.max(np.abs(P(z, w**sys_.delta) - average_over_roots(g, sys_.delta, z, w))))
    verdict(
        "criterion 6 (Kallin geometry)",
        all(m.positive for m in margins) and angle_ok and rt <= 1e-12,
        f"min margins re={min(m.real for m in margins):.4f} im={min(m.imag for m in margins):.4f} at eps={eps}, "
        f"vertexAngle={angle:.6f} < pi/2, round-trip={rt:.1e}",
    )


def test_criterion_7_density(verdict):
    schedule = [(i, i) for i in range(1, 7)]
    rep = approx_report(
        lambda z: np.conj(z) ** 3, BihomPoly({(0, 1): 1}), schedule, polar_disc_grid(UNIT, 64, 256)
    )
    e = rep.errors
    non_inc = all(b <= a for a, b in zip(e, e[1:]))
    verdict(
        "criterion 7 (density)",
        e[-1] < 0.05 and non_inc,
        f"errors {', '.join(f'{x:.4f}' for x in e)}; final < 0.05: {e[-1] < 0.05}; non-increasing: {non_inc}",
    )


def test_criterion_8_hull_controls(verdict, hull_runs):
    ell = hull_runs["elliptic (0, 0.25)"]
    conj = hull_runs["conj (0, 0.5)"]
    ok = min(ell.mValues) >= 1 - 1e-6 and conj.verdict == OUTSIDE
    verdict(
        "criterion 8 (hull controls)",
        ok,
        f"elliptic min m_d={min(ell.mValues):.9f}, conj verdict={conj.verdict} at d={conj.witnessDegree} "
        f"(m_8={conj.mValues[-1]:.4f})",
    )


def test_criterion_9_hull_soundness(verdict, hull_runs):
    bad = []
    for name, res in hull_runs.items():
        m = res.mValues
        if any(x > 1 for x in m) or any(b > a + 1e-9 for a, b in zip(m, m[1:])):
            bad.append(name)
    verdict("criterion 9 (hull soundness)", not bad, f"runs checked={len(hull_runs)}, violations={bad}")


def test_criterion_10_determinism(verdict, tmp_path):
    exe = shutil.which("crsing")
    cmd = [exe] if exe else [sys.executable, "-m", "crsing.cli"]
    outs = []
    for i in range(2):
        dst = tmp_path / f"run{i}.json"
        proc = subprocess.run(cmd + ["pipeline", "--demo", "tilted-zbar4", "--out", str(dst)], check=False)
        assert proc.returncode == 0
        outs.append(dst.read_bytes())
    verdict(
        "criterion 10 (determinism)",
        outs[0] == outs[1],
        f"two pipeline runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}",
    )
