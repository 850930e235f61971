"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; the
slowest criterion (the shrinking-thickness trend) stays far inside its budget
on a laptop-class machine.
"""

import json
import time
from fractions import Fraction

import numpy as np
import pytest

from stiffplate import elasticity3d as e3
from stiffplate import limit_solver as ls
from stiffplate.cli import main as cli_main
from stiffplate.cross_section import constants, solve_torsion
from stiffplate.loads import Loads, PolyField, StripLoad
from stiffplate.material import from_lame, from_young
from stiffplate.reduced_density import (
    beam_density,
    oracle_beam,
    oracle_plate,
    plate_density,
    relaxed_beam_tensor,
    relaxed_plate_tensor,
)
from stiffplate.regime import Branch, classify_case, derive_exponents, enumerate_limit_problems


def _report(n, label, t0, extra=""):
    ms = (time.perf_counter() - t0) * 1e3
    tail = f" ({extra})" if extra else ""
    print(f"\nACCEPTANCE {n} ({label}): PASS [{ms:.1f} ms]{tail}")


def test_criterion_1_regime_map():
    exps = {
        ("7/10", "3/10"): "G",
        ("2/10", "3/10"): "A",
        ("1", "9/10"): "E",
    }
    parsed = {k: derive_exponents(Fraction(k[0]), Fraction(k[1])) for k in exps}
    t0 = time.perf_counter()
    for key, letter in exps.items():
        assert classify_case(parsed[key]).case_letter == letter
    probs = enumerate_limit_problems()
    elapsed = time.perf_counter() - t0
    assert len(probs) == 23
    assert sum(1 for b, _ in probs if b is Branch.W_GT_H) == 9
    assert sum(1 for b, _ in probs if b is Branch.H_GT_W) == 7
    assert sum(1 for b, _ in probs if b is Branch.W_EQ_H) == 7
    assert elapsed < 1e-3
    _report(1, "regime map", t0, f"23 problems, {elapsed * 1e6:.0f} us")


def test_criterion_2_relaxed_densities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(71)
    step = 1e-4
    slots_plate = [2, 3, 4]
    slots_beam = [1, 2, 3]
    for _ in range(1000):
        mu = rng.uniform(0.2, 10.0)
        lam = rng.uniform(-2 * mu / 3 + 0.01, 10.0)
        mat = from_lame(lam, mu)
        e = rng.normal(size=3)
        assert plate_density(mat, *e) == pytest.approx(oracle_plate(mat, *e), rel=1e-10)
        assert beam_density(mat, *e) == pytest.approx(oracle_beam(mat, *e), rel=1e-10)

        def f(v):
            tr = v[0] + v[1] + v[2]
            n2 = v[0] ** 2 + v[1] ** 2 + v[2] ** 2 + 2 * (v[3] ** 2 + v[4] ** 2 + v[5] ** 2)
            return mu * n2 + lam / 2 * tr**2

        for z, slots in (
            (relaxed_plate_tensor(mat, *e), slots_plate),
            (relaxed_beam_tensor(mat, *e), slots_beam),
        ):
            for s in slots:
                vp, vm = z.copy(), z.copy()
                vp[s] += step
                vm[s] -= step
                assert abs(f(vp) - f(vm)) / (2 * step) <= 1e-7
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _report(2, "relaxed densities", t0, "1000 samples")


def test_criterion_3_cross_section_constants():
    t0 = time.perf_counter()
    x, wx = np.polynomial.legendre.leggauss(8)
    rng = np.random.default_rng(73)
    for _ in range(20):
        W = rng.uniform(0.1, 2.5)
        H = rng.uniform(0.1, 2.5)
        x2, w2 = W * x, W * wx
        x3, w3 = H / 2 * (x + 1), H / 2 * wx
        X2, X3 = np.meshgrid(x2, x3, indexing="ij")

        def integ(vals):
            return float(np.einsum("i,ij,j->", w2, vals, w3))

        c = constants(W, H)
        one = np.ones_like(X2)
        assert c.area == pytest.approx(integ(one), rel=1e-12)
        assert c.static_moment == pytest.approx(integ(X3), rel=1e-12)
        assert c.inertia_x2 == pytest.approx(integ(X3**2), rel=1e-12)
        assert c.torsion_wide == pytest.approx(4 * integ(X2**2), rel=1e-12)
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _report(3, "cross-section constants", t0, "20 random sections")


def test_criterion_4_torsion_function():
    t0 = time.perf_counter()
    # Saint-Venant series for the square of side 1 (half-widths 0.5 each)
    a = b = 0.5
    s = sum(
        np.tanh((2 * i + 1) * np.pi * a / (2 * b)) / (2 * i + 1) ** 5 for i in range(80)
    )
    exact = (16.0 / 3.0) * a * b**3 * (1.0 - 192.0 / np.pi**5 * s)
    assert exact == pytest.approx(0.1406, rel=2e-3)
    errs = []
    for n in (32, 64, 128):
        f = solve_torsion(0.5, 1.0, n)
        errs.append(abs(f.rigidity - exact))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] / exact < 0.01
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    _report(4, "torsion function", t0, f"J at 128^2 within {errs[2] / exact:.2e} of the series")


GEOM = ls.Geometry(L=1.0, T=0.3, W=0.4, H=0.8)


def test_criterion_5_limit_solver_oracles():
    t0 = time.perf_counter()
    xsec = constants(GEOM.W, GEOM.H)

    # (a) plate-only cantilever against the clamped-free strip solution; a
    # small Poisson ratio keeps the physical anticlastic deviation inside the
    # finite-element comparison band
    mat = from_young(2.0, 0.1)
    rule_e = classify_case(derive_exponents(Fraction(1), Fraction(9, 10)))
    q = 0.01
    loads = Loads(plate=(PolyField(), PolyField(), PolyField.constant(q)))
    rep = ls.solve(GEOM, mat, rule_e, xsec, loads, ls.PlateMesh(L=GEOM.L, n1=64, n2=64))
    d = mat.young * GEOM.T**3 / (12 * (1 - mat.poisson**2))
    ell = 2 * GEOM.L
    worst = 0.0
    for x1 in np.linspace(-0.8, 0.4, 7):
        sarm = GEOM.L - x1
        wref = q * GEOM.T * sarm**2 * (6 * ell**2 - 4 * ell * sarm + sarm**2) / (24 * d)
        wfe = rep.state.eval_deflection(np.array([x1]), np.array([0.0]))[0]
        worst = max(worst, abs(wfe - wref) / wref)
    assert worst < 0.02

    # (b) beam cantilever tip deflection under a narrow strip load
    mat = from_young(2.0, 0.25)
    rule_a = classify_case(derive_exponents(Fraction(2, 10), Fraction(3, 10)))
    p = 0.01
    j2c = xsec.inertia_x2 - xsec.static_moment**2 / xsec.area
    exact_tip = p * (2 * GEOM.L) ** 3 / (3 * mat.young * j2c)
    errs = []
    for n1 in (32, 64):
        delta = 2 * GEOM.L / n1
        loads = Loads(
            beam_strips=(
                StripLoad(component=3, x_lo=-GEOM.L, x_hi=-GEOM.L + delta, density=p / delta),
            )
        )
        rep_b = ls.solve(GEOM, mat, rule_a, xsec, loads, ls.PlateMesh(L=GEOM.L, n1=n1, n2=8))
        tip = rep_b.state.eval_beam("vertical", np.array([-GEOM.L]))[0]
        errs.append(abs(tip - exact_tip) / exact_tip)
    assert errs[1] < errs[0]
    assert errs[1] < 0.02

    # (c) zero loads give the exactly-zero minimizer
    rule_g = classify_case(derive_exponents(Fraction(7, 10), Fraction(3, 10)))
    rep_z = ls.solve(GEOM, mat, rule_g, xsec, Loads(), ls.PlateMesh(L=GEOM.L, n1=16, n2=8))
    assert np.abs(rep_z.state.z).max() == 0.0
    assert rep_z.energy == 0.0

    # (d) junction-constraint residuals at a loaded minimizer
    loads = Loads(
        plate=(PolyField.constant(0.05), PolyField(), PolyField.constant(q)),
        torque=PolyField.constant(0.01),
    )
    rep_g = ls.solve(GEOM, mat, rule_g, xsec, loads, ls.PlateMesh(L=GEOM.L, n1=24, n2=16))
    assert rep_g.constraint_residual <= 1e-10

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _report(5, "limit solver oracles", t0, f"plate {worst:.1%}, beam {errs[1]:.1%}")


def test_criterion_6_gamma_convergence_trend():
    t0 = time.perf_counter()
    geom = ls.Geometry(L=1.0, T=0.5, W=0.5, H=1.0)
    mat = from_young(1.0, 0.25)
    exp = derive_exponents(Fraction(7, 10), Fraction(3, 10))
    rule = classify_case(exp)
    assert rule.case_letter == "G"
    xsec = constants(geom.W, geom.H)
    loads = Loads(
        plate=(PolyField(), PolyField(), PolyField.of([(0.1, (0, 0, 0)), (-0.1, (2, 0, 0))])),
        torque=PolyField.of([(0.02, (0, 0, 0)), (-0.02, (2, 0, 0))]),
    )
    lim = ls.solve(geom, mat, rule, xsec, loads, ls.PlateMesh(L=geom.L, n1=48, n2=48))
    res = e3.Resolution3D(nx=48, n_width=8, n_outer=14, n_thick=4, n_height=8)
    eps_list = [0.4, 0.28, 0.2]
    report = e3.sweep(geom, mat, exp, loads, xsec, lim, eps_list, [res] * 3)
    assert not report.aborted
    gaps = [e.energy_gap for e in report.entries]
    mismatches = [e.junction_mismatch for e in report.entries]
    assert gaps[0] > gaps[1] > gaps[2], f"energy gap not strictly decreasing: {gaps}"
    assert mismatches[0] > mismatches[1] > mismatches[2], (
        f"junction mismatch not decreasing: {mismatches}"
    )
    elapsed = time.perf_counter() - t0
    assert elapsed < 900.0
    _report(
        6,
        "shrinking-thickness trend",
        t0,
        f"gaps {gaps[0]:.2e} > {gaps[1]:.2e} > {gaps[2]:.2e}",
    )


def test_criterion_7_determinism(tmp_path):
    t0 = time.perf_counter()
    cfg = {
        "schema": 1,
        "geometry": {"L": 1.0, "T": 0.5, "W": 0.5, "H": 1.0},
        "material": {"E": 1.0, "nu": 0.25},
        "exponents": {"w": "7/10", "h": "3/10"},
        "loads": {"plate_b3": {"constant": 0.1}, "torque": {"constant": 0.02}},
        "mesh": {"plate_n1": 8, "plate_n2": 8, "torsion_n": 16},
        "resolution3d": {"nx": 8, "n_width": 4, "n_outer": 4, "n_thick": 2, "n_height": 4},
        "eps": [0.5, 0.4],
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    for command in ("classify", "torsion", "solve-limit", "solve-3d", "sweep"):
        outputs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{command}_{tag}"
            rc = cli_main(
                ["--config", str(path), "--out", str(out), "--deterministic", command]
            )
            assert rc == 0
            outputs.append({f.name: f.read_bytes() for f in sorted(out.iterdir())})
        assert outputs[0].keys() == outputs[1].keys()
        for name in outputs[0]:
            assert outputs[0][name] == outputs[1][name], f"{command}/{name} differs on rerun"
    _report(7, "deterministic reruns", t0, "5 commands byte-identical")
