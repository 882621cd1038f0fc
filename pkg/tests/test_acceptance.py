"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or
on failure) in addition to asserting, so a run doubles as a checklist.
"""

import json
import time

import numpy as np
from scipy.integrate import quad

from causal2d.causal import (
    MonotoneMap1D,
    classify_split_form,
    decide_causal_isomorphism,
    make_causal_iso,
)
from causal2d.cli import main
from causal2d.config import Config
from causal2d.corpus import generate_corpus
from causal2d.decomp import additively_separate
from causal2d.geometry import Grid2D, Rect, SampledField2D
from causal2d.pairing import (
    ProbeSet,
    classical_weak_agreement,
    pair,
    residual,
    weak_du,
    weak_mixed,
)
from causal2d.smooth1d import Bump1D, integrate_smooth, mollifier
from causal2d.testfn import build_psi_eta_1d, build_psi_eta_2d, tensor_bump

RECT = Rect(-1.0, 1.0, -1.0, 1.0)
MOLL = mollifier(0.0, 0.5)
PROBES = ProbeSet.lattice(RECT)


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def sample(fn, n=256, rect=RECT):
    return SampledField2D.from_function(Grid2D(rect, n, n), fn)


def _part_bank(rng):
    """Generators drawn from polynomials (deg <= 3), sine, exp, shifted |.|"""
    c = rng.uniform(-1.5, 1.5, 4)
    k = rng.uniform(0.5, 3.0)
    s = rng.uniform(-0.5, 0.5)
    kind = rng.integers(0, 4)
    if kind == 0:
        return lambda x: c[0] + c[1] * x + c[2] * x**2 + c[3] * x**3
    if kind == 1:
        return lambda x: c[0] * np.sin(k * x + s)
    if kind == 2:
        return lambda x: c[0] * np.exp(np.clip(k * x / 3.0, -3, 3))
    return lambda x: c[0] * np.abs(x - s)


def test_criterion_1_separation_fidelity():
    rng = np.random.default_rng(42)
    worst_res, worst_gauge, worst_time = 0.0, 0.0, 0.0
    for _ in range(20):
        a, b = _part_bank(rng), _part_bank(rng)
        f = sample(lambda U, V: a(U) + b(V))
        t0 = time.perf_counter()
        sep = additively_separate(f, MOLL)
        dt = time.perf_counter() - t0
        da = sep.alpha.y - a(f.grid.u_nodes)
        db = sep.beta.y - b(f.grid.v_nodes)
        gauge = abs(np.mean(da) + np.mean(db))
        worst_res = max(worst_res, sep.residual)
        worst_gauge = max(worst_gauge, gauge)
        worst_time = max(worst_time, dt)
    ok = worst_res < 1e-6 and worst_gauge < 1e-5 and worst_time < 1.0
    report(
        "criterion 1 (separation fidelity)",
        ok,
        f"20 random separable fields at 256^2: residual<= {worst_res:.2e}, "
        f"gauge cancellation <= {worst_gauge:.2e}, slowest {worst_time * 1e3:.0f} ms",
    )


def test_criterion_2_separation_refutation():
    details = []
    ok = True
    for name, fn in (("u*v", lambda U, V: U * V),
                     ("exp(u*v)", lambda U, V: np.exp(U * V))):
        f = sample(fn)
        sep = additively_separate(f, MOLL)
        mixed = residual(weak_mixed(f), PROBES)
        ok = ok and sep.residual >= 0.1 and mixed >= 0.1
        details.append(f"{name}: separation {sep.residual:.3f}, mixed {mixed:.3f}")
    report("criterion 2 (separation refutation)", ok, "; ".join(details))


def test_criterion_3_weak_derivative_bridge():
    n = 512
    cases = [
        (lambda U, V: U**3, lambda U, V: 3 * U**2, "u"),
        (lambda U, V: np.sin(U), lambda U, V: np.cos(U), "u"),
        (lambda U, V: U * V, lambda U, V: V + 0 * U, "u"),
        (lambda U, V: U * V, lambda U, V: U + 0 * V, "v"),
        (lambda U, V: np.exp(U) * np.cos(V), lambda U, V: np.exp(U) * np.cos(V), "u"),
        (lambda U, V: np.exp(U) * np.cos(V), lambda U, V: -np.exp(U) * np.sin(V), "v"),
        (lambda U, V: np.tanh(U), lambda U, V: 1 / np.cosh(U) ** 2, "u"),
        (lambda U, V: V**3 - 2 * V, lambda U, V: 3 * V**2 - 2, "v"),
        (lambda U, V: np.sin(2 * U) + np.cos(V), lambda U, V: 2 * np.cos(2 * U), "u"),
        (lambda U, V: U**2 * V, lambda U, V: 2 * U * V, "u"),
    ]
    worst = 0.0
    for f_fn, g_fn, axis in cases:
        worst = max(
            worst,
            classical_weak_agreement(sample(f_fn, n), sample(g_fn, n), PROBES, axis),
        )

    # non-differentiable bridge: |u| against the sign-function pairing,
    # with an adaptive-quadrature oracle for each probe factor
    f_abs = sample(lambda U, V: np.abs(U), 4097)
    worst_abs = 0.0
    for phi in PROBES:
        ((c, a, b),) = phi.terms
        ia = quad(lambda s: float(np.sign(s) * a.value(s)), a.lo, a.hi,
                  points=[0.0] if a.lo < 0.0 < a.hi else None,
                  limit=400, epsabs=1e-13, epsrel=1e-13)[0]
        ib = quad(lambda s: float(b.value(s)), b.lo, b.hi,
                  limit=400, epsabs=1e-13, epsrel=1e-13)[0]
        worst_abs = max(worst_abs, abs(weak_du(f_abs)(phi) - c * ia * ib))
    ok = worst < 1e-6 and worst_abs < 1e-6
    report(
        "criterion 3 (classical/weak bridge)",
        ok,
        f"10 analytic fields <= {worst:.2e}; |u| vs sign pairing <= {worst_abs:.2e}",
    )


def test_criterion_4_mixed_partial_symmetry():
    f = sample(lambda U, V: np.sqrt(U**2 + V**2))
    worst_order_gap = 0.0
    for phi in PROBES:
        one = pair(f, phi.derivative("u").derivative("v"))
        two = pair(f, phi.derivative("v").derivative("u"))
        worst_order_gap = max(worst_order_gap, abs(one - two))
    r_base = residual(weak_mixed(f), PROBES)
    f2 = sample(lambda U, V: np.sqrt(U**2 + V**2), 512)
    r_fine = residual(weak_mixed(f2), PROBES)
    change = abs(r_fine - r_base) / r_base
    ok = worst_order_gap < 1e-10 and change < 1e-3
    report(
        "criterion 4 (mixed-partial symmetry)",
        ok,
        f"derivative-order gap {worst_order_gap:.1e}; residual {r_base:.6f} "
        f"changes {change:.2e} under grid doubling",
    )


def test_criterion_5_auxiliary_constructions():
    rng = np.random.default_rng(42)
    worst_fd1, worst_fd2, worst_tail = 0.0, 0.0, 0.0
    for _ in range(10):
        bu = Bump1D(rng.uniform(-0.3, 0.3), rng.uniform(0.55, 0.85), rng.uniform(-1.2, 1.2))
        bv = Bump1D(rng.uniform(-0.3, 0.3), rng.uniform(0.55, 0.85), rng.uniform(-1.2, 1.2))
        phi = tensor_bump(bu, bv)
        phi0 = mollifier(rng.uniform(-0.1, 0.1), rng.uniform(0.55, 0.7))
        d = 1e-3

        psi1, eta1 = build_psi_eta_1d(phi, phi0)
        s = eta1.support
        pu = np.linspace(s.u_min, s.u_max, 41)
        pv = np.linspace(s.v_min, s.v_max, 41)
        U, V = np.meshgrid(pu, pv, indexing="ij")
        fd = (eta1.value(U + d, V) - eta1.value(U - d, V)) / (2 * d)
        worst_fd1 = max(worst_fd1, float(np.max(np.abs(fd - psi1.value(U, V)))))
        band = np.linspace(s.v_min - 1, s.v_max + 1, 64)
        for edge in (s.u_min - 1e-9, s.u_max + 1e-9):
            worst_tail = max(worst_tail, float(np.max(np.abs(
                eta1.value(np.full_like(band, edge), band)))))

        psi2, eta2 = build_psi_eta_2d(phi, phi0)
        s = eta2.support
        pu = np.linspace(s.u_min, s.u_max, 41)
        pv = np.linspace(s.v_min, s.v_max, 41)
        U, V = np.meshgrid(pu, pv, indexing="ij")
        fd = (
            eta2.value(U + d, V + d) - eta2.value(U + d, V - d)
            - eta2.value(U - d, V + d) + eta2.value(U - d, V - d)
        ) / (4 * d * d)
        worst_fd2 = max(worst_fd2, float(np.max(np.abs(fd - psi2.value(U, V)))))
        band_u = np.linspace(s.u_min - 1, s.u_max + 1, 64)
        for edge in (s.v_min - 1e-9, s.v_max + 1e-9):
            worst_tail = max(worst_tail, float(np.max(np.abs(
                eta2.value(band_u, np.full_like(band_u, edge))))))
    ok = worst_fd1 < 1e-5 and worst_fd2 < 1e-5 and worst_tail < 1e-12
    report(
        "criterion 5 (auxiliary constructions)",
        ok,
        f"d(eta)/du vs psi <= {worst_fd1:.2e}; d2(eta)/dudv vs psi <= {worst_fd2:.2e}; "
        f"tails <= {worst_tail:.1e}",
    )


def test_criterion_6_characterization_soundness():
    corpus = generate_corpus()  # 50 valid + 50 corrupted, seed 42
    cfg = Config()
    t0 = time.perf_counter()
    agree = 0
    false_pos = false_neg = 0
    for entry in corpus:
        verdict = decide_causal_isomorphism(entry.plane_map, cfg)
        oracle_clean = verdict.oracle_violations == 0
        if verdict.is_causal_iso == oracle_clean == entry.expect_causal:
            agree += 1
        elif verdict.is_causal_iso and not entry.expect_causal:
            false_pos += 1
        elif not verdict.is_causal_iso and entry.expect_causal:
            false_neg += 1
    elapsed = time.perf_counter() - t0
    ok = agree == len(corpus) and false_pos == 0 and false_neg == 0 and elapsed < 60.0
    report(
        "criterion 6 (characterization soundness)",
        ok,
        f"{agree}/{len(corpus)} decisions agree with the 10^4-pair oracle, "
        f"{false_pos} false positives, {false_neg} false negatives, {elapsed:.1f} s",
    )


def test_criterion_7_roundtrip_recovery():
    rng = np.random.default_rng(42)
    grid = Grid2D(RECT, 256, 256)
    worst = 0.0
    for i in range(20):
        a = rng.uniform(0.4, 1.8)
        c = rng.uniform(0.1, 0.8)
        w = rng.uniform(0.0, 0.3)
        p = rng.uniform(0, 2 * np.pi)

        def base(x, a=a, c=c, w=w, p=p):
            return a * x + c * x**3 + w * np.sin(2 * x + p)

        decreasing = i % 2 == 1
        fn = (lambda x: -base(x)) if decreasing else base
        gn_a = rng.uniform(0.4, 1.5)
        gn = (lambda x: -gn_a * x - 0.2 * x**3) if decreasing else (lambda x: gn_a * x + 0.2 * x**3)
        phi = MonotoneMap1D.from_callable(fn, (-1.0, 1.0))
        psi = MonotoneMap1D.from_callable(gn, (-1.0, 1.0))
        F = make_causal_iso(phi, psi)
        cls = classify_split_form(F, PROBES, grid, MOLL, MOLL)
        assert cls.condition == (2 if decreasing else 1)
        diff_phi = cls.phi_samples.y - np.asarray(phi.forward(cls.phi_samples.x))
        diff_psi = cls.psi_samples.y - np.asarray(psi.forward(cls.psi_samples.x))
        worst = max(worst,
                    float(np.max(diff_phi) - np.min(diff_phi)),
                    float(np.max(diff_psi) - np.min(diff_psi)))
    ok = worst < 1e-5
    report(
        "criterion 7 (split round-trip)",
        ok,
        f"20 random monotone pairs recovered up to constants, deviation <= {worst:.2e}",
    )


def test_criterion_8_quadrature_quality():
    m = mollifier(0.0, 1.0)
    mass_gap = abs(integrate_smooth(m.value, m.lo, m.hi, 128) - 1.0)

    phi = tensor_bump(mollifier(0.0, 0.35), mollifier(0.0, 0.35))
    ((c, a, b),) = phi.terms
    ia = quad(lambda s: float(np.exp(2 * s) * a.value(s)), a.lo, a.hi,
              limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    ib = quad(lambda s: float(np.cos(s) * b.value(s)), b.lo, b.hi,
              limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    exact = c * ia * ib

    def pairing_error(n):
        f = sample(lambda U, V: np.exp(2 * U) * np.cos(V), n)
        return abs(pair(f, phi) - exact)

    e64, e128 = pairing_error(64), pairing_error(128)
    ratio = e64 / e128
    ok = mass_gap < 1e-10 and ratio >= 16.0
    report(
        "criterion 8 (quadrature quality)",
        ok,
        f"mollifier mass defect {mass_gap:.1e} at 128 points; pairing error "
        f"drops {ratio:.0f}x from 64 to 128 nodes",
    )


def test_criterion_9_deterministic_reports(tmp_path):
    map_file = tmp_path / "map.json"
    map_file.write_text(json.dumps({
        "kind": "split", "orientation": "increasing",
        "phi": {"expr": "u^3+u"}, "psi": {"expr": "2*v+1"},
        "domain": [-1, 1, -1, 1],
    }), encoding="utf-8")
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    args = ["check-map", str(map_file), "--grid", "128", "--oracle-pairs", "2000",
            "--deterministic"]
    assert main([*args, "--report", str(out1)]) == 0
    assert main([*args, "--report", str(out2)]) == 0
    ok = out1.read_bytes() == out2.read_bytes()
    report(
        "criterion 9 (deterministic reports)",
        ok,
        f"repeated check-map reports identical ({len(out1.read_bytes())} bytes)",
    )
