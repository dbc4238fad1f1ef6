"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` or directly as a script.
"""
import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from cellquasi import _stencil, cell2point, quasiinterp
from cellquasi.boundary import ExtensionSpec, extend_field, required_margin
from cellquasi.bspline import bspline_eval, gauss_legendre, omega_eval, q_average_polynomial, sample_field
from cellquasi.cell2point import (lagrange_oracle_1d, matrix_entry, reconstruct_grid_kd,
                                  reconstruct_point_1d, reconstruction_stencil, rhs_entry,
                                  solve_coefficients)
from cellquasi.convergence import ExperimentSpec, run_convergence
from cellquasi.grid import GridField
from cellquasi.quasiinterp import apply_L, build_quasi_interpolant_1d, evaluate, quasi_coefficients
from cellquasi.registry import poly_q_averages

F = Fraction
DPS = 40


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        return ok
    return emit


M5 = {
    (2, 1): F(1, 8), (3, 1): F(13, 1920), (3, 2): F(5, 24),
    (4, 1): F(41, 193536), (4, 2): F(23, 1152), (4, 3): F(7, 24),
    (5, 1): F(671, 154828800), (5, 2): F(227, 193536), (5, 3): F(77, 1920), (5, 4): F(3, 8),
}
B5 = [F(-1, 24), F(-1, 1920), F(-1, 322560), F(-1, 92897280), F(-1, 40874803200)]


def test_criterion_1_recon_coefficients(report):
    for fn in (matrix_entry, rhs_entry, cell2point._a, solve_coefficients):
        fn.cache_clear()
    t0 = time.perf_counter()
    a = solve_coefficients(5).a
    entries = {(i, j): matrix_entry(i, j) for i in range(1, 6) for j in range(1, 6)}
    rhs = [rhs_entry(i) for i in range(1, 6)]
    elapsed = time.perf_counter() - t0
    expected = (F(1), F(-1, 24), F(3, 640), F(-5, 7168), F(35, 294912), F(-63, 2883584))
    ok_m = all(entries[i, j] == M5.get((i, j), F(int(i == j))) for i in range(1, 6) for j in range(1, 6))
    ok = tuple(a) == expected and ok_m and rhs == B5 and elapsed < 1.0
    report(1, ok, f"a_5 exact={tuple(a) == expected}, M_5 exact={ok_m}, b_5 exact={rhs == B5}, "
                  f"{elapsed * 1e3:.1f} ms")
    assert ok


QUASI_WEIGHTS = {
    1: ([F(1)], F(1)),
    2: ([F(5, 4), F(-1, 8)], F(3, 2)),
    3: ([F(4, 3), F(-1, 6)], F(5, 3)),
    4: ([F(319, 192), F(-107, 288), F(47, 1152)], F(179, 72)),
    5: ([F(73, 40), F(-7, 15), F(13, 240)], F(43, 15)),
    6: ([F(79879, 34560), F(-37003, 46080), F(751, 4608), F(-2159, 138240)], F(9233, 2160)),
    7: ([F(2452, 945), F(-1657, 1680), F(22, 105), F(-311, 15120)], F(4751, 945)),
}


def test_criterion_2_quasi_coefficients(report):
    quasi_coefficients.cache_clear()
    quasiinterp.central_factorial_t.cache_clear()
    t0 = time.perf_counter()
    got = {p: quasi_coefficients(p) for p in QUASI_WEIGHTS}
    elapsed = time.perf_counter() - t0
    bad = [p for p, (c, norm) in QUASI_WEIGHTS.items() if list(got[p].c) != c or got[p].norm != norm]
    ok = not bad and elapsed < 1.0
    report(2, ok, f"table rows p=1..7 mismatching: {bad or 'none'}, {elapsed * 1e3:.1f} ms")
    assert ok


def test_criterion_3_oracle_equivalence(report):
    rng = np.random.default_rng(3)
    worst = 0.0
    for m in (1, 2, 3):
        co = solve_coefficients(m)
        for _ in range(100):
            a, h = rng.uniform(-2, 2), rng.uniform(0.05, 0.5)
            w, ph = rng.uniform(0.5, 3), rng.uniform(0, 2 * np.pi)
            window = [(math.cos(w * (a + j * h - h / 2) + ph) - math.cos(w * (a + j * h + h / 2) + ph)) / (w * h)
                      for j in range(-m, m + 1)]
            oracle = lagrange_oracle_1d(window, m)
            worst = max(worst, abs(reconstruct_point_1d(window, co) - oracle) / max(1.0, abs(oracle)))
    ok = worst <= 1e-12
    report(3, ok, f"max relative gap over 300 windows = {worst:.2e} (tol 1e-12)")
    assert ok


def _cell_average(coeffs, center, h):
    # exact (1/h) * integral of the polynomial over [center - h/2, center + h/2]
    anti = lambda x: sum(c * x ** (k + 1) / (k + 1) for k, c in enumerate(coeffs))
    return (anti(center + h / 2) - anti(center - h / 2)) / h


def test_criterion_4_polynomial_exactness(report):
    rng = np.random.default_rng(4)
    rand_poly = lambda d: [F(v).limit_denominator(10 ** 6) for v in rng.uniform(-1, 1, d + 1)]
    recon_worst = 0.0
    for m in (1, 2, 3):
        for _ in range(50):
            P = rand_poly(2 * m + 1)
            a, h = F(rng.uniform(-2, 2)).limit_denominator(1000), F(1, int(rng.integers(2, 20)))
            window = [float(_cell_average(P, a + j * h, h)) for j in range(-m, m + 1)]
            exact = float(sum(c * a ** k for k, c in enumerate(P)))
            got = reconstruct_point_1d(window, solve_coefficients(m))
            recon_worst = max(recon_worst, abs(got - exact) / max(1.0, abs(exact)))
    quasi_worst = 0.0
    for p in range(1, 6):
        for q in range(0, 3):
            P = rand_poly(p)
            h, origin, n = F(1, 10), F(-2), 40
            data = np.array([float(v) for v in poly_q_averages(P, q, h, origin, n)])
            s = build_quasi_interpolant_1d(GridField(data, float(h), float(origin), q), p, q)
            x = rng.uniform(-1.9, 1.8, 100)
            exact = sum(float(c) * x ** k for k, c in enumerate(P))
            quasi_worst = max(quasi_worst, float(np.max(np.abs(evaluate(s, x) - exact) / np.maximum(1, np.abs(exact)))))
    ok = recon_worst <= 1e-11 and quasi_worst <= 1e-10
    report(4, ok, f"reconstruction max err {recon_worst:.2e} (tol 1e-11), "
                  f"quasi max err {quasi_worst:.2e} (tol 1e-10)")
    assert ok


@pytest.fixture(scope="module")
def recon_runs():
    t0 = time.perf_counter()
    runs = {m: run_convergence(ExperimentSpec("reconstruct", "sin", ((0.0, 2 * math.pi),), m=m,
                                              refinement_levels=6, base_cells=32, dps=DPS))
            for m in (1, 2, 3)}
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def quasi_runs():
    return {(p, q): run_convergence(ExperimentSpec("quasi", "exp", ((0.0, 1.0),), p=p, q=q,
                                                   refinement_levels=6, base_cells=8, dps=DPS))
            for p, q in ((3, 1), (5, 2))}


def test_criterion_5_reconstruction_convergence(report, recon_runs):
    runs, elapsed = recon_runs
    finals = {m: r.order[-1] for m, r in runs.items()}
    ok = all(abs(o - (2 * m + 2)) <= 0.25 for m, o in finals.items()) and elapsed < 10
    report(5, ok, "final orders " + ", ".join(f"m={m}: {o:.4f} (target {2 * m + 2})" for m, o in finals.items())
           + f"; {elapsed:.2f} s")
    assert ok


def test_criterion_6_quasi_convergence(report, quasi_runs):
    tol = {(3, 1): 0.25, (5, 2): 0.3}
    finals = {k: r.order[-1] for k, r in quasi_runs.items()}
    ok = all(abs(o - (k[0] + 1)) <= tol[k] for k, o in finals.items())
    report(6, ok, "final orders " + ", ".join(f"(p,q)={k}: {o:.4f} (target {k[0] + 1} +/- {tol[k]})"
                                               for k, o in finals.items()))
    assert ok


def test_criterion_7_bound_dominance(report, recon_runs, quasi_runs):
    rows = [(f"recon m={m}", r) for m, r in recon_runs[0].items()] + \
           [(f"quasi {k}", r) for k, r in quasi_runs.items()]
    failures, min_ratio = [], math.inf
    for name, r in rows:
        for h, e, b in zip(r.h, r.max_error, r.bound):
            min_ratio = min(min_ratio, b / e)
            if not e <= b:
                failures.append(f"{name} h={h:.3g}")
    ok = not failures
    report(7, ok, f"{sum(len(r.h) for _, r in rows)} rows, min (bound/error - 1) = {min_ratio - 1:.2e}; "
                  f"violations: {failures or 'none'}")
    assert ok


WORKED = [(2, 1), (3, 1), (3, 2), (5, 2)]


def test_criterion_8_L_equivalence(report):
    rng = np.random.default_rng(8)
    worst, exact_ok = 0.0, True
    cases = [(p, q1, q2) for p in range(1, 6) for q1 in range(3) for q2 in range(3) if q1 < q2]
    for p, q1, q2 in cases + [(p, 0, q) for p, q in WORKED]:
        for _ in range(4):
            P = [F(v).limit_denominator(10 ** 6) for v in rng.uniform(-1, 1, p + 1)]
            h, n = F(1, int(rng.integers(2, 12))), int(rng.integers(-5, 6))
            vals = []
            for q in (q1, q2):
                s = (p + q) // 2
                win = [q_average_polynomial(P, q, h, n + j) for j in range(-s, s + 1)]
                exact = apply_L(quasi_coefficients(p + q), win)
                approx = apply_L(quasi_coefficients(p + q), np.array([float(v) for v in win]))
                vals.append((exact, approx))
            exact_ok &= vals[0][0] == vals[1][0]
            worst = max(worst, abs(vals[0][1] - vals[1][1]))
    ok = exact_ok and worst <= 1e-11
    report(8, ok, f"exact rational agreement={exact_ok} incl. worked cases {WORKED}, "
                  f"float gap {worst:.2e} (tol 1e-11)")
    assert ok


def test_criterion_9_tensor_fidelity(report):
    w = reconstruction_stencil(1)
    st2 = _stencil.tensor_stencil([w, w])
    d2 = np.array([1, -2, 1], dtype=object)
    cross = np.outer(d2, d2) * F(1, 576)
    expected = np.zeros((3, 3), dtype=object)
    expected[1, 1] += 1
    expected[:, 1] -= d2 * F(1, 24)
    expected[1, :] -= d2 * F(1, 24)
    expected += cross
    ok2 = bool((st2 == expected).all()) and cross[0, 0] == F(1, 576) and cross[1, 1] == F(4, 576)
    ok3 = _stencil.tensor_stencil([w, w, w])[0, 0, 0] == F(-1, 13824)
    c3 = quasi_coefficients(3).stencil()
    lq = _stencil.tensor_stencil([c3, c3])
    okq = (lq[1, 1], lq[0, 1], lq[0, 0]) == (F(16, 9), F(-2, 9), F(1, 36))
    rng = np.random.default_rng(9)
    data = rng.standard_normal((9, 8, 7))
    ms = (1, 2, 1)
    axis = reconstruct_grid_kd(GridField(data, 0.1, 0.0, q=1), ms, ghosts=0).data
    direct = _stencil.apply_direct(data, _stencil.tensor_stencil([reconstruction_stencil(m) for m in ms]))
    gap = float(np.max(np.abs(axis - direct)))
    ok = ok2 and ok3 and okq and gap <= 1e-13
    report(9, ok, f"2D m=(1,1) expansion {ok2}, 3D triple weight {ok3}, L_(3,3) weights {okq}, "
                  f"axis-vs-direct gap {gap:.2e} (tol 1e-13)")
    assert ok


def test_criterion_10_bspline_invariants(report):
    rng = np.random.default_rng(10)
    pu = 0.0
    for p in range(8):
        x = rng.uniform(-1, 1, 200)
        pu = max(pu, float(np.max(np.abs(sum(bspline_eval(p, x - n) for n in range(-(p + 2), p + 3)) - 1))))
    xi, wi = gauss_legendre(12)
    conv = 0.0
    for p in range(0, 7):
        for q in range(1, 8 - p):
            for x in rng.uniform(-(p + q + 1) / 2, (p + q + 1) / 2, 20):
                lo, hi = -(p + 1) / 2, (p + 1) / 2
                brk = sorted(set(np.concatenate([np.arange(lo, hi + 0.5, 1.0),
                                                 x - np.arange(-q / 2, q / 2 + 0.5, 1.0)])))
                brk = [b for b in brk if lo <= b <= hi]
                total = 0.0
                for a, b in zip(brk, brk[1:]):
                    y = (a + b) / 2 + (b - a) / 2 * xi
                    total += (b - a) / 2 * np.sum(wi * bspline_eval(p, y) * omega_eval(q, x - y))
                conv = max(conv, abs(total - float(bspline_eval(p + q, x))))
    ok = pu <= 1e-12 and conv <= 1e-8
    report(10, ok, f"partition of unity err {pu:.2e} (tol 1e-12), convolution err {conv:.2e} (tol 1e-8)")
    assert ok


def test_criterion_11_boundary_extension(report):
    rep = run_convergence(ExperimentSpec("quasi", "sin", ((0.0, 1.0),), p=3, q=1, refinement_levels=6,
                                         base_cells=8, boundary="ghost-extension"))
    n = 64
    field = sample_field(np.sin, 1, (n,), 1.0 / n, (0.5 / n,))
    g = required_margin(p=3, q=1)
    ext = extend_field(field, ExtensionSpec((g,), 3))
    untouched = np.array_equal(ext.data[g:-g], field.data)
    ok = abs(rep.order[-1] - 4) <= 0.3 and untouched
    report(11, ok, f"ghost-extended final order {rep.order[-1]:.4f} (target 4 +/- 0.3), "
                   f"interior bit-identical={untouched}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
