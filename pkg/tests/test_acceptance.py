"""Acceptance criteria, each at its stated tolerance and time budget."""

import io
import json
import math
import subprocess
import sys
import time
from contextlib import redirect_stdout

import mpmath
import numpy as np
import pytest

from belgauge.chsh import TSIRELSON_RATIO, chsh_lower_bound, horodecki_oracle, seesaw_chsh
from belgauge.cli import main
from belgauge.coherent import (
    CoherentPairSpec,
    analytic_eigenvalues,
    analytic_spectrum,
    coherent_chsh_ratio,
    coherent_concurrence,
    coherent_negativity,
    numeric_spectrum,
)
from belgauge.entmeas import (
    check_eq47,
    check_lemma1,
    check_prop1_and_thm3,
    concurrence_pure,
    negativity,
    negativity_pure,
)
from belgauge.numlin import BipartiteShape, partial_transpose, trace_norm
from belgauge.srcop import build_source_operator, polarization_block, source_trace_norm_bound, verify_dilation
from belgauge.states import (
    maximally_entangled,
    pure_to_density,
    random_density,
    random_pure_state,
    schmidt_decompose,
)

pytestmark = pytest.mark.acceptance

GRID = (0.1, 0.5, 1.0, 2.0, 3.0)
SHAPES = [BipartiteShape(a, b) for a in (2, 3, 4) for b in (2, 3, 4)]


def _bound_mp(alpha):
    with mpmath.workdps(50):
        x = mpmath.exp(-4 * mpmath.mpf(alpha) ** 2)
        return (3 - x) / (1 + x)


def _eigenvalues_mp(alpha):
    with mpmath.workdps(50):
        a = mpmath.mpf(alpha)
        c, x = mpmath.exp(-2 * a**2), mpmath.exp(-4 * a**2)
        return [(1 + c) ** 2 / (2 * (1 + x)), (1 - c) ** 2 / (2 * (1 + x))]


def _fleet(seed, n):
    children = np.random.SeedSequence(seed).spawn(n)
    return [random_pure_state(SHAPES[i % len(SHAPES)], c) for i, c in enumerate(children)]


@pytest.fixture(scope="module")
def source_fleet():
    """200 states, s in {1, 2, 3}, alternating dilated side: (state, spec, T, report)."""
    out = []
    start = time.perf_counter()
    for i, psi in enumerate(_fleet(19, 200)):
        spec = schmidt_decompose(psi)
        rho = pure_to_density(psi)
        side = "left" if i % 2 else "right"
        for s in (1, 2, 3):
            t = build_source_operator(spec, side, s)
            rep = verify_dilation(t, rho, trials=100, seed=i * 10 + s)
            out.append((psi, spec, t, rep))
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def random_fleet():
    children = np.random.SeedSequence(77).spawn(500)
    return [random_pure_state(BipartiteShape(d, d), c) for d, c in zip([2, 3, 4] * 200, children)]


def test_criterion_01_coherent_bound_curve(criterion):
    start = time.perf_counter()
    rows = []
    for lo, hi, n in (("0.1", "0.5", "2"), ("1", "3", "3")):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["coherent-scan", "--alpha", lo, hi, n, "--format", "json"])
        assert code == 0
        rows += json.loads(buf.getvalue())["rows"]
    elapsed = time.perf_counter() - start
    assert [r["alpha"] for r in rows] == list(GRID)
    worst = max(abs(r["bound_eq63"] - float(_bound_mp(r["alpha"]))) for r in rows)
    values = ", ".join(f"{r['bound_eq63']:.10f}" for r in rows)
    criterion(1, worst <= 1e-8 and elapsed < 5.0, f"max |diff| {worst:.2e} <= 1e-8, {elapsed:.2f}s < 5s; bounds {values}")


def test_criterion_02_coherent_spectra(criterion):
    start = time.perf_counter()
    worst = 0.0
    for family in (1, 2):
        for alpha in GRID:
            got = numeric_spectrum(CoherentPairSpec(family, alpha)).eigenvalues
            ref = analytic_eigenvalues(alpha)
            exact = [float(v) for v in _eigenvalues_mp(alpha)]
            worst = max(worst, float(np.max(np.abs(got - ref))), float(np.max(np.abs(np.array(ref) - exact))))
    elapsed = time.perf_counter() - start
    criterion(2, worst <= 1e-8 and elapsed < 10.0, f"max |diff| {worst:.2e} <= 1e-8, {elapsed:.2f}s < 10s")


def test_criterion_03_dilation(source_fleet, criterion):
    fleet, elapsed = source_fleet
    worst = max(rep.max_residual / rep.scale for *_, rep in fleet)
    ok = all(rep.passed for *_, rep in fleet)
    criterion(3, ok and worst <= 1e-10 and elapsed < 60.0,
              f"{len(fleet)} operators, max residual/scale {worst:.2e} <= 1e-10, {elapsed:.2f}s < 60s")


def test_criterion_04_trace_norm_chain(source_fleet, criterion):
    fleet, _ = source_fleet
    worst = math.inf
    for psi, spec, t, _ in fleet:
        b26 = source_trace_norm_bound(spec)
        chain = [b26 - t.trace_norm(), 2 * spec.rank - 1 - b26, 2 * psi.shape.min_dim - 1 - (2 * spec.rank - 1)]
        worst = min(worst, *chain)
    criterion(4, worst >= -1e-9, f"worst slack {worst:.2e} >= -1e-9 over {len(fleet)} operators")


def test_criterion_05_polarization(criterion):
    worst = 0.0
    for d in (1, 2, 3, 4):
        for basis in (np.eye(d, dtype=complex), schmidt_decompose(maximally_entangled(d)).left_basis,
                      np.linalg.qr(np.random.default_rng(d).standard_normal((d, d)) + 0j)[0]):
            for k in range(d):
                for k1 in range(d):
                    w = polarization_block(basis, k, k1, 1)
                    target = np.outer(basis[:, k], basis[:, k1].conj())
                    worst = max(worst, float(np.max(np.abs(w - target))))
    criterion(5, worst <= 1e-12, f"max entry error {worst:.2e} <= 1e-12")


def test_criterion_06_negativity_routes(random_fleet, criterion):
    routes = sym = 0.0
    for psi in random_fleet:
        rho = pure_to_density(psi)
        routes = max(routes, abs(negativity(rho) - negativity_pure(schmidt_decompose(psi))))
        n1 = trace_norm(partial_transpose(rho.matrix, psi.shape, 1), hermitian=True)
        n2 = trace_norm(partial_transpose(rho.matrix, psi.shape, 2), hermitian=True)
        sym = max(sym, abs(n1 - n2))
    criterion(6, routes <= 1e-9 and sym <= 1e-10, f"routes {routes:.2e} <= 1e-9, T1 vs T2 {sym:.2e} <= 1e-10")


def test_criterion_07_concurrence_negativity(random_fleet, criterion):
    worst = min(
        min(check_lemma1(spec, spec.shape.min_dim), check_eq47(spec))
        for spec in map(schmidt_decompose, random_fleet)
    )
    eq = 0.0
    for alpha in np.linspace(0.05, 4.0, 80):
        spec = analytic_spectrum(CoherentPairSpec(1, float(alpha)))
        eq = max(eq, abs(coherent_concurrence(alpha) - math.sqrt(2) * coherent_negativity(alpha)),
                 abs(concurrence_pure(spec, None) - math.sqrt(2) * negativity_pure(spec)))
    criterion(7, worst >= -1e-9 and eq <= 1e-10, f"worst slack {worst:.2e} >= -1e-9, coherent |C - sqrt2 N| {eq:.2e} <= 1e-10")


def test_criterion_08_lower_bound_relations(random_fleet, criterion):
    worst = math.inf
    for i, psi in enumerate(random_fleet):
        lb = chsh_lower_bound(psi, restarts=4, seed=i)
        slacks = check_prop1_and_thm3(schmidt_decompose(psi), psi.shape.min_dim, lb)
        worst = min(worst, *slacks.values())
    for family in (1, 2):
        for alpha in GRID:
            spec = CoherentPairSpec(family, alpha)
            lb = coherent_chsh_ratio(spec)
            worst = min(worst, *check_prop1_and_thm3(analytic_spectrum(spec), None, lb).values())
            worst = min(worst, *check_prop1_and_thm3(analytic_spectrum(spec), 2, lb).values())
    criterion(8, worst >= -1e-9, f"worst slack {worst:.2e} >= -1e-9 over {len(random_fleet)} states + coherent grid")


def test_criterion_09_chsh(criterion):
    diff = 0.0
    top = 0.0
    children = np.random.SeedSequence(5).spawn(200)
    for i, child in enumerate(children):
        rho = random_density(BipartiteShape(2, 2), child, rank=1 + i % 4)
        ratio = seesaw_chsh(rho, restarts=20, seed=i).violation_ratio
        diff = max(diff, abs(ratio - max(1.0, horodecki_oracle(rho) / 2)))
        top = max(top, ratio)
    bell = seesaw_chsh(pure_to_density(maximally_entangled(2)), restarts=20).violation_ratio
    bell_err = abs(bell - TSIRELSON_RATIO)
    ok = diff <= 1e-6 and top <= TSIRELSON_RATIO + 1e-9 and bell_err <= 1e-6
    criterion(9, ok, f"oracle diff {diff:.2e} <= 1e-6, max ratio {top:.12f} <= sqrt2+1e-9, Bell err {bell_err:.2e}")


def test_criterion_10_determinism(criterion):
    cmd = [sys.executable, "-m", "belgauge.cli", "selftest", "--seed", "0"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    same = first.stdout == second.stdout and first.returncode == second.returncode == 0
    criterion(10, same, f"two selftest runs byte-identical ({len(first.stdout)} bytes), exit {first.returncode}")
