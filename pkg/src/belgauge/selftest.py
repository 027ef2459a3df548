"""Seeded invariant suite behind ``belgauge selftest``.

Each property returns a list of margins: ``tol + slack`` for an inequality,
``tol - |difference|`` for an identity. A property passes iff its worst
margin is nonnegative. Fleets are drawn from child seeds of the run seed, one
child per property, so properties do not perturb each other's samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds, chsh, coherent, entmeas, numlin, srcop, states
from ._parallel import parallel_map
from .numlin import BipartiteShape

FLEET_SHAPES = [BipartiteShape(2, 2), BipartiteShape(2, 3), BipartiteShape(3, 3), BipartiteShape(3, 4), BipartiteShape(4, 4)]
COHERENT_ALPHAS = (0.1, 0.25, 0.5, 1.0, 2.0, 3.0)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    tolerance: str
    checks: int
    worst_margin: float

    @property
    def passed(self) -> bool:
        return self.worst_margin >= 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "tolerance": self.tolerance,
            "checks": self.checks,
            "worst_margin": self.worst_margin,
            "pass": self.passed,
        }


def _pure_fleet(seed: np.random.SeedSequence, n: int) -> list[states.PureBipartiteState]:
    children = seed.spawn(n)
    return [states.random_pure_state(FLEET_SHAPES[i % len(FLEET_SHAPES)], c) for i, c in enumerate(children)]


def _density_fleet(seed: np.random.SeedSequence, n: int) -> list[states.DensityOperator]:
    children = seed.spawn(n)
    return [
        states.random_density(FLEET_SHAPES[i % len(FLEET_SHAPES)], c, rank=1 + i % 3)
        for i, c in enumerate(children)
    ]


def _local_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# --- properties -------------------------------------------------------------
# Each takes (seed, tol) and returns the list of margins.


def prop_trace_norm_dominates_trace(seed, tol):
    out = []
    rng = np.random.default_rng(seed)
    for n in (2, 3, 5, 8):
        for _ in range(10):
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            out.append(tol["slack"] + numlin.trace_norm(m) - abs(np.trace(m)))
    return out


def prop_partial_transpose_norm_symmetry(seed, tol):
    out = []
    for rho in _density_fleet(seed, 40):
        n1 = numlin.trace_norm(numlin.partial_transpose(rho.matrix, rho.shape, 1))
        n2 = numlin.trace_norm(numlin.partial_transpose(rho.matrix, rho.shape, 2))
        out.append(tol["identity"] - abs(n1 - n2))
    return out


def prop_partial_transpose_involution(seed, tol):
    out = []
    for rho in _density_fleet(seed, 40):
        for which in (1, 2):
            twice = numlin.partial_transpose(numlin.partial_transpose(rho.matrix, rho.shape, which), rho.shape, which)
            out.append(tol["exact"] - float(np.max(np.abs(twice - rho.matrix))))
    return out


def prop_singular_values_of_psd(seed, tol):
    out = []
    for rho in _density_fleet(seed, 40):
        sv = numlin.singular_values(rho.matrix)
        ev = numlin.hermitian_eigenvalues(rho.matrix)
        out.append(tol["identity"] - float(np.max(np.abs(sv - ev))))
    return out


def prop_reduced_spectra_match_schmidt(seed, tol):
    out = []
    for psi in _pure_fleet(seed, 60):
        spec = states.schmidt_decompose(psi)
        rho = states.pure_to_density(psi)
        for keep in (1, 2):
            ev = numlin.hermitian_eigenvalues(numlin.partial_trace(rho.matrix, psi.shape, keep))[: spec.rank]
            out.append(tol["spectrum"] - float(np.max(np.abs(ev - spec.eigenvalues))))
    return out


def prop_schmidt_reconstruction(seed, tol):
    out = []
    for psi in _pure_fleet(seed, 100):
        spec = states.schmidt_decompose(psi)
        diff = np.linalg.norm(spec.reconstruct().vector - psi.vector)
        out.append(tol["spectrum"] - diff)
        out.append(tol["identity"] - abs(float(np.sum(spec.eigenvalues)) - 1.0))
    return out


def _source_fleet(seed, n):
    items = []
    for psi in _pure_fleet(seed, n):
        spec = states.schmidt_decompose(psi)
        for side in ("left", "right"):
            for s in (1, 2, 3):
                items.append((psi, spec, side, s))
    return items


def prop_dilation_identity(seed, tol):
    items = _source_fleet(seed, 20)
    trial_seeds = seed.spawn(len(items))

    def run(args):
        (psi, spec, side, s), ts = args
        t = srcop.build_source_operator(spec, side, s)
        rep = srcop.verify_dilation(t, states.pure_to_density(psi), trials=20, seed=ts)
        return tol["dilation"] * rep.scale - rep.max_residual

    return parallel_map(run, list(zip(items, trial_seeds)))


def prop_source_norm_chain(seed, tol):
    out = []
    for psi, spec, side, s in _source_fleet(seed, 20):
        t = srcop.build_source_operator(spec, side, s)
        eq26 = srcop.source_trace_norm_bound(spec)
        out.append(tol["slack"] + eq26 - t.trace_norm())
        out.append(tol["slack"] + (2 * spec.rank - 1) - eq26)
        out.append(tol["slack"] + (2 * psi.shape.min_dim - 1) - (2 * spec.rank - 1))
        out.append(tol["identity"] - abs(t.trace - 1.0))
    return out


def prop_polarization(seed, tol):
    out = []
    rng = np.random.default_rng(seed)
    for d in (2, 3, 4):
        basis = _local_unitary(d, rng)
        for k in range(d):
            for k1 in range(d):
                w1 = srcop.polarization_block(basis, k, k1, 1)
                out.append(tol["polarization"] - float(np.max(np.abs(w1 - np.outer(basis[:, k], basis[:, k1].conj())))))
                for s in (2, 3):
                    w = srcop.polarization_block(basis, k, k1, s)
                    wt = srcop.polarization_block(basis, k1, k, s)
                    out.append(tol["polarization"] - float(np.max(np.abs(w.conj().T - wt))))
    return out


def prop_bound_ordering(seed, tol):
    out = []
    for i, psi in enumerate(_pure_fleet(seed, 100)):
        spec = states.schmidt_decompose(psi)
        s1, s2 = 1 + i % 4, 1 + (i // 4) % 4
        by_sum, by_rank = bounds.bound_schmidt(spec, s1, s2)
        dim = bounds.bound_dim_setting(psi.shape.d1, psi.shape.d2, s1, s2)
        out.append(tol["slack"] + by_rank - by_sum)
        out.append(tol["slack"] + dim - by_rank)
        out.append(tol["slack"] + min(by_sum, by_rank) - 1.0)
    return out


def prop_chsh_sandwich(seed, tol):
    fleet = _pure_fleet(seed, 20)
    children = seed.spawn(len(fleet))

    def run(args):
        psi, c = args
        spec = states.schmidt_decompose(psi)
        ratio = chsh.chsh_lower_bound(psi, restarts=5, seed=c)
        rep = bounds.assemble_report(spec, chsh_lower=ratio, dims=(psi.shape.d1, psi.shape.d2))
        return [tol["slack"] + rep.upper - ratio, tol["slack"] + chsh.TSIRELSON_RATIO - ratio]

    return [m for pair in parallel_map(run, list(zip(fleet, children))) for m in pair]


def prop_negativity_routes(seed, tol):
    out = []
    for psi in _pure_fleet(seed, 100):
        spec = states.schmidt_decompose(psi)
        n_pt = entmeas.negativity(states.pure_to_density(psi))
        out.append(tol["negativity"] - abs(n_pt - entmeas.negativity_pure(spec)))
    return out


def prop_negativity_local_unitary(seed, tol):
    out = []
    rng = np.random.default_rng(seed.spawn(1)[0])
    for psi in _pure_fleet(seed, 40):
        u = _local_unitary(psi.shape.d1, rng)
        v = _local_unitary(psi.shape.d2, rng)
        moved = states.PureBipartiteState(u @ psi.amplitudes @ v.T)
        n0 = entmeas.negativity(states.pure_to_density(psi))
        n1 = entmeas.negativity(states.pure_to_density(moved))
        out.append(tol["negativity"] - abs(n0 - n1))
    return out


def prop_concurrence_negativity_inequalities(seed, tol):
    out = []
    for psi in _pure_fleet(seed, 100):
        spec = states.schmidt_decompose(psi)
        out.append(tol["slack"] + entmeas.check_lemma1(spec, psi.shape.min_dim))
        out.append(tol["slack"] + entmeas.check_eq47(spec))
    return out


def prop_concurrence_forms(seed, tol):
    out = []
    for psi in _pure_fleet(seed, 100):
        spec = states.schmidt_decompose(psi)
        d = psi.shape.min_dim
        out.append(tol["identity"] - abs(entmeas.concurrence_pure(spec, d) - entmeas.concurrence_pairwise(spec, d)))
    return out


def prop_nonlocality_entanglement_relations(seed, tol):
    fleet = _pure_fleet(seed, 20)
    children = seed.spawn(len(fleet))

    def run(args):
        psi, c = args
        spec = states.schmidt_decompose(psi)
        lb = chsh.chsh_lower_bound(psi, restarts=5, seed=c)
        return list(entmeas.check_prop1_and_thm3(spec, psi.shape.min_dim, lb).values())

    out = [tol["slack"] + s for group in parallel_map(run, list(zip(fleet, children))) for s in group]
    for alpha in COHERENT_ALPHAS:
        spec = coherent.CoherentPairSpec(1, alpha)
        rep = coherent.coherent_measures(spec, coherent.coherent_chsh_ratio(spec))
        out.extend(tol["slack"] + s for s in rep.relation_residuals.values())
    return out


def prop_coherent_spectra(seed, tol):
    out = []
    for family in (1, 2):
        for alpha in COHERENT_ALPHAS:
            spec = coherent.CoherentPairSpec(family, alpha)
            num = coherent.numeric_spectrum(spec).eigenvalues
            ana = coherent.analytic_spectrum(spec).eigenvalues
            out.append(tol["spectrum"] - float(np.max(np.abs(num - ana))) if num.size == 2 else -math.inf)
    return out


def prop_coherent_identities(seed, tol):
    out = []
    for alpha in np.linspace(0.05, 3.0, 50):
        lp, lm = coherent.analytic_eigenvalues(alpha)
        out.append(tol["identity"] - abs(lp**2 + lm**2 - coherent.sum_squared_eigenvalues(alpha)))
        n, c = coherent.coherent_negativity(alpha), coherent.coherent_concurrence(alpha)
        out.append(tol["identity"] - abs(c - math.sqrt(2.0) * n))
        sq = (math.sqrt(lp) + math.sqrt(lm)) ** 2
        out.append(tol["identity"] - abs(2.0 * sq - 1.0 - coherent.prop2_bound(alpha)))
    return out


def prop_coherent_bound_monotone(seed, tol):
    grid = np.linspace(0.01, 4.0, 200)
    values = [coherent.prop2_bound(a) for a in grid]
    out = [tol["slack"] + v - 1.0 for v in values]
    out += [tol["slack"] + b - a for a, b in zip(values, values[1:])]
    return out


def prop_seesaw_matches_oracle(seed, tol):
    shape = BipartiteShape(2, 2)
    children = seed.spawn(40)

    def run(args):
        i, c = args
        rho = states.pure_to_density(states.random_pure_state(shape, c)) if i % 2 == 0 else states.random_density(shape, c, rank=1 + i % 4)
        res = chsh.seesaw_chsh(rho, seed=c)
        oracle = max(1.0, chsh.horodecki_oracle(rho) / 2.0)
        steps = [b - a for a, b in zip(res.history, res.history[1:])]
        return [
            tol["oracle"] - abs(res.violation_ratio - oracle),
            tol["slack"] + chsh.TSIRELSON_RATIO - res.violation_ratio,
            tol["slack"] + min(steps, default=0.0),
        ]

    return [m for group in parallel_map(run, list(enumerate(children))) for m in group]


PROPERTIES = [
    ("numlin.trace_norm_dominates_trace", "slack", prop_trace_norm_dominates_trace),
    ("numlin.partial_transpose_norm_symmetry", "identity", prop_partial_transpose_norm_symmetry),
    ("numlin.partial_transpose_involution", "exact", prop_partial_transpose_involution),
    ("numlin.singular_values_of_psd", "identity", prop_singular_values_of_psd),
    ("states.reduced_spectra_match_schmidt", "spectrum", prop_reduced_spectra_match_schmidt),
    ("states.schmidt_reconstruction", "spectrum", prop_schmidt_reconstruction),
    ("srcop.dilation_identity", "dilation", prop_dilation_identity),
    ("srcop.trace_norm_chain", "slack", prop_source_norm_chain),
    ("srcop.polarization_blocks", "polarization", prop_polarization),
    ("bounds.ordering", "slack", prop_bound_ordering),
    ("bounds.chsh_sandwich", "slack", prop_chsh_sandwich),
    ("entmeas.negativity_routes", "negativity", prop_negativity_routes),
    ("entmeas.negativity_local_unitary", "negativity", prop_negativity_local_unitary),
    ("entmeas.concurrence_negativity_inequalities", "slack", prop_concurrence_negativity_inequalities),
    ("entmeas.concurrence_forms", "identity", prop_concurrence_forms),
    ("entmeas.nonlocality_relations", "slack", prop_nonlocality_entanglement_relations),
    ("coherent.analytic_vs_numeric", "spectrum", prop_coherent_spectra),
    ("coherent.closed_form_identities", "identity", prop_coherent_identities),
    ("coherent.bound_monotone", "slack", prop_coherent_bound_monotone),
    ("chsh.seesaw_vs_oracle", "oracle", prop_seesaw_matches_oracle),
]


def run_selftest(seed: int = 0, tol: dict[str, float] | None = None) -> list[PropertyResult]:
    from .tolerances import DEFAULTS

    tol = dict(DEFAULTS if tol is None else tol)
    children = np.random.SeedSequence(seed).spawn(len(PROPERTIES))
    results = []
    for (name, tol_name, fn), child in zip(PROPERTIES, children):
        margins = fn(child, tol)
        results.append(PropertyResult(name, tol_name, len(margins), float(min(margins))))
    return results
