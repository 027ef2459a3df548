"""Explicit setting source operators of a pure bipartite state.

A source operator ``T`` on ``H1^{(x)S1} (x) H2^{(x)S2}`` reproduces every
single-slot expectation of the state::

    tr[T (I..X1..I (x) I..X2..I)] = tr[rho (X1 (x) X2)]

for all bounded ``X1``, ``X2`` and every slot position. Its trace norm bounds
the maximal Bell violation of the state from above. Only the one-sided
dilations ``S1 x 1`` and ``1 x S2`` have explicit forms here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map, seed_sequence
from .errors import BelgaugeError, DimensionCapError, IndexOutOfRangeError, ShapeMismatchError
from .numlin import BipartiteShape, hermitian_eigenvalues, kron_power, reduce_to_slots
from .states import DensityOperator, SchmidtSpectrum

DIMENSION_CAP = 4096
DILATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SourceOperator:
    matrix: np.ndarray
    s1: int
    s2: int
    shape: BipartiteShape

    @property
    def factor_dims(self) -> list[int]:
        return [self.shape.d1] * self.s1 + [self.shape.d2] * self.s2

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.matrix)

    def trace_norm(self) -> float:
        # self-adjoint by construction: sum of |eigenvalues|
        return float(np.sum(np.abs(self.eigenvalues())))


@dataclass(frozen=True)
class DilationReport:
    s1: int
    s2: int
    trials: int
    max_residual: float
    scale: float
    trace: float
    trace_norm: float
    bound_eq26: float | None
    passed: bool

    def to_json(self) -> dict:
        return {
            "s1": self.s1,
            "s2": self.s2,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "trace": self.trace,
            "trace_norm": self.trace_norm,
            "bound_eq26": self.bound_eq26,
            "pass": self.passed,
        }


def _projector(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def polarization_block(basis: np.ndarray, k: int, k1: int, s: int) -> np.ndarray:
    """The ``s``-fold block standing in for ``|e_k><e_k1|`` in the source operator.

    ``basis`` holds orthonormal vectors as columns. For ``k == k1`` this is the
    projector power ``(|e_k><e_k|)^{(x)s}``. For ``k != k1`` it is the
    polarization combination of the four projector powers built from
    ``e_k +- e_k1`` and ``e_k +- i e_k1``, each weighted by ``2^-(s+1)``;
    tracing out any ``s - 1`` of its factors leaves ``|e_k><e_k1|``.
    """
    basis = np.asarray(basis, dtype=np.complex128)
    r = basis.shape[1]
    if not (0 <= k < r and 0 <= k1 < r):
        raise IndexOutOfRangeError(f"indices ({k}, {k1}) outside 0..{r - 1}")
    if s < 1:
        raise BelgaugeError(f"settings count must be >= 1, got {s}")
    e, f = basis[:, k], basis[:, k1]
    if k == k1:
        return kron_power(_projector(e), s)
    w = 2.0 ** -(s + 1)
    return w * (
        kron_power(_projector(e + f), s)
        - kron_power(_projector(e - f), s)
        + 1j * kron_power(_projector(e + 1j * f), s)
        - 1j * kron_power(_projector(e - 1j * f), s)
    )


def dilated_side(shape: BipartiteShape, side: str, s: int) -> int:
    if side == "left":
        return shape.d1**s * shape.d2
    if side == "right":
        return shape.d1 * shape.d2**s
    raise BelgaugeError(f"side must be 'left' or 'right', got {side!r}")


def build_source_operator(
    spec: SchmidtSpectrum, side: str, s: int, cap: int = DIMENSION_CAP
) -> SourceOperator:
    """Source operator dilating site 1 (``side="left"``, ``S1 x 1``) or site 2 (``"right"``, ``1 x S2``)."""
    if s < 1:
        raise BelgaugeError(f"settings count must be >= 1, got {s}")
    n = dilated_side(spec.shape, side, s)
    if n > cap:
        raise DimensionCapError(f"dilated dimension {n} exceeds the cap {cap}")
    c = spec.coefficients
    t = np.zeros((n, n), dtype=np.complex128)
    dilated = spec.left_basis if side == "left" else spec.right_basis
    plain = spec.right_basis if side == "left" else spec.left_basis
    for k in range(spec.rank):
        for k1 in range(spec.rank):
            block = polarization_block(dilated, k, k1, s)
            outer = np.outer(plain[:, k], plain[:, k1].conj())
            term = np.kron(block, outer) if side == "left" else np.kron(outer, block)
            t += c[k] * c[k1] * term
    s1, s2 = (s, 1) if side == "left" else (1, s)
    return SourceOperator(0.5 * (t + t.conj().T), s1, s2, spec.shape)


def source_trace_norm_bound(spec: SchmidtSpectrum) -> float:
    """``2 (sum_k sqrt(lambda_k))^2 - 1``, independent of the number of settings."""
    return 2.0 * spec.coefficient_sum**2 - 1.0


def random_bounded_operator(d: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian matrix, rescaled to operator norm 1 if it exceeds 1."""
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    norm = np.linalg.norm(x, 2)
    return x / norm if norm > 1.0 else x


def slot_marginals(t: SourceOperator) -> dict[tuple[int, int], np.ndarray]:
    """Two-slot reductions of ``T`` for every (site-1 slot, site-2 slot) pair.

    ``tr[M (X1 (x) X2)]`` for the reduction ``M`` equals the left-hand side of the
    dilation identity with ``X1`` at that site-1 slot and ``X2`` at that site-2
    slot, identities elsewhere.
    """
    dims = t.factor_dims
    return {
        (k1, k2): reduce_to_slots(t.matrix, dims, (k1, t.s1 + k2))
        for k1 in range(t.s1)
        for k2 in range(t.s2)
    }


def verify_dilation(
    t: SourceOperator,
    rho: DensityOperator,
    trials: int = 100,
    seed=0,
    tol: float = DILATION_TOL,
    bound: float | None = None,
) -> DilationReport:
    """Check the dilation identity on ``trials`` random operator pairs at every slot position.

    Trial ``i`` draws from the ``i``-th spawned child of ``seed`` so the report is the
    same whether trials run serially or in threads. Passes iff the largest
    absolute residual is at most ``tol * scale`` with ``scale = ||T||_1``.
    """
    if t.shape != rho.shape:
        raise ShapeMismatchError(f"source operator built for {t.shape}, state has {rho.shape}")
    marginals = slot_marginals(t)
    d1, d2 = rho.shape.d1, rho.shape.d2
    children = seed_sequence(seed).spawn(trials)

    def one_trial(child) -> float:
        rng = np.random.default_rng(child)
        x1 = random_bounded_operator(d1, rng)
        x2 = random_bounded_operator(d2, rng)
        x = np.kron(x1, x2)
        rhs = np.trace(rho.matrix @ x)
        return max(abs(np.trace(m @ x) - rhs) for m in marginals.values())

    residuals = parallel_map(one_trial, children)
    worst = float(max(residuals)) if residuals else 0.0
    norm = t.trace_norm()
    scale = max(1.0, norm)
    return DilationReport(
        s1=t.s1,
        s2=t.s2,
        trials=trials,
        max_residual=worst,
        scale=scale,
        trace=t.trace,
        trace_norm=norm,
        bound_eq26=bound,
        passed=worst <= tol * scale,
    )
