"""CHSH lower bounds on nonlocality: see-saw optimization and the two-qubit closed form.

The CHSH combination is ``A1(B1 + B2) + A2(B1 - B2)`` with local bound 2, so the
violation ratio of a realized value is ``value / 2``. Any ratio obtained from
explicit observables is a certified lower bound on the maximal violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import seed_sequence
from .errors import DimensionCapError, NotTwoQubitError, RankTooSmallError
from .numlin import BipartiteShape
from .states import (
    DensityOperator,
    PureBipartiteState,
    SchmidtSpectrum,
    pure_to_density,
    schmidt_decompose,
)

SEESAW_DIM_CAP = 16
TSIRELSON_RATIO = float(np.sqrt(2.0))

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


@dataclass(frozen=True, eq=False)
class ChshResult:
    observables: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    chsh_value: float
    violation_ratio: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        from .states import matrix_to_json

        names = ("A1", "A2", "B1", "B2")
        return {
            "chsh_value": self.chsh_value,
            "violation_ratio": self.violation_ratio,
            "iterations": self.iterations,
            "converged": self.converged,
            "observables": {n: matrix_to_json(o) for n, o in zip(names, self.observables)},
        }


def chsh_operator(a1, a2, b1, b2) -> np.ndarray:
    return np.kron(a1, b1 + b2) + np.kron(a2, b1 - b2)


def chsh_expectation(rho: DensityOperator, a1, a2, b1, b2) -> float:
    return float(np.real(np.trace(rho.matrix @ chsh_operator(a1, a2, b1, b2))))


def _sign(m: np.ndarray) -> np.ndarray:
    """Batched ``sign`` of Hermitian matrices: ``V diag(+-1) V^dagger`` (zero maps to +1)."""
    h = 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))
    w, v = np.linalg.eigh(h)
    s = np.where(w >= 0.0, 1.0, -1.0)
    return (v * s[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def _random_observable(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return _sign(g + g.conj().T)


def seesaw_chsh(
    rho: DensityOperator,
    restarts: int = 20,
    seed=0,
    tol: float = 1e-12,
    max_iters: int = 500,
    cap: int = SEESAW_DIM_CAP,
) -> ChshResult:
    """Maximize the CHSH value by alternating exact maximization over each side.

    With Bob's pair fixed, Alice's optimum is the sign operator of the effective
    operator ``tr_2[rho (I (x) B)]`` and vice versa, so the value never decreases.
    Restart ``i`` is seeded from the ``i``-th spawned child of ``seed``; all
    restarts advance together as one batch and the best is returned, ties to the
    lowest restart index. A restart stops once a full sweep gains less than ``tol``.
    """
    d1, d2 = rho.shape.d1, rho.shape.d2
    if max(d1, d2) > cap:
        raise DimensionCapError(f"see-saw limited to local dimension {cap}, got {rho.shape}")
    r = rho.matrix.reshape(d1, d2, d1, d2)

    def alice_eff(b):  # tr_2[rho (I (x) B)] per restart
        return np.einsum("ijkl,nlj->nik", r, b)

    def bob_eff(a):
        return np.einsum("ijkl,nki->njl", r, a)

    def values(a1, a2, b1, b2):
        return np.real(
            np.einsum("nki,nik->n", a1, alice_eff(b1 + b2)) + np.einsum("nki,nik->n", a2, alice_eff(b1 - b2))
        )

    rngs = [np.random.default_rng(c) for c in seed_sequence(seed).spawn(restarts)]
    init = [[_random_observable(d, g) for d in (d1, d1, d2, d2)] for g in rngs]
    a1, a2, b1, b2 = (np.stack([obs[i] for obs in init]) for i in range(4))

    value = values(a1, a2, b1, b2)
    history = [value.copy()]
    active = np.ones(restarts, dtype=bool)
    iterations = np.zeros(restarts, dtype=int)
    for _ in range(max_iters):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        na1 = _sign(alice_eff(b1[idx] + b2[idx]))
        na2 = _sign(alice_eff(b1[idx] - b2[idx]))
        a1[idx], a2[idx] = na1, na2
        half = value.copy()
        half[idx] = values(a1[idx], a2[idx], b1[idx], b2[idx])
        history.append(half.copy())
        nb1 = _sign(bob_eff(a1[idx] + a2[idx]))
        nb2 = _sign(bob_eff(a1[idx] - a2[idx]))
        b1[idx], b2[idx] = nb1, nb2
        new = half.copy()
        new[idx] = values(a1[idx], a2[idx], b1[idx], b2[idx])
        history.append(new.copy())
        iterations[idx] += 1
        active[idx] = (new[idx] - value[idx]) >= tol
        value = new

    best = int(np.argmax(value))
    obs = (a1[best], a2[best], b1[best], b2[best])
    chsh_value = chsh_expectation(rho, *obs)
    return ChshResult(
        observables=obs,
        chsh_value=chsh_value,
        violation_ratio=chsh_value / 2.0,
        iterations=int(iterations[best]),
        converged=not bool(active[best]),
        history=[float(h[best]) for h in history],
    )


def correlation_matrix(rho: DensityOperator) -> np.ndarray:
    """Real 3x3 matrix ``t_ij = tr[rho (sigma_i (x) sigma_j)]`` of a two-qubit state."""
    if (rho.shape.d1, rho.shape.d2) != (2, 2):
        raise NotTwoQubitError(f"expected a two-qubit state, got {rho.shape}")
    t = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            t[i, j] = np.real(np.trace(rho.matrix @ np.kron(PAULI[i], PAULI[j])))
    return t


def horodecki_oracle(rho: DensityOperator) -> float:
    """Maximal CHSH value over spin observables of a two-qubit state, ``2 sqrt(u1 + u2)``.

    ``u1 >= u2`` are the two largest eigenvalues of ``T^T T`` for the correlation
    matrix ``T``. Divide by 2 for the violation ratio.
    """
    t = correlation_matrix(rho)
    u = np.sort(np.linalg.eigvalsh(t.T @ t))[::-1]
    return float(2.0 * np.sqrt(max(0.0, u[0] + u[1])))


@dataclass(frozen=True, eq=False)
class CompressedState:
    """A two-qubit state on the top-2 Schmidt block of a larger pure state.

    ``weight`` is the probability mass ``lambda_1 + lambda_2`` kept by the
    projection; ``left``/``right`` are the isometries into the original spaces.
    """

    state: PureBipartiteState
    weight: float
    left: np.ndarray
    right: np.ndarray

    def decompress(self) -> PureBipartiteState:
        return PureBipartiteState(self.left @ self.state.amplitudes @ self.right.T)


def schmidt_compress(psi: PureBipartiteState | SchmidtSpectrum, target_rank: int = 2) -> CompressedState:
    """Project onto the leading two Schmidt vectors on each side and renormalize."""
    spec = psi if isinstance(psi, SchmidtSpectrum) else schmidt_decompose(psi)
    if spec.rank < target_rank:
        raise RankTooSmallError(f"Schmidt rank {spec.rank} is below {target_rank}")
    c = spec.coefficients[:target_rank]
    weight = float(np.sum(c**2))
    amps = np.diag(c / np.sqrt(weight)).astype(np.complex128)
    return CompressedState(
        PureBipartiteState(amps),
        weight,
        spec.left_basis[:, :target_rank],
        spec.right_basis[:, :target_rank],
    )


def compressed_chsh_ratio(psi: PureBipartiteState | SchmidtSpectrum) -> float:
    """Certified CHSH ratio of a pure state through its top-2 Schmidt block.

    The optimal two-qubit observables act on the block and as the identity on its
    complement. The discarded weight ``1 - w`` then contributes the local value
    exactly, giving ``w * r2 + (1 - w)`` for block ratio ``r2``. Rank-1 states
    return 1.
    """
    spec = psi if isinstance(psi, SchmidtSpectrum) else schmidt_decompose(psi)
    if spec.rank < 2:
        return 1.0
    comp = schmidt_compress(spec)
    r2 = max(1.0, horodecki_oracle(pure_to_density(comp.state)) / 2.0)
    return comp.weight * r2 + (1.0 - comp.weight)


def chsh_lower_bound(
    state: PureBipartiteState | DensityOperator,
    restarts: int = 20,
    seed=0,
    cap: int = SEESAW_DIM_CAP,
) -> float:
    """Best certified CHSH ratio available for ``state``, clamped below at 1.

    Combines the closed form (two-qubit states), the Schmidt-block certificate
    (pure states) and the see-saw (local dimensions up to ``cap``).
    """
    candidates = [1.0]
    if isinstance(state, PureBipartiteState):
        candidates.append(compressed_chsh_ratio(state))
        rho = pure_to_density(state)
    else:
        rho = state
    if rho.shape == BipartiteShape(2, 2):
        candidates.append(horodecki_oracle(rho) / 2.0)
    if max(rho.shape.d1, rho.shape.d2) <= cap:
        candidates.append(seesaw_chsh(rho, restarts=restarts, seed=seed, cap=cap).violation_ratio)
    return max(candidates)
