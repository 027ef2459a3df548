"""Pure and mixed bipartite states, Schmidt decomposition and the JSON state file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BelgaugeError, InvalidStateError, NotNormalizedError, ShapeMismatchError
from .numlin import BipartiteShape, as_matrix, hermitian_eigh, hermitian_part

NORM_TOL = 1e-10
PURITY_TOL = 1e-8
SCHMIDT_CUTOFF = 1e-12


class StateFormatError(BelgaugeError):
    """A state file does not follow the expected JSON layout."""


@dataclass(frozen=True, eq=False)
class PureBipartiteState:
    """Amplitude matrix of a pure vector: entry ``(i, j)`` multiplies ``|i>|j>``."""

    amplitudes: np.ndarray
    shape: BipartiteShape = field(init=False)

    def __post_init__(self):
        a = as_matrix(self.amplitudes)
        norm2 = float(np.sum(np.abs(a) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalizedError(f"state has squared norm {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "shape", BipartiteShape(*a.shape))

    @classmethod
    def from_vector(cls, vector, shape: BipartiteShape, normalize: bool = False) -> PureBipartiteState:
        v = np.asarray(vector, dtype=np.complex128).ravel()
        if v.size != shape.dim:
            raise ShapeMismatchError(f"vector of length {v.size} does not fit shape {shape}")
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(v.reshape(shape.d1, shape.d2))

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    shape: BipartiteShape

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.shape.dim, self.shape.dim):
            raise ShapeMismatchError(f"density matrix of shape {m.shape} does not fit {self.shape}")
        try:
            m = hermitian_part(m, NORM_TOL)
        except BelgaugeError as exc:
            raise InvalidStateError("density matrix is not self-adjoint") from exc
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidStateError(f"density matrix has trace {tr!r}, expected 1")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -NORM_TOL:
            raise InvalidStateError(f"density matrix has negative eigenvalue {lowest!r}")
        object.__setattr__(self, "matrix", m)

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def is_pure(self, tol: float = PURITY_TOL) -> bool:
        return self.purity >= 1.0 - tol


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Schmidt coefficients (descending) with the local orthonormal vectors as columns."""

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    shape: BipartiteShape

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.coefficients**2

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)

    @property
    def coefficient_sum(self) -> float:
        """Sum of the Schmidt coefficients, the square root of the pure-state partial-transpose trace norm."""
        return float(np.sum(self.coefficients))

    def basis(self, which: int) -> np.ndarray:
        return self.left_basis if which == 1 else self.right_basis

    def reconstruct(self) -> PureBipartiteState:
        amps = (self.left_basis * self.coefficients) @ self.right_basis.T
        return PureBipartiteState(amps)

    @classmethod
    def from_eigenvalues(cls, eigenvalues, shape: BipartiteShape | None = None) -> SchmidtSpectrum:
        """Spectrum with given eigenvalues in the computational basis (``|k>|k>``)."""
        lam = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
        lam = lam[lam > 0]
        if abs(lam.sum() - 1.0) > NORM_TOL:
            raise NotNormalizedError(f"eigenvalues sum to {lam.sum()!r}, expected 1")
        r = lam.size
        shape = shape or BipartiteShape(r, r)
        if r > shape.min_dim:
            raise ShapeMismatchError(f"rank {r} exceeds min dimension of {shape}")
        return cls(
            np.sqrt(lam),
            np.eye(shape.d1, r, dtype=np.complex128),
            np.eye(shape.d2, r, dtype=np.complex128),
            shape,
        )


def schmidt_decompose(psi: PureBipartiteState, cutoff: float = SCHMIDT_CUTOFF) -> SchmidtSpectrum:
    """Schmidt decomposition of a pure state from the SVD of its amplitude matrix.

    Singular values at or below ``cutoff`` times the largest are dropped. Each
    left vector is rephased so that its first nonzero component is real and
    positive; the right vector absorbs the conjugate phase.
    """
    u, s, vh = np.linalg.svd(psi.amplitudes, full_matrices=False)
    keep = s > cutoff * s[0]
    s, u, v = s[keep], u[:, keep], vh[keep, :].T
    for k in range(s.size):
        col = u[:, k]
        lead = col[np.argmax(np.abs(col) > 1e-12 * np.max(np.abs(col)))]
        phase = lead / abs(lead)
        u[:, k] = col / phase
        v[:, k] = v[:, k] * phase
    return SchmidtSpectrum(s, u, v, psi.shape)


def pure_to_density(psi: PureBipartiteState) -> DensityOperator:
    v = psi.vector
    return DensityOperator(np.outer(v, v.conj()), psi.shape)


def density_to_pure(rho: DensityOperator, tol: float = PURITY_TOL) -> PureBipartiteState:
    """Recover the vector of a pure density operator; rejects mixed input."""
    if not rho.is_pure(tol):
        raise InvalidStateError(f"state is mixed (purity {rho.purity:.12g}); a pure state is required")
    _, vecs = hermitian_eigh(rho.matrix)
    return PureBipartiteState.from_vector(vecs[:, 0], rho.shape, normalize=True)


def random_pure_state(shape: BipartiteShape, seed) -> PureBipartiteState:
    """Normalized i.i.d. complex Gaussian amplitudes, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((shape.d1, shape.d2)) + 1j * rng.standard_normal((shape.d1, shape.d2))
    return PureBipartiteState(z / np.linalg.norm(z))


def random_density(shape: BipartiteShape, seed, rank: int | None = None) -> DensityOperator:
    """Random mixed state ``G G^dagger / tr`` from a complex Ginibre matrix ``G``."""
    rng = np.random.default_rng(seed)
    k = rank or shape.dim
    g = rng.standard_normal((shape.dim, k)) + 1j * rng.standard_normal((shape.dim, k))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real, shape)


def product_state(a, b) -> PureBipartiteState:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return PureBipartiteState(np.outer(a / np.linalg.norm(a), b / np.linalg.norm(b)))


def maximally_entangled(d: int) -> PureBipartiteState:
    return PureBipartiteState(np.eye(d, dtype=np.complex128) / np.sqrt(d))


# --- JSON state files -------------------------------------------------------


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(data, rows: int, cols: int, name: str = "data") -> np.ndarray:
    if not isinstance(data, list) or len(data) != rows:
        raise StateFormatError(f"field '{name}' must be a list of {rows} rows")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise StateFormatError(f"field '{name}' row {i} must have {cols} entries")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise StateFormatError(f"field '{name}' entry [{i}][{j}] must be a [re, im] pair of numbers")
            out[i, j] = complex(pair[0], pair[1])
    return out


def state_to_json(state: PureBipartiteState | DensityOperator) -> dict:
    if isinstance(state, PureBipartiteState):
        kind, m = "pure", state.amplitudes
    else:
        kind, m = "density", state.matrix
    return {"d1": state.shape.d1, "d2": state.shape.d2, "kind": kind, "data": matrix_to_json(m)}


def state_from_json(doc) -> PureBipartiteState | DensityOperator:
    if not isinstance(doc, dict):
        raise StateFormatError("state document must be a JSON object")
    for name in ("d1", "d2", "kind", "data"):
        if name not in doc:
            raise StateFormatError(f"missing field '{name}'")
    for name in ("d1", "d2"):
        value = doc[name]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise StateFormatError(f"field '{name}' must be a positive integer")
    shape = BipartiteShape(doc["d1"], doc["d2"])
    kind = doc["kind"]
    if kind == "pure":
        return PureBipartiteState(matrix_from_json(doc["data"], shape.d1, shape.d2))
    if kind == "density":
        return DensityOperator(matrix_from_json(doc["data"], shape.dim, shape.dim), shape)
    raise StateFormatError(f"field 'kind' must be 'pure' or 'density', got {kind!r}")


def load_state(path) -> PureBipartiteState | DensityOperator:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}") from exc
    return state_from_json(doc)


def dump_state(state: PureBipartiteState | DensityOperator, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state)) + "\n")
