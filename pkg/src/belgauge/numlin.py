"""Dense complex linear algebra on bipartite operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. A bipartite
index ``(i, j)`` of ``H1 (x) H2`` flattens to ``i * d2 + j``, the same
ordering ``numpy.kron`` produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import BelgaugeError, NotHermitianError, NotSquareError, ShapeMismatchError

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteShape:
    """Local dimensions ``(d1, d2)`` of ``H1 (x) H2``."""

    d1: int
    d2: int

    def __post_init__(self):
        for name in ("d1", "d2"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise BelgaugeError(f"{name} must be a positive integer, got {value!r}")

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    @property
    def min_dim(self) -> int:
        return min(self.d1, self.d2)

    def local(self, which: int) -> int:
        _check_subsystem(which)
        return self.d1 if which == 1 else self.d2


def as_matrix(m) -> np.ndarray:
    """Validate ``m`` as a finite 2-D complex matrix and return it as ``complex128``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise ShapeMismatchError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise BelgaugeError("matrix has non-finite entries")
    return a


def _square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {a.shape}")
    return a


def _check_subsystem(which: int) -> None:
    if which not in (1, 2):
        raise BelgaugeError(f"subsystem index must be 1 or 2, got {which!r}")


def _bipartite(m, shape: BipartiteShape) -> np.ndarray:
    a = _square(m)
    if a.shape[0] != shape.dim:
        raise ShapeMismatchError(
            f"operator side {a.shape[0]} does not match d1*d2 = {shape.d1}*{shape.d2}"
        )
    return a


def hermitian_part(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking ``m`` is Hermitian up to ``tol`` (relative to max entry)."""
    a = _square(m)
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.conj().T)) > tol * max(scale, np.finfo(float).tiny):
        raise NotHermitianError("matrix is not self-adjoint within tolerance")
    return 0.5 * (a + a.conj().T)


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order."""
    return np.linalg.eigvalsh(hermitian_part(m, tol))[::-1]


def hermitian_eigh(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian matrix, eigenvalues descending, vectors as columns."""
    w, v = np.linalg.eigh(hermitian_part(m, tol))
    return w[::-1], v[:, ::-1]


def singular_values(m) -> np.ndarray:
    """Singular values, nonnegative and descending."""
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def trace_norm(m, hermitian: bool | None = None) -> float:
    """Sum of singular values.

    For self-adjoint input the sum of absolute eigenvalues is used instead of an
    SVD. Pass ``hermitian=False`` to force the SVD route; with ``None`` the choice
    is made by checking self-adjointness.
    """
    a = _square(m)
    if hermitian is None:
        scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
        hermitian = np.max(np.abs(a - a.conj().T)) <= HERMITIAN_TOL * scale
    if hermitian:
        return float(np.sum(np.abs(hermitian_eigenvalues(a))))
    return float(np.sum(singular_values(a)))


def kron(a, b, *more) -> np.ndarray:
    """Kronecker product of two or more matrices, left factor most significant."""
    return reduce(np.kron, (as_matrix(x) for x in (a, b, *more)))


def kron_power(a, n: int) -> np.ndarray:
    """``a (x) a (x) ... (x) a`` with ``n >= 1`` factors."""
    if n < 1:
        raise BelgaugeError(f"tensor power needs n >= 1, got {n}")
    a = as_matrix(a)
    out = a
    for _ in range(n - 1):
        out = np.kron(out, a)
    return out


def partial_trace(m, shape: BipartiteShape, keep: int) -> np.ndarray:
    """Trace out one factor of ``H1 (x) H2``, keeping subsystem ``keep`` (1 or 2)."""
    _check_subsystem(keep)
    t = _bipartite(m, shape).reshape(shape.d1, shape.d2, shape.d1, shape.d2)
    if keep == 1:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_transpose(m, shape: BipartiteShape, which: int) -> np.ndarray:
    """Transpose the indices of subsystem ``which`` only."""
    _check_subsystem(which)
    d1, d2 = shape.d1, shape.d2
    t = _bipartite(m, shape).reshape(d1, d2, d1, d2)
    if which == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return np.ascontiguousarray(t).reshape(d1 * d2, d1 * d2)


def reduce_to_slots(m, dims: list[int], slots: tuple[int, ...]) -> np.ndarray:
    """Partial trace over every tensor factor of ``m`` except ``slots``.

    ``dims`` lists the local dimensions of all factors in order. The kept factors
    appear in the result in increasing slot order.
    """
    a = _square(m)
    n = len(dims)
    if int(np.prod(dims)) != a.shape[0]:
        raise ShapeMismatchError(f"factor dimensions {dims} do not multiply to {a.shape[0]}")
    t = a.reshape(*dims, *dims)
    kept = sorted(slots)
    pool = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(pool):
        raise BelgaugeError("too many tensor factors")
    row = [pool[i] for i in range(n)]
    col = [row[i] if i not in kept else pool[n + i] for i in range(n)]
    out = "".join(row[i] for i in kept) + "".join(col[i] for i in kept)
    dk = int(np.prod([dims[i] for i in kept]))
    return np.einsum(f"{''.join(row)}{''.join(col)}->{out}", t).reshape(dk, dk)
