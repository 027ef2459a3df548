"""Entangled coherent states ``|a>|a> + |-a>|-a>`` (family 1) and ``|a>|-a> + |-a>|a>`` (family 2).

Two independent routes to the same quantities:

* closed forms in ``x = exp(-4 a^2)`` from the two-dimensional span of
  ``|a>`` and ``|-a>``;
* a truncated Fock-space pipeline that builds the state numerically and
  runs the generic Schmidt decomposition.

Known inconsistency in the source formulas: the concurrence tends to
``1/sqrt(2)`` as ``a -> inf`` (that is what the closed form gives), not
``1/(2 sqrt(2))``. The closed form for ``sum lambda^2`` is
``1/2 + 2 x / (1 + x)^2``; a version with ``exp(-2 a^2)`` in the numerator
does not match the eigenvalues and is not used.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .chsh import horodecki_oracle
from .entmeas import EntanglementReport, check_eq47, check_lemma1, check_prop1_and_thm3
from .errors import BelgaugeError, CutoffTooSmallError
from .numlin import BipartiteShape
from .states import PureBipartiteState, SchmidtSpectrum, pure_to_density, schmidt_decompose

MAX_TAIL = 1e-6
CSV_HEADER = (
    "alpha",
    "lambda_plus",
    "lambda_minus",
    "negativity",
    "concurrence",
    "bound_eq63",
    "bound_numeric",
    "chsh_lower",
)


def default_cutoff(alpha: float) -> int:
    return math.ceil(8.0 * alpha**2 + 40.0)


@dataclass(frozen=True)
class CoherentPairSpec:
    family: int
    alpha: float
    fock_cutoff: int | None = None

    def __post_init__(self):
        if self.family not in (1, 2):
            raise BelgaugeError(f"family must be 1 or 2, got {self.family!r}")
        if not self.alpha > 0:
            raise BelgaugeError(f"alpha must be positive, got {self.alpha!r}")
        if self.fock_cutoff is not None and self.fock_cutoff < 1:
            raise BelgaugeError(f"Fock cutoff must be positive, got {self.fock_cutoff!r}")

    @property
    def cutoff(self) -> int:
        return self.fock_cutoff if self.fock_cutoff is not None else default_cutoff(self.alpha)


def truncation_tail(alpha: float, cutoff: int) -> float:
    """Norm deficit ``sum_{m >= cutoff} |<m|alpha>|^2``, a Poisson tail with mean ``alpha^2``."""
    return float(poisson.sf(cutoff - 1, alpha**2))


def coherent_vector(alpha: float, cutoff: int, max_tail: float = MAX_TAIL) -> np.ndarray:
    """Coherent state ``|alpha>`` (``alpha`` may be negative) on Fock levels ``0..cutoff-1``, renormalized."""
    if cutoff < 1:
        raise CutoffTooSmallError(f"cutoff must be >= 1, got {cutoff}")
    tail = truncation_tail(alpha, cutoff)
    if tail > max_tail:
        raise CutoffTooSmallError(f"cutoff {cutoff} leaves truncation tail {tail:.3g} at alpha={alpha}")
    m = np.arange(cutoff)
    a = abs(alpha)
    if a == 0.0:
        v = (m == 0).astype(float)
    else:
        v = np.exp(-0.5 * a * a + m * math.log(a) - 0.5 * gammaln(m + 1))
        if alpha < 0:
            v = v * np.where(m % 2 == 0, 1.0, -1.0)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def _x(alpha: float) -> float:
    return math.exp(-4.0 * alpha * alpha)


def analytic_eigenvalues(alpha: float) -> tuple[float, float]:
    """``lambda_+-`` = ``(1 +- exp(-2 a^2))^2 / (2 (1 + exp(-4 a^2)))``, same for both families."""
    one_minus_c = -math.expm1(-2.0 * alpha * alpha)
    denom = 2.0 * (1.0 + _x(alpha))
    return (2.0 - one_minus_c) ** 2 / denom, one_minus_c**2 / denom


def span_amplitudes(spec: CoherentPairSpec) -> np.ndarray:
    """2x2 amplitude matrix of the state in the orthonormal basis ``u1 = |a>``, ``u2`` (Gram-Schmidt of ``|-a>``)."""
    x = _x(spec.alpha)
    c = math.exp(-2.0 * spec.alpha**2)
    s = math.sqrt(-math.expm1(-4.0 * spec.alpha**2))
    norm = math.sqrt(2.0 * (1.0 + x))
    if spec.family == 1:
        m = [[1.0 + x, c * s], [c * s, -math.expm1(-4.0 * spec.alpha**2)]]
    else:
        m = [[2.0 * c, s], [s, 0.0]]
    return np.array(m, dtype=np.complex128) / norm


def span_state(spec: CoherentPairSpec) -> PureBipartiteState:
    """The exactly rank-2 two-qubit form of the state (no truncation)."""
    amps = span_amplitudes(spec)
    return PureBipartiteState(amps / np.linalg.norm(amps))


def analytic_spectrum(spec: CoherentPairSpec) -> SchmidtSpectrum:
    """Rank-2 spectrum with closed-form coefficients; bases are those of :func:`span_state`."""
    lp, lm = analytic_eigenvalues(spec.alpha)
    bases = schmidt_decompose(span_state(spec), cutoff=0.0)
    return SchmidtSpectrum(
        np.array([math.sqrt(lp), math.sqrt(lm)]),
        bases.left_basis[:, :2],
        bases.right_basis[:, :2],
        BipartiteShape(2, 2),
    )


def gram_schmidt_basis(alpha: float, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """``u1 = |alpha>`` and the normalized component ``u2`` of ``|-alpha>`` orthogonal to it."""
    u1 = coherent_vector(alpha, cutoff)
    minus = coherent_vector(-alpha, cutoff)
    w = minus - np.vdot(u1, minus) * u1
    return u1, w / np.linalg.norm(w)


def fock_state(spec: CoherentPairSpec) -> PureBipartiteState:
    """The state built directly in the truncated Fock space ``N x N``."""
    plus = coherent_vector(spec.alpha, spec.cutoff)
    minus = coherent_vector(-spec.alpha, spec.cutoff)
    if spec.family == 1:
        amps = np.outer(plus, plus) + np.outer(minus, minus)
    else:
        amps = np.outer(plus, minus) + np.outer(minus, plus)
    return PureBipartiteState(amps / np.linalg.norm(amps))


def numeric_spectrum(spec: CoherentPairSpec, cutoff: float = 1e-12) -> SchmidtSpectrum:
    """Schmidt spectrum of :func:`fock_state` via SVD; independent of the closed forms."""
    return schmidt_decompose(fock_state(spec), cutoff=cutoff)


def prop2_bound(alpha: float) -> float:
    """Upper bound ``(3 - x) / (1 + x)`` with ``x = exp(-4 a^2)`` on the maximal violation."""
    if not alpha > 0:
        raise BelgaugeError(f"alpha must be positive, got {alpha!r}")
    x = _x(alpha)
    return (3.0 - x) / (1.0 + x)


def sum_squared_eigenvalues(alpha: float) -> float:
    x = _x(alpha)
    return 0.5 + 2.0 * x / (1.0 + x) ** 2


def coherent_negativity(alpha: float) -> float:
    x = _x(alpha)
    return 0.5 * (-math.expm1(-4.0 * alpha * alpha)) / (1.0 + x)


def coherent_concurrence(alpha: float) -> float:
    """Concurrence with the infinite-dimensional normalization; equals ``sqrt(2)`` times the negativity."""
    x = _x(alpha)
    return (-math.expm1(-4.0 * alpha * alpha)) / (math.sqrt(2.0) * (1.0 + x))


def coherent_measures(spec: CoherentPairSpec, lower_bound: float = 1.0) -> EntanglementReport:
    """Closed-form negativity and concurrence plus the relation slacks for a certified ``lower_bound``."""
    schmidt = analytic_spectrum(spec)
    slacks = {"eq46": check_lemma1(schmidt, None), "eq47": check_eq47(schmidt)}
    slacks.update(check_prop1_and_thm3(schmidt, None, lower_bound))
    return EntanglementReport(
        negativity=coherent_negativity(spec.alpha),
        concurrence=coherent_concurrence(spec.alpha),
        dim_factor=None,
        rank=2,
        relation_residuals=slacks,
    )


def coherent_chsh_ratio(spec: CoherentPairSpec) -> float:
    """CHSH ratio of the exact two-qubit form, clamped below at 1."""
    return max(1.0, horodecki_oracle(pure_to_density(span_state(spec))) / 2.0)


# --- scans ------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    lambda_plus: float
    lambda_minus: float
    negativity: float
    concurrence: float
    bound_eq63: float
    bound_numeric: float | None
    chsh_lower: float
    numeric_error: str | None = None

    def cells(self) -> list[str]:
        numeric = self.numeric_error if self.bound_numeric is None else _fmt(self.bound_numeric)
        return [
            _fmt(self.alpha),
            _fmt(self.lambda_plus),
            _fmt(self.lambda_minus),
            _fmt(self.negativity),
            _fmt(self.concurrence),
            _fmt(self.bound_eq63),
            numeric,
            _fmt(self.chsh_lower),
        ]

    def to_json(self) -> dict:
        doc = dict(zip(CSV_HEADER, (
            self.alpha, self.lambda_plus, self.lambda_minus, self.negativity,
            self.concurrence, self.bound_eq63, self.bound_numeric, self.chsh_lower,
        )))
        if self.numeric_error:
            doc["numeric_error"] = self.numeric_error
        return doc


def _fmt(x: float) -> str:
    return repr(float(x))


def scan_row(alpha: float, family: int = 1, cutoff: int | None = None) -> ScanRow:
    spec = CoherentPairSpec(family, alpha, cutoff)
    lp, lm = analytic_eigenvalues(alpha)
    try:
        numeric = numeric_spectrum(spec)
        bound_numeric, error = 2.0 * numeric.coefficient_sum**2 - 1.0, None
    except CutoffTooSmallError:
        bound_numeric, error = None, "cutoff_too_small"
    return ScanRow(
        alpha=alpha,
        lambda_plus=lp,
        lambda_minus=lm,
        negativity=coherent_negativity(alpha),
        concurrence=coherent_concurrence(alpha),
        bound_eq63=prop2_bound(alpha),
        bound_numeric=bound_numeric,
        chsh_lower=coherent_chsh_ratio(spec),
        numeric_error=error,
    )


def alpha_grid(start: float, stop: float, count: int) -> np.ndarray:
    if count < 2:
        raise BelgaugeError(f"grid needs at least 2 points, got {count}")
    if not (start > 0 and stop > 0):
        raise BelgaugeError("grid amplitudes must be positive")
    return np.linspace(start, stop, count)


def scan_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()
