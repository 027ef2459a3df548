"""Negativity, pure-state concurrence and their relations to the nonlocality measure.

Every inequality is reported as a signed slack (left side minus right side),
so a negative slack larger than the tolerance means the relation failed.
A local dimension of ``None`` stands for an infinite-dimensional space; the
concurrence normalization ``d / (d - 1)`` then becomes 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooSmallError, InvalidLowerBoundError, InvalidStateError
from .numlin import partial_transpose, trace_norm
from .states import DensityOperator, SchmidtSpectrum

SLACK_TOL = 1e-9


def negativity(rho: DensityOperator, which: int = 1) -> float:
    """``(||rho^{T_n}||_1 - 1) / 2`` from the partial transpose on subsystem ``which``."""
    if not isinstance(rho, DensityOperator):
        raise InvalidStateError("negativity needs a DensityOperator")
    pt = partial_transpose(rho.matrix, rho.shape, which)
    return 0.5 * (trace_norm(pt, hermitian=True) - 1.0)


def negativity_pure(spec: SchmidtSpectrum) -> float:
    return 0.5 * (spec.coefficient_sum**2 - 1.0)


def _dim_factor(d: int | None) -> float:
    return 1.0 if d is None else d / (d - 1.0)


def concurrence_pure(spec: SchmidtSpectrum, d: int | None) -> float:
    """Pure-state concurrence ``sqrt(d/(d-1) * (1 - sum lambda^2))``, normalized to 1 at maximal entanglement."""
    if d is not None and d < 2:
        if spec.rank > 1:
            raise DimensionTooSmallError("an entangled spectrum needs d >= 2")
        return 0.0
    lam = spec.eigenvalues
    return math.sqrt(_dim_factor(d) * max(0.0, 1.0 - float(np.sum(lam**2))))


def concurrence_pairwise(spec: SchmidtSpectrum, d: int | None) -> float:
    """Same quantity through ``sum_{k != m} lambda_k lambda_m``."""
    if d is not None and d < 2:
        return 0.0
    lam = spec.eigenvalues
    cross = float(np.sum(np.outer(lam, lam)) - np.sum(lam**2))
    return math.sqrt(_dim_factor(d) * max(0.0, cross))


def _rank_factor(spec: SchmidtSpectrum, d: int | None) -> float:
    r = spec.rank
    return math.sqrt(_dim_factor(d) / (r * (r - 1)))


def check_lemma1(spec: SchmidtSpectrum, d: int | None) -> float:
    """Slack of ``C >= 2 sqrt(d / ((d-1) r (r-1))) N``; zero for product states."""
    if spec.rank < 2:
        return 0.0
    return concurrence_pure(spec, d) - 2.0 * _rank_factor(spec, d) * negativity_pure(spec)


def check_eq47(spec: SchmidtSpectrum) -> float:
    """Slack of ``2 r (r-1) sum_{k!=m} lambda_k lambda_m >= 2 ((sum sqrt(lambda))^2 - 1)^2``."""
    lam = spec.eigenvalues
    r = spec.rank
    cross = float(np.sum(np.outer(lam, lam)) - np.sum(lam**2))
    return 2.0 * r * (r - 1) * cross - 2.0 * (spec.coefficient_sum**2 - 1.0) ** 2


def check_prop1_and_thm3(
    spec: SchmidtSpectrum, d: int | None, lower_bound: float
) -> dict[str, float]:
    """Slacks of the negativity and concurrence lower bounds, evaluated at a certified ``lower_bound <= Upsilon``.

    Since the right-hand sides grow with the violation, any value not exceeding
    the true maximal violation must leave every slack nonnegative.
    """
    if not lower_bound >= 1.0:
        raise InvalidLowerBoundError(f"lower bound on the violation must be >= 1, got {lower_bound!r}")
    excess = lower_bound - 1.0
    n = negativity_pure(spec)
    c = concurrence_pure(spec, d)
    if spec.rank >= 2:
        slack_49_1 = c - 0.5 * _rank_factor(spec, d) * excess
    else:
        slack_49_1 = c if excess <= SLACK_TOL else -math.inf
    if d is None or d < 2:
        slack_51 = c
    else:
        slack_51 = c - excess / (2.0 * (d - 1))
    return {"eq49": n - excess / 4.0, "eq49_1": slack_49_1, "eq51": slack_51}


@dataclass(frozen=True)
class EntanglementReport:
    negativity: float
    concurrence: float
    dim_factor: int | None
    rank: int
    relation_residuals: dict[str, float] = field(default_factory=dict)

    def worst_slack(self) -> float:
        return min(self.relation_residuals.values(), default=0.0)

    def to_json(self) -> dict:
        return {
            "negativity": self.negativity,
            "concurrence": self.concurrence,
            "dim_factor": "infinite" if self.dim_factor is None else self.dim_factor,
            "rank": self.rank,
            "relation_residuals": dict(self.relation_residuals),
        }


def entanglement_report(
    spec: SchmidtSpectrum,
    d: int | None,
    lower_bound: float = 1.0,
    rho: DensityOperator | None = None,
) -> EntanglementReport:
    """Measures and relation slacks of a pure state.

    If ``rho`` is given the negativity comes from its partial transpose;
    otherwise from the Schmidt coefficients.
    """
    neg = negativity(rho) if rho is not None else negativity_pure(spec)
    slacks = {"eq46": check_lemma1(spec, d), "eq47": check_eq47(spec)}
    slacks.update(check_prop1_and_thm3(spec, d, lower_bound))
    return EntanglementReport(
        negativity=neg,
        concurrence=concurrence_pure(spec, d),
        dim_factor=d,
        rank=spec.rank,
        relation_residuals=slacks,
    )
