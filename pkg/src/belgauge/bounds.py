"""Upper bounds on the maximal Bell violation and the bracket report.

Infinite local dimensions and the "any number of settings" case are both
written as ``None``. Each bound carries an equation tag in JSON output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SettingsTooSmallError
from .states import DensityOperator, PureBipartiteState, SchmidtSpectrum, schmidt_decompose

BRACKET_TOL = 1e-9


def bound_dim_setting(d1: int | None, d2: int | None, s1: int | None, s2: int | None) -> float | None:
    """``2 min{d1, d2, S1, S2} - 1`` over the finite arguments; ``None`` if all are infinite."""
    finite = [x for x in (d1, d2, s1, s2) if x is not None]
    if not finite:
        return None
    return 2.0 * min(finite) - 1.0


def bound_projective(d: int, s: int) -> float:
    """Bound for projective measurements with ``s`` settings per site on two ``d``-level systems."""
    if s < 2:
        raise SettingsTooSmallError(f"projective bound needs at least 2 settings, got {s}")
    if s == 2:
        return min(math.sqrt(d), 3.0)
    return min(d ** (s / 2.0), 2.0 * min(d, s) - 1.0)


def bound_schmidt(spec: SchmidtSpectrum, s1: int | None = None, s2: int | None = None) -> tuple[float, float]:
    """Pair of pure-state bounds: via the Schmidt coefficient sum and via the Schmidt rank.

    With ``s1 = s2 = None`` the setting counts drop out of both minima.
    """
    settings = [x for x in (s1, s2) if x is not None]
    by_sum = 2.0 * min([spec.coefficient_sum**2, *settings]) - 1.0
    by_rank = 2.0 * min([spec.rank, *settings]) - 1.0
    return by_sum, by_rank


@dataclass(frozen=True)
class NonlocalityReport:
    settings: tuple[int, int] | None
    bound_dim_setting: float | None
    bound_projective: float | None
    bound_schmidt_settings: float | None
    bound_schmidt_rank: float | None
    bound_corollary: float | None
    bound_corollary_rank: float | None
    chsh_lower: float | None
    lower: float
    upper: float | None

    @property
    def bracket(self) -> tuple[float, float | None]:
        return self.lower, self.upper

    def to_json(self) -> dict:
        return {
            "setting_counts": list(self.settings) if self.settings else "any",
            "bounds": {
                "eq01": self.bound_dim_setting,
                "eq02": self.bound_projective,
                "eq28": self.bound_schmidt_settings,
                "eq29": self.bound_schmidt_rank,
                "eq31": self.bound_corollary,
                "eq32": self.bound_corollary_rank,
            },
            "chsh_lower": self.chsh_lower,
            "bracket": [self.lower, self.upper],
        }


def assemble_report(
    state: PureBipartiteState | DensityOperator | SchmidtSpectrum,
    s1: int | None = None,
    s2: int | None = None,
    chsh_lower: float | None = None,
    dims: tuple[int | None, int | None] | None = None,
) -> NonlocalityReport:
    """Collect every applicable upper bound and the CHSH lower edge into one report.

    ``state`` may be a pure state, its Schmidt spectrum, or a mixed density
    operator (only the dimension/setting bounds apply then). ``dims`` overrides the
    local dimensions, e.g. ``(None, None)`` for infinite-dimensional states
    represented by their Schmidt data. ``chsh_lower`` is ignored when either
    setting count is below 2, since a two-setting violation says nothing there.
    """
    if isinstance(state, PureBipartiteState):
        spec = schmidt_decompose(state)
    elif isinstance(state, SchmidtSpectrum):
        spec = state
    else:
        spec = None
    d1, d2 = dims if dims is not None else (state.shape.d1, state.shape.d2)

    eq01 = bound_dim_setting(d1, d2, s1, s2)
    eq02 = None
    if s1 is not None and s1 == s2 and s1 >= 2 and d1 is not None and d1 == d2:
        eq02 = bound_projective(d1, s1)
    eq28 = eq29 = eq31 = eq32 = None
    if spec is not None:
        eq28, eq29 = bound_schmidt(spec, s1, s2)
        eq31, eq32 = bound_schmidt(spec)

    upper_candidates = [b for b in (eq01, eq28, eq29, eq31, eq32) if b is not None]
    upper = min(upper_candidates) if upper_candidates else None

    settings = (s1, s2) if s1 is not None and s2 is not None else None
    usable = chsh_lower if (settings is None or min(settings) >= 2) else None
    lower = max(1.0, usable) if usable is not None else 1.0
    return NonlocalityReport(
        settings=settings,
        bound_dim_setting=eq01,
        bound_projective=eq02,
        bound_schmidt_settings=eq28,
        bound_schmidt_rank=eq29,
        bound_corollary=eq31,
        bound_corollary_rank=eq32,
        chsh_lower=chsh_lower,
        lower=lower,
        upper=upper,
    )
