"""Named numerical tolerances, overridable from the command line as ``NAME=VALUE``."""

from __future__ import annotations

from .errors import BelgaugeError

DEFAULTS: dict[str, float] = {
    "slack": 1e-9,  # inequality slacks and bracket consistency
    "negativity": 1e-9,  # partial-transpose vs Schmidt negativity
    "identity": 1e-10,  # algebraic identities, trace-norm symmetry, normalization
    "dilation": 1e-10,  # dilation residual, relative to ||T||_1
    "polarization": 1e-12,
    "spectrum": 1e-8,  # Schmidt reconstruction, analytic vs truncated-Fock spectra
    "oracle": 1e-6,  # see-saw vs closed-form CHSH
    "exact": 0.0,  # bit-exact properties
}


def parse_overrides(items: list[str] | None) -> dict[str, float]:
    tol = dict(DEFAULTS)
    for item in items or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in DEFAULTS:
            known = ", ".join(sorted(DEFAULTS))
            raise BelgaugeError(f"bad tolerance override {item!r}; expected NAME=VALUE with NAME in {known}")
        try:
            tol[name] = float(value)
        except ValueError as exc:
            raise BelgaugeError(f"tolerance {name!r} needs a numeric value, got {value!r}") from exc
    return tol
