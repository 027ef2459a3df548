"""Bracketing the Bell nonlocality of bipartite quantum states.

Upper bounds come from the Schmidt coefficients of a pure state (and from
dimension/setting counts for any state); the lower edge is a certified CHSH
violation. Negativity and concurrence are related to both.
"""

from .bounds import NonlocalityReport, assemble_report, bound_dim_setting, bound_projective, bound_schmidt
from .chsh import ChshResult, horodecki_oracle, schmidt_compress, seesaw_chsh
from .coherent import CoherentPairSpec, analytic_spectrum, numeric_spectrum, prop2_bound
from .entmeas import EntanglementReport, concurrence_pure, negativity
from .numlin import BipartiteShape
from .srcop import SourceOperator, build_source_operator, verify_dilation
from .states import DensityOperator, PureBipartiteState, SchmidtSpectrum, schmidt_decompose

__version__ = "0.1.0"

__all__ = [
    "BipartiteShape",
    "ChshResult",
    "CoherentPairSpec",
    "DensityOperator",
    "EntanglementReport",
    "NonlocalityReport",
    "PureBipartiteState",
    "SchmidtSpectrum",
    "SourceOperator",
    "analytic_spectrum",
    "assemble_report",
    "bound_dim_setting",
    "bound_projective",
    "bound_schmidt",
    "build_source_operator",
    "concurrence_pure",
    "horodecki_oracle",
    "negativity",
    "numeric_spectrum",
    "prop2_bound",
    "schmidt_compress",
    "schmidt_decompose",
    "seesaw_chsh",
    "verify_dilation",
]
