"""Band-edge moments of the Hofstadter spectrum and their q -> infinity limits."""

__version__ = "0.1.0"

from .charpoly import CharPoly, RationalFlux, charpoly, chambers_defect
from .errors import (HofmomError, PrecisionExhaustionError, QuadratureError,
                     RootIsolationError)
from .moments import (LimitEstimate, MomentValue, bandwidth, extrapolate,
                      moment_alternating, moment_bandwidth_power, moment_cross,
                      moment_half_spectrum)
from .precision import DEFAULT_PRECISION, default_precision, moment_precision
from .specfun import (ClosedForm, EulerNumbers, closed_form_M, euler_numbers,
                      hurwitz_zeta, moment_integral, mu_constant,
                      polygamma_quarter, thouless_constant)
from .spectrum import (EdgeSpectrum, PacketSplit, bands, edge_spectrum,
                       factorization_defect, packet_split)

__all__ = [
    "CharPoly", "RationalFlux", "charpoly", "chambers_defect",
    "HofmomError", "PrecisionExhaustionError", "QuadratureError",
    "RootIsolationError",
    "LimitEstimate", "MomentValue", "bandwidth", "extrapolate",
    "moment_alternating", "moment_bandwidth_power", "moment_cross",
    "moment_half_spectrum",
    "DEFAULT_PRECISION", "default_precision", "moment_precision",
    "ClosedForm", "EulerNumbers", "closed_form_M", "euler_numbers",
    "hurwitz_zeta", "moment_integral", "mu_constant", "polygamma_quarter",
    "thouless_constant",
    "EdgeSpectrum", "PacketSplit", "bands", "edge_spectrum",
    "factorization_defect", "packet_split",
]
