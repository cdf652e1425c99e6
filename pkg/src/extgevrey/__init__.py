"""Extended Gevrey regularity: associated functions, Paley-Wiener bumps and
directional decay classification for the sequences M_p = p^{tau p^sigma}."""

from .associated import (AssocParams, BoundsReport, T_discrete, bounds_report, continuous_sup,
                         lower_expr, r_star, upper_expr, verify_sandwich)
from .lambert import DomainError, W, lambert_w0, w0_bracket
from .microlocal import (DecayReport, PlateauCutoff, SignalSpec, classify, decay_fit,
                         enumerated_envelope, localized_spectrum)
from .paleywiener import BumpSpec, bump_spectrum, make_bump, verify_forward
from .sequence import GevreyParams, LogValue, log_M

__all__ = [
    "AssocParams", "BoundsReport", "BumpSpec", "DecayReport", "DomainError", "GevreyParams",
    "LogValue", "PlateauCutoff", "SignalSpec", "T_discrete", "W", "bounds_report",
    "bump_spectrum", "classify", "continuous_sup", "decay_fit", "enumerated_envelope",
    "lambert_w0", "localized_spectrum", "log_M", "lower_expr", "make_bump", "r_star",
    "upper_expr", "verify_forward", "verify_sandwich", "w0_bracket",
]
