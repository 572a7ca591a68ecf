"""
Entangled number states of two bosonic modes in a truncated Fock space
"""

from . import _version, coherent, criteria, entanglement, reports, states
from .coherent import (
    CoherentLabel,
    coherent_product,
    coherent_state_series,
    displaced_coherent_state,
    local_displacement_state,
)
from .config import DEFAULT_SETTINGS, Settings, settings_from_options
from .criteria import CriteriaReport, Verdict, criteria_report
from .entanglement import entanglement_entropy, entropy_grid, reduced_density
from .errors import (
    ConfigurationError,
    InvalidArgumentError,
    PrecisionError,
    ReportError,
    ResourceError,
    TruncationError,
)
from .fock import TwoModeState, annihilation, creation, expectation, number, variance
from .states import EnsLabel, SchmidtSpectrum, closed_form_schmidt, ens_state, tmsv
from .util import Cutoffs, parse_cutoffs

__all__ = [
    "CoherentLabel",
    "ConfigurationError",
    "CriteriaReport",
    "Cutoffs",
    "DEFAULT_SETTINGS",
    "EnsLabel",
    "InvalidArgumentError",
    "PrecisionError",
    "ReportError",
    "ResourceError",
    "SchmidtSpectrum",
    "Settings",
    "TruncationError",
    "TwoModeState",
    "Verdict",
    "annihilation",
    "closed_form_schmidt",
    "coherent",
    "coherent_product",
    "coherent_state_series",
    "creation",
    "criteria",
    "criteria_report",
    "displaced_coherent_state",
    "ens_state",
    "entanglement",
    "entanglement_entropy",
    "entropy_grid",
    "expectation",
    "local_displacement_state",
    "number",
    "parse_cutoffs",
    "reduced_density",
    "reports",
    "settings_from_options",
    "states",
    "tmsv",
    "variance",
]

__version__ = _version.__version__
