"""
Numerical policy shared by every module of the package
"""

from __future__ import annotations

import dataclasses

from .errors import ConfigurationError
from .typing import Dict, Union

OptionValue = Union[int, float]


@dataclasses.dataclass(frozen=True)
class Settings:
    """
    Tolerances and size limits used when building and checking states.

    Every public operation that depends on numerical policy accepts a
    ``settings`` argument defaulting to :data:`DEFAULT_SETTINGS`.
    """

    #: maximum squared norm allowed to leak past a Fock cutoff
    truncation_tolerance: float = 1e-12
    #: ``max|M - M^dagger|`` accepted for operators flagged Hermitian
    hermiticity_tolerance: float = 1e-12
    #: imaginary part accepted in expectations of Hermitian operators
    imaginary_tolerance: float = 1e-10
    #: accepted ``|sum |C_m|^2 - 1|`` for closed form Schmidt spectra
    normalization_tolerance: float = 1e-10
    #: values within this distance of a separability bound are not violations
    verdict_margin: float = 1e-9
    #: largest dense matrix side: flattened two-mode dimension, or one cutoff
    #: for the coefficient matrix factorized by the partial transpose
    dense_limit: int = 4096
    #: standard deviations of photon number kept inside a cutoff
    sigma_margin: float = 12.0
    #: additive slack (in photons) on top of the sigma margin
    cutoff_padding: int = 10
    #: extra Fock levels used when exponentiating a generator
    expm_margin: int = 16
    #: largest coherent amplitude accepted for collective coherent states
    amplitude_cap: float = 4.0
    #: Schmidt values below this are dropped before taking logarithms
    entropy_floor: float = 1e-14
    #: witness subspace for completeness checks: ``n_A + n_B <= witness_bound``
    witness_bound: int = 6
    #: largest ``n_max`` accepted by the entropy grid
    entropy_grid_limit: int = 10

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigurationError(
                    f"{field.name} must be numeric, got {value!r}"
                )
            if value < 0:
                raise ConfigurationError(f"{field.name} must be non-negative")
        if self.dense_limit < 1:
            raise ConfigurationError("dense_limit must be at least 1")

    def replace(self, **options: OptionValue) -> Settings:
        """
        :return: a copy of these settings with ``options`` overridden
        :raise ConfigurationError: on unknown option names
        """

        return settings_from_options(self, **options)

    def as_dict(self) -> Dict[str, OptionValue]:
        """
        :return: the settings as a plain mapping (the config echo written
         into output headers)
        """

        return dataclasses.asdict(self)


DEFAULT_SETTINGS = Settings()


def settings_from_options(
    base: Settings = DEFAULT_SETTINGS, **options: OptionValue
) -> Settings:
    """
    Build settings from keyword overrides. for example::

        from twomode.config import settings_from_options

        loose = settings_from_options(truncation_tolerance=1e-9)

    :param base: settings supplying the values that are not overridden
    :param options: field names of :class:`Settings` and their new values
    :raise ConfigurationError: when an option name is unknown or a value is
     out of range
    """

    known = {field.name for field in dataclasses.fields(Settings)}
    unknown = sorted(set(options) - known)

    if unknown:
        raise ConfigurationError("unknown settings : %s" % ", ".join(unknown))

    return dataclasses.replace(base, **options)
