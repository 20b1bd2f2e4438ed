"""Service rate and recovery probability of quasi-symmetric storage allocations.

A file encoded into m*k blocks is spread over alpha*m of N storage nodes,
each holding k/alpha blocks. A request recovers the file when at least
alpha data nodes answer, and is served once the fastest alpha of them
finish. This package evaluates the resulting service rate and recovery
probability in closed form, bounds them, sweeps alpha, and checks it all
against simulation.
"""

__version__ = "0.1.0"

from .analytic_rates import (
    RateReport,
    dss_service_rate,
    expected_download_time,
    recovery_probability,
    set_service_rate,
)
from .combinatorics import DomainError
from .model import (
    FixedSize,
    InvalidConfigurationError,
    Probabilistic,
    ScaledExponential,
    ShiftedExponential,
    SystemConfig,
    phi_distribution,
    validate,
)
from .optimizer import optimal_alpha, sweep_alpha

__all__ = [
    "__version__",
    "DomainError",
    "FixedSize",
    "InvalidConfigurationError",
    "Probabilistic",
    "RateReport",
    "ScaledExponential",
    "ShiftedExponential",
    "SystemConfig",
    "dss_service_rate",
    "expected_download_time",
    "optimal_alpha",
    "phi_distribution",
    "recovery_probability",
    "set_service_rate",
    "sweep_alpha",
    "validate",
]
