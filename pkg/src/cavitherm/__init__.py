"""Exact non-Markovian dynamics and transient thermodynamics of a driven cavity
coupled to a structured spin-ensemble bath."""

__version__ = "0.1.0"

from .errors import (CavithermError, ConsistencyError, ConvergenceError,  # noqa: E402
                     KernelConvergenceError, NumericalError, ValidationError)
from .spectral import (bose_occupation, build_kernels, build_qgaussian,  # noqa: E402
                       make_environment, spectral_density)
from .greens import DriveProtocol, TimeGrid, solve_greens  # noqa: E402
from .coefficients import compute_coefficients  # noqa: E402
from .thermo import closed_cavity_oracle, thermodynamics  # noqa: E402
