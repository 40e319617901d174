"""1/N cumulant dynamics of damped higher-order anharmonic oscillators."""

from .classical import ClassicalDrift, classical_rhs, classical_state, mu
from .cumulants import (KERNELS, closed_trajectory, cumulants_closed, first_order_shift,
                        integrate_semiclassical, linear_reference, linearized_moments,
                        quantum_correction, semiclassical_rhs, shift_from_Q)
from .model import (CumulantState, DegenerateAmplitudeError, ModelParams, NumericalError,
                    PhysicalParams, Trajectory, TruncationError, physical_time,
                    scale_parameters, scaled_time)
from .numerics import kernel_trapezoid, rk4_integrate, rk4_step
from .observables import (ObservableSeries, critical_phonons, fano_closed,
                          fano_from_cumulants, nonlinear_polarization, observable_series,
                          principal_squeezing, squeezing_closed, squeezing_limit)
from .oracle import (FockSystem, OracleObservables, coherent_amplitudes, energies,
                     fock_evolve_lossless, lindblad_evolve)
from .validity import (ValidityReport, breaking_report, log_slope, q_maximum,
                       saturation_level, validity_ratio)

__version__ = "0.1.0"

__all__ = [
    "ClassicalDrift", "CumulantState", "DegenerateAmplitudeError", "FockSystem", "KERNELS",
    "ModelParams", "NumericalError", "ObservableSeries", "OracleObservables",
    "PhysicalParams", "Trajectory", "TruncationError", "ValidityReport",
    "breaking_report", "classical_rhs", "classical_state", "closed_trajectory",
    "coherent_amplitudes", "critical_phonons", "cumulants_closed", "energies",
    "fano_closed", "fano_from_cumulants", "first_order_shift", "fock_evolve_lossless",
    "integrate_semiclassical", "kernel_trapezoid", "lindblad_evolve", "linear_reference",
    "linearized_moments", "log_slope", "mu", "nonlinear_polarization",
    "observable_series", "physical_time", "principal_squeezing", "q_maximum",
    "quantum_correction", "rk4_integrate", "rk4_step", "saturation_level",
    "scale_parameters", "scaled_time", "semiclassical_rhs", "shift_from_Q",
    "squeezing_closed", "squeezing_limit", "validity_ratio",
]
