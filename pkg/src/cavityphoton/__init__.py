"""Simulator and analysis toolkit for an atom-cavity single-photon source.

A Lambda-type three-level atom sits in a lossy optical cavity; a slowly
rising Gaussian drive transfers population through the dark state into a
one-photon cavity state, which leaks out through the output mirror.  The
package integrates the master equation of that process, extracts the
emission observables (efficiency, pulse width, emission time) and fits the
empirical laws they follow across parameter sweeps.
"""

from .analysis import EmissionReport, analyze, efficiency, emission_rate, final_populations, fwhm, peak_time
from .engine import (Schedule, SimulationError, Trajectory, build_generator,
                     density_to_vector, hamiltonian, hamiltonian_block,
                     lindblad_rhs_direct, pure_density, rk4_step, simulate,
                     vector_to_density)
from .fitting import FitResult, fit_efficiency_exponent, fit_log_polynomial, golden_section
from .model import (EigenSystem, PulseParams, SystemParams,
                    adiabatic_population, adiabaticity_margin,
                    adiabaticity_threshold, dark_state, dressed_states,
                    eigensystem, eigenvalues, fwhm_bound, mixing_angles,
                    pulse_amplitude)
from .sweep import AdiabaticityError, SweepPoint, SweepSpec, exponent_for_ratio, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AdiabaticityError",
    "EigenSystem",
    "EmissionReport",
    "FitResult",
    "PulseParams",
    "Schedule",
    "SimulationError",
    "SweepPoint",
    "SweepSpec",
    "SystemParams",
    "Trajectory",
    "adiabatic_population",
    "adiabaticity_margin",
    "adiabaticity_threshold",
    "analyze",
    "build_generator",
    "dark_state",
    "density_to_vector",
    "dressed_states",
    "efficiency",
    "eigensystem",
    "eigenvalues",
    "emission_rate",
    "exponent_for_ratio",
    "final_populations",
    "fit_efficiency_exponent",
    "fit_log_polynomial",
    "fwhm",
    "fwhm_bound",
    "golden_section",
    "hamiltonian",
    "hamiltonian_block",
    "lindblad_rhs_direct",
    "mixing_angles",
    "peak_time",
    "pulse_amplitude",
    "pure_density",
    "rk4_step",
    "run_sweep",
    "simulate",
    "vector_to_density",
]
