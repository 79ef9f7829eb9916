"""Current statistics and uncertainty bounds of periodically modulated qubit machines."""
from .bath import BathModel, MachineParams, kms_residual, spectral_density
from .circular import (CircularFloquet, circular_cumulants, circular_tilted_generator,
                       floquet_diagonalize)
from .crab import OptimizationConfig, OptimizedPulse, evaluate_objective, optimize_pulse
from .errors import (AbsorbingStateError, BranchTrackingError, ConfigError,
                     DegenerateSteadyStateError, DomainError, FloquetTURError,
                     NoFeasiblePulseError, NotApplicableError, OrderingError, TruncationError,
                     UndefinedSupportError)
from .fcs import (CumulantSet, TiltedGenerator, cumulants_analytic, cumulants_numeric,
                  cumulants_sinusoidal_closed_form, dominant_eigenvalue, steady_state_ratio,
                  tilted_generator)
from .metrics import (MachineReport, classify_regime, delta_critical,
                      efficiency_fluctuation_ratios, machine_report, relative_fluctuation_gap,
                      tur_ratios)
from .modulation import (FloquetSpectrum, ModulationSpec, floquet_spectrum, omega_of_t,
                         phase_integral, sinusoidal_three_mode)
from .montecarlo import (JumpChannel, SampledCumulants, build_channels, compare_with_analytic,
                         simulate_counting)

__version__ = "0.1.0"
