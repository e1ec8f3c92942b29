"""Airy beams from finite, discrete linear arrays: fields, trajectories,
design constraints and link-level comparisons."""

__version__ = "0.1.0"

from .airy import AiryConstants, airy_ai, airy_ai_prime, airy_constants
from .beams import (BeamSpec, CubicPhase, CubicPlusFocus, Focusing, PhaseProfile, Steering,
                    airy_or_focusing, beamforming_vector, phase_profile, unwrapped_phases)
from .constraints import (ConstraintReport, PhaseDerivatives, constraint_report,
                          distortion_free_range, max_spacing, min_aperture, phase_derivatives,
                          sampling_error_bound, sampling_trajectory_offset, truncation_error_bound)
from .core import ArrayGeometry, CarrierConfig, antenna_positions, carrier_from_frequency
from .estimators import ArrayBeamformer, MainLobeTracker
from .exceptions import (AiryBeamError, ConfigError, DomainError, InfeasibleApertureError,
                         InvalidInputError, NumericalError, PreconditionError, QuadratureError)
from .field import (FieldErrorReport, FieldGrid, FieldPoint, field_closedform_cubic,
                    field_closedform_cubic_focus, field_discrete_paraxial, field_exact_spherical,
                    field_finite_continuous, field_grid, truncation_sampling_errors)
from .scenarios import (MobilityScenario, MultiUserScenario, ObstructionScenario,
                        RobustnessScenario, SEResult, blocked_antenna_set, design_x0_for_velocity,
                        min_x0_for_offset, multiuser_power_allocation, received_power_obstructed,
                        se_mobility, se_multiuser, se_positioning_error)
from .trajectory import (TrajectoryClassification, TrajectoryCurve, TrajectoryDeviation,
                         classify_trajectory, critical_distance, extract_measured_trajectory,
                         ideal_parabolic_trajectory, trajectory_cubic, trajectory_cubic_focus,
                         trajectory_deviation)
