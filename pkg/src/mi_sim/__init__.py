"""Underwater magnetic-induction link simulation with tri-axis coils.

Exact (two-medium spectral) and lateral-wave channel models, mutual
inductance between arbitrarily oriented coil frames, coil-selection and
MIMO capacity strategies with reliability and multiplexing-gain metrics,
multiuser nullspace precoding, pilot-based coupling estimation, and a
deterministic Monte Carlo experiment harness.
"""

from .constants import EPS_0, MU_0, dbm_per_hz_to_w_per_hz, dbm_to_watts, watts_to_dbm
from .coupling import (aligned_frames, coupling_constant, coupling_matrix,
                       frame_rng, m_star, mutual_inductance,
                       optimal_orientations, random_frame, random_orientation,
                       rank1_defect)
from .estimation import (MeasurementSet, PilotBlock, estimate_mii,
                         estimation_error, orthogonal_pilot_currents,
                         simulate_measurement, unknown_coupling_count)
from .experiments import (EXPERIMENTS, ResultRow, default_scenario,
                          run_experiment, scenario_field_matrix, write_csv)
from .field_matrix import FieldMatrix, field_matrix, rotation_l
from .fields import AXES, CylField, Excitation, dipole_field, simplified_field
from .media import (AIR, WATER, CoilSpec, Geometry, Medium,
                    reflection_coefficients, vertical_wavenumber, wavenumber)
from .multiuser import (MultiuserRates, PrecodeSet, UserChannel,
                        cross_leakage, multiuser_rates, nullspace_precoders,
                        select_receive_coil)
from .scenario import (ReceiverSpec, Scenario, ScenarioError, load_scenario,
                       load_scenario_text, serialize_scenario,
                       three_receiver_default)
from .sommerfeld import (QuadratureError, QuadratureSpec, exact_field,
                         exact_field_stack, exact_field_with_error,
                         two_sided_field)
from .strategies import (STRATEGIES, LinkBudget, ReliabilityReport,
                         StrategyResult, capacity_for_strategy,
                         mimo_capacity_mii, mimo_capacity_no_mii,
                         miso_cs_capacity, multiplexing_gain_estimate,
                         optimal_siso_capacity, reliability, select_siso_cs,
                         simo_cs_capacity, siso_capacity, siso_cs_capacity,
                         snr_proxy, waterfill)

__version__ = "0.1.0"
