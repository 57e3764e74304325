"""Relaxed upwind ODE solvers for compressible flow on periodic domains.

The package integrates the conservation laws of four systems (isothermal gas,
isentropic gas, shallow water, self-gravitating gas) as ODEs over the cells
of a uniform periodic grid, and ships a verification harness that measures
weak-form residuals, certifies their decay under refinement, and compares
benchmark runs against exact Riemann solutions.
"""

from .errors import (BoundaryReachedError, ConstraintError, PositivityError,
                     TorusMismatchError, VacuumStatesError)
from .grid import (PERIOD, Mollifier, PeriodicField, Torus, centered_difference,
                   convolve, convolve_derivative, make_mollifier, shift)
from .integrate import AdmissibilityWarning, MonitorRecord, RunConfig, Trajectory, run, step, system_rhs
from .scheme import (FlowState, SplitConfig, continuity_rhs, momentum_rhs,
                     recover_velocity, split_velocity, viscosity_decomposition)
from .statelaw import (IsentropicLaw, IsothermalLaw, SelfGravityLaw, ShallowLaw,
                       Smoothing, gravity_gradient, gravity_potential)
from .verify import (DecayVerdict, IsothermalRiemann, ResidualRecord,
                     ShallowWaterRiemann, TestFunction, certify_decay,
                     compare_to_oracle, decay_floor, format_report, front_width,
                     gaussian_bump, read_report, riemann_oracle_isothermal,
                     riemann_oracle_shallow, trig_mode, weak_residual,
                     write_report)

__version__ = "0.1.0"
