"""Time integration of the cell-space ODE system with runtime monitors.

Fixed-step explicit Euler and classical RK4 only: the construction treats the
spatial coupling as part of one big ODE, so standard ODE steppers apply
unchanged.  Runs are deterministic: identical inputs produce bit-identical
trajectories.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import PositivityError
from .scheme import FlowState, SplitConfig, continuity_rhs, momentum_rhs, recover_velocity

METHODS = ("euler", "rk4")


class AdmissibilityWarning(UserWarning):
    """dt exceeds the cell-crossing bound eps / max v(u); results may degrade."""


@dataclass(frozen=True)
class RunConfig:
    dt: float
    t_final: float
    method: str = "euler"
    snapshot_times: tuple[float, ...] = ()
    monitor_every: int = 100

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_final < 0.0:
            raise ValueError(f"t_final must be nonnegative, got {self.t_final}")
        if self.t_final > 0.0 and self.dt > self.t_final:
            raise ValueError("dt must not exceed t_final")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.monitor_every < 1:
            raise ValueError("monitor_every must be >= 1")
        for ts in self.snapshot_times:
            if not 0.0 <= ts <= self.t_final:
                raise ValueError(f"snapshot time {ts} outside [0, {self.t_final}]")


@dataclass(frozen=True)
class MonitorRecord:
    step: int
    t: float
    mass: float
    expected_mass: float
    min_rho: float
    max_rho: float
    max_speed: float
    max_grad_phi: float


@dataclass
class Trajectory:
    snapshots: list[tuple[float, FlowState]] = field(default_factory=list)
    monitors: list[MonitorRecord] = field(default_factory=list)
    envelope_constant: float | None = None

    @property
    def final(self) -> tuple[float, FlowState]:
        return self.snapshots[-1]


def system_rhs(state: FlowState, law, cfg: SplitConfig, eps: float):
    """Time derivative of every conserved field: (drho, dmom_x[, dmom_y])."""
    grad_phi = law.potential_gradient(state.rho, eps)
    drho = continuity_rhs(state, cfg, eps, law.beta_term(eps))
    dmom = momentum_rhs(state, cfg, eps, grad_phi)
    return (drho, *dmom)


def _axpy(state: FlowState, coeff: float, deriv) -> FlowState:
    fields = (state.rho, *state.momenta)
    new = [f.with_values(f.values + coeff * d.values) for f, d in zip(fields, deriv)]
    mom_y = new[2] if len(new) == 3 else None
    return FlowState(new[0], new[1], mom_y)


def step(state: FlowState, law, cfg: SplitConfig, eps: float, dt: float,
         method: str = "euler") -> FlowState:
    """One fixed step of the chosen method; velocity is recovered from the
    conserved fields inside every stage evaluation."""
    if method == "euler":
        return _axpy(state, dt, system_rhs(state, law, cfg, eps))
    if method == "rk4":
        k1 = system_rhs(state, law, cfg, eps)
        k2 = system_rhs(_axpy(state, 0.5 * dt, k1), law, cfg, eps)
        k3 = system_rhs(_axpy(state, 0.5 * dt, k2), law, cfg, eps)
        k4 = system_rhs(_axpy(state, dt, k3), law, cfg, eps)
        fields = (state.rho, *state.momenta)
        new = [
            f.with_values(f.values + (dt / 6.0) * (a.values + 2.0 * b.values
                                                   + 2.0 * c.values + d.values))
            for f, a, b, c, d in zip(fields, k1, k2, k3, k4)
        ]
        mom_y = new[2] if len(new) == 3 else None
        return FlowState(new[0], new[1], mom_y)
    raise ValueError(f"unknown method {method!r}")


def _max_speed(state: FlowState) -> float:
    return max(float(np.abs(u.values).max()) for u in recover_velocity(state))


def _monitor(step_no, t, state, law, cfg, eps, mass0) -> MonitorRecord:
    mass = state.rho.integral()
    expected = mass0 + law.beta_term(eps) * state.torus.volume * t
    grad = law.potential_gradient(state.rho, eps)
    max_grad = max(float(np.abs(g.values).max()) for g in grad)
    return MonitorRecord(
        step=step_no, t=t, mass=mass, expected_mass=expected,
        min_rho=state.rho.min(), max_rho=state.rho.max(),
        max_speed=_max_speed(state), max_grad_phi=max_grad,
    )


def _envelope_exponent(law) -> float | None:
    # growth bound max|u| <= max|u0| + C * t / eps**p; p depends on the law
    if getattr(law, "smoothing", None) is None or law.smoothing.kind != "smooth-bump":
        return None
    variant = getattr(law, "variant", None)
    if variant in ("isothermal", "selfgravity"):
        return 3.0 * law.smoothing.alpha
    if variant in ("isentropic", "shallow"):
        return 2.0 * law.smoothing.alpha
    return None


def run(initial: FlowState, law, cfg: SplitConfig, run_cfg: RunConfig,
        eps: float | None = None) -> Trajectory:
    """Integrate from t=0 to t_final, capturing snapshots and monitor records.

    ``eps`` defaults to the cell width of the state's torus and must equal it
    (the neighbor coupling distance is one cell).  Validity constraints of the
    state law are checked up front and raise hard errors.
    """
    torus = initial.torus
    if eps is None:
        eps = torus.h
    if not math.isclose(eps, torus.h, rel_tol=1e-12):
        raise ValueError(f"eps {eps} must equal the cell width {torus.h}")
    law.validate(eps)

    traj = Trajectory()
    traj.snapshots.append((0.0, initial))
    pending = sorted(ts for ts in run_cfg.snapshot_times if ts > 0.0)

    state = initial
    mass0 = state.rho.integral()
    traj.monitors.append(_monitor(0, 0.0, state, law, cfg, eps, mass0))

    n_steps = int(round(run_cfg.t_final / run_cfg.dt))
    warned = False
    for k in range(1, n_steps + 1):
        t_prev = (k - 1) * run_cfg.dt
        if not warned and run_cfg.dt * _max_speed(state) > eps * (1.0 + 1e-12):
            warnings.warn(
                f"dt*max|v(u)| = {run_cfg.dt * _max_speed(state):.3g} exceeds "
                f"eps = {eps:.3g} at t = {t_prev:.6g}; the step is outside the "
                "admissible range", AdmissibilityWarning, stacklevel=2)
            warned = True
        try:
            state = step(state, law, cfg, eps, run_cfg.dt, run_cfg.method)
        except PositivityError as exc:
            raise PositivityError(exc.cell, time=t_prev, method=run_cfg.method) from exc
        t = k * run_cfg.dt
        if state.rho.min() <= 0.0:
            cell = np.unravel_index(int(np.argmin(state.rho.values)), torus.shape)
            raise PositivityError(cell, time=t, method=run_cfg.method)
        if k % run_cfg.monitor_every == 0 or k == n_steps:
            traj.monitors.append(_monitor(k, t, state, law, cfg, eps, mass0))
        while pending and t >= pending[0] - 0.5 * run_cfg.dt:
            traj.snapshots.append((t, state))
            pending.pop(0)

    final_t = n_steps * run_cfg.dt
    if traj.snapshots[-1][0] != final_t and n_steps > 0:
        traj.snapshots.append((final_t, state))

    exponent = _envelope_exponent(law)
    if exponent is not None:
        base = traj.monitors[0].max_speed
        consts = [
            (rec.max_speed - base) * eps**exponent / rec.t
            for rec in traj.monitors if rec.t > 0.0
        ]
        if consts:
            traj.envelope_constant = max(consts)
    return traj
