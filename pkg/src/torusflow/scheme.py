"""Right-hand sides of the relaxed upwind ODE system.

The conserved fields (density rho and momentum per axis) evolve by an ODE in
cell space: mass moving with positive velocity is taken from the left
neighbor, mass moving with negative velocity from the right neighbor, and the
central cell sheds at the combined rate.  The neighbor coupling distance is
one cell, so the grid spacing doubles as the relaxation parameter eps.

The velocity split is either sharp (u+ = max(u, 0), u- = max(-u, 0)) or
regularized through v(u) = sqrt(u**2 + delta**2), which acts like a small
viscosity (see ``viscosity_decomposition``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PositivityError
from .grid import PeriodicField, Torus


@dataclass(frozen=True)
class SplitConfig:
    """Velocity-splitting knob: delta = 0 is the sharp split."""

    delta: float = 0.0

    def __post_init__(self):
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


@dataclass(frozen=True)
class FlowState:
    """Conserved tuple (rho, rho*u [, rho*v]) at one instant.

    All fields share one torus; rho must be strictly positive (the integrator
    monitors keep it that way along a run).
    """

    rho: PeriodicField
    mom_x: PeriodicField
    mom_y: PeriodicField | None = None

    def __post_init__(self):
        if self.rho.torus != self.mom_x.torus:
            raise ValueError("rho and mom_x live on different tori")
        if self.torus.dim == 2 and self.mom_y is None:
            raise ValueError("2-D state requires mom_y")
        if self.torus.dim == 1 and self.mom_y is not None:
            raise ValueError("1-D state cannot carry mom_y")
        if self.mom_y is not None and self.mom_y.torus != self.torus:
            raise ValueError("mom_y lives on a different torus")
        if self.rho.min() <= 0.0:
            cell = np.unravel_index(int(np.argmin(self.rho.values)), self.torus.shape)
            raise PositivityError(cell)

    @property
    def torus(self) -> Torus:
        return self.rho.torus

    @property
    def momenta(self) -> tuple[PeriodicField, ...]:
        if self.mom_y is None:
            return (self.mom_x,)
        return (self.mom_x, self.mom_y)

    @classmethod
    def from_primitive(cls, rho: PeriodicField, *velocities: PeriodicField) -> "FlowState":
        moms = [rho.with_values(rho.values * u.values) for u in velocities]
        return cls(rho, *moms)


def split_velocity(u, cfg: SplitConfig):
    """Split u into nonnegative parts with u_plus - u_minus == u exactly.

    Sharp split (delta = 0): (max(u, 0), max(-u, 0)).  Regularized split:
    u_plus = (v(u) + u) / 2 with v(u) = sqrt(u**2 + delta**2); u_minus is
    derived as u_plus - u so the difference reproduces u to the last bit.
    """
    u = np.asarray(u, dtype=np.float64)
    if cfg.delta == 0.0:
        v = np.abs(u)
    else:
        v = np.sqrt(u * u + cfg.delta * cfg.delta)
    u_plus = 0.5 * (v + u)
    u_minus = u_plus - u
    if u.ndim == 0:
        return float(u_plus), float(u_minus)
    return u_plus, u_minus


def recover_velocity(state: FlowState) -> tuple[PeriodicField, ...]:
    """Velocity per axis, u = mom / rho; rho must be positive in every cell."""
    rho = state.rho.values
    if rho.min() <= 0.0:
        cell = np.unravel_index(int(np.argmin(rho)), state.torus.shape)
        raise PositivityError(cell)
    return tuple(m.with_values(m.values / rho) for m in state.momenta)


def _upwind_axis(q: np.ndarray, u_plus: np.ndarray, u_minus: np.ndarray,
                 eps: float, axis: int) -> np.ndarray:
    # (1/eps) [ (q u+)(x-eps) - q (u+ + u-)(x) + (q u-)(x+eps) ] along one axis
    inflow_left = np.roll(q * u_plus, 1, axis=axis)
    inflow_right = np.roll(q * u_minus, -1, axis=axis)
    outflow = q * (u_plus + u_minus)
    return (inflow_left - outflow + inflow_right) / eps


def _splits(state: FlowState, cfg: SplitConfig):
    velocities = recover_velocity(state)
    return velocities, [split_velocity(u.values, cfg) for u in velocities]


def continuity_rhs(state: FlowState, cfg: SplitConfig, eps: float,
                   beta_term: float = 0.0) -> PeriodicField:
    """d(rho)/dt: upwind transport summed over axes, plus the additive
    production term ``beta_term`` (the literal value eps**beta; pass 0 when
    the system omits it)."""
    _, splits = _splits(state, cfg)
    rho = state.rho.values
    acc = np.zeros_like(rho)
    for axis, (up, um) in enumerate(splits):
        acc += _upwind_axis(rho, up, um, eps, axis)
    if beta_term != 0.0:
        acc = acc + beta_term
    return state.rho.with_values(acc)


def momentum_rhs(state: FlowState, cfg: SplitConfig, eps: float,
                 grad_phi: tuple[PeriodicField, ...]) -> tuple[PeriodicField, ...]:
    """d(rho*u_a)/dt per axis: each momentum component is advected upwind by
    every velocity component, then forced by -rho * dPhi/dx_a."""
    if len(grad_phi) != state.torus.dim:
        raise ValueError(f"expected {state.torus.dim} gradient components")
    _, splits = _splits(state, cfg)
    rho = state.rho.values
    out = []
    for a, mom in enumerate(state.momenta):
        q = mom.values
        acc = np.zeros_like(q)
        for axis, (up, um) in enumerate(splits):
            acc += _upwind_axis(q, up, um, eps, axis)
        acc -= rho * grad_phi[a].values
        out.append(mom.with_values(acc))
    return tuple(out)


def viscosity_decomposition(state: FlowState, cfg: SplitConfig,
                            eps: float) -> tuple[PeriodicField, PeriodicField]:
    """Split the regularized continuity transport into its sharp part and a
    discrete-Laplacian viscosity.

    With D(u) = (v(u) - |u|) / 2, the delta-regularized transport equals the
    sharp (delta = 0) transport plus
    (1/eps) [ (rho D)(x-eps) - 2 (rho D)(x) + (rho D)(x+eps) ] per axis.
    Returns (sharp_rhs, viscous_rhs); their sum matches
    ``continuity_rhs(state, cfg, eps, 0.0)`` to rounding.  The additive
    production term belongs to neither part and cancels in the comparison.
    """
    if cfg.delta <= 0.0:
        raise ValueError("decomposition is degenerate for delta = 0")
    sharp = continuity_rhs(state, SplitConfig(0.0), eps, beta_term=0.0)
    velocities = recover_velocity(state)
    rho = state.rho.values
    visc = np.zeros_like(rho)
    for axis, u in enumerate(velocities):
        uv = u.values
        v = np.sqrt(uv * uv + cfg.delta * cfg.delta)
        half_gap = 0.5 * (v - np.abs(uv))
        rd = rho * half_gap
        visc += (np.roll(rd, 1, axis=axis) - 2.0 * rd + np.roll(rd, -1, axis=axis)) / eps
    return sharp, state.rho.with_values(visc)
