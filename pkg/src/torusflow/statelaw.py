"""Body-force potentials: how density turns into the forcing field Phi.

Four laws are implemented:

* isothermal gas:        Phi = K * smooth(log(rho + eps**N))
* isentropic gas:        Phi = K*gamma/(gamma-1) * smooth(rho**(gamma-1))
* shallow water:         Phi = g * smooth(rho) + g * a(x)   (rho is the height)
* self-gravitating gas:  isothermal pressure part plus the smoothed solution
                         of the periodic Poisson problem lap(Phi) = G*(rho - mean)

``smooth`` is convolution with a mollifier whose width is tied to the grid:
either a smooth bump of width eps**alpha or a three-cell average.  Gradients
are obtained by convolving with the kernel derivative for the smooth bump; the
three-cell kernel has no smooth derivative, so its gradient falls back to a
centered difference of the smoothed potential (algebraically, convolution with
the differenced kernel).

Validity constraints from the underlying analysis are enforced by
``validate``: they are phrased in terms of the bump exponent alpha and are
therefore checked only for smooth-bump smoothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError
from .grid import (Mollifier, PeriodicField, Torus, centered_difference,
                   convolve, convolve_derivative, make_mollifier)


@dataclass(frozen=True)
class Smoothing:
    """State-law smoothing spec: a bump of width eps**alpha or a 3-cell average."""

    kind: str = "smooth-bump"
    alpha: float | None = None
    weight: float | None = None

    def __post_init__(self):
        if self.kind == "smooth-bump":
            if self.alpha is None:
                raise ValueError("smooth-bump smoothing requires alpha")
            if not (0.0 < self.alpha < 1.0):
                raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        elif self.kind == "three-cell":
            if self.weight is None:
                raise ValueError("three-cell smoothing requires the outer weight")
        else:
            raise ValueError(f"unknown smoothing kind {self.kind!r}")

    def make(self, torus: Torus, eps: float) -> Mollifier:
        if self.kind == "three-cell":
            return make_mollifier(torus.h, torus, "three-cell", w=self.weight)
        width = max(eps**self.alpha, torus.h)
        return make_mollifier(width, torus, "smooth-bump")


def _smoothed_gradient(raw: PeriodicField, m: Mollifier) -> tuple[PeriodicField, ...]:
    """Gradient of the mollified field, one component per axis."""
    dim = raw.torus.dim
    if m.deriv_weights is not None:
        return tuple(convolve_derivative(raw, m, axis=a) for a in range(dim))
    smoothed = convolve(raw, m)
    return tuple(centered_difference(smoothed, axis=a) for a in range(dim))


def _check_log_law(variant, pressure_coeff, floor_exponent, beta, smoothing):
    if pressure_coeff < 0.0:
        raise ConstraintError(f"K >= 0 required, got {pressure_coeff}")
    if floor_exponent <= 0.0:
        raise ConstraintError(f"N > 0 required, got {floor_exponent}")
    if beta is not None and beta <= 0.0:
        raise ConstraintError(f"β > 0 required (or None to disable), got {beta}")
    if smoothing.kind == "smooth-bump":
        a = smoothing.alpha
        if not a < 1.0 / 6.0:
            raise ConstraintError(f"α < 1/6 required for {variant}, got {a}")
        if beta is not None and not 3.0 * a + beta < floor_exponent - 1.0:
            raise ConstraintError(
                f"3α + β < N − 1 required for {variant}, got "
                f"3·{a} + {beta} vs N = {floor_exponent}"
            )


class _LawBase:
    """Shared plumbing; concrete laws fill in the raw/pointwise potentials."""

    def beta_term(self, eps: float) -> float:
        """Additive density production rate; zero unless the law defines beta."""
        return 0.0

    def mollifier(self, torus: Torus, eps: float) -> Mollifier:
        return self.smoothing.make(torus, eps)

    def potential(self, rho: PeriodicField, eps: float) -> PeriodicField:
        if rho.min() < 0.0:
            raise ValueError("negative density passed to the state law")
        m = self.mollifier(rho.torus, eps)
        return convolve(self._raw_potential(rho, eps), m)

    def potential_gradient(self, rho: PeriodicField, eps: float) -> tuple[PeriodicField, ...]:
        if rho.min() < 0.0:
            raise ValueError("negative density passed to the state law")
        m = self.mollifier(rho.torus, eps)
        return _smoothed_gradient(self._raw_potential(rho, eps), m)

    def pointwise_potential(self, rho: PeriodicField, eps: float) -> PeriodicField:
        """The unmollified law evaluated per cell (consistency reference)."""
        return self._raw_potential(rho, eps)

    def validate(self, eps: float | None = None) -> None:
        """Raise ConstraintError on any violated validity constraint."""


@dataclass(frozen=True)
class IsothermalLaw(_LawBase):
    """Phi = K * smooth(log(rho + eps**N)); the floor eps**N admits vacuum.

    ``beta`` is the exponent of the additive density production eps**beta that
    keeps the density away from zero; pass None to disable the term (pure
    transport experiments).
    """

    pressure_coeff: float
    floor_exponent: float = 2.0
    beta: float | None = 10.0
    smoothing: Smoothing = Smoothing("smooth-bump", alpha=0.1)

    variant = "isothermal"

    def beta_term(self, eps: float) -> float:
        return eps**self.beta if self.beta is not None else 0.0

    def _raw_potential(self, rho, eps):
        floor = eps**self.floor_exponent
        return rho.with_values(self.pressure_coeff * np.log(rho.values + floor))

    def validate(self, eps=None):
        _check_log_law(self.variant, self.pressure_coeff, self.floor_exponent,
                       self.beta, self.smoothing)


@dataclass(frozen=True)
class IsentropicLaw(_LawBase):
    """Phi = K*gamma/(gamma-1) * smooth(rho**(gamma-1)), 1 < gamma <= 2."""

    pressure_coeff: float
    gamma: float
    smoothing: Smoothing = Smoothing("smooth-bump", alpha=0.2)

    variant = "isentropic"

    def _raw_potential(self, rho, eps):
        coeff = self.pressure_coeff * self.gamma / (self.gamma - 1.0)
        return rho.with_values(coeff * np.maximum(rho.values, 0.0) ** (self.gamma - 1.0))

    def validate(self, eps=None):
        if self.pressure_coeff < 0.0:
            raise ConstraintError(f"K >= 0 required, got {self.pressure_coeff}")
        if not (1.0 < self.gamma <= 2.0):
            raise ConstraintError(f"γ ∈ (1, 2] required for isentropic, got {self.gamma}")
        if self.smoothing.kind == "smooth-bump" and not self.smoothing.alpha < 0.25:
            raise ConstraintError(
                f"α < 1/4 required for {self.variant}, got {self.smoothing.alpha}"
            )


@dataclass(frozen=True)
class ShallowLaw(_LawBase):
    """Phi = g * smooth(h) + g * a with bottom elevation a.

    The bottom enters unmollified; its derivative must be supplied alongside
    (analytically when a comes from an expression, by centered differences
    when it comes from samples) so the gradient uses the exact a' term.
    """

    gravity: float = 9.8
    bottom: PeriodicField | None = None
    bottom_grad: tuple[PeriodicField, ...] | None = None
    smoothing: Smoothing = Smoothing("smooth-bump", alpha=0.2)

    variant = "shallow"

    def _raw_potential(self, rho, eps):
        return rho.with_values(self.gravity * rho.values)

    def potential(self, rho, eps):
        phi = super().potential(rho, eps)
        if self.bottom is not None:
            phi = phi + self.gravity * self.bottom
        return phi

    def potential_gradient(self, rho, eps):
        grad = super().potential_gradient(rho, eps)
        if self.bottom_grad is not None:
            grad = tuple(g + self.gravity * ag for g, ag in zip(grad, self.bottom_grad))
        return grad

    def pointwise_potential(self, rho, eps):
        phi = self._raw_potential(rho, eps)
        if self.bottom is not None:
            phi = phi + self.gravity * self.bottom
        return phi

    def validate(self, eps=None):
        if self.gravity < 0.0:
            raise ConstraintError(f"g >= 0 required, got {self.gravity}")
        if (self.bottom is None) != (self.bottom_grad is None):
            raise ConstraintError("bottom and bottom_grad must be supplied together")
        if self.smoothing.kind == "smooth-bump" and not self.smoothing.alpha < 0.25:
            raise ConstraintError(
                f"α < 1/4 required for {self.variant}, got {self.smoothing.alpha}"
            )

    @staticmethod
    def from_bottom_samples(gravity, bottom: PeriodicField, smoothing) -> "ShallowLaw":
        """Build the law from sampled bottom data (derivative by centered differences)."""
        grads = tuple(centered_difference(bottom, axis=a) for a in range(bottom.torus.dim))
        return ShallowLaw(gravity, bottom, grads, smoothing)


def _wavenumbers(torus: Torus):
    # period 2*pi per axis makes the angular wavenumbers integers
    k = np.fft.fftfreq(torus.cells, d=1.0 / torus.cells)
    if torus.dim == 1:
        return (k,)
    return tuple(np.meshgrid(k, k, indexing="ij"))


def _minus_ksq(torus: Torus):
    ks = _wavenumbers(torus)
    ksq = sum(k * k for k in ks)
    return ks, ksq


def gravity_potential(rho: PeriodicField, coupling: float) -> PeriodicField:
    """Zero-mean solution of lap(Phi) = coupling * (rho - mean(rho)) on the torus.

    Solved spectrally; subtracting the mean density makes the periodic problem
    solvable and matches the convention that a uniform background exerts no
    force.  The sign is attractive: the momentum forcing -rho * grad(Phi)
    pulls matter toward overdensities when ``coupling`` > 0.
    """
    _, ksq = _minus_ksq(rho.torus)
    rho_hat = np.fft.fftn(rho.values)
    rho_hat.flat[0] = 0.0  # mean subtraction
    with np.errstate(divide="ignore", invalid="ignore"):
        phi_hat = np.where(ksq > 0.0, -coupling * rho_hat / ksq, 0.0)
    return rho.with_values(np.fft.ifftn(phi_hat).real)


def gravity_gradient(rho: PeriodicField, coupling: float) -> tuple[PeriodicField, ...]:
    """Spectral gradient of ``gravity_potential`` (exact for the solved field)."""
    ks, ksq = _minus_ksq(rho.torus)
    rho_hat = np.fft.fftn(rho.values)
    rho_hat.flat[0] = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        phi_hat = np.where(ksq > 0.0, -coupling * rho_hat / ksq, 0.0)
    out = []
    for k in ks:
        out.append(rho.with_values(np.fft.ifftn(1j * k * phi_hat).real))
    return tuple(out)


@dataclass(frozen=True)
class SelfGravityLaw(_LawBase):
    """Isothermal pressure law plus smoothed self-gravity.

    The gravitational part solves the periodic Poisson problem each call and
    is then smoothed with the same mollifier as the pressure part; its
    gradient is computed spectrally (exact for the trigonometric solution)
    and smoothed likewise.
    """

    pressure_coeff: float
    coupling: float = 1.0
    floor_exponent: float = 2.0
    beta: float | None = 10.0
    smoothing: Smoothing = Smoothing("smooth-bump", alpha=0.1)

    variant = "selfgravity"

    def _pressure(self) -> IsothermalLaw:
        return IsothermalLaw(self.pressure_coeff, self.floor_exponent,
                             self.beta, self.smoothing)

    def beta_term(self, eps: float) -> float:
        return eps**self.beta if self.beta is not None else 0.0

    def _raw_potential(self, rho, eps):
        return self._pressure()._raw_potential(rho, eps)

    def potential(self, rho, eps):
        m = self.mollifier(rho.torus, eps)
        pressure = convolve(self._raw_potential(rho, eps), m)
        grav = convolve(gravity_potential(rho, self.coupling), m)
        return pressure + grav

    def potential_gradient(self, rho, eps):
        m = self.mollifier(rho.torus, eps)
        pressure = _smoothed_gradient(self._raw_potential(rho, eps), m)
        grav = tuple(convolve(g, m) for g in gravity_gradient(rho, self.coupling))
        return tuple(p + g for p, g in zip(pressure, grav))

    def pointwise_potential(self, rho, eps):
        return self._raw_potential(rho, eps) + gravity_potential(rho, self.coupling)

    def validate(self, eps=None):
        _check_log_law(self.variant, self.pressure_coeff, self.floor_exponent,
                       self.beta, self.smoothing)


STATE_LAWS = ("isothermal", "isentropic", "shallow", "selfgravity")
