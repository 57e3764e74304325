"""Uniform periodic grids, sampled fields, mollifiers, and discrete convolution.

Everything lives on the torus [0, 2*pi)**dim, dim = 1 or 2, split into
``cells`` equal cells per axis.  Fields are piecewise constant per cell and
carried as plain float64 arrays; all index arithmetic wraps modulo the cell
count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TorusMismatchError

PERIOD = 2.0 * math.pi


@dataclass(frozen=True)
class Torus:
    """Uniform periodic grid on [0, 2*pi)**dim with ``cells`` cells per axis."""

    dim: int
    cells: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.cells < 2:
            raise ValueError(f"cells must be >= 2, got {self.cells}")

    @property
    def h(self) -> float:
        """Cell width (identical per axis)."""
        return PERIOD / self.cells

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cells,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.h**self.dim

    @property
    def volume(self) -> float:
        return PERIOD**self.dim

    def axis_centers(self) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        return (np.arange(self.cells) + 0.5) * self.h

    def meshes(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinate arrays, one per axis, each of shape ``shape``."""
        x = self.axis_centers()
        if self.dim == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))


def _check_same_torus(a, b):
    if a.torus != b.torus:
        raise TorusMismatchError(f"torus mismatch: {a.torus} vs {b.torus}")


@dataclass(frozen=True)
class PeriodicField:
    """A scalar field sampled per cell on a torus.

    Values are stored as a read-only float64 array of shape ``torus.shape``.
    Construction rejects NaN/inf so that every public operation hands back a
    finite field.
    """

    torus: Torus
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != self.torus.shape:
            raise ValueError(
                f"field shape {vals.shape} does not match torus shape {self.torus.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_function(cls, torus: Torus, fn) -> "PeriodicField":
        """Sample ``fn`` at cell centers; ``fn`` receives one array per axis."""
        return cls(torus, np.broadcast_to(fn(*torus.meshes()), torus.shape))

    @classmethod
    def constant(cls, torus: Torus, value: float) -> "PeriodicField":
        return cls(torus, np.full(torus.shape, float(value)))

    # -- reductions --------------------------------------------------------
    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def integral(self) -> float:
        """Midpoint-rule integral over the torus (cell sum times cell volume)."""
        return float(self.values.sum()) * self.torus.cell_volume

    # -- arithmetic (new fields, inputs untouched) -------------------------
    def with_values(self, values) -> "PeriodicField":
        return PeriodicField(self.torus, values)

    def _coerce(self, other):
        if isinstance(other, PeriodicField):
            _check_same_torus(self, other)
            return other.values
        return other

    def __add__(self, other):
        return self.with_values(self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.with_values(self.values - self._coerce(other))

    def __rsub__(self, other):
        return self.with_values(self._coerce(other) - self.values)

    def __mul__(self, other):
        return self.with_values(self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.with_values(self.values / self._coerce(other))

    def __neg__(self):
        return self.with_values(-self.values)


@dataclass(frozen=True)
class Mollifier:
    """Discrete even smoothing kernel on a torus.

    ``weights`` is the 1-D axis kernel at integer cell offsets
    ``-radius .. +radius``; on a 2-D torus the kernel acts as the tensor
    product of this axis kernel, applied separably.  ``deriv_weights`` realizes
    convolution with the derivative of the profile and is ``None`` for the
    three-cell averaging kernel, which has no smooth derivative.

    Invariants (enforced at construction): weights are nonnegative, symmetric
    about offset 0, and sum to exactly 1 (compensated after sampling);
    derivative weights are antisymmetric and sum to exactly 0.
    """

    torus: Torus
    kind: str
    width: float
    weights: np.ndarray
    deriv_weights: np.ndarray | None

    @property
    def radius(self) -> int:
        return len(self.weights) // 2


def _bump(y):
    """The standard compactly supported profile exp(-1/(1-y^2)) on (-1, 1)."""
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    yi = y[inside]
    out[inside] = np.exp(-1.0 / (1.0 - yi * yi))
    return out


def _bump_deriv(y):
    y = np.asarray(y, dtype=np.float64)
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    yi = y[inside]
    onem = 1.0 - yi * yi
    out[inside] = np.exp(-1.0 / onem) * (-2.0 * yi) / (onem * onem)
    return out


def _compensate_sum(weights: np.ndarray, target: float) -> np.ndarray:
    # nudge the center weight until math.fsum hits the target exactly
    w = weights.copy()
    mid = len(w) // 2
    for _ in range(4):
        err = target - math.fsum(w)
        if err == 0.0:
            break
        w[mid] += err
    return w


def make_mollifier(width: float, torus: Torus, kind: str = "smooth-bump",
                   w: float | None = None) -> Mollifier:
    """Build a discrete mollifier on ``torus``.

    Parameters
    ----------
    width : float
        Physical kernel width.  For ``smooth-bump`` the profile is supported
        on (-width, width) and must resolve at least one cell
        (``width >= torus.h``).  Ignored for ``three-cell`` (one cell wide by
        construction; pass ``torus.h``or any value).
    kind : {"smooth-bump", "three-cell"}
        ``smooth-bump``: samples of exp(-1/(1-y^2)), renormalized; carries a
        derivative kernel calibrated to unit first moment.
        ``three-cell``: weights (w, 1-2w, w) over the cell and its neighbors.
    w : float, optional
        Outer weight of the three-cell kernel; required for that kind and
        must satisfy 0 < w < 1/2.
    """
    if kind == "three-cell":
        if w is None:
            raise ValueError("three-cell mollifier requires the outer weight w")
        if not (0.0 < w < 0.5):
            raise ValueError(f"three-cell weight must satisfy 0 < w < 1/2, got {w}")
        weights = _compensate_sum(np.array([w, 1.0 - 2.0 * w, w]), 1.0)
        return Mollifier(torus, kind, torus.h, weights, None)

    if kind == "smooth-bump":
        if width < torus.h:
            raise ValueError(
                f"smooth-bump width {width} is below the cell size {torus.h} "
                "(kernel unresolvable)"
            )
        radius = int(math.floor(width / torus.h))
        offsets = np.arange(-radius, radius + 1)
        y = offsets * (torus.h / width)
        weights = _bump(y)
        weights /= math.fsum(weights)
        weights = _compensate_sum(weights, 1.0)

        deriv = _bump_deriv(y)
        deriv = 0.5 * (deriv - deriv[::-1])  # enforce exact antisymmetry
        # calibrate the first moment so the kernel differentiates exactly
        # at first order: sum_j (-j*h) * d_j = 1
        moment = math.fsum(-offsets * torus.h * deriv)
        if moment <= 0.0:
            raise ValueError(f"smooth-bump width {width} is too narrow to carry "
                             "a derivative kernel on this grid")
        deriv /= moment
        return Mollifier(torus, kind, width, weights, deriv)

    raise ValueError(f"unknown mollifier kind {kind!r}")


def _axis_convolve(values: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    out = np.zeros_like(values)
    for j in range(-radius, radius + 1):
        wj = kernel[j + radius]
        if wj != 0.0:
            out += wj * np.roll(values, j, axis=axis)
    return out


def convolve(f: PeriodicField, m: Mollifier) -> PeriodicField:
    """Periodic discrete convolution of ``f`` with the mollifier.

    Constant fields map to themselves and the cell sum is preserved (the
    weights sum to exactly 1).
    """
    _check_same_torus(f, m)
    out = f.values
    for axis in range(f.torus.dim):
        out = _axis_convolve(out, m.weights, axis)
    return f.with_values(out)


def convolve_derivative(f: PeriodicField, m: Mollifier, axis: int = 0) -> PeriodicField:
    """Convolve ``f`` with the derivative of the mollifier profile along ``axis``.

    Returns the spatial derivative of the mollified field.  Smooth-bump
    mollifiers only; the three-cell kernel carries no derivative.
    """
    _check_same_torus(f, m)
    if m.deriv_weights is None:
        raise ValueError("three-cell mollifier has no smooth derivative kernel")
    if not 0 <= axis < f.torus.dim:
        raise ValueError(f"axis {axis} out of range for dim {f.torus.dim}")
    out = f.values
    for a in range(f.torus.dim):
        kernel = m.deriv_weights if a == axis else m.weights
        out = _axis_convolve(out, kernel, a)
    return f.with_values(out)


def shift(f: PeriodicField, offset_cells) -> PeriodicField:
    """Periodic shift by whole cells: output cell i holds input cell i - offset.

    ``offset_cells`` is an int (1-D) or a pair of ints (2-D).
    """
    if f.torus.dim == 1:
        if np.ndim(offset_cells) == 0:
            offset_cells = (int(offset_cells),)
    offsets = tuple(int(k) for k in offset_cells)
    if len(offsets) != f.torus.dim:
        raise ValueError(f"expected {f.torus.dim} offsets, got {len(offsets)}")
    return f.with_values(np.roll(f.values, offsets, axis=tuple(range(f.torus.dim))))


def centered_difference(f: PeriodicField, axis: int = 0) -> PeriodicField:
    """Second-order centered difference (f[i+1] - f[i-1]) / (2h) along ``axis``."""
    vals = f.values
    d = (np.roll(vals, -1, axis=axis) - np.roll(vals, 1, axis=axis)) / (2.0 * f.torus.h)
    return f.with_values(d)
