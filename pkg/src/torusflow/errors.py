"""Exception types shared across the package."""


class TorusMismatchError(ValueError):
    """Two grid objects that must share a torus do not."""


class PositivityError(RuntimeError):
    """Density (or water height) dropped to zero or below.

    Attributes
    ----------
    cell : tuple of int
        Index of the first offending cell.
    time : float or None
        Simulation time at which the breach was detected (attached by the
        integrator; None when raised from a bare field operation).
    method : str or None
        Time-stepping method active when the breach occurred.
    """

    def __init__(self, cell, time=None, method=None):
        self.cell = tuple(int(c) for c in cell)
        self.time = time
        self.method = method
        where = f"cell {self.cell}"
        if time is not None:
            where += f" at t={time!r}"
        if method is not None:
            where += f" ({method})"
        super().__init__(f"nonpositive density in {where}")


class ConstraintError(ValueError):
    """A physical/scheme parameter violates its validity constraint.

    The message is a single line naming the violated constraint, e.g.
    ``α < 1/6 required for isothermal, got 0.2``.
    """


class VacuumStatesError(ValueError):
    """Both Riemann states are dry/vacuum; no solution is defined."""


class BoundaryReachedError(RuntimeError):
    """Waves of a similarity solution have left the valid comparison window."""
