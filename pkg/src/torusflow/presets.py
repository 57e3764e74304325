"""Shipped benchmark scenarios.

Each preset is a scenario-file text block; ``load_preset`` parses it like any
user file.  The dam-break presets place the jump at x = pi on the torus; the
initial data, step sizes, cell counts, averaging weights, and split
regularization follow the published benchmark configurations they are named
after.
"""

from __future__ import annotations

from .scenario import Scenario

PRESETS: dict[str, str] = {
    # isothermal gas expanding into a near-vacuum region (Bouchut's dam-break
    # configuration): demanding because of the 1e-6 density plateau
    "bouchut-vacuum": """
        system = isothermal
        dim = 1
        cells = 2000
        ic.rho = piecewise(x, pi, 1e-6, 1.0)
        ic.u = 0
        constants.K = 0.04
        scheme.smoothing = three-cell
        scheme.smoothing.w = 0.3
        scheme.beta = 10
        scheme.N = 2
        scheme.delta = 0
        scheme.rho_min = 1e-6
        run.dt = 0.00002
        run.t_final = 0.5
        run.snapshots = 0.25, 0.5
        run.monitor_every = 500
        verify.psi = trig:1 bump:2.64,0.5 bump:3.64,0.5
    """,
    # Toro's shallow-water test 1: left rarefaction + right shock
    "toro-swe-1": """
        system = shallow
        dim = 1
        cells = 500
        ic.rho = piecewise(x, pi, 1.0, 0.1)
        ic.u = piecewise(x, pi, 2.5, 0.0)
        constants.g = 9.8
        scheme.smoothing = three-cell
        scheme.smoothing.w = 0.1
        scheme.delta = 0
        scheme.rho_min = 1e-6
        run.dt = 0.0001
        run.t_final = 0.25
        run.snapshots = 0.25
        run.monitor_every = 250
        verify.psi = trig:1 bump:2.64,0.5 bump:3.64,0.5
    """,
    # Toro's test 2: two strong rarefactions with a near-dry middle state
    "toro-swe-2": """
        system = shallow
        dim = 1
        cells = 2000
        ic.rho = 1.0
        ic.u = piecewise(x, pi, -5.0, 5.0)
        ic.smooth = three-cell
        ic.smooth.w = 0.1
        constants.g = 9.8
        scheme.smoothing = three-cell
        scheme.smoothing.w = 0.1
        scheme.delta = 1
        scheme.rho_min = 1e-6
        run.dt = 0.00004
        run.t_final = 0.1
        run.snapshots = 0.1
        run.monitor_every = 500
        verify.psi = trig:1 bump:2.64,0.5 bump:3.64,0.5
    """,
    # Toro's test 3: dam break over a dry bed (right height 0, floored)
    "toro-swe-3": """
        system = shallow
        dim = 1
        cells = 5000
        ic.rho = piecewise(x, pi, 1.0, 0.0)
        ic.u = 0
        ic.smooth = three-cell
        ic.smooth.w = 0.1
        constants.g = 9.8
        scheme.smoothing = three-cell
        scheme.smoothing.w = 0.1
        scheme.delta = 0.5
        scheme.rho_min = 1e-10
        run.dt = 0.000008
        run.t_final = 0.5
        run.snapshots = 0.2, 0.5
        run.monitor_every = 2500
        verify.psi = trig:1 bump:2.64,0.5 bump:3.64,0.5
    """,
    # gravitational collapse of a near-uniform isothermal gas: the single-mode
    # perturbation grows because self-gravity beats the weak pressure support
    "jeans-1d": """
        system = selfgravity
        dim = 1
        cells = 256
        ic.rho = 1 + 0.1*cos(x)
        ic.u = 0
        constants.K = 0.04
        constants.G = 1.0
        scheme.smoothing = smooth-bump
        scheme.alpha = 0.15
        scheme.beta = 0.5
        scheme.N = 3
        scheme.delta = 0
        scheme.rho_min = 1e-6
        run.dt = 0.0001
        run.t_final = 0.5
        run.snapshots = 0.25, 0.5
        run.monitor_every = 250
        verify.psi = trig:1 bump:2.64,0.5 bump:3.64,0.5
    """,
}


def preset_names() -> tuple[str, ...]:
    return tuple(PRESETS)


def load_preset(name: str, overrides: dict[str, str] | None = None) -> Scenario:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return Scenario.from_text(PRESETS[name], name=name, overrides=overrides)
