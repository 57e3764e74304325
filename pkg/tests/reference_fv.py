"""Independent first-order finite-volume reference solver.

A textbook Rusanov (local Lax-Friedrichs) scheme on a line with outflow
boundaries, written only to validate the exact Riemann oracles.  It shares no
code with the main solver: different discretization (flux-difference finite
volume vs relaxed upwind ODE), different domain (line vs torus), different
time stepping (CFL-adaptive vs fixed).
"""

import numpy as np


def _swe_flux(h, hu, g):
    u = np.where(h > 1e-12, hu / np.maximum(h, 1e-12), 0.0)
    return hu, hu * u + 0.5 * g * h * h, np.abs(u) + np.sqrt(g * np.maximum(h, 0.0))


def _isothermal_flux(rho, m, K):
    u = np.where(rho > 1e-300, m / np.maximum(rho, 1e-300), 0.0)
    return m, m * u + K * rho, np.abs(u) + np.sqrt(K)


def rusanov_riemann(system, left, right, t_end, x_span=3.0, cells=10_000,
                    cfl=0.9, g=9.8, K=0.04):
    """Solve a Riemann problem on [-x_span, x_span] with the jump at x = 0.

    system: "shallow" or "isothermal"; left/right: (density, velocity).
    Returns (x_centers, density, velocity) at t_end.
    """
    dx = 2.0 * x_span / cells
    x = -x_span + (np.arange(cells) + 0.5) * dx
    q0 = np.where(x < 0.0, left[0], right[0])
    q1 = q0 * np.where(x < 0.0, left[1], right[1])
    flux = _swe_flux if system == "shallow" else _isothermal_flux
    coeff = g if system == "shallow" else K

    t = 0.0
    while t < t_end:
        f0, f1, speed = flux(q0, q1, coeff)
        dt = min(cfl * dx / max(speed.max(), 1e-12), t_end - t)
        # outflow ghosts by edge copy
        q0e = np.concatenate(([q0[0]], q0, [q0[-1]]))
        q1e = np.concatenate(([q1[0]], q1, [q1[-1]]))
        f0e = np.concatenate(([f0[0]], f0, [f0[-1]]))
        f1e = np.concatenate(([f1[0]], f1, [f1[-1]]))
        se = np.concatenate(([speed[0]], speed, [speed[-1]]))
        a = np.maximum(se[:-1], se[1:])
        num0 = 0.5 * (f0e[:-1] + f0e[1:]) - 0.5 * a * (q0e[1:] - q0e[:-1])
        num1 = 0.5 * (f1e[:-1] + f1e[1:]) - 0.5 * a * (q1e[1:] - q1e[:-1])
        q0 = q0 - (dt / dx) * (num0[1:] - num0[:-1])
        q1 = q1 - (dt / dx) * (num1[1:] - num1[:-1])
        q0 = np.maximum(q0, 0.0)
        t += dt
    u = np.where(q0 > 1e-12, q1 / np.maximum(q0, 1e-12), 0.0)
    return x, q0, u
