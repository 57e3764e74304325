"""Falsification harness: weak-form residuals, decay certification, and exact
Riemann oracles.

The residual of a conservation equation against a smooth periodic test
function psi is

    integral( dU/dt * psi ) - integral( flux * psi' ) + integral( source * psi )

evaluated with the midpoint rule (exact for the piecewise-constant fields the
solver produces).  A solver run is certified by showing these residuals decay
as the grid is refined.  Benchmark accuracy is measured against exact
similarity solutions of dam-break problems, built here from characteristic
analysis and cross-checked against an independent reference discretization in
the test suite before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryReachedError, TorusMismatchError, VacuumStatesError
from .grid import PERIOD, PeriodicField, Torus
from .scheme import FlowState, recover_velocity

DRY = 1e-14  # states at or below this are treated as dry/vacuum


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Smooth periodic test function sampled (with its gradient) per cell."""

    torus: Torus
    psi_id: str
    values: np.ndarray
    grads: tuple[np.ndarray, ...]

    def __post_init__(self):
        if "," in self.psi_id or "\n" in self.psi_id:
            raise ValueError("psi_id must not contain commas or newlines")
        vol = self.torus.cell_volume
        for g in self.grads:
            total = abs(vol * float(np.sum(g)))
            scale = vol * float(np.sum(np.abs(g))) + 1e-300
            if total > 1e-9 * scale + 1e-12:
                raise ValueError(
                    f"test function {self.psi_id!r}: gradient does not "
                    f"integrate to zero (got {total:.3e})"
                )


def gaussian_bump(torus: Torus, center, width: float) -> TestFunction:
    """Periodic analog of a Gaussian bump: exp((cos(x - c) - 1) / w**2) per axis.

    Smooth and exactly periodic; near the center it matches
    exp(-(x - c)**2 / (2 w**2)).
    """
    centers = np.atleast_1d(np.asarray(center, dtype=float))
    if len(centers) != torus.dim:
        raise ValueError(f"expected {torus.dim} center coordinates")
    meshes = torus.meshes()
    factors = [np.exp((np.cos(x - c) - 1.0) / width**2) for x, c in zip(meshes, centers)]
    values = factors[0] if torus.dim == 1 else factors[0] * factors[1]
    grads = []
    for a, (x, c) in enumerate(zip(meshes, centers)):
        d = values * (-np.sin(x - c) / width**2)
        grads.append(d)
    cdesc = "_".join(f"{c:.6g}" for c in centers)
    return TestFunction(torus, f"bump-c{cdesc}-w{width:.6g}", values, tuple(grads))


def trig_mode(torus: Torus, k) -> TestFunction:
    """Single trigonometric mode: sin(k x) in 1-D, sin(kx x) sin(ky y) in 2-D."""
    ks = np.atleast_1d(np.asarray(k, dtype=int))
    if len(ks) != torus.dim:
        raise ValueError(f"expected {torus.dim} wavenumbers")
    if np.any(ks == 0):
        raise ValueError("trig-mode wavenumbers must be nonzero")
    meshes = torus.meshes()
    factors = [np.sin(kk * x) for x, kk in zip(meshes, ks)]
    dfactors = [kk * np.cos(kk * x) for x, kk in zip(meshes, ks)]
    if torus.dim == 1:
        values, grads = factors[0], (dfactors[0],)
    else:
        values = factors[0] * factors[1]
        grads = (dfactors[0] * factors[1], factors[0] * dfactors[1])
    kdesc = "_".join(str(int(kk)) for kk in ks)
    return TestFunction(torus, f"trig-k{kdesc}", values, grads)


# ---------------------------------------------------------------------------
# weak residuals and decay certification
# ---------------------------------------------------------------------------

def weak_residual(state: FlowState, rhs, law, psi: TestFunction,
                  eps: float) -> dict[str, float]:
    """Residual of every conservation equation plus the state-law consistency
    integral, for one test function at one instant.

    ``rhs`` is the tuple of time derivatives (drho, dmom_x[, dmom_y]) produced
    by the scheme at the same instant.  The momentum residual uses the
    scheme's own mollified potential gradient, so it isolates the transport
    discretization; the state-law residual separately measures the gap
    between the mollified potential and the pointwise law.
    """
    if psi.torus != state.torus:
        raise TorusMismatchError("test function and state live on different tori")
    vol = state.torus.cell_volume

    def quad(values):
        return vol * float(np.sum(values))

    velocities = recover_velocity(state)
    momenta = state.momenta
    drho, *dmom = rhs
    grad_phi = law.potential_gradient(state.rho, eps)

    out = {}
    cont = quad(drho.values * psi.values)
    for mom, g in zip(momenta, psi.grads):
        cont -= quad(mom.values * g)
    out["continuity"] = cont

    names = ("momentum_x", "momentum_y")
    for a, (dm, mom_a) in enumerate(zip(dmom, momenta)):
        res = quad(dm.values * psi.values)
        for b, (u_b, g) in enumerate(zip(velocities, psi.grads)):
            res -= quad(mom_a.values * u_b.values * g)
        res += quad(state.rho.values * grad_phi[a].values * psi.values)
        out[names[a]] = res

    phi = law.potential(state.rho, eps)
    phi_exact = law.pointwise_potential(state.rho, eps)
    out["statelaw"] = quad((phi.values - phi_exact.values) * psi.values)
    return out


@dataclass(frozen=True)
class ResidualRecord:
    eps: float
    t: float
    psi_id: str
    equation: str
    value: float


REPORT_HEADER = "eps,t,psi_id,equation,value"


def format_report(records) -> str:
    lines = [REPORT_HEADER]
    for r in records:
        lines.append(f"{r.eps!r},{r.t!r},{r.psi_id},{r.equation},{r.value!r}")
    return "\n".join(lines) + "\n"


def write_report(records, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_report(records))


def read_report(path) -> list[ResidualRecord]:
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != REPORT_HEADER:
            raise ValueError(f"unexpected report header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            eps, t, psi_id, equation, value = line.split(",")
            records.append(ResidualRecord(float(eps), float(t), psi_id,
                                          equation, float(value)))
    return records


@dataclass(frozen=True)
class DecayVerdict:
    equation: str
    slope: float
    passed: bool
    floor: float | None = None


def decay_floor(law) -> float | None:
    """Theoretical decay-rate floor min(1 - 3*alpha, beta) for the log law."""
    variant = getattr(law, "variant", None)
    if variant not in ("isothermal", "selfgravity"):
        return None
    if law.smoothing.kind != "smooth-bump" or law.beta is None:
        return None
    return min(1.0 - 3.0 * law.smoothing.alpha, law.beta)


def certify_decay(records, floor: float | None = None) -> dict[str, DecayVerdict]:
    """Fit the log-log slope of residual magnitude against eps, per equation.

    PASS means the fitted slope is strictly positive (residuals decay under
    refinement).  Per eps value the largest magnitude over test functions and
    times is used; at least three eps values (geometric progression) are
    required.
    """
    by_eq: dict[str, dict[float, float]] = {}
    for r in records:
        slot = by_eq.setdefault(r.equation, {})
        slot[r.eps] = max(slot.get(r.eps, 0.0), abs(r.value))
    out = {}
    for eq, per_eps in by_eq.items():
        if len(per_eps) < 3:
            raise ValueError(
                f"equation {eq!r} has only {len(per_eps)} eps values; "
                "need at least 3"
            )
        eps = np.array(sorted(per_eps))
        vals = np.array([per_eps[e] for e in eps])
        vals = np.maximum(vals, 1e-300)
        slope = float(np.polyfit(np.log(eps), np.log(vals), 1)[0])
        out[eq] = DecayVerdict(eq, slope, slope > 0.0, floor)
    return out


# ---------------------------------------------------------------------------
# exact Riemann oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Wave:
    family: int          # 1 = left-going family, 2 = right-going family
    kind: str            # "shock" | "rarefaction" | "dry-front"
    head: float          # fastest signal of the wave (xi = x/t)
    tail: float          # slowest signal (equals head for shocks)


class ShallowWaterRiemann:
    """Exact similarity solution of the 1-D shallow-water dam-break problem.

    Handles the wet/wet case (shock or rarefaction per side, solved from the
    depth function), single-sided dry beds, and dry-bed generation.  Evaluate
    with ``oracle(xi)`` where xi = x/t; returns (h, u) arrays.
    """

    def __init__(self, h_left, u_left, h_right, u_right, gravity):
        if h_left < 0.0 or h_right < 0.0:
            raise ValueError("water heights must be nonnegative")
        if h_left <= DRY and h_right <= DRY:
            raise VacuumStatesError("both states are dry")
        self.g = float(gravity)
        self.hl, self.ul = float(h_left), float(u_left)
        self.hr, self.ur = float(h_right), float(u_right)
        self.cl = math.sqrt(self.g * self.hl) if self.hl > DRY else 0.0
        self.cr = math.sqrt(self.g * self.hr) if self.hr > DRY else 0.0
        self._build()

    # depth function of one side: the velocity change needed to connect a
    # state at depth h_k to the star depth h
    def _fk(self, h, hk, ck):
        if h <= hk:
            return 2.0 * (math.sqrt(self.g * h) - ck)
        return (h - hk) * math.sqrt(0.5 * self.g * (h + hk) / (h * hk))

    def _fk_prime(self, h, hk):
        if h <= hk:
            return math.sqrt(self.g / h)
        gk = math.sqrt(0.5 * self.g * (h + hk) / (h * hk))
        return gk - self.g * (h - hk) / (4.0 * gk * h * h)

    def _build(self):
        g = self.g
        self.waves: list[Wave] = []
        if self.hl <= DRY:
            # water on the right only: one right-family fan ending in a dry front
            self.pattern = "dry-left"
            self.h_star, self.u_star = 0.0, 0.0
            front = self.ur - 2.0 * self.cr
            self.waves.append(Wave(2, "rarefaction", head=self.ur + self.cr, tail=front))
            self.waves.append(Wave(2, "dry-front", head=front, tail=front))
            return
        if self.hr <= DRY:
            self.pattern = "dry-right"
            self.h_star, self.u_star = 0.0, 0.0
            front = self.ul + 2.0 * self.cl
            self.waves.append(Wave(1, "rarefaction", head=self.ul - self.cl, tail=front))
            self.waves.append(Wave(1, "dry-front", head=front, tail=front))
            return
        if self.ur - self.ul >= 2.0 * (self.cl + self.cr):
            # expansion strong enough to tear the water apart
            self.pattern = "dry-middle"
            self.h_star, self.u_star = 0.0, 0.0
            fl = self.ul + 2.0 * self.cl
            fr = self.ur - 2.0 * self.cr
            self.waves.append(Wave(1, "rarefaction", head=self.ul - self.cl, tail=fl))
            self.waves.append(Wave(1, "dry-front", head=fl, tail=fl))
            self.waves.append(Wave(2, "dry-front", head=fr, tail=fr))
            self.waves.append(Wave(2, "rarefaction", head=self.ur + self.cr, tail=fr))
            return

        self.pattern = "wet"
        du = self.ur - self.ul

        def f(h):
            return self._fk(h, self.hl, self.cl) + self._fk(h, self.hr, self.cr) + du

        # two-rarefaction estimate, then safeguarded Newton
        h = max(((2.0 * (self.cl + self.cr) - du) / 4.0) ** 2 / g, 1e-12)
        lo, hi = 0.0, max(self.hl, self.hr)
        while f(hi) < 0.0:
            hi *= 2.0
        for _ in range(200):
            fh = f(h)
            if fh > 0.0:
                hi = h
            else:
                lo = h
            dh = fh / (self._fk_prime(h, self.hl) + self._fk_prime(h, self.hr))
            h_new = h - dh
            if not lo < h_new < hi:
                h_new = 0.5 * (lo + hi)
            if abs(h_new - h) <= 1e-15 * h:
                h = h_new
                break
            h = h_new
        self.h_star = h
        self.u_star = 0.5 * (self.ul + self.ur) + 0.5 * (
            self._fk(h, self.hr, self.cr) - self._fk(h, self.hl, self.cl))
        c_star = math.sqrt(g * h)

        if h > self.hl:
            ql = math.sqrt(0.5 * (h + self.hl) * h / self.hl**2)
            s = self.ul - self.cl * ql
            self.waves.append(Wave(1, "shock", head=s, tail=s))
        else:
            self.waves.append(Wave(1, "rarefaction", head=self.ul - self.cl,
                                   tail=self.u_star - c_star))
        if h > self.hr:
            qr = math.sqrt(0.5 * (h + self.hr) * h / self.hr**2)
            s = self.ur + self.cr * qr
            self.waves.append(Wave(2, "shock", head=s, tail=s))
        else:
            self.waves.append(Wave(2, "rarefaction", head=self.ur + self.cr,
                                   tail=self.u_star + c_star))

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        h = np.empty_like(xi)
        u = np.empty_like(xi)
        g = self.g

        def left_fan(z):
            c = (self.ul + 2.0 * self.cl - z) / 3.0
            return c * c / g, (self.ul + 2.0 * self.cl + 2.0 * z) / 3.0

        def right_fan(z):
            c = (z - (self.ur - 2.0 * self.cr)) / 3.0
            return c * c / g, (self.ur - 2.0 * self.cr + 2.0 * z) / 3.0

        if self.pattern == "dry-left":
            front = self.ur - 2.0 * self.cr
            head = self.ur + self.cr
            dry = xi <= front
            fan = (xi > front) & (xi < head)
            h[dry], u[dry] = 0.0, 0.0
            h[fan], u[fan] = right_fan(xi[fan])
            rest = xi >= head
            h[rest], u[rest] = self.hr, self.ur
            return h, u
        if self.pattern == "dry-right":
            front = self.ul + 2.0 * self.cl
            head = self.ul - self.cl
            dry = xi >= front
            fan = (xi < front) & (xi > head)
            h[dry], u[dry] = 0.0, 0.0
            h[fan], u[fan] = left_fan(xi[fan])
            rest = xi <= head
            h[rest], u[rest] = self.hl, self.ul
            return h, u
        if self.pattern == "dry-middle":
            fl = self.ul + 2.0 * self.cl
            fr = self.ur - 2.0 * self.cr
            left = xi <= self.ul - self.cl
            lfan = (xi > self.ul - self.cl) & (xi < fl)
            dry = (xi >= fl) & (xi <= fr)
            rfan = (xi > fr) & (xi < self.ur + self.cr)
            right = xi >= self.ur + self.cr
            h[left], u[left] = self.hl, self.ul
            h[lfan], u[lfan] = left_fan(xi[lfan])
            h[dry], u[dry] = 0.0, 0.0
            h[rfan], u[rfan] = right_fan(xi[rfan])
            h[right], u[right] = self.hr, self.ur
            return h, u

        lw, rw = self.waves
        c_star = math.sqrt(g * self.h_star)
        left = xi <= lw.head
        h[left], u[left] = self.hl, self.ul
        if lw.kind == "rarefaction":
            fan = (xi > lw.head) & (xi < lw.tail)
            h[fan], u[fan] = left_fan(xi[fan])
            star_lo = lw.tail
        else:
            star_lo = lw.head
        star = (xi > star_lo) & (xi < rw.tail)
        h[star], u[star] = self.h_star, self.u_star
        if rw.kind == "rarefaction":
            fan = (xi >= rw.tail) & (xi < rw.head)
            h[fan], u[fan] = right_fan(xi[fan])
        right = xi >= rw.head
        h[right], u[right] = self.hr, self.ur
        return h, u

    def shocks(self):
        """(speed, (h, u) ahead-left, (h, u) behind-right) per shock wave."""
        out = []
        for w in self.waves:
            if w.kind != "shock":
                continue
            if w.family == 1:
                out.append((w.head, (self.hl, self.ul), (self.h_star, self.u_star)))
            else:
                out.append((w.head, (self.h_star, self.u_star), (self.hr, self.ur)))
        return out

    def extent(self, atol: float = 1e-12):
        """Signal-speed range (xi_min, xi_max) outside which the solution
        equals the edge states."""
        speeds = [w.head for w in self.waves] + [w.tail for w in self.waves]
        return min(speeds), max(speeds)

    def companion(self) -> "ShallowWaterRiemann":
        """The Riemann problem seen at the antipodal jump of a two-state
        initial condition on the torus (left and right states swapped)."""
        return ShallowWaterRiemann(self.hr, self.ur, self.hl, self.ul, self.g)


class IsothermalRiemann:
    """Exact similarity solution for the isothermal gas, sound speed sqrt(K).

    Rarefactions are exponential in the self-similar variable (the Riemann
    invariants are u +/- c*log(rho)), so a fan expanding into vacuum has no
    finite front: density decays exponentially ahead of the gas.  ``extent``
    therefore takes a density cutoff below which the state counts as
    undisturbed.
    """

    def __init__(self, rho_left, u_left, rho_right, u_right, pressure_coeff):
        if rho_left < 0.0 or rho_right < 0.0:
            raise ValueError("densities must be nonnegative")
        if rho_left <= DRY and rho_right <= DRY:
            raise VacuumStatesError("both states are vacuum")
        if pressure_coeff <= 0.0:
            raise ValueError("pressure coefficient must be positive")
        self.c = math.sqrt(pressure_coeff)
        self.rl, self.ul = float(rho_left), float(u_left)
        self.rr, self.ur = float(rho_right), float(u_right)
        self._build()

    def _f_left(self, r):
        if r <= self.rl:
            return self.ul - self.c * math.log(r / self.rl)
        return self.ul - self.c * (r - self.rl) / math.sqrt(self.rl * r)

    def _f_right(self, r):
        if r <= self.rr:
            return self.ur + self.c * math.log(r / self.rr)
        return self.ur + self.c * (r - self.rr) / math.sqrt(self.rr * r)

    def _build(self):
        c = self.c
        self.waves: list[Wave] = []
        if self.rl <= DRY:
            self.pattern = "vacuum-left"
            self.rho_star, self.u_star = 0.0, 0.0
            self.waves.append(Wave(2, "rarefaction", head=self.ur + c, tail=-math.inf))
            return
        if self.rr <= DRY:
            self.pattern = "vacuum-right"
            self.rho_star, self.u_star = 0.0, 0.0
            self.waves.append(Wave(1, "rarefaction", head=self.ul - c, tail=math.inf))
            return

        self.pattern = "wet"
        # the two wave curves always intersect at positive density: solve
        # f_left(r) = f_right(r) by bisection in log-density
        lo = math.log(min(self.rl, self.rr)) - 2.0 - abs(self.ur - self.ul) / c
        hi = math.log(max(self.rl, self.rr)) + 2.0 + abs(self.ur - self.ul) / c

        def gap(lr):
            r = math.exp(lr)
            return self._f_left(r) - self._f_right(r)

        while gap(lo) < 0.0:
            lo -= 10.0
        while gap(hi) > 0.0:
            hi += 10.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if gap(mid) >= 0.0:
                lo = mid
            else:
                hi = mid
        self.rho_star = math.exp(0.5 * (lo + hi))
        self.u_star = 0.5 * (self._f_left(self.rho_star) + self._f_right(self.rho_star))

        if self.rho_star > self.rl:
            s = self.ul - c * math.sqrt(self.rho_star / self.rl)
            self.waves.append(Wave(1, "shock", head=s, tail=s))
        else:
            self.waves.append(Wave(1, "rarefaction", head=self.ul - c,
                                   tail=self.u_star - c))
        if self.rho_star > self.rr:
            s = self.ur + c * math.sqrt(self.rho_star / self.rr)
            self.waves.append(Wave(2, "shock", head=s, tail=s))
        else:
            self.waves.append(Wave(2, "rarefaction", head=self.ur + c,
                                   tail=self.u_star + c))

    def _left_fan(self, z):
        # family 1: xi = u - c, invariant u + c log(rho) frozen at the left state
        u = z + self.c
        rho = self.rl * np.exp((self.ul - u) / self.c)
        return rho, u

    def _right_fan(self, z):
        u = z - self.c
        rho = self.rr * np.exp((u - self.ur) / self.c)
        return rho, u

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        rho = np.empty_like(xi)
        u = np.empty_like(xi)
        if self.pattern == "vacuum-left":
            head = self.ur + self.c
            fan = xi < head
            rho[fan], u[fan] = self._right_fan(xi[fan])
            rest = ~fan
            rho[rest], u[rest] = self.rr, self.ur
            return rho, u
        if self.pattern == "vacuum-right":
            head = self.ul - self.c
            fan = xi > head
            rho[fan], u[fan] = self._left_fan(xi[fan])
            rest = ~fan
            rho[rest], u[rest] = self.rl, self.ul
            return rho, u

        lw, rw = self.waves
        left = xi <= lw.head
        rho[left], u[left] = self.rl, self.ul
        if lw.kind == "rarefaction":
            fan = (xi > lw.head) & (xi < lw.tail)
            rho[fan], u[fan] = self._left_fan(xi[fan])
            star_lo = lw.tail
        else:
            star_lo = lw.head
        star = (xi > star_lo) & (xi < rw.tail)
        rho[star], u[star] = self.rho_star, self.u_star
        if rw.kind == "rarefaction":
            fan = (xi >= rw.tail) & (xi < rw.head)
            rho[fan], u[fan] = self._right_fan(xi[fan])
        right = xi >= rw.head
        rho[right], u[right] = self.rr, self.ur
        return rho, u

    def shocks(self):
        out = []
        for w in self.waves:
            if w.kind != "shock":
                continue
            if w.family == 1:
                out.append((w.head, (self.rl, self.ul), (self.rho_star, self.u_star)))
            else:
                out.append((w.head, (self.rho_star, self.u_star), (self.rr, self.ur)))
        return out

    def extent(self, atol: float = 1e-12):
        """Signal range outside which density deviates from the edge states by
        less than ``atol`` (exponential fan tails are cut at that level)."""
        speeds = []
        for w in self.waves:
            speeds.append(w.head)
            tail = w.tail
            if tail == -math.inf:
                tail = self.ur + self.c + self.c * (math.log(atol) - math.log(self.rr))
            elif tail == math.inf:
                tail = self.ul - self.c - self.c * (math.log(atol) - math.log(self.rl))
            speeds.append(tail)
        return min(speeds), max(speeds)

    def companion(self) -> "IsothermalRiemann":
        """The Riemann problem seen at the antipodal jump of a two-state
        initial condition on the torus (left and right states swapped)."""
        return IsothermalRiemann(self.rr, self.ur, self.rl, self.ul, self.c**2)


def riemann_oracle_shallow(h_left, h_right, u_left, u_right, g, xi):
    """Functional wrapper: exact (h, u) of the shallow-water dam break at xi = x/t."""
    return ShallowWaterRiemann(h_left, u_left, h_right, u_right, g)(xi)


def riemann_oracle_isothermal(rho_left, rho_right, u_left, u_right, pressure_coeff, xi):
    """Functional wrapper: exact (rho, u) of the isothermal dam break at xi = x/t."""
    return IsothermalRiemann(rho_left, u_left, rho_right, u_right, pressure_coeff)(xi)


# ---------------------------------------------------------------------------
# comparing runs against oracles
# ---------------------------------------------------------------------------

def _wrap(dx):
    return (dx + math.pi) % PERIOD - math.pi


def comparison_window(oracle, t: float, tail_cutoff: float = 1e-6):
    """Center-relative interval on which the similarity solution is valid.

    A two-state initial condition on the torus carries a second jump at the
    antipode; its waves (the companion Riemann problem with the states
    swapped) invade the domain from both sides.  The valid window is the arc
    they have not reached.  Raises BoundaryReachedError once the primary
    waves overlap the contaminated arc.  Fan tails thinner than
    ``tail_cutoff`` (relative density) count as undisturbed.
    """
    s1 = oracle.extent(tail_cutoff)
    s2 = oracle.companion().extent(tail_cutoff)
    lo = -math.pi + s2[1] * t
    hi = math.pi + s2[0] * t
    if not (lo < s1[0] * t and s1[1] * t < hi):
        raise BoundaryReachedError(
            f"similarity waves span [{s1[0] * t:.3g}, {s1[1] * t:.3g}] but the "
            f"uncontaminated window is only ({lo:.3g}, {hi:.3g}); waves have "
            "reached the periodic boundary"
        )
    return lo, hi


def compare_to_oracle(snapshot, oracle, center: float, norm: str = "l1",
                      component: str = "rho", tail_cutoff: float = 1e-6) -> float:
    """Error of a trajectory snapshot against an exact Riemann oracle.

    ``snapshot`` is a (t, FlowState) pair with t > 0; ``center`` is the
    position of the initial jump on the torus.  The comparison runs over the
    window still untouched by the companion waves of the antipodal jump (see
    ``comparison_window``); BoundaryReachedError signals an invalid window.
    Norms: "l1" is the mean absolute error normalized by the window measure;
    "linf-away-from-fronts" excludes a 5-cell collar around every oracle
    shock.
    """
    t, state = snapshot
    if t <= 0.0:
        raise ValueError("snapshot time must be positive for a similarity comparison")
    if state.torus.dim != 1:
        raise ValueError("oracle comparisons are 1-D")
    lo, hi = comparison_window(oracle, t, tail_cutoff)
    x = state.torus.axis_centers()
    dx = _wrap(x - center)
    window = (dx > lo) & (dx < hi)
    xi = dx / t
    exact_rho, exact_u = oracle(xi)
    if component == "rho":
        num = state.rho.values
        exact = exact_rho
    elif component == "u":
        num = recover_velocity(state)[0].values
        exact = exact_u
    else:
        raise ValueError(f"unknown component {component!r}")
    diff = np.abs(num - exact)[window]
    if norm == "l1":
        return float(diff.sum()) * state.torus.cell_volume / (hi - lo)
    if norm == "linf-away-from-fronts":
        mask = np.ones_like(diff, dtype=bool)
        collar = 5 * state.torus.h
        for speed, _, _ in oracle.shocks():
            mask &= np.abs(_wrap(x[window] - (center + speed * t))) > collar
        return float(diff[mask].max())
    raise ValueError(f"unknown norm {norm!r}")


# ---------------------------------------------------------------------------
# front diagnostics
# ---------------------------------------------------------------------------

def first_upcrossing(x: np.ndarray, values: np.ndarray, level: float) -> float:
    """Position (linear interpolation) of the first left-to-right upcrossing."""
    below = values[:-1] <= level
    above = values[1:] > level
    idx = np.nonzero(below & above)[0]
    if len(idx) == 0:
        raise ValueError(f"profile never crosses level {level}")
    i = int(idx[0])
    frac = (level - values[i]) / (values[i + 1] - values[i])
    return float(x[i] + frac * (x[i + 1] - x[i]))


def front_width(x: np.ndarray, values: np.ndarray, lo_frac: float = 0.1,
                hi_frac: float = 0.9) -> float:
    """Width of a rising front between its relative lo/hi levels."""
    vmin, vmax = float(values.min()), float(values.max())
    lo = vmin + lo_frac * (vmax - vmin)
    hi = vmin + hi_frac * (vmax - vmin)
    x_lo = first_upcrossing(x, values, lo)
    rest = x > x_lo
    x_hi = first_upcrossing(x[rest], values[rest], hi)
    return x_hi - x_lo
