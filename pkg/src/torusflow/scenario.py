"""Scenario configuration: a flat key = value text format and its builder.

The format is section-free and line-oriented; nesting is spelled with dotted
keys.  ``#`` starts a comment.  Example::

    system = shallow
    dim = 1
    cells = 500
    ic.rho = piecewise(x, pi, 1.0, 0.1)
    ic.u = piecewise(x, pi, 2.5, 0.0)
    constants.g = 9.8
    scheme.smoothing = three-cell
    scheme.smoothing.w = 0.1
    scheme.delta = 0
    run.dt = 1e-4
    run.t_final = 0.25
    run.snapshots = 0.25

Water height rides in the ``rho`` slot for shallow scenarios to keep the
field naming uniform across systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._expr import Expr
from .errors import ConstraintError
from .grid import PeriodicField, Torus, convolve, make_mollifier
from .integrate import RunConfig
from .scheme import FlowState, SplitConfig
from .statelaw import (IsentropicLaw, IsothermalLaw, STATE_LAWS, SelfGravityLaw,
                       ShallowLaw, Smoothing)
from .verify import TestFunction, gaussian_bump, trig_mode


def parse_keyvalues(text: str) -> dict[str, str]:
    """Parse the flat key = value format; later keys override earlier ones."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def format_keyvalues(mapping: dict[str, str]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in mapping.items())


_DEFAULTS = {
    "dim": "1",
    "ic.u": "0",
    "ic.v": "0",
    "ic.smooth": "none",
    "ic.smooth.w": "0.1",
    "bottom": "none",
    "constants.K": "1.0",
    "constants.gamma": "1.4",
    "constants.g": "9.8",
    "constants.G": "1.0",
    "scheme.smoothing": "smooth-bump",
    "scheme.smoothing.w": "0.3",
    "scheme.alpha": "0.1",
    "scheme.beta": "none",
    "scheme.N": "2",
    "scheme.delta": "0",
    "scheme.rho_min": "none",
    "run.method": "euler",
    "run.snapshots": "",
    "run.monitor_every": "100",
    "verify.psi": "trig:1 bump:2.64,0.5 bump:3.64,0.5",
}

_REQUIRED = ("system", "cells", "ic.rho", "run.dt", "run.t_final")


def _float_or_none(token: str):
    return None if token == "none" else float(token)


@dataclass(frozen=True)
class Scenario:
    """A fully resolved scenario, buildable into solver inputs."""

    name: str
    mapping: dict[str, str] = field(repr=False)

    @classmethod
    def from_text(cls, text: str, name: str = "scenario",
                  overrides: dict[str, str] | None = None) -> "Scenario":
        raw = parse_keyvalues(text)
        return cls.from_mapping(raw, name=name, overrides=overrides)

    @classmethod
    def from_mapping(cls, raw: dict[str, str], name: str = "scenario",
                     overrides: dict[str, str] | None = None) -> "Scenario":
        mapping = dict(_DEFAULTS)
        mapping.update(raw)
        if overrides:
            mapping.update(overrides)
        known = set(_DEFAULTS) | set(_REQUIRED)
        unknown = [k for k in mapping if k not in known]
        if unknown:
            raise ConstraintError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
        missing = [k for k in _REQUIRED if k not in mapping]
        if missing:
            raise ConstraintError(f"missing scenario keys: {', '.join(missing)}")
        scn = cls(name=name, mapping=mapping)
        scn.build()  # re-validate every constraint at parse time
        return scn

    def with_overrides(self, overrides: dict[str, str]) -> "Scenario":
        mapping = dict(self.mapping)
        mapping.update(overrides)
        return Scenario.from_mapping(mapping, name=self.name)

    # -- typed accessors ----------------------------------------------------
    def _f(self, key: str) -> float:
        try:
            return float(self.mapping[key])
        except ValueError as exc:
            raise ConstraintError(f"{key} must be a number, got {self.mapping[key]!r}") from exc

    def _i(self, key: str) -> int:
        return int(self.mapping[key])

    @property
    def system(self) -> str:
        return self.mapping["system"]

    @property
    def dim(self) -> int:
        return self._i("dim")

    @property
    def cells(self) -> int:
        return self._i("cells")

    @property
    def snapshot_times(self) -> tuple[float, ...]:
        token = self.mapping["run.snapshots"].strip()
        if not token:
            return ()
        return tuple(float(v) for v in token.split(","))

    # -- construction ---------------------------------------------------------
    def _smoothing(self) -> Smoothing:
        kind = self.mapping["scheme.smoothing"]
        if kind == "three-cell":
            return Smoothing("three-cell", weight=self._f("scheme.smoothing.w"))
        if kind == "smooth-bump":
            return Smoothing("smooth-bump", alpha=self._f("scheme.alpha"))
        raise ConstraintError(f"scheme.smoothing must be smooth-bump or three-cell, got {kind!r}")

    def _law(self, torus: Torus):
        system = self.system
        if system not in STATE_LAWS:
            raise ConstraintError(f"system must be one of {STATE_LAWS}, got {system!r}")
        smoothing = self._smoothing()
        beta = _float_or_none(self.mapping["scheme.beta"])
        if system == "isothermal":
            return IsothermalLaw(self._f("constants.K"), self._f("scheme.N"),
                                 beta, smoothing)
        if system == "isentropic":
            return IsentropicLaw(self._f("constants.K"), self._f("constants.gamma"),
                                 smoothing)
        if system == "selfgravity":
            return SelfGravityLaw(self._f("constants.K"), self._f("constants.G"),
                                  self._f("scheme.N"), beta, smoothing)
        bottom_token = self.mapping["bottom"]
        if bottom_token == "none":
            return ShallowLaw(self._f("constants.g"), None, None, smoothing)
        expr = Expr(bottom_token)
        meshes = torus.meshes()
        names = ("x", "y")[: torus.dim]
        coords = dict(zip(names, meshes))
        bottom = PeriodicField(torus, np.broadcast_to(np.asarray(expr(**coords), dtype=float),
                                                      torus.shape))
        grads = tuple(
            PeriodicField(torus, np.broadcast_to(
                np.asarray(expr.derivative(n)(**coords), dtype=float), torus.shape))
            for n in names
        )
        return ShallowLaw(self._f("constants.g"), bottom, grads, smoothing)

    def _initial_state(self, torus: Torus) -> FlowState:
        meshes = torus.meshes()
        names = ("x", "y")[: torus.dim]
        coords = dict(zip(names, meshes))

        def sample(key: str) -> np.ndarray:
            vals = np.asarray(Expr(self.mapping[key])(**coords), dtype=float)
            return np.broadcast_to(vals, torus.shape).copy()

        rho = sample("ic.rho")
        rho_min = _float_or_none(self.mapping["scheme.rho_min"])
        if rho_min is None:
            rho_min = torus.h  # default floor: one cell width
        rho = np.maximum(rho, rho_min)
        fields = [rho, sample("ic.u")]
        if torus.dim == 2:
            fields.append(sample("ic.v"))

        if self.mapping["ic.smooth"] == "three-cell":
            m = make_mollifier(torus.h, torus, "three-cell",
                               w=self._f("ic.smooth.w"))
            fields = [convolve(PeriodicField(torus, f), m).values for f in fields]
        elif self.mapping["ic.smooth"] != "none":
            raise ConstraintError(
                f"ic.smooth must be none or three-cell, got {self.mapping['ic.smooth']!r}")

        rho_f = PeriodicField(torus, fields[0])
        vels = [PeriodicField(torus, f) for f in fields[1:]]
        return FlowState.from_primitive(rho_f, *vels)

    def test_functions(self, torus: Torus) -> list[TestFunction]:
        out = []
        for token in self.mapping["verify.psi"].split():
            kind, _, args = token.partition(":")
            if kind == "trig":
                ks = [int(v) for v in args.split(",")]
                out.append(trig_mode(torus, ks if torus.dim == 2 else ks[0]))
            elif kind == "bump":
                vals = [float(v) for v in args.split(",")]
                *center, width = vals
                if len(center) != torus.dim:
                    raise ConstraintError(
                        f"bump test function needs {torus.dim} center coordinates")
                out.append(gaussian_bump(torus, center if torus.dim == 2 else center[0],
                                         width))
            else:
                raise ConstraintError(f"unknown test function spec {token!r}")
        return out

    def build(self):
        """Materialize (initial state, law, split, run config, eps, torus)."""
        if self.dim not in (1, 2):
            raise ConstraintError(f"dim must be 1 or 2, got {self.dim}")
        torus = Torus(self.dim, self.cells)
        law = self._law(torus)
        law.validate(torus.h)
        split = SplitConfig(self._f("scheme.delta"))
        run_cfg = RunConfig(
            dt=self._f("run.dt"),
            t_final=self._f("run.t_final"),
            method=self.mapping["run.method"],
            snapshot_times=self.snapshot_times,
            monitor_every=self._i("run.monitor_every"),
        )
        state = self._initial_state(torus)
        return Built(torus=torus, initial=state, law=law, split=split,
                     run_cfg=run_cfg, eps=torus.h)

    def canonical_mapping(self) -> dict[str, str]:
        """Resolved key order for reproducible config echoes."""
        keys = list(_REQUIRED) + [k for k in _DEFAULTS if k not in _REQUIRED]
        return {k: self.mapping[k] for k in keys if k in self.mapping}


@dataclass(frozen=True)
class Built:
    torus: Torus
    initial: FlowState
    law: object
    split: SplitConfig
    run_cfg: RunConfig
    eps: float
