"""Minimal arithmetic expression grammar for scenario files.

Supports numbers, the coordinates x and y, pi, the binary operators
+ - * / **, unary minus, the functions sin, cos, exp, abs, sqrt, and
piecewise(v, threshold, lo, hi) = lo where v < threshold else hi.
Expressions evaluate over numpy arrays and carry a symbolic derivative
(used for analytic bottom-elevation gradients).
"""

from __future__ import annotations

import ast

import numpy as np

_ALLOWED_NAMES = {"x", "y", "pi"}
_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
    "sqrt": np.sqrt,
    "sign": np.sign,
}


class ExprError(ValueError):
    """The expression uses syntax outside the supported grammar."""


def _convert(node) -> tuple:
    if isinstance(node, ast.Expression):
        return _convert(node.body)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float)):
            return ("num", float(node.value))
        raise ExprError(f"unsupported constant {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id not in _ALLOWED_NAMES:
            raise ExprError(f"unknown name {node.id!r}")
        return ("var", node.id)
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return ("neg", _convert(node.operand))
        if isinstance(node.op, ast.UAdd):
            return _convert(node.operand)
        raise ExprError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        ops = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul",
               ast.Div: "div", ast.Pow: "pow"}
        kind = ops.get(type(node.op))
        if kind is None:
            raise ExprError("unsupported binary operator")
        return (kind, _convert(node.left), _convert(node.right))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise ExprError("only plain function calls are supported")
        name = node.func.id
        args = tuple(_convert(a) for a in node.args)
        if name == "piecewise":
            if len(args) != 4:
                raise ExprError("piecewise takes (value, threshold, lo, hi)")
            return ("piecewise", *args)
        if name in _FUNCTIONS:
            if len(args) != 1:
                raise ExprError(f"{name} takes one argument")
            return ("call", name, args[0])
        raise ExprError(f"unknown function {name!r}")
    raise ExprError(f"unsupported syntax: {ast.dump(node)}")


def _eval(tree, env):
    kind = tree[0]
    if kind == "num":
        return tree[1]
    if kind == "var":
        return env[tree[1]]
    if kind == "neg":
        return -_eval(tree[1], env)
    if kind == "add":
        return _eval(tree[1], env) + _eval(tree[2], env)
    if kind == "sub":
        return _eval(tree[1], env) - _eval(tree[2], env)
    if kind == "mul":
        return _eval(tree[1], env) * _eval(tree[2], env)
    if kind == "div":
        return _eval(tree[1], env) / _eval(tree[2], env)
    if kind == "pow":
        return _eval(tree[1], env) ** _eval(tree[2], env)
    if kind == "call":
        return _FUNCTIONS[tree[1]](_eval(tree[2], env))
    if kind == "piecewise":
        v = _eval(tree[1], env)
        t = _eval(tree[2], env)
        lo = _eval(tree[3], env)
        hi = _eval(tree[4], env)
        return np.where(np.asarray(v) < t, lo, hi)
    raise AssertionError(kind)


def _diff(tree, var):
    kind = tree[0]
    if kind == "num":
        return ("num", 0.0)
    if kind == "var":
        return ("num", 1.0 if tree[1] == var else 0.0)
    if kind == "neg":
        return ("neg", _diff(tree[1], var))
    if kind == "add":
        return ("add", _diff(tree[1], var), _diff(tree[2], var))
    if kind == "sub":
        return ("sub", _diff(tree[1], var), _diff(tree[2], var))
    if kind == "mul":
        a, b = tree[1], tree[2]
        return ("add", ("mul", _diff(a, var), b), ("mul", a, _diff(b, var)))
    if kind == "div":
        a, b = tree[1], tree[2]
        num = ("sub", ("mul", _diff(a, var), b), ("mul", a, _diff(b, var)))
        return ("div", num, ("mul", b, b))
    if kind == "pow":
        a, b = tree[1], tree[2]
        if b[0] != "num":
            raise ExprError("derivatives support constant exponents only")
        n = b[1]
        return ("mul", ("mul", ("num", n), ("pow", a, ("num", n - 1.0))),
                _diff(a, var))
    if kind == "call":
        name, a = tree[1], tree[2]
        da = _diff(a, var)
        outer = {
            "sin": ("call", "cos", a),
            "cos": ("neg", ("call", "sin", a)),
            "exp": ("call", "exp", a),
            "sqrt": ("div", ("num", 0.5), ("call", "sqrt", a)),
            "abs": ("call", "sign", a),
            "sign": ("num", 0.0),
        }[name]
        return ("mul", outer, da)
    if kind == "piecewise":
        # the jump at the threshold is ignored (distributional part dropped)
        return ("piecewise", tree[1], tree[2], _diff(tree[3], var), _diff(tree[4], var))
    raise AssertionError(kind)


class Expr:
    """A parsed expression; evaluate with coordinate arrays, differentiate
    symbolically."""

    def __init__(self, source: str, _tree=None):
        self.source = source
        if _tree is None:
            try:
                _tree = _convert(ast.parse(source, mode="eval"))
            except SyntaxError as exc:
                raise ExprError(f"cannot parse {source!r}: {exc}") from exc
        self._tree = _tree

    def __call__(self, **coords):
        env = dict(coords)
        env["pi"] = np.pi
        return _eval(self._tree, env)

    def derivative(self, var: str) -> "Expr":
        return Expr(f"d/d{var}({self.source})", _diff(self._tree, var))
