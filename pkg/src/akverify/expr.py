"""Tiny safe expression language for scalar fields.

Config files describe conformal factors, raw metric entries and
perturbations as strings like ``"exp(x)*sin(y) + z**2"``.  The strings are
parsed with :mod:`ast` against a whitelist and evaluated over whatever
algebra the caller supplies (floats for quick checks, jets for the engine),
so a single definition drives both value and derivative evaluation.
"""

from __future__ import annotations

import ast
import math
from typing import Any, Callable, Mapping

_ALLOWED_FUNCS = {"exp", "ln", "log", "sqrt", "sin", "cos"}
_ALLOWED_NAMES = {"x", "y", "z", "t", "pi"}


class ExprError(ValueError):
    """Rejected or malformed field expression."""


def _check(node: ast.AST) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body)
    elif isinstance(node, ast.BinOp) and isinstance(
        node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
    ):
        _check(node.left)
        _check(node.right)
        if isinstance(node.op, ast.Pow):
            if not (
                isinstance(node.right, ast.Constant)
                and isinstance(node.right.value, int)
            ):
                raise ExprError("** requires a literal integer exponent")
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        _check(node.operand)
    elif isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id in _ALLOWED_FUNCS):
            raise ExprError(f"function not allowed: {ast.dump(node.func)}")
        if len(node.args) != 1 or node.keywords:
            raise ExprError("field functions take exactly one argument")
        _check(node.args[0])
    elif isinstance(node, ast.Name):
        if node.id not in _ALLOWED_NAMES:
            raise ExprError(f"unknown name {node.id!r}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExprError(f"literal not allowed: {node.value!r}")
    else:
        raise ExprError(f"syntax not allowed: {type(node).__name__}")


def _float_fn(name: str) -> Callable[[float], float]:
    return {
        "exp": math.exp,
        "ln": math.log,
        "log": math.log,
        "sqrt": math.sqrt,
        "sin": math.sin,
        "cos": math.cos,
    }[name]


def _apply(name: str, arg: Any) -> Any:
    if isinstance(arg, (int, float)):
        return _float_fn(name)(arg)
    method = "ln" if name == "log" else name
    return getattr(arg, method)()


class Expr:
    """A parsed scalar-field expression over the coordinates x, y, z, t."""

    def __init__(self, text: str):
        self.text = str(text)
        try:
            tree = ast.parse(self.text, mode="eval")
        except SyntaxError as exc:
            raise ExprError(f"cannot parse {self.text!r}: {exc}") from None
        _check(tree)
        self._tree = tree.body

    def __call__(self, env: Mapping[str, Any]) -> Any:
        return self._eval(self._tree, env)

    def _eval(self, node: ast.AST, env: Mapping[str, Any]) -> Any:
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            if node.id == "pi":
                return math.pi
            return env[node.id]
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, env)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left, env)
            right = self._eval(node.right, env)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
            return left ** right
        if isinstance(node, ast.Call):
            return _apply(node.func.id, self._eval(node.args[0], env))
        raise ExprError(f"unreachable node {type(node).__name__}")  # pragma: no cover

    def __repr__(self):  # pragma: no cover
        return f"Expr({self.text!r})"
