"""Parsing of exact scalar literals used in configuration files.

Accepted forms: integers, ``"p/q"``, decimal strings (read exactly, so
``"0.6"`` is 3/5), and polynomial expressions in the declared field symbol
built from ``+ - * / **`` and parentheses, e.g. ``"1 + 2*t"``.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from .field import NFElem, NumberField

__all__ = ["parse_scalar", "format_scalar", "LiteralError"]


class LiteralError(ValueError):
    pass


def parse_scalar(text, field: NumberField | None = None):
    """Parse ``text`` into an ``int``/``Fraction`` or an element of ``field``."""
    if isinstance(text, bool):
        raise LiteralError("booleans are not scalars")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        raise LiteralError(f"float literal {text!r} is not exact; quote it as a string")
    if not isinstance(text, str):
        raise LiteralError(f"cannot parse scalar from {type(text).__name__}")
    src = text.strip()
    if not src:
        raise LiteralError("empty scalar literal")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise LiteralError(f"malformed scalar literal {text!r}") from exc
    value = _eval(tree.body, src, field)
    if isinstance(value, NFElem) and value.is_rational():
        return value.coords[0]
    return value


def _eval(node, src, field):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise LiteralError(f"unsupported constant {node.value!r}")
        if isinstance(node.value, int):
            return Fraction(node.value)
        return Fraction(ast.get_source_segment(src, node))
    if isinstance(node, ast.Name):
        if field is None or node.id != field.symbol:
            raise LiteralError(f"unknown symbol {node.id!r}")
        return field.gen()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, src, field)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, src, field)
        if isinstance(node.op, ast.Pow):
            b = _eval(node.right, src, field)
            if isinstance(b, NFElem) or Fraction(b).denominator != 1:
                raise LiteralError("exponents must be integers")
            return a ** int(b)
        b = _eval(node.right, src, field)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if b == 0:
                raise LiteralError("division by zero in literal")
            return a / b
    raise LiteralError(f"unsupported syntax in scalar literal: {ast.dump(node)}")


def format_scalar(x) -> str:
    """Inverse of :func:`parse_scalar` for report output."""
    if isinstance(x, NFElem):
        return str(x)
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
