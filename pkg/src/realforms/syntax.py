"""Textual input format shared by the library and the CLI.

Towers:      ``Q``, ``quadext(Q, 2)``, ``euclid(Q)``, ``euclid(quadext(Q, 2), +)``,
             ``laurent(quadext(Q, 2))``
Elements:    expressions over integers, ``/``, ``sqrt(..)``, ``t``; ``^`` is power
Forms:       ``form(laurent(Q); 1, -t, 3/2*t^2)``
Algebras:    ``quat(laurent(Q); 2, t)``
Involutions: ``gamma`` or ``int_gamma(i)``
Hermitian:   ``sherm(quat(laurent(Q); 2, t); j, k)``
"""
from __future__ import annotations

import ast
import operator

from .errors import AlgebraError, ParseError
from .fields import (
    FieldTower,
    Laurent,
    Q,
    QuadExt,
    Rationals,
    euclid,
    laurent,
    quad_ext,
)
from .forms import QuadForm
from .quaternions import Canonical, IntUGamma, QuaternionAlgebra, SkewHermitianForm

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def _split_top(s: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {s!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {s!r}")
    parts.append("".join(cur).strip())
    return parts


def _split_call(s: str) -> tuple[str, str]:
    s = s.strip()
    lp = s.find("(")
    if lp < 0 or not s.endswith(")"):
        raise ParseError(f"expected name(...), got {s!r}")
    return s[:lp].strip(), s[lp + 1:-1]


def parse_field(text: str) -> FieldTower:
    s = text.strip()
    if s in ("Q", "QQ"):
        return Q
    name, inner = _split_call(s)
    try:
        if name == "laurent":
            return laurent(parse_field(inner))
        if name == "quadext":
            base_txt, *rest = _split_top(inner, ",")
            if not rest:
                raise ParseError("quadext needs a radicand")
            base = parse_field(base_txt)
            return quad_ext(base, parse_element(",".join(rest), base))
        if name == "euclid":
            parts = _split_top(inner, ",")
            base = parse_field(parts[0])
            if len(parts) == 1:
                return euclid(base)
            signs = parts[1].replace(" ", "")
            for P in base.orderings:
                if "".join("+" if s > 0 else "-" for s in P.path if s) == signs:
                    return euclid(base, P)
            raise ParseError(f"no ordering {signs!r} on {base}")
    except AlgebraError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid tower {text!r}: {exc}") from exc
    raise ParseError(f"unknown tower constructor {name!r}")


def _quad_nodes(field: FieldTower):
    node = field
    while not isinstance(node, Rationals):
        if isinstance(node, QuadExt):
            yield node
        node = node.base


def _resolve_sqrt(field: FieldTower, x):
    for node in _quad_nodes(field):
        if field.coerce(node.radicand) == x:
            return field.coerce(node.gen)
    if x != 0:
        ok, w = field.square_test(x)
        if ok and w is not None:
            return w
    raise ParseError(f"sqrt({x}) is not an element of {field}")


def _evaluate(node, field: FieldTower, names: dict):
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, field, names)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return field.coerce(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _evaluate(node.operand, field, names)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ParseError("exponents must be integer literals")
            return _evaluate(node.left, field, names) ** (sign * exp.value)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ParseError(f"unsupported operator {type(node.op).__name__}")
        return op(_evaluate(node.left, field, names), _evaluate(node.right, field, names))
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ParseError(f"unknown symbol {node.id!r} over {field}")
        return names[node.id]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1 or node.keywords:
            raise ParseError("sqrt takes one argument")
        return _resolve_sqrt(field, _evaluate(node.args[0], field, names))
    raise ParseError(f"unsupported syntax: {ast.dump(node)}")


def _parse_expr(text: str, field: FieldTower, names: dict):
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    # arithmetic errors (division by zero, non-monomial inverses) propagate as-is
    return _evaluate(tree, field, names)


def _field_names(field: FieldTower) -> dict:
    return {"t": field.t} if isinstance(field, Laurent) else {}


def parse_element(text: str, field: FieldTower):
    return _parse_expr(text, field, _field_names(field))


def arith_eval(expr, field: FieldTower):
    """Evaluate an arithmetic expression (text or element) exactly in ``field``."""
    if isinstance(expr, str):
        return parse_element(expr, field)
    return field.coerce(expr)


def parse_form(text: str) -> QuadForm:
    name, inner = _split_call(text)
    if name != "form":
        raise ParseError(f"expected form(...), got {name!r}")
    parts = _split_top(inner, ";")
    if len(parts) != 2:
        raise ParseError("form syntax is form(field; e1, e2, ...)")
    F = parse_field(parts[0])
    entries = [parse_element(e, F) for e in _split_top(parts[1], ",") if e]
    try:
        return QuadForm(F, tuple(entries))
    except AlgebraError as exc:
        raise ParseError(str(exc)) from exc


def parse_algebra(text: str) -> QuaternionAlgebra:
    name, inner = _split_call(text)
    if name != "quat":
        raise ParseError(f"expected quat(...), got {name!r}")
    parts = _split_top(inner, ";")
    if len(parts) != 2:
        raise ParseError("algebra syntax is quat(field; a, b)")
    F = parse_field(parts[0])
    slots = _split_top(parts[1], ",")
    if len(slots) != 2:
        raise ParseError("a quaternion algebra has two slots")
    try:
        return QuaternionAlgebra(F, parse_element(slots[0], F), parse_element(slots[1], F))
    except AlgebraError as exc:
        raise ParseError(str(exc)) from exc


def parse_quat(text: str, A: QuaternionAlgebra):
    names = dict(_field_names(A.field))
    names.update(i=A.i, j=A.j, k=A.k)
    return A.coerce(_parse_expr(text, A.field, names))


def parse_involution(text: str, A: QuaternionAlgebra):
    s = text.strip()
    if s == "gamma":
        return Canonical()
    name, inner = _split_call(s)
    if name != "int_gamma":
        raise ParseError(f"unknown involution {s!r}")
    try:
        return IntUGamma(parse_quat(inner, A))
    except AlgebraError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc


def parse_sherm(text: str) -> SkewHermitianForm:
    name, inner = _split_call(text)
    if name != "sherm":
        raise ParseError(f"expected sherm(...), got {name!r}")
    parts = _split_top(inner, ";")
    if len(parts) != 2:
        raise ParseError("hermitian syntax is sherm(quat(...); d1, d2, ...)")
    A = parse_algebra(parts[0])
    try:
        return SkewHermitianForm(A, tuple(parse_quat(d, A) for d in _split_top(parts[1], ",")))
    except AlgebraError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
