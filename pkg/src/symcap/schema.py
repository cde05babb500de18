"""JSON description files for bodies and moment regions.

Every object carries a ``"type"`` discriminator. The top-level object may carry
``"schema": 1``. Exponents accept a number or the string ``"inf"``; matrices are
row-major nested arrays.

Bodies::

    {"type": "segment", "radius": 1}
    {"type": "lp_ball", "dim": 3, "p": 1.5}
    {"type": "cartesian", "factors": [<body>, <body>, ...]}
    {"type": "p_product", "p": 2, "factors": [<body>, <body>, ...]}
    {"type": "linear_image", "matrix": [[1, 0], [0, 2]], "body": <body>}
    {"type": "polar", "body": <body>}
    {"type": "hanner", "spec": [1, "inf", 1]}

Regions::

    {"type": "box", "upper": [1, 2]}
    {"type": "simplex", "level": 3.14159, "dim": 2}
    {"type": "orthant", "body": <body>}
    {"type": "graph2d", "a": 2, "f": "(sqrt(2) - sqrt(x))**2"}
    {"type": "graph2d", "x": [0, 1, 2], "y": [2, 1, 0]}
    {"type": "product", "factors": [<region>, <region>, ...]}
    {"type": "scale", "r": 4, "region": <region>}
    {"type": "xp_region", "p": 2.5}

Graph expressions are arithmetic in ``x`` with + - * / **, numbers, ``pi``,
``e`` and the functions sqrt, exp, log, sin, cos, tan, abs, min, max.
"""

from __future__ import annotations

import ast
import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import bodies as B
from . import toric as T

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Invalid description; carries the JSON path and source position when known."""

    def __init__(self, message: str, path: str = "$", line: int | None = None,
                 column: int | None = None):
        self.message, self.path, self.line, self.column = message, path, line, column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{path}{where}: {message}")


# --------------------------------------------------------------------------- positioned JSON


@dataclass
class _Node:
    value: Any
    pos: int
    keys: dict[str, int] | None = None  # offsets of object keys


_decoder = json.JSONDecoder()
_WS = " \t\r\n"


def _skip(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def _parse(text: str, i: int) -> tuple[_Node, int]:
    """JSON value at ``i`` with the offset of every nested value kept alongside it."""
    i = _skip(text, i)
    if i >= len(text):
        raise json.JSONDecodeError("Expecting value", text, i)
    c = text[i]
    if c == "{":
        out: dict[str, _Node] = {}
        keys: dict[str, int] = {}
        j = _skip(text, i + 1)
        if j < len(text) and text[j] == "}":
            return _Node(out, i, keys), j + 1
        while True:
            j = _skip(text, j)
            if j >= len(text) or text[j] != '"':
                raise json.JSONDecodeError("Expecting property name enclosed in double quotes", text, j)
            start = j
            key, j = _decoder.raw_decode(text, j)
            j = _skip(text, j)
            if j >= len(text) or text[j] != ":":
                raise json.JSONDecodeError("Expecting ':' delimiter", text, j)
            if key in out:
                raise json.JSONDecodeError(f"duplicate key {key!r}", text, j)
            keys[key] = start
            out[key], j = _parse(text, j + 1)
            j = _skip(text, j)
            if j < len(text) and text[j] == ",":
                j += 1
                continue
            if j < len(text) and text[j] == "}":
                return _Node(out, i, keys), j + 1
            raise json.JSONDecodeError("Expecting ',' delimiter", text, j)
    if c == "[":
        items: list[_Node] = []
        j = _skip(text, i + 1)
        if j < len(text) and text[j] == "]":
            return _Node(items, i), j + 1
        while True:
            node, j = _parse(text, j)
            items.append(node)
            j = _skip(text, j)
            if j < len(text) and text[j] == ",":
                j += 1
                continue
            if j < len(text) and text[j] == "]":
                return _Node(items, i), j + 1
            raise json.JSONDecodeError("Expecting ',' delimiter", text, j)
    value, j = _decoder.raw_decode(text, i)
    return _Node(value, i), j


def _strip(node: _Node) -> Any:
    if isinstance(node.value, dict):
        return {k: _strip(v) for k, v in node.value.items()}
    if isinstance(node.value, list):
        return [_strip(v) for v in node.value]
    return node.value


def _load(text: str) -> _Node:
    try:
        node, end = _parse(text, 0)
        end = _skip(text, end)
        if end != len(text):
            raise json.JSONDecodeError("Extra data", text, end)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, "$", exc.lineno, exc.colno) from None
    return node


class _Ctx:
    """Walks positioned nodes and turns failures into located SchemaErrors."""

    def __init__(self, text: str):
        self.text = text

    def fail(self, node: _Node, path: str, message: str):
        line = self.text.count("\n", 0, node.pos) + 1
        col = node.pos - (self.text.rfind("\n", 0, node.pos) + 1) + 1
        raise SchemaError(message, path, line, col)

    def obj(self, node: _Node, path: str, allowed: set[str]) -> dict[str, _Node]:
        if not isinstance(node.value, dict):
            self.fail(node, path, "expected an object")
        extra = [k for k in node.value if k not in allowed | {"type", "schema"}]
        if extra:
            at = _Node(None, node.keys[extra[0]]) if node.keys else node
            self.fail(at, f"{path}.{extra[0]}", f"unknown field(s) {sorted(extra)}")
        return node.value

    def field(self, node: _Node, path: str, name: str) -> _Node:
        if name not in node.value:
            self.fail(node, path, f"missing field '{name}'")
        return node.value[name]

    def number(self, node: _Node, path: str, allow_inf: bool = False) -> float:
        v = node.value
        if allow_inf and isinstance(v, str) and v.lower() == "inf":
            return math.inf
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.fail(node, path, "expected a number" + (' or "inf"' if allow_inf else ""))
        if not math.isfinite(v) and not (allow_inf and v == math.inf):
            self.fail(node, path, "expected a finite number")
        return float(v)

    def exponent(self, node: _Node, path: str) -> float:
        p = self.number(node, path, allow_inf=True)
        if p < 1:
            self.fail(node, path, f"p must lie in [1, inf], got {p}")
        return p

    def integer(self, node: _Node, path: str) -> int:
        v = node.value
        if isinstance(v, bool) or not isinstance(v, int) and not (isinstance(v, float) and v.is_integer()):
            self.fail(node, path, "expected an integer")
        return int(v)

    def array(self, node: _Node, path: str, min_len: int = 1) -> list[_Node]:
        if not isinstance(node.value, list):
            self.fail(node, path, "expected an array")
        if len(node.value) < min_len:
            self.fail(node, path, f"expected at least {min_len} entries")
        return node.value

    def numbers(self, node: _Node, path: str, min_len: int = 1) -> list[float]:
        return [self.number(n, f"{path}[{k}]") for k, n in enumerate(self.array(node, path, min_len))]

    def type_of(self, node: _Node, path: str) -> str:
        if not isinstance(node.value, dict):
            self.fail(node, path, "expected an object")
        t = node.value.get("type")
        if t is None:
            self.fail(node, path, "missing field 'type'")
        if not isinstance(t.value, str):
            self.fail(t, path + ".type", "type must be a string")
        return t.value


def _check_version(ctx: _Ctx, node: _Node) -> None:
    if isinstance(node.value, dict) and "schema" in node.value:
        v = node.value["schema"]
        if v.value != SCHEMA_VERSION:
            ctx.fail(v, "$.schema", f"unsupported schema version {v.value!r}; expected {SCHEMA_VERSION}")


# --------------------------------------------------------------------------- bodies


def _body(ctx: _Ctx, node: _Node, path: str) -> B.Body:
    t = ctx.type_of(node, path)
    try:
        if t == "segment":
            o = ctx.obj(node, path, {"radius"})
            r = ctx.number(o["radius"], path + ".radius") if "radius" in o else 1.0
            return B.Segment(r)
        if t == "lp_ball":
            o = ctx.obj(node, path, {"dim", "p"})
            return B.LpBall(ctx.integer(ctx.field(node, path, "dim"), path + ".dim"),
                            ctx.exponent(ctx.field(node, path, "p"), path + ".p"))
        if t in ("cartesian", "p_product"):
            o = ctx.obj(node, path, {"factors", "p"} if t == "p_product" else {"factors"})
            fs = ctx.array(ctx.field(node, path, "factors"), path + ".factors", 2)
            parts = [_body(ctx, f, f"{path}.factors[{k}]") for k, f in enumerate(fs)]
            if t == "cartesian":
                return B.cartesian(*parts)
            return B.p_product(ctx.exponent(ctx.field(node, path, "p"), path + ".p"), *parts)
        if t == "linear_image":
            o = ctx.obj(node, path, {"matrix", "body"})
            inner = _body(ctx, ctx.field(node, path, "body"), path + ".body")
            rows = ctx.array(ctx.field(node, path, "matrix"), path + ".matrix")
            m = [ctx.numbers(r, f"{path}.matrix[{k}]") for k, r in enumerate(rows)]
            if any(len(r) != len(m) for r in m):
                ctx.fail(o["matrix"], path + ".matrix", "matrix must be square")
            if len(m) != inner.dim:
                ctx.fail(o["matrix"], path + ".matrix",
                         f"matrix is {len(m)}x{len(m)} but the body has dimension {inner.dim}")
            return B.LinearImage(np.array(m), inner)
        if t == "polar":
            ctx.obj(node, path, {"body"})
            return B.polar(_body(ctx, ctx.field(node, path, "body"), path + ".body"))
        if t == "hanner":
            ctx.obj(node, path, {"spec"})
            spec_node = ctx.field(node, path, "spec")
            spec = [ctx.exponent(s, f"{path}.spec[{k}]")
                    for k, s in enumerate(ctx.array(spec_node, path + ".spec", 0))]
            return B.hanner(spec)
    except SchemaError:
        raise
    except ValueError as exc:
        ctx.fail(node, path, str(exc))
    ctx.fail(node.value["type"], path + ".type", f"unknown body type {t!r}")


def parse_body(text: str) -> B.Body:
    """Body from its JSON description; raises SchemaError with a located message."""
    ctx = _Ctx(text)
    node = _load(text)
    _check_version(ctx, node)
    return _body(ctx, node, "$")


# --------------------------------------------------------------------------- graph expressions

_FUNCS = {"sqrt": np.sqrt, "exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos,
          "tan": np.tan, "abs": np.abs, "min": np.minimum, "max": np.maximum}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply,
           ast.Div: np.divide, ast.Pow: np.power}


def compile_expression(expr: str):
    """Vectorised function of ``x`` from a whitelisted arithmetic expression."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {expr!r}: {exc.msg}") from None

    def build(n):
        if isinstance(n, ast.Expression):
            return build(n.body)
        if isinstance(n, ast.Constant) and isinstance(n.value, (int, float)) and not isinstance(n.value, bool):
            v = float(n.value)
            return lambda x: v
        if isinstance(n, ast.Name):
            if n.id == "x":
                return lambda x: x
            if n.id in _CONSTS:
                v = _CONSTS[n.id]
                return lambda x: v
            raise ValueError(f"unknown name {n.id!r} in expression")
        if isinstance(n, ast.BinOp) and type(n.op) in _BINOPS:
            op, a, b = _BINOPS[type(n.op)], build(n.left), build(n.right)
            return lambda x: op(a(x), b(x))
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.USub, ast.UAdd)):
            a = build(n.operand)
            return (lambda x: -a(x)) if isinstance(n.op, ast.USub) else a
        if isinstance(n, ast.Call) and isinstance(n.func, ast.Name) and n.func.id in _FUNCS \
                and not n.keywords:
            fn, args = _FUNCS[n.func.id], [build(a) for a in n.args]
            return lambda x: fn(*(g(x) for g in args))
        raise ValueError(f"unsupported construct {ast.dump(n)[:40]!r} in expression")

    body = build(tree)

    def f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(body(x), dtype=float), x.shape).copy()

    return f


# --------------------------------------------------------------------------- regions


def _region(ctx: _Ctx, node: _Node, path: str) -> T.Region:
    t = ctx.type_of(node, path)
    try:
        if t == "box":
            ctx.obj(node, path, {"upper"})
            return T.Box(tuple(ctx.numbers(ctx.field(node, path, "upper"), path + ".upper")))
        if t == "simplex":
            ctx.obj(node, path, {"level", "dim"})
            return T.Simplex(ctx.number(ctx.field(node, path, "level"), path + ".level"),
                             ctx.integer(ctx.field(node, path, "dim"), path + ".dim"))
        if t == "orthant":
            ctx.obj(node, path, {"body"})
            return T.OrthantOfBody(_body(ctx, ctx.field(node, path, "body"), path + ".body"))
        if t == "graph2d":
            o = ctx.obj(node, path, {"a", "f", "x", "y", "samples"})
            if "f" in o:
                if "x" in o or "y" in o:
                    ctx.fail(node, path, "give either 'f' or a table 'x'/'y', not both")
                expr = o["f"].value
                if not isinstance(expr, str):
                    ctx.fail(o["f"], path + ".f", "expression must be a string")
                a = ctx.number(ctx.field(node, path, "a"), path + ".a")
                samples = ctx.integer(o["samples"], path + ".samples") if "samples" in o else T.GRAPH_SAMPLES
                try:
                    f = compile_expression(expr)
                except ValueError as exc:
                    ctx.fail(o["f"], path + ".f", str(exc))
                return T.Graph2D(a, f, samples=samples, expr=expr)
            x = ctx.numbers(ctx.field(node, path, "x"), path + ".x", 2)
            y = ctx.numbers(ctx.field(node, path, "y"), path + ".y", 2)
            if len(x) != len(y):
                ctx.fail(o["y"], path + ".y", "x and y tables differ in length")
            if "a" in o and ctx.number(o["a"], path + ".a") != x[-1]:
                ctx.fail(o["a"], path + ".a", "a must equal the last table abscissa")
            return T.Graph2D.from_table(x, y)
        if t == "product":
            ctx.obj(node, path, {"factors"})
            fs = ctx.array(ctx.field(node, path, "factors"), path + ".factors", 2)
            return T.product(*[_region(ctx, f, f"{path}.factors[{k}]") for k, f in enumerate(fs)])
        if t == "scale":
            ctx.obj(node, path, {"r", "region"})
            return T.Scale(ctx.number(ctx.field(node, path, "r"), path + ".r"),
                           _region(ctx, ctx.field(node, path, "region"), path + ".region"))
        if t == "xp_region":
            from .lagrangian import DEFAULT_CURVE_POINTS, omega_p_region
            o = ctx.obj(node, path, {"p", "curve_points"})
            p = ctx.exponent(ctx.field(node, path, "p"), path + ".p")
            pts = (ctx.integer(o["curve_points"], path + ".curve_points")
                   if "curve_points" in o else DEFAULT_CURVE_POINTS)
            return omega_p_region(p, pts)
    except SchemaError:
        raise
    except ValueError as exc:
        ctx.fail(node, path, str(exc))
    ctx.fail(node.value["type"], path + ".type", f"unknown region type {t!r}")


def parse_region(text: str) -> T.Region:
    """Moment region from its JSON description; raises SchemaError with a located message."""
    ctx = _Ctx(text)
    node = _load(text)
    _check_version(ctx, node)
    return _region(ctx, node, "$")


# --------------------------------------------------------------------------- serialisation


def _p(p: float):
    return "inf" if p == math.inf else p


def _flatten(body: B.Body, kind, p=None) -> list:
    # (K x L) x M is serialised as one factor list, as the parser associates left
    if isinstance(body, kind) and (p is None or body.p == p):
        return _flatten(body.left, kind, p) + [body.right]
    return [body]


def body_to_dict(body: B.Body) -> dict:
    if isinstance(body, B.Segment):
        return {"type": "segment", "radius": body.radius}
    if isinstance(body, B.LpBall):
        return {"type": "lp_ball", "dim": body.dim, "p": _p(body.p)}
    if isinstance(body, B.Cartesian):
        return {"type": "cartesian", "factors": [body_to_dict(b) for b in _flatten(body, B.Cartesian)]}
    if isinstance(body, B.PProduct):
        return {"type": "p_product", "p": _p(body.p),
                "factors": [body_to_dict(b) for b in _flatten(body, B.PProduct, body.p)]}
    if isinstance(body, B.LinearImage):
        return {"type": "linear_image", "matrix": body.matrix.tolist(), "body": body_to_dict(body.body)}
    raise TypeError(f"not a body: {body!r}")


def region_to_dict(region: T.Region) -> dict:
    if isinstance(region, T.Box):
        return {"type": "box", "upper": list(region.upper)}
    if isinstance(region, T.Simplex):
        return {"type": "simplex", "level": region.level, "dim": region.dim}
    if isinstance(region, T.OrthantOfBody):
        return {"type": "orthant", "body": body_to_dict(region.body)}
    if isinstance(region, T.Graph2D):
        if region.origin is not None:
            out = dict(region.origin)
            if "p" in out:
                out["p"] = _p(out["p"])
            return out
        if region.expr is not None:
            out = {"type": "graph2d", "a": region.a, "f": region.expr}
            if region.samples != T.GRAPH_SAMPLES:
                out["samples"] = region.samples
            return out
        if region.table is not None:
            x, y = region.table
            return {"type": "graph2d", "x": x.tolist(), "y": y.tolist()}
        raise TypeError("graph regions defined by a Python callable cannot be serialised")
    if isinstance(region, T.Product):
        factors = [region.right]
        left = region.left
        while isinstance(left, T.Product):
            factors.insert(0, left.right)
            left = left.left
        factors.insert(0, left)
        return {"type": "product", "factors": [region_to_dict(r) for r in factors]}
    if isinstance(region, T.Scale):
        return {"type": "scale", "r": region.r, "region": region_to_dict(region.region)}
    raise TypeError(f"not a region: {region!r}")


def serialize_body(body: B.Body, indent: int | None = None) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, **body_to_dict(body)}, indent=indent)


def serialize_region(region: T.Region, indent: int | None = None) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, **region_to_dict(region)}, indent=indent)


def load_json_value(text: str) -> Any:
    """Plain JSON value with the same located error messages as the parsers."""
    return _strip(_load(text))
