"""Composition files: JSON schema, validation and construction of chart trees."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

from . import catalog
from .closing import find_closing
from .closure import DEFAULT_Q_MAX, DEFAULT_RATIONAL_TOL, classify_closure
from .curve import CurveParams, QuadOptions, assemble_complete, solve_arc
from .errors import SchemaError, SpiralError, UncertifiedInput

SCHEMA_VERSION = 1

_real = {"type": "number"}
_pos_int = {"type": "integer", "minimum": 1}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "root"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "root": {"$ref": "#/$defs/node"},
        "seed": {"type": "integer", "minimum": 0},
        "samples": _pos_int,
        "rational_tol": {"type": "number", "exclusiveMinimum": 0},
        "q_max": _pos_int,
    },
    "$defs": {
        "node": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["point", "real_sphere", "legendrian_torus", "spiral", "clifford_join"]}
            },
            "allOf": [
                {"if": {"properties": {"kind": {"const": "point"}}},
                 "then": {"additionalProperties": False, "properties": {"kind": True}}},
                {"if": {"properties": {"kind": {"enum": ["real_sphere", "legendrian_torus"]}}},
                 "then": {"required": ["n"], "additionalProperties": False,
                          "properties": {"kind": True, "n": _pos_int}}},
                {"if": {"properties": {"kind": {"const": "clifford_join"}}},
                 "then": {"required": ["left", "right"], "additionalProperties": False,
                          "properties": {"kind": True, "left": {"$ref": "#/$defs/node"},
                                         "right": {"$ref": "#/$defs/node"}}}},
                {"if": {"properties": {"kind": {"const": "spiral"}}},
                 "then": {"$ref": "#/$defs/spiral"}},
            ],
        },
        "spiral": {
            "required": ["C1", "left", "right"],
            "additionalProperties": False,
            "oneOf": [{"required": ["C2"]}, {"required": ["closing"]}],
            "properties": {
                "kind": True,
                "C1": _real,
                "C2": _real,
                "closing": {
                    "type": "object",
                    "required": ["p", "q"],
                    "additionalProperties": False,
                    "properties": {
                        "p": {"type": "integer"},
                        "q": _pos_int,
                        "bracket": {"type": "array", "items": _real, "minItems": 2, "maxItems": 2},
                        "index": {"type": "integer", "minimum": 0},
                    },
                },
                "half_periods": _pos_int,
                "branch": {"enum": [1, -1]},
                "left": {"$ref": "#/$defs/node"},
                "right": {"$ref": "#/$defs/node"},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate_spec(spec) -> dict:
    """Validate a composition document; the deepest error is reported with its JSON pointer."""
    errors = list(_VALIDATOR.iter_errors(spec))
    if errors:
        err = max(errors, key=lambda e: (len(e.absolute_path), len(list(e.context or ()))))
        while err.context:
            err = max(err.context, key=lambda e: len(e.absolute_path))
        raise SchemaError(err.message, _pointer(err.absolute_path))
    return spec


def load_spec(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    return validate_spec(spec)


@dataclass
class BuildContext:
    rational_tol: float = DEFAULT_RATIONAL_TOL
    q_max: int = DEFAULT_Q_MAX
    threads: int = 1
    quad_opts: QuadOptions | None = None
    records: list = field(default_factory=list)


@dataclass(frozen=True)
class BuiltTree:
    chart: catalog.ImmersionChart
    nodes: tuple  # (pointer, chart) pairs in post-order
    records: tuple  # per spiral node: resolved parameters and closure data


def _leaf(node):
    kind = node["kind"]
    if kind == "point":
        return catalog.leaf_point()
    if kind == "real_sphere":
        return catalog.leaf_real_sphere(node["n"])
    return catalog.leaf_legendrian_torus(node["n"])


def _resolve_c2(node, k1, k2, ctx, ptr):
    if "C2" in node:
        return float(node["C2"]), None
    target = node["closing"]
    p, q = target["p"], target["q"]
    try:
        search = find_closing(k1, k2, float(node["C1"]), p, q, bracket=target.get("bracket"),
                              threads=ctx.threads, quad_opts=ctx.quad_opts)
    except SpiralError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc), ptr + "/closing") from None
    index = target.get("index", 0)
    if index >= len(search.hits):
        raise SchemaError(
            f"closing target {p}/{q} has {len(search.hits)} hit(s) in bracket "
            f"{list(search.bracket)}; index {index} unavailable",
            ptr + "/closing",
        )
    hit = search.hits[index]
    return hit.C2_root, {
        "target": [p, q],
        "hit": hit.to_dict(),
        "hits_found": len(search.hits),
        "identically_satisfied": search.identically_satisfied,
    }


def _build(node, ptr, ctx, out):
    kind = node["kind"]
    if kind in ("point", "real_sphere", "legendrian_torus"):
        chart = _leaf(node)
    else:
        left = _build(node["left"], ptr + "/left", ctx, out)
        right = _build(node["right"], ptr + "/right", ctx, out)
        if kind == "clifford_join":
            try:
                chart = catalog.clifford_join(left, right)
            except UncertifiedInput as exc:
                raise SchemaError(str(exc), ptr) from None
            ctx.records.append({"pointer": ptr or "/", "kind": kind, "provenance": chart.provenance})
        else:
            chart = _spiral(node, ptr, left, right, ctx)
    out.append((ptr or "/", chart))
    return chart


def _spiral(node, ptr, left, right, ctx):
    k1, k2 = left.dim, right.dim
    C2, closing = _resolve_c2(node, k1, k2, ctx, ptr)
    params = CurveParams(k1, k2, float(node["C1"]), C2, node.get("branch", 1))
    arc = solve_arc(params, ctx.quad_opts)
    cert = classify_closure(arc, ctx.rational_tol, ctx.q_max)
    m = node.get("half_periods")
    if m is None:
        if not cert.closed:
            raise SchemaError(
                f"curve does not close ({cert.kind}); half_periods must be given", ptr
            )
        m = cert.m_min
    curve = assemble_complete(arc, m, cert)
    try:
        chart = catalog.spiral_product(curve, left, right)
    except UncertifiedInput as exc:
        raise SchemaError(str(exc), ptr) from None
    lo, hi = curve.tau_range
    z = curve([lo, hi])
    ctx.records.append(
        {
            "pointer": ptr or "/",
            "kind": "spiral",
            "params": {"k1": k1, "k2": k2, "C1": params.C1, "C2": C2, "branch": params.branch},
            "closing": closing,
            "domain": {
                "s_minus": arc.domain.s_minus,
                "s_plus": arc.domain.s_plus,
                "s_star": arc.domain.s_star,
                "c2_min": arc.domain.c2_min_value,
            },
            "J1": arc.J1,
            "J2": arc.J2,
            "quadrature_error": arc.quadrature_error,
            "closure": cert.to_dict(),
            "half_periods": m,
            "tau_range": [lo, hi],
            "endpoint_gap": float(abs(z[1] - z[0]).max()),
            "flags": chart.flags,
        }
    )
    return chart


def build(spec, threads: int = 1, rational_tol=None, q_max=None,
          quad_opts: QuadOptions | None = None) -> BuiltTree:
    """Construct the chart tree described by a validated composition document."""
    validate_spec(spec)
    ctx = BuildContext(
        rational_tol=rational_tol if rational_tol is not None else spec.get("rational_tol", DEFAULT_RATIONAL_TOL),
        q_max=q_max if q_max is not None else spec.get("q_max", DEFAULT_Q_MAX),
        threads=threads,
        quad_opts=quad_opts,
    )
    nodes = []
    chart = _build(spec["root"], "/root", ctx, nodes)
    return BuiltTree(chart=chart, nodes=tuple(nodes), records=tuple(ctx.records))
