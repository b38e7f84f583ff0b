"""Node-set documents.

Format:
  {"n": 2, "points": [[0, 0], [1, 0], [0, 1]], "values": [1, 2, 3]}

Numbers are read as decimals; each coordinate keeps its exact rational value
(for the exact-arithmetic checks) and its correctly rounded double, which is the
canonical representation for every floating-point computation. Distinctness is
checked on the doubles. "values" is optional (one datum per point).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..core.errors import NodeSetParseError
from ..core.geometry import NODE_NORM_TOL, NodeSet

Number = Union[int, Decimal, float]


@dataclass(frozen=True)
class NodeSetDocument:
    nodes: NodeSet
    values: Optional[Tuple[float, ...]]
    source: Optional[str] = None


def _as_list(v: Any) -> List[Any]:
    return v if isinstance(v, list) else []


def _number(value: Any, *, field: str, path: Optional[Path]) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Decimal, float)):
        raise NodeSetParseError(f"expected a number, got {type(value).__name__}", path=path, field=field)
    if (isinstance(value, Decimal) and not value.is_finite()) or (isinstance(value, float) and not math.isfinite(value)):
        raise NodeSetParseError("number must be finite", path=path, field=field)
    return Fraction(value)


def decode_document(text: str, *, path: Optional[Path] = None) -> Dict[str, Any]:
    """json.loads with decimal floats; syntax errors carry the line number.

    Infinity and NaN decode as Decimal too, so `_number` rejects them with
    their field.
    """

    try:
        payload = json.loads(text, parse_float=Decimal, parse_constant=Decimal)
    except json.JSONDecodeError as exc:
        raise NodeSetParseError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    if not isinstance(payload, dict):
        raise NodeSetParseError("node-set document must be a JSON object", path=path)
    return payload


def parse_nodeset_document(
    document: Dict[str, Any],
    *,
    path: Optional[Path] = None,
    norm_tol: float = NODE_NORM_TOL,
) -> NodeSetDocument:
    """Validate a decoded document into points (exact and double) plus values."""

    if not isinstance(document, dict):
        raise NodeSetParseError("node-set document must be a JSON object", path=path)
    n = document.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise NodeSetParseError(f"'n' must be a positive integer, got {n!r}", path=path, field="n")
    raw_points = document.get("points")
    if not isinstance(raw_points, list):
        raise NodeSetParseError("'points' must be an array of coordinate arrays", path=path, field="points")

    exact: List[Tuple[Fraction, ...]] = []
    for i, point in enumerate(raw_points):
        if not isinstance(point, list):
            raise NodeSetParseError("point must be an array", path=path, field=f"points[{i}]")
        if len(point) != n:
            raise NodeSetParseError(f"point has {len(point)} coordinates, expected n = {n}", path=path, field=f"points[{i}]")
        exact.append(tuple(_number(x, field=f"points[{i}][{k}]", path=path) for k, x in enumerate(point)))

    points = np.array([[float(x) for x in row] for row in exact], dtype=float).reshape(len(exact), n)
    nodes = NodeSet(points, exact=tuple(exact), norm_tol=norm_tol)

    values: Optional[Tuple[float, ...]] = None
    if "values" in document and document["values"] is not None:
        raw_values = document["values"]
        if not isinstance(raw_values, list) or len(raw_values) != nodes.s:
            raise NodeSetParseError(f"'values' must be an array of {nodes.s} numbers", path=path, field="values")
        values = tuple(float(_number(y, field=f"values[{i}]", path=path)) for i, y in enumerate(raw_values))

    return NodeSetDocument(nodes=nodes, values=values, source=str(path) if path is not None else None)


def parse_nodeset(document: Union[str, Dict[str, Any]], *, norm_tol: float = NODE_NORM_TOL) -> NodeSet:
    """Parse a node-set document (JSON text or decoded object) into a NodeSet."""

    if isinstance(document, str):
        document = decode_document(document)
    return parse_nodeset_document(document, norm_tol=norm_tol).nodes


def load_nodeset(path: Path, *, norm_tol: float = NODE_NORM_TOL) -> NodeSetDocument:
    """Read and validate a node-set document from disk."""

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Node-set file not found: {path}")
    payload = decode_document(path.read_text(encoding="utf-8"), path=path)
    return parse_nodeset_document(payload, path=path, norm_tol=norm_tol)


def nodeset_document(nodes: NodeSet, values: Optional[Tuple[float, ...]] = None) -> Dict[str, Any]:
    """Inverse of parsing for generated instances (doubles written with repr)."""

    out: Dict[str, Any] = {"n": nodes.n, "points": [[float(x) for x in z] for z in nodes.points]}
    if values is not None:
        out["values"] = [float(y) for y in values]
    return out
