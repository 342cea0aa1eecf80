"""JSON and Graphviz DOT encodings of the core types."""

from __future__ import annotations

import json

from .errors import SpanCalcError
from .finset import FinSet, SetMap
from .spanqc import SpanCell, cell_from_maps, cell_shape
from .spans import NatMatrix, Span1, Span2


class ParseError(SpanCalcError):
    code = "PARSE"


def _key(iv):
    return f"{iv[0]},{iv[1]}"


def _unkey(s):
    a, b = s.split(",")
    return int(a), int(b)


def to_json(obj):
    if isinstance(obj, FinSet):
        return {"size": obj.size}
    if isinstance(obj, SetMap):
        return {"dom": obj.dom.size, "cod": obj.cod.size, "values": list(obj.values)}
    if isinstance(obj, Span1):
        return {"left": to_json(obj.left_foot), "apex": to_json(obj.apex), "right": to_json(obj.right_foot),
                "lmap": to_json(obj.lmap), "rmap": to_json(obj.rmap)}
    if isinstance(obj, Span2):
        return {"source": to_json(obj.source), "target": to_json(obj.target), "iso": to_json(obj.iso)}
    if isinstance(obj, NatMatrix):
        return {"rows": obj.rows, "cols": obj.cols, "entries": obj.to_rows()}
    if isinstance(obj, SpanCell):
        ivs, _, pairs, _, _, _ = cell_shape(obj.n)
        return {"n": obj.n,
                "sets": {_key(iv): {"size": s} for iv, s in zip(ivs, obj.sizes)},
                "maps": [{"from": _key(a), "to": _key(b), "values": list(v)}
                         for (a, b), v in zip(pairs, obj.values)]}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_json(d):
    """Decode by shape: the key sets of the encodings are disjoint."""
    try:
        return _decode(d)
    except SpanCalcError as exc:
        raise ParseError(str(exc)) from exc
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed input: {exc}") from exc


def _decode(d):
    if not isinstance(d, dict):
        raise ParseError("expected a JSON object")
    keys = set(d)
    if keys == {"size"}:
        return FinSet(int(d["size"]))
    if keys == {"dom", "cod", "values"}:
        return SetMap(FinSet(int(d["dom"])), FinSet(int(d["cod"])), tuple(int(v) for v in d["values"]))
    if keys == {"left", "apex", "right", "lmap", "rmap"}:
        return Span1(_decode(d["left"]), _decode(d["apex"]), _decode(d["right"]), _decode(d["lmap"]),
                     _decode(d["rmap"]))
    if keys == {"source", "target", "iso"}:
        return Span2(_decode(d["source"]), _decode(d["target"]), _decode(d["iso"]))
    if keys == {"rows", "cols", "entries"}:
        entries = [v for r in d["entries"] for v in r]
        return NatMatrix(int(d["rows"]), int(d["cols"]), tuple(int(v) for v in entries))
    if keys == {"n", "sets", "maps"}:
        n = int(d["n"])
        sizes = {_unkey(k): int(v["size"]) for k, v in d["sets"].items()}
        maps = {(_unkey(m["from"]), _unkey(m["to"])): tuple(int(v) for v in m["values"]) for m in d["maps"]}
        return cell_from_maps(n, sizes, maps)
    raise ParseError(f"unrecognised object with keys {sorted(keys)}")


def dumps(obj):
    data = obj if isinstance(obj, (dict, list)) else to_json(obj)
    return json.dumps(data, sort_keys=True, indent=2)


def loads(text):
    try:
        return from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def span_to_dot(s, name="span"):
    """Left foot, apex and right foot as three ranked columns, legs as edges."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle, fontsize=10];"]
    groups = (("x", s.left_foot.size), ("u", s.apex.size), ("y", s.right_foot.size))
    for prefix, size in groups:
        nodes = " ".join(f"{prefix}{i};" for i in range(size))
        lines.append(f"  {{ rank=same; {nodes} }}" if size else f"  // {prefix}: empty")
    for u, x in enumerate(s.lmap.values):
        lines.append(f"  u{u} -> x{x};")
    for u, y in enumerate(s.rmap.values):
        lines.append(f"  u{u} -> y{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cell_to_dot(F, name="cell"):
    """One row of nodes per interval length, longest intervals on top; edges for
    the covering maps (i,j) -> (i,j-1) and (i,j) -> (i+1,j)."""
    lines = [f"digraph {name} {{", "  node [shape=point];"]
    ivs = cell_shape(F.n)[0]

    def node(iv, e):
        return f"s{iv[0]}_{iv[1]}_{e}"

    for length in range(F.n, -1, -1):
        layer = [iv for iv in ivs if iv[1] - iv[0] == length]
        for iv in layer:
            size = F.size(iv)
            lines.append(f"  subgraph cluster_{iv[0]}_{iv[1]} {{ label=\"{iv[0]},{iv[1]}\"; "
                         + " ".join(f"{node(iv, e)};" for e in range(size)) + " }")
    for iv in ivs:
        i, j = iv
        if i == j:
            continue
        for tgt in ((i, j - 1), (i + 1, j)):
            for e, v in enumerate(F.map_values(iv, tgt)):
                lines.append(f"  {node(iv, e)} -> {node(tgt, v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
