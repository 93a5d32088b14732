"""Versioned text, DOT, and structured-data serialization.

One object per file.  Headers name the format and carry q and p; body lines
hold one arc, entry, or witness component each.  Blank lines and `#` comments
are ignored everywhere.  All indices are 1-based on disk.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import (GeneralLinearWitness, IsoWitness, SignedPermWitness,
                      StructureTensor)
from .exact import IntMatrix
from .graphs import ColoredDigraph

GRAPH_HEADER = "unilie-graph v1"
TENSOR_HEADER = "unilie-algebra v1"
WITNESS_HEADER = "unilie-witness v1"


class ParseError(ValueError):
    pass


def _body_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _parse_header(line: str, expected: str) -> dict[str, str]:
    parts = line.split()
    if parts[:2] != expected.split():
        raise ParseError(f"expected header '{expected}', got '{line}'")
    fields = {}
    for tok in parts[2:]:
        if "=" not in tok:
            raise ParseError(f"malformed header field '{tok}'")
        key, val = tok.split("=", 1)
        fields[key] = val
    return fields


def _header_int(fields: dict[str, str], key: str) -> int:
    if key not in fields:
        raise ParseError(f"header is missing {key}=")
    try:
        return int(fields[key])
    except ValueError:
        raise ParseError(f"header field {key}={fields[key]} is not an integer")


# ---------------------------------------------------------------------------
# colored digraphs

def write_graph(g: ColoredDigraph) -> str:
    lines = [f"{GRAPH_HEADER} q={g.q} p={g.p}"]
    lines += [f"{t} {h} {k}" for (t, h, k) in g.sorted_arcs()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColoredDigraph:
    lines = _body_lines(text)
    if not lines:
        raise ParseError("empty input")
    fields = _parse_header(lines[0], GRAPH_HEADER)
    q, p = _header_int(fields, "q"), _header_int(fields, "p")
    arcs = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"arc line needs 3 fields: '{line}'")
        arcs.append(tuple(int(x) for x in parts))
    try:
        return ColoredDigraph.from_arcs(q, p, arcs)
    except ValueError as e:
        raise ParseError(str(e)) from e


# ---------------------------------------------------------------------------
# structure tensors

def _fmt_sign(s: int) -> str:
    return "+1" if s > 0 else "-1"


def write_tensor(t: StructureTensor) -> str:
    lines = [f"{TENSOR_HEADER} q={t.q} p={t.p}"]
    lines += [f"{i} {j} {k} {_fmt_sign(s)}" for (i, j, k, s) in t.sorted_entries()]
    return "\n".join(lines) + "\n"


def parse_tensor(text: str) -> StructureTensor:
    lines = _body_lines(text)
    if not lines:
        raise ParseError("empty input")
    fields = _parse_header(lines[0], TENSOR_HEADER)
    q, p = _header_int(fields, "q"), _header_int(fields, "p")
    entries = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(f"entry line needs 4 fields: '{line}'")
        i, j, k = (int(x) for x in parts[:3])
        if parts[3] not in ("+1", "-1", "1"):
            raise ParseError(f"sign must be +1 or -1, got '{parts[3]}'")
        entries.append((i, j, k, 1 if parts[3] in ("+1", "1") else -1))
    try:
        return StructureTensor.from_entries(q, p, entries)
    except ValueError as e:
        raise ParseError(str(e)) from e


def bracket_table(t: StructureTensor) -> str:
    """One bracket per line in basis notation, e.g. '[v1, v2] = -z3'."""
    lines = []
    for (i, j, k, s) in t.sorted_entries():
        rhs = f"z{k}" if s > 0 else f"-z{k}"
        lines.append(f"[v{i}, v{j}] = {rhs}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# witnesses

def _fmt_scalar(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def write_witness(w: IsoWitness, q: int, p: int) -> str:
    if isinstance(w, SignedPermWitness):
        lines = [f"{WITNESS_HEADER} kind=signed-perm q={q} p={p}"]
        lines.append("vertex-images " + " ".join(str(i) for i in w.vertex_images))
        lines.append("vertex-signs " + " ".join(_fmt_sign(s) for s in w.vertex_signs))
        lines.append("color-images " + " ".join(str(i) for i in w.color_images))
        lines.append("color-signs " + " ".join(_fmt_sign(s) for s in w.color_signs))
        return "\n".join(lines) + "\n"
    m = w.to_matrix()
    if m.nrows != q + p:
        raise ValueError("matrix size does not match q + p")
    lines = [f"{WITNESS_HEADER} kind=general-linear q={q} p={p}"]
    for row in m.rows:
        lines.append("row " + " ".join(_fmt_scalar(x) for x in row))
    return "\n".join(lines) + "\n"


def _parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Permutation images from disjoint cycle notation like '(1 2 3)(4 5)'."""
    images = list(range(1, n + 1))
    depth = 0
    cycles, cur = [], []
    for tok in text.replace("(", " ( ").replace(")", " ) ").split():
        if tok == "(":
            if depth:
                raise ParseError("nested cycle parenthesis")
            depth, cur = 1, []
        elif tok == ")":
            if not depth:
                raise ParseError("unbalanced cycle parenthesis")
            depth = 0
            cycles.append(cur)
        else:
            if not depth:
                raise ParseError(f"stray token '{tok}' in cycle notation")
            cur.append(int(tok))
    if depth:
        raise ParseError("unbalanced cycle parenthesis")
    seen = set()
    for cyc in cycles:
        for x in cyc:
            if not (1 <= x <= n) or x in seen:
                raise ParseError(f"bad cycle element {x}")
            seen.add(x)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
    return tuple(images)


def _parse_signs(parts: list[str], n: int) -> tuple[int, ...]:
    if len(parts) != n:
        raise ParseError(f"expected {n} signs, got {len(parts)}")
    out = []
    for s in parts:
        if s in ("+1", "+", "1"):
            out.append(1)
        elif s in ("-1", "-"):
            out.append(-1)
        else:
            raise ParseError(f"bad sign token '{s}'")
    return tuple(out)


def parse_witness(text: str) -> tuple[IsoWitness, int, int]:
    lines = _body_lines(text)
    if not lines:
        raise ParseError("empty input")
    fields = _parse_header(lines[0], WITNESS_HEADER)
    q, p = _header_int(fields, "q"), _header_int(fields, "p")
    kind = fields.get("kind")
    if kind == "signed-perm":
        data: dict[str, list[str]] = {}
        for line in lines[1:]:
            key, _, rest = line.partition(" ")
            data[key] = rest.split()
        def perm(key: str, n: int) -> tuple[int, ...]:
            if key + "-images" in data:
                imgs = tuple(int(x) for x in data[key + "-images"])
            elif key + "-cycles" in data:
                imgs = _parse_cycles(" ".join(data[key + "-cycles"]), n)
            else:
                imgs = tuple(range(1, n + 1))
            return imgs
        vi = perm("vertex", q)
        ci = perm("color", p)
        vs = _parse_signs(data.get("vertex-signs", ["+1"] * q), q)
        cs = _parse_signs(data.get("color-signs", ["+1"] * p), p)
        try:
            return SignedPermWitness(vi, ci, vs, cs), q, p
        except ValueError as e:
            raise ParseError(str(e)) from e
    if kind == "general-linear":
        rows = []
        for line in lines[1:]:
            key, _, rest = line.partition(" ")
            if key != "row":
                raise ParseError(f"expected 'row' line, got '{line}'")
            rows.append(tuple(Fraction(x) for x in rest.split()))
        n = q + p
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError(f"matrix must be {n}x{n}")
        return GeneralLinearWitness(IntMatrix.from_rows(rows)), q, p
    raise ParseError(f"unknown witness kind '{kind}'")


# ---------------------------------------------------------------------------
# DOT and structured data

_PALETTE = ("red", "blue", "forestgreen", "darkorange", "purple",
            "saddlebrown", "deeppink", "teal", "goldenrod", "navy",
            "crimson", "darkcyan")


def write_dot(g: ColoredDigraph, name: str = "unilie") -> str:
    """Graphviz output: undirected layout, arc direction kept as an arrowhead,
    colors drawn from a fixed 12-entry palette cycling past 12."""
    lines = [f"graph {name} {{"]
    for v in range(1, g.q + 1):
        lines.append(f'  v{v};')
    for (t, h, k) in g.sorted_arcs():
        color = _PALETTE[(k - 1) % len(_PALETTE)]
        lines.append(f'  v{t} -- v{h} [label="z{k}", color="{color}", dir=forward];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_data(obj) -> dict:
    """JSON-ready dictionary mirroring the text formats."""
    if isinstance(obj, ColoredDigraph):
        return {"kind": "graph", "q": obj.q, "p": obj.p,
                "arcs": [list(a) for a in obj.sorted_arcs()]}
    if isinstance(obj, StructureTensor):
        return {"kind": "algebra", "q": obj.q, "p": obj.p,
                "entries": [list(e) for e in obj.sorted_entries()]}
    if isinstance(obj, SignedPermWitness):
        return {"kind": "witness", "witness_kind": "signed-perm",
                "vertex_images": list(obj.vertex_images),
                "vertex_signs": list(obj.vertex_signs),
                "color_images": list(obj.color_images),
                "color_signs": list(obj.color_signs)}
    if isinstance(obj, GeneralLinearWitness):
        return {"kind": "witness", "witness_kind": "general-linear",
                "matrix": [[_fmt_scalar(x) for x in row]
                           for row in obj.matrix.rows]}
    raise TypeError(f"no data form for {type(obj).__name__}")


def from_data(data: dict):
    kind = data.get("kind")
    try:
        if kind == "graph":
            return ColoredDigraph.from_arcs(data["q"], data["p"],
                                            [tuple(a) for a in data["arcs"]])
        if kind == "algebra":
            return StructureTensor.from_entries(data["q"], data["p"],
                                                [tuple(e) for e in data["entries"]])
        if kind == "witness":
            wk = data.get("witness_kind")
            if wk == "signed-perm":
                return SignedPermWitness(tuple(data["vertex_images"]),
                                         tuple(data["color_images"]),
                                         tuple(data["vertex_signs"]),
                                         tuple(data["color_signs"]))
            if wk == "general-linear":
                rows = [tuple(Fraction(x) for x in row) for row in data["matrix"]]
                return GeneralLinearWitness(IntMatrix.from_rows(rows))
    except (KeyError, ValueError) as e:
        raise ParseError(f"bad {kind} data: {e}") from e
    raise ParseError(f"unrecognized data object kind '{kind}'")


def to_json(obj) -> str:
    return json.dumps(to_data(obj), sort_keys=True, indent=2) + "\n"


def parse_any(text: str):
    """Dispatch on the header line: graph, tensor, or witness file."""
    lines = _body_lines(text)
    if not lines:
        raise ParseError("empty input")
    head = lines[0]
    if head.startswith(GRAPH_HEADER):
        return parse_graph(text)
    if head.startswith(TENSOR_HEADER):
        return parse_tensor(text)
    if head.startswith(WITNESS_HEADER):
        return parse_witness(text)[0]
    raise ParseError(f"unrecognized header '{head}'")
