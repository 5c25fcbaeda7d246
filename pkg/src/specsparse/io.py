"""Edge-list and Matrix Market reading and writing.

Edge lists hold an optional ``n m`` header followed by ``u v w`` lines with
0-based ids; ``#`` starts a comment.  Matrix Market files are coordinate,
symmetric, 1-based.  Weights are written with 17 significant digits so that
a write/read round trip reproduces every float exactly.  Files are written
to a temporary name and renamed into place.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .graph import GraphError, WeightedGraph, build_graph


class ParseError(GraphError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_edgelist(G: WeightedGraph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines += [f"{a} {b} {_fmt(w)}" for a, b, w in zip(G.u.tolist(), G.v.tolist(), G.w.tolist())]
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str, source: str = "<string>") -> WeightedGraph:
    """Parse edge-list text; a 2-token first data line is the ``n m`` header."""
    n = m = None
    rows = []
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if first and len(tok) == 2:
                n, m = int(tok[0]), int(tok[1])
                if n < 0 or m < 0:
                    raise ValueError
            elif len(tok) in (2, 3):
                a, b = int(tok[0]), int(tok[1])
                w = float(tok[2]) if len(tok) == 3 else 1.0
                rows.append((a, b, w, lineno))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"{source}:{lineno}: cannot parse {raw.strip()!r}; expected 'u v w'") from None
        first = False
    if m is not None and m != len(rows):
        raise ParseError(f"{source}: header announces {m} edges, found {len(rows)}")
    if n is None:
        n = 1 + max((max(a, b) for a, b, _, _ in rows), default=-1)
    for a, b, w, lineno in rows:
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(f"{source}:{lineno}: vertex id out of range [0, {n})")
        if a == b:
            raise ParseError(f"{source}:{lineno}: self-loop at vertex {a}")
        if not (np.isfinite(w) and w > 0):
            raise ParseError(f"{source}:{lineno}: weight must be positive and finite")
    return build_graph(n, [(a, b, w) for a, b, w, _ in rows])


def format_matrix_market(G: WeightedGraph) -> str:
    lines = ["%%MatrixMarket matrix coordinate real symmetric", f"{G.n} {G.n} {G.m}"]
    # lower triangle, 1-based
    lines += [f"{b + 1} {a + 1} {_fmt(w)}" for a, b, w in zip(G.u.tolist(), G.v.tolist(), G.w.tolist())]
    return "\n".join(lines) + "\n"


def parse_matrix_market(text: str, source: str = "<string>") -> WeightedGraph:
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ParseError(f"{source}:1: missing %%MatrixMarket banner")
    banner = lines[0].lower().split()
    if len(banner) != 5 or banner[1] != "matrix" or banner[2] != "coordinate":
        raise ParseError(f"{source}:1: only coordinate matrices are supported")
    field, symmetry = banner[3], banner[4]
    if field not in ("real", "integer", "pattern") or symmetry not in ("symmetric", "general"):
        raise ParseError(f"{source}:1: unsupported field/symmetry {field}/{symmetry}")
    size = None
    nnz = seen = 0
    entries: dict[tuple[int, int], tuple[float, int]] = {}
    for lineno, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        tok = line.split()
        try:
            if size is None:
                rows, cols, nnz = (int(t) for t in tok)
            else:
                i, j = int(tok[0]) - 1, int(tok[1]) - 1
                w = 1.0 if field == "pattern" else float(tok[2])
                if len(tok) != (2 if field == "pattern" else 3):
                    raise ValueError
        except ValueError:
            raise ParseError(f"{source}:{lineno}: cannot parse {line!r}") from None
        if size is None:
            if rows != cols:
                raise ParseError(f"{source}:{lineno}: matrix is not square ({rows} x {cols})")
            size = (rows, cols)
            continue
        seen += 1
        if not (0 <= i < size[0] and 0 <= j < size[0]):
            raise ParseError(f"{source}:{lineno}: index out of range")
        if i == j:
            if w != 0:
                raise ParseError(f"{source}:{lineno}: nonzero diagonal entry; graphs have no self-loops")
            continue
        if (i, j) in entries:
            raise ParseError(f"{source}:{lineno}: duplicate entry ({i + 1}, {j + 1})")
        entries[(i, j)] = (w, lineno)
    if size is None:
        raise ParseError(f"{source}: missing size line")
    if seen != nnz:
        raise ParseError(f"{source}: size line announces {nnz} entries, found {seen}")
    edges = []
    for (i, j), (w, lineno) in entries.items():
        if symmetry == "general":
            other = entries.get((j, i))
            if other is None or other[0] != w:
                raise ParseError(f"{source}:{lineno}: matrix is not symmetric at ({i + 1}, {j + 1})")
            if i < j:
                continue
        elif i < j:
            raise ParseError(f"{source}:{lineno}: symmetric files list the lower triangle only")
        if not (np.isfinite(w) and w > 0):
            raise ParseError(f"{source}:{lineno}: weight must be positive and finite")
        edges.append((j, i, w))
    return build_graph(size[0], edges)


def _format_of(path, fmt: str | None) -> str:
    if fmt is None:
        return "matrix-market" if str(path).lower().endswith(".mtx") else "edgelist"
    if fmt not in ("edgelist", "matrix-market"):
        raise GraphError(f"unknown graph format {fmt!r}")
    return fmt


def read_graph(path, fmt: str | None = None) -> WeightedGraph:
    text = Path(path).read_text()
    if _format_of(path, fmt) == "matrix-market":
        return parse_matrix_market(text, str(path))
    return parse_edgelist(text, str(path))


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_graph(G: WeightedGraph, path, fmt: str | None = None) -> None:
    text = format_matrix_market(G) if _format_of(path, fmt) == "matrix-market" else format_edgelist(G)
    write_text_atomic(path, text)
