"""Plain-text exchange formats for graphs, complexes, traces, and matrices.

Graph: first line "n m", then m lines "u v".
Complex: one facet per line, space-separated base-10 labels; '#' comments.
Collapse trace: one step per line, "s0 s1 ... -> t0 t1 ...".
Matrix: header "rows cols nnz", then nnz lines "row col value".
"""

from __future__ import annotations

from .collapse import CollapseStep
from .complexes import Graph, SimplicialComplex, build_graph
from .homology import BoundaryMatrix


def write_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    n, m = (int(t) for t in lines[0].split())
    pairs = []
    for ln in lines[1:m + 1]:
        u, v = (int(t) for t in ln.split())
        pairs.append((u, v))
    if len(pairs) != m:
        raise ValueError(f"expected {m} edge lines, found {len(pairs)}")
    return build_graph(n, pairs)


def facets(x: SimplicialComplex) -> list[tuple[int, ...]]:
    """Maximal faces, sorted."""
    out = []
    for k in range(len(x.faces) - 1, -1, -1):
        for f in x.faces[k]:
            if not any(set(f) < set(g) for g in out):
                out.append(f)
    # quadratic scan is fine for export sizes; keep deterministic order
    return sorted(out, key=lambda f: (len(f), f))


def write_complex(x: SimplicialComplex) -> str:
    lines = [f"# n={x.n} dim_cap={x.dim_cap}"]
    lines.extend(" ".join(str(v) for v in f) for f in facets(x))
    return "\n".join(lines) + "\n"


def read_complex(text: str, n: int | None = None,
                 dim_cap: int | None = None) -> SimplicialComplex:
    faces = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        faces.append(tuple(int(t) for t in ln.split()))
    if n is None:
        n = max((max(f) for f in faces), default=-1) + 1
    return SimplicialComplex.from_faces(n, faces, dim_cap)


def write_trace(steps) -> str:
    lines = []
    for s in steps:
        left = " ".join(str(v) for v in s.free_face)
        right = " ".join(str(v) for v in s.coface)
        lines.append(f"{left} -> {right}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_trace(text: str) -> list[CollapseStep]:
    steps = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        left, right = ln.split("->")
        steps.append(CollapseStep(tuple(int(t) for t in left.split()),
                                  tuple(int(t) for t in right.split())))
    return steps


def write_matrix(bm: BoundaryMatrix) -> str:
    rows, cols = bm.shape
    lines = [f"{rows} {cols} {len(bm.triplets)}"]
    lines.extend(f"{r} {c} {v}" for r, c, v in sorted(bm.triplets))
    return "\n".join(lines) + "\n"
