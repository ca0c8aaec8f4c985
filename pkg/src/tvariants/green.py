"""
Green's relations and egg-box diagrams.

R- and L-classes are the strongly connected components of the right and
left Cayley graphs over *all* elements (edges x -> x*u and x -> u*x), so
mutual reachability is exactly the definitional x <=_R y <=_R x.  H is the
meet of R and L, D their join (which equals J for finite semigroups).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .semigroup import GREEN_CAP, CapExceeded, FiniteSemigroup


def _first_seen(labels: np.ndarray) -> np.ndarray:
    """Renumber labels 0, 1, ... in order of first appearance."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.ravel()]


def _scc(m: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(m, m)).tocsr()
    _, labels = connected_components(g, directed=True, connection="strong")
    return _first_seen(labels)


@dataclass(frozen=True)
class GreenStructure:
    semigroup: FiniteSemigroup
    r_class: np.ndarray
    l_class: np.ndarray
    h_class: np.ndarray
    d_class: np.ndarray
    h_is_group: tuple[bool, ...]
    # per D-class: (R-id, L-id, H-id) cells, rows then columns
    d_cells: tuple[tuple[tuple[int, int, int], ...], ...] = field(repr=False)

    def classes(self, kind: str) -> list[list[int]]:
        labels = {"R": self.r_class, "L": self.l_class, "H": self.h_class, "D": self.d_class}[kind]
        out: list[list[int]] = [[] for _ in range(int(labels.max()) + 1)]
        for i, c in enumerate(labels.tolist()):
            out[c].append(i)
        return out

    def counts(self) -> dict[str, int]:
        return {k: int(getattr(self, f"{k.lower()}_class").max()) + 1 for k in "RLHD"}

    def h_class_of(self, i: int) -> list[int]:
        return np.flatnonzero(self.h_class == self.h_class[i]).tolist()

    def same(self, kind: str, i: int, j: int) -> bool:
        labels = getattr(self, f"{kind.lower()}_class")
        return bool(labels[i] == labels[j])


def green_structure(S: FiniteSemigroup, cap: int = GREEN_CAP) -> GreenStructure:
    m = len(S)
    if m > cap:
        raise CapExceeded(f"Green's relations capped at {cap} elements (semigroup has {m})", m)
    cached = S._cache.get("green")
    if cached is not None:
        return cached
    t = S.table.astype(np.int64)
    if (t < 0).any():
        raise ValueError("semigroup is not closed")
    rows = np.repeat(np.arange(m), m)
    r_class = _scc(m, rows, t.ravel())          # x -> x*u
    l_class = _scc(m, rows, t.T.ravel())        # x -> u*x

    _, h_raw = np.unique(r_class * m + l_class, return_inverse=True)
    h_class = _first_seen(h_raw.ravel())

    nr = int(r_class.max()) + 1
    nl = int(l_class.max()) + 1
    join = coo_matrix((np.ones(m, dtype=np.int8), (r_class, nr + l_class)),
                      shape=(nr + nl, nr + nl))
    _, comp = connected_components(join, directed=False)
    d_class = _first_seen(comp[r_class])

    idem = np.zeros(int(h_class.max()) + 1, dtype=bool)
    diag = t[np.arange(m), np.arange(m)]
    idem[h_class[diag == np.arange(m)]] = True

    cells: list[list[tuple[int, int, int]]] = [[] for _ in range(int(d_class.max()) + 1)]
    seen = set()
    for i in np.lexsort((l_class, r_class)).tolist():
        h = int(h_class[i])
        if h not in seen:
            seen.add(h)
            cells[int(d_class[i])].append((int(r_class[i]), int(l_class[i]), h))

    out = GreenStructure(S, r_class, l_class, h_class, d_class,
                         tuple(bool(x) for x in idem), tuple(tuple(c) for c in cells))
    S._cache["green"] = out
    return out


# -- egg-box ---------------------------------------------------------------

@dataclass(frozen=True)
class HCell:
    elements: tuple[int, ...]
    group: bool


@dataclass(frozen=True)
class DBox:
    rank: int | None          # common rank of the members, if any
    rows: tuple[int, ...]     # R-class ids
    cols: tuple[int, ...]     # L-class ids
    grid: tuple[tuple[HCell | None, ...], ...]

    @property
    def size(self) -> int:
        return sum(len(c.elements) for row in self.grid for c in row if c is not None)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    @property
    def h_size(self) -> int | None:
        sizes = {len(c.elements) for row in self.grid for c in row if c is not None}
        return sizes.pop() if len(sizes) == 1 else None

    def is_rectangular(self) -> bool:
        return all(c is not None for row in self.grid for c in row)


@dataclass(frozen=True)
class EggBox:
    size: int
    dclasses: tuple[DBox, ...]

    def profile(self) -> list[tuple[int | None, int, int, int | None]]:
        """(rank, #R, #L, H-size) per D-class in display order."""
        return [(d.rank, *d.shape, d.h_size) for d in self.dclasses]


def egg_box(S: FiniteSemigroup, green: GreenStructure | None = None) -> EggBox:
    """Egg-box layout: D-classes by decreasing rank, then decreasing size."""
    green = green or green_structure(S)
    ranks = S.ranks()
    members = green.classes("D")
    boxes = []
    for d, cells in enumerate(green.d_cells):
        rows = tuple(dict.fromkeys(r for r, _, _ in cells))
        cols = tuple(sorted(dict.fromkeys(l for _, l, _ in cells)))
        where = {(r, l): h for r, l, h in cells}
        grid = []
        for r in rows:
            line = []
            for l in cols:
                h = where.get((r, l))
                line.append(None if h is None else HCell(
                    tuple(np.flatnonzero(green.h_class == h).tolist()), green.h_is_group[h]))
            grid.append(tuple(line))
        rk = {int(ranks[i]) for i in members[d]}
        boxes.append((DBox(rk.pop() if len(rk) == 1 else None, rows, cols, tuple(grid)),
                      max(int(ranks[i]) for i in members[d]), len(members[d]), members[d][0]))
    boxes.sort(key=lambda b: (-b[1], -b[2], b[3]))
    return EggBox(len(S), tuple(b[0] for b in boxes))


def to_dot(box: EggBox, name: str = "eggbox") -> str:
    """Graphviz text: one cluster per D-class, one node per H-class.

    Node labels read "size|G" for group H-classes and "size|" otherwise;
    invisible edges stack the rows of each grid.
    """
    lines = [f"digraph {_dot_id(name)} {{",
             "  node [shape=box, fontname=\"Helvetica\"];",
             "  edge [style=invis];"]
    for k, d in enumerate(box.dclasses):
        rank = "?" if d.rank is None else str(d.rank)
        lines.append(f"  subgraph cluster_d{k} {{")
        lines.append(f"    label=\"D{k} rank={rank} {d.shape[0]}x{d.shape[1]}\";")
        for i, row in enumerate(d.grid):
            ids = []
            for j, cell in enumerate(row):
                node = f"d{k}_r{i}_c{j}"
                ids.append(node)
                if cell is None:
                    lines.append(f"    {node} [label=\"\", style=dashed];")
                else:
                    flag = "G" if cell.group else ""
                    fill = ", style=filled, fillcolor=\"#d0d0d0\"" if cell.group else ""
                    lines.append(f"    {node} [label=\"{len(cell.elements)}|{flag}\"{fill}];")
            lines.append("    { rank=same; " + "; ".join(ids) + "; }")
            if i:
                lines.append(f"    d{k}_r{i - 1}_c0 -> d{k}_r{i}_c0;")
        lines.append("  }")
        if k:
            lines.append(f"  d{k - 1}_r{len(box.dclasses[k - 1].grid) - 1}_c0 -> d{k}_r0_c0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    return name if name.isidentifier() else '"' + name.replace('"', '\\"') + '"'


def to_text(box: EggBox) -> str:
    """ASCII grid per D-class; a '*' marks group H-classes."""
    out = [f"semigroup of size {box.size}, {len(box.dclasses)} D-classes"]
    for k, d in enumerate(box.dclasses):
        rank = "?" if d.rank is None else d.rank
        out.append(f"D{k}: rank={rank} R={d.shape[0]} L={d.shape[1]} H={d.h_size} size={d.size}")
        labels = [["" if c is None else f"{len(c.elements)}{'*' if c.group else ''}" for c in row]
                  for row in d.grid]
        w = max(len(s) for row in labels for s in row) + 2
        rule = "+" + "+".join("-" * w for _ in d.cols) + "+"
        out.append(rule)
        for row in labels:
            out.append("|" + "|".join(s.center(w) for s in row) + "|")
            out.append(rule)
    return "\n".join(out) + "\n"
