"""Metric graphs: oriented multigraphs with rational edge lengths.

Loops and parallel edges are allowed.  Vertex and edge order is the order in
which they were given; that order drives every deterministic choice below
(spanning tree, cotree enumeration, coordinate order).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    def reversed(self) -> "Edge":
        return Edge(self.id, self.dst, self.src, self.length)


@dataclass(frozen=True)
class VertexPoint:
    vertex: str


@dataclass(frozen=True)
class EdgePoint:
    edge: str
    offset: Fraction  # distance from src, strictly inside the edge


Point = Union[VertexPoint, EdgePoint]
Basepoint = Point


def _as_edge(e) -> Edge:
    if not isinstance(e, Edge):
        e = Edge(*e)
    if isinstance(e.length, int) and not isinstance(e.length, bool):
        e = Edge(e.id, e.src, e.dst, Fraction(e.length))
    return e


class MetricGraph:
    """A connected metric graph ``(G, l)`` with an orientation on each edge."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge], check_connected: bool = True):
        self.vertices = tuple(vertices)
        self.edges = tuple(_as_edge(e) for e in edges)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge ids")
        vs = set(self.vertices)
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise GraphError(f"edge {e.id} references an unknown vertex")
            if not isinstance(e.length, Fraction):
                raise GraphError(f"edge {e.id}: length must be rational")
            if e.length <= 0:
                raise GraphError(f"edge {e.id}: length must be positive, got {e.length}")
        self._edge = {e.id: e for e in self.edges}
        self._index = {e.id: i for i, e in enumerate(self.edges)}
        if check_connected and not self.is_connected():
            raise GraphError("graph is not connected")

    def __repr__(self):
        return f"MetricGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __eq__(self, other):
        return (
            isinstance(other, MetricGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def edge_index(self, eid: str) -> int:
        return self._index[eid]

    @property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    def length(self, eid: str) -> Fraction:
        return self.edge(eid).length

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in (e.src, e.dst)]

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        adj = self._adjacency()
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def _adjacency(self):
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.src].append((e, e.dst))
            if not e.is_loop:
                adj[e.dst].append((e, e.src))
        return adj

    def with_edges(self, edges) -> "MetricGraph":
        return MetricGraph(self.vertices, edges)

    def flip(self, *eids: str) -> "MetricGraph":
        """Same curve with the orientation of the given edges reversed."""
        flip = set(eids)
        return self.with_edges([e.reversed() if e.id in flip else e for e in self.edges])

    def scaled(self, factor) -> "MetricGraph":
        factor = Fraction(factor)
        return self.with_edges([Edge(e.id, e.src, e.dst, e.length * factor) for e in self.edges])


def genus(G: MetricGraph) -> int:
    if not G.is_connected():
        raise GraphError("genus requires a connected graph")
    return len(G.edges) - len(G.vertices) + 1


def bridges(G: MetricGraph) -> list[str]:
    """Separating edges, in edge order."""
    out = []
    for e in G.edges:
        if e.is_loop:
            continue
        rest = MetricGraph(G.vertices, [f for f in G.edges if f.id != e.id], check_connected=False)
        if not rest.is_connected():
            out.append(e.id)
    return out


def contract_edges(G: MetricGraph, eids: Iterable[str], b: Optional[Point] = None):
    """Contract the given (non-loop) edges.  Each merged class keeps its first vertex id."""
    eids = set(eids)
    parent = {v: v for v in G.vertices}
    order = {v: i for i, v in enumerate(G.vertices)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in G.edges:
        if e.id in eids:
            a, c = find(e.src), find(e.dst)
            if a != c:
                if order[c] < order[a]:
                    a, c = c, a
                parent[c] = a
    vertices = [v for v in G.vertices if find(v) == v]
    edges = [Edge(e.id, find(e.src), find(e.dst), e.length) for e in G.edges if e.id not in eids]
    H = MetricGraph(vertices, edges)
    if b is None:
        return H, None
    if isinstance(b, VertexPoint):
        nb = VertexPoint(find(b.vertex))
    elif b.edge in eids:
        nb = VertexPoint(find(G.edge(b.edge).src))
    else:
        nb = b
    return H, nb


def contract_bridges(G: MetricGraph, b: Optional[Point] = None):
    """Contract every separating edge.  Returns the new graph and the image of ``b``."""
    return contract_edges(G, bridges(G), b)


def subdivide(G: MetricGraph, eid: str, offset) -> tuple[MetricGraph, str]:
    """Insert a vertex at distance ``offset`` from ``src(eid)``.

    The edge is replaced in place by ``eid.a`` (src -> new) and ``eid.b``
    (new -> dst).  Returns the new graph and the new vertex id.
    """
    e = G.edge(eid)
    offset = Fraction(offset)
    if not 0 < offset < e.length:
        raise GraphError(f"offset {offset} is not strictly inside edge {eid}")
    new_v = f"{eid}@{offset}"
    if new_v in G.vertices:
        raise GraphError(f"vertex {new_v} already exists")
    edges = []
    for f in G.edges:
        if f.id == eid:
            edges.append(Edge(f"{eid}.a", f.src, new_v, offset))
            edges.append(Edge(f"{eid}.b", new_v, f.dst, f.length - offset))
        else:
            edges.append(f)
    return MetricGraph(list(G.vertices) + [new_v], edges), new_v


def as_vertex(G: MetricGraph, b: Point) -> tuple[MetricGraph, str]:
    """Make ``b`` a vertex of the model, subdividing if it lies inside an edge."""
    if isinstance(b, VertexPoint):
        if b.vertex not in G.vertices:
            raise GraphError(f"unknown vertex {b.vertex!r}")
        return G, b.vertex
    return subdivide(G, b.edge, b.offset)


# ---------------------------------------------------------------------------
# Spanning trees


class SpanningTree:
    """A spanning tree ``T = (V, F)`` of a metric graph, rooted at the first vertex."""

    def __init__(self, G: MetricGraph, tree_edges: Sequence[str]):
        self.graph = G
        tree = set(tree_edges)
        unknown = tree - set(G.edge_ids)
        if unknown:
            raise GraphError(f"unknown tree edges {sorted(unknown)}")
        self.tree_edges = tuple(e.id for e in G.edges if e.id in tree)
        self.cotree_edges = tuple(e.id for e in G.edges if e.id not in tree)
        if len(self.tree_edges) != len(G.vertices) - 1:
            raise GraphError("tree edge count does not equal |V| - 1")
        self.root = G.vertices[0]
        # parent[v] = (edge id, sign) of the tree edge leading from parent to v;
        # sign +1 if that edge is traversed src -> dst going away from the root
        self.parent: dict[str, Optional[tuple[str, int, str]]] = {self.root: None}
        self.depth = {self.root: 0}
        adj = {v: [] for v in G.vertices}
        for eid in self.tree_edges:
            e = G.edge(eid)
            if e.is_loop:
                raise GraphError(f"loop {eid} cannot be a tree edge")
            adj[e.src].append((eid, +1, e.dst))
            adj[e.dst].append((eid, -1, e.src))
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for eid, sign, w in adj[v]:
                if w not in self.parent:
                    self.parent[w] = (eid, sign, v)
                    self.depth[w] = self.depth[v] + 1
                    queue.append(w)
        if len(self.parent) != len(G.vertices):
            raise GraphError("tree edges do not span the graph (cycle or disconnected)")
        self._side_cache: dict[str, frozenset] = {}

    @property
    def genus(self) -> int:
        return len(self.cotree_edges)

    def path_to_root(self, v: str) -> list[tuple[str, int]]:
        """Signed edges from ``v`` up to the root (sign +1 if traversed src -> dst)."""
        out = []
        while self.parent[v] is not None:
            eid, sign, p = self.parent[v]
            out.append((eid, -sign))
            v = p
        return out

    def path(self, u: str, v: str) -> list[tuple[str, int]]:
        """The unique tree path from ``u`` to ``v`` as signed edges."""
        up = self.path_to_root(u)
        down = self.path_to_root(v)
        # strip the common tail (shared part near the root)
        while up and down and up[-1][0] == down[-1][0]:
            up.pop()
            down.pop()
        return up + [(eid, -s) for eid, s in reversed(down)]

    def source_side(self, eid: str) -> frozenset:
        """Vertex set S1 of the component of T - e containing src(e)."""
        if eid not in self._side_cache:
            e = self.graph.edge(eid)
            if eid not in self.tree_edges:
                raise GraphError(f"{eid} is not a tree edge")
            seen = {e.src}
            stack = [e.src]
            adj = {}
            for fid in self.tree_edges:
                if fid == eid:
                    continue
                f = self.graph.edge(fid)
                adj.setdefault(f.src, []).append(f.dst)
                adj.setdefault(f.dst, []).append(f.src)
            while stack:
                v = stack.pop()
                for w in adj.get(v, ()):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            self._side_cache[eid] = frozenset(seen)
        return self._side_cache[eid]


def spanning_tree(G: MetricGraph, tree: Optional[Sequence[str]] = None) -> SpanningTree:
    """Breadth-first tree from the first vertex, scanning edges in order; loops never enter.

    ``tree`` pins an explicit edge set instead.
    """
    if tree is not None:
        return SpanningTree(G, tree)
    root = G.vertices[0]
    seen = {root}
    chosen = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in G.edges:
            if e.is_loop or v not in (e.src, e.dst):
                continue
            w = e.dst if e.src == v else e.src
            if w not in seen:
                seen.add(w)
                chosen.append(e.id)
                queue.append(w)
    return SpanningTree(G, chosen)


def tree_path(T: SpanningTree, u: str, v: str) -> list[tuple[str, int]]:
    return T.path(u, v)


def fundamental_cycles(T: SpanningTree) -> list[list[int]]:
    """g x |E| signed incidence rows; row i is the circuit through cotree edge i."""
    G = T.graph
    rows = []
    for eps in T.cotree_edges:
        e = G.edge(eps)
        row = [0] * len(G.edges)
        row[G.edge_index(eps)] = 1
        for fid, s in T.path(e.dst, e.src):
            row[G.edge_index(fid)] += s
        rows.append(row)
    return rows


def b_expansion(T: SpanningTree) -> list[list[int]]:
    """|E| x g matrix: row e gives the unit tangent b_e in the basis {b_eps}.

    For a tree edge e with S1 the side of src(e):
    b_e = sum of b_eps over cotree edges crossing S2 -> S1
        - sum of b_eps over cotree edges crossing S1 -> S2.
    """
    G = T.graph
    g = T.genus
    rows = []
    col = {eps: i for i, eps in enumerate(T.cotree_edges)}
    for e in G.edges:
        row = [0] * g
        if e.id in col:
            row[col[e.id]] = 1
        else:
            S1 = T.source_side(e.id)
            for eps in T.cotree_edges:
                f = G.edge(eps)
                a, b = f.src in S1, f.dst in S1
                if not a and b:
                    row[col[eps]] += 1
                elif a and not b:
                    row[col[eps]] -= 1
        rows.append(row)
    return rows


def _check_pair(T: SpanningTree, e: str, eps: str):
    if e not in T.tree_edges:
        raise GraphError(f"{e} is not a tree edge")
    if eps not in T.cotree_edges:
        raise GraphError(f"{eps} is not a cotree edge")


def points_away(T: SpanningTree, e: str, base: str) -> bool:
    """Whether tree edge ``e`` is oriented away from vertex ``base``."""
    return base in T.source_side(e)


def sgn_pointed(T: SpanningTree, base: str, e: str, eps: str) -> int:
    """Signed count of the tree paths base -> src(eps), base -> dst(eps) that use ``e``."""
    _check_pair(T, e, eps)
    G = T.graph
    f = G.edge(eps)
    S1 = T.source_side(e)
    # e lies on the path base -> w iff base and w are on different sides of e
    base_in = base in S1
    hits = sum(1 for w in (f.src, f.dst) if (w in S1) != base_in)
    if not hits:
        return 0
    return hits if base_in else -hits


def sgn_unpointed(T: SpanningTree, e: str, eps: str) -> int:
    """+1 if ``e`` points towards eps, -1 if away, 0 if e lies on the cycle of eps.

    "Towards" means both endpoints of eps are on the target side of e.
    """
    _check_pair(T, e, eps)
    f = T.graph.edge(eps)
    S1 = T.source_side(e)
    a, b = f.src in S1, f.dst in S1
    if a and b:
        return -1
    if not a and not b:
        return 1
    return 0
