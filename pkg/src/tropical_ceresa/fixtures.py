"""Named test curves and a random bridgeless-graph generator."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .graph import Edge, MetricGraph

K4_TREE = ("e4", "e5", "e6")
TL3_TREE = ("e5", "e6", "e7", "e8", "e9")
#: basepoints of the K4 and TL3 reference computations
K4_BASE = "o"
TL3_BASE = "y"


def _lengths(lengths, n, default=1):
    if lengths is None:
        lengths = [default] * n
    if len(lengths) != n:
        raise ValueError(f"expected {n} lengths")
    return [Fraction(x) for x in lengths]


def k4(lengths: Optional[Sequence] = None) -> MetricGraph:
    """K4: spokes e4, e5, e6 from the centre o, outer triangle e1, e2, e3."""
    l = _lengths(lengths, 6)
    return MetricGraph(
        ["o", "A", "B", "C"],
        [
            Edge("e1", "B", "C", l[0]),
            Edge("e2", "C", "A", l[1]),
            Edge("e3", "A", "B", l[2]),
            Edge("e4", "o", "A", l[3]),
            Edge("e5", "o", "B", l[4]),
            Edge("e6", "o", "C", l[5]),
        ],
    )


def tl3(lengths: Optional[Sequence] = None) -> MetricGraph:
    """Trivalent loop of three loops.

    Three digons {e1, e6}, {e2, e5}, {e3, e4} joined in a ring by e7, e8, e9:
    y -e7-> p1 =(e6, e1)=> q1 -e8-> p2 =(e5, e2)=> q2 -e9-> x =(e3, e4)=> y.
    """
    l = _lengths(lengths, 9)
    return MetricGraph(
        ["y", "p1", "q1", "p2", "q2", "x"],
        [
            Edge("e1", "p1", "q1", l[0]),
            Edge("e2", "p2", "q2", l[1]),
            Edge("e3", "x", "y", l[2]),
            Edge("e4", "x", "y", l[3]),
            Edge("e5", "p2", "q2", l[4]),
            Edge("e6", "p1", "q1", l[5]),
            Edge("e7", "y", "p1", l[6]),
            Edge("e8", "q1", "p2", l[7]),
            Edge("e9", "q2", "x", l[8]),
        ],
    )


def l3(lengths: Optional[Sequence] = None) -> MetricGraph:
    """TL3 with e7, e8, e9 contracted: a ring of three digons on three vertices."""
    l = _lengths(lengths, 6)
    return MetricGraph(
        ["y", "q1", "q2"],
        [
            Edge("e1", "y", "q1", l[0]),
            Edge("e2", "q1", "q2", l[1]),
            Edge("e3", "q2", "y", l[2]),
            Edge("e4", "q2", "y", l[3]),
            Edge("e5", "q1", "q2", l[4]),
            Edge("e6", "y", "q1", l[5]),
        ],
    )


def banana(n: int, lengths: Optional[Sequence] = None) -> MetricGraph:
    """Two vertices joined by ``n`` parallel edges (genus n - 1)."""
    l = _lengths(lengths, n)
    return MetricGraph(["u", "v"], [Edge(f"e{i + 1}", "u", "v", l[i]) for i in range(n)])


def theta(lengths: Optional[Sequence] = None) -> MetricGraph:
    return banana(3, lengths)


def loop(length=1) -> MetricGraph:
    return MetricGraph(["v"], [Edge("e1", "v", "v", Fraction(length))])


def dumbbell(l1=1, l2=1, bridge=1) -> MetricGraph:
    return MetricGraph(
        ["u", "v"],
        [
            Edge("e1", "u", "u", Fraction(l1)),
            Edge("e2", "u", "v", Fraction(bridge)),
            Edge("e3", "v", "v", Fraction(l2)),
        ],
    )


def random_length(rng: random.Random, integral: bool = False, max_num: int = 9, max_den: int = 6) -> Fraction:
    if integral:
        return Fraction(rng.randint(1, max_num))
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_lengths(rng: random.Random, n: int, integral: bool = False) -> list[Fraction]:
    return [random_length(rng, integral) for _ in range(n)]


def random_bridgeless(
    rng: random.Random,
    g: int,
    n_vertices: Optional[int] = None,
    integral: bool = False,
    allow_loops: bool = True,
) -> MetricGraph:
    """Random 2-edge-connected graph of genus ``g`` with random orientations.

    Built as a cycle through every vertex plus ``g - 1`` extra edges, so no
    edge separates.
    """
    if g < 1:
        raise ValueError("bridgeless graphs with at least one edge have genus >= 1")
    if n_vertices is None:
        n_vertices = rng.randint(1, g + 1)
    vs = [f"v{i}" for i in range(n_vertices)]
    pairs = []
    if n_vertices == 1:
        pairs.append((vs[0], vs[0]))
    else:
        for i in range(n_vertices):
            pairs.append((vs[i], vs[(i + 1) % n_vertices]))
    while len(pairs) - n_vertices + 1 < g:
        u, w = rng.choice(vs), rng.choice(vs)
        if u == w and not allow_loops and n_vertices > 1:
            continue
        pairs.append((u, w))
    rng.shuffle(pairs)
    edges = []
    for i, (u, w) in enumerate(pairs):
        if rng.random() < 0.5:
            u, w = w, u
        edges.append(Edge(f"e{i + 1}", u, w, random_length(rng, integral)))
    return MetricGraph(vs, edges)


def random_tree(rng: random.Random, G: MetricGraph) -> list[str]:
    """Random spanning tree edge ids (random-weight Kruskal)."""
    parent = {v: v for v in G.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    order = list(G.edges)
    rng.shuffle(order)
    chosen = []
    for e in order:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[a] = b
            chosen.append(e.id)
    return chosen
