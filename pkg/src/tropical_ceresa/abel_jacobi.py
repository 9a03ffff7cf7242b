"""Tropical Abel–Jacobi map on degree-0 divisors, with values in Jac(Γ) = JH_{1,0}."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import EdgePoint, GraphError, MetricGraph, Point, VertexPoint
from .jacobian import JacobianData
from .linalg import INFINITE


class DivisorError(ValueError):
    pass


@dataclass(frozen=True)
class Divisor:
    """Finite formal sum of points; entries with the same point are merged."""

    support: tuple  # ((Point, multiplicity), ...) sorted canonically, no zeros

    @classmethod
    def of(cls, items: Iterable[tuple]) -> "Divisor":
        acc = defaultdict(int)
        for pt, m in items:
            if isinstance(pt, EdgePoint):
                pt = EdgePoint(pt.edge, Fraction(pt.offset))
            acc[pt] += int(m)
        entries = [(pt, m) for pt, m in acc.items() if m]
        entries.sort(key=lambda pm: _point_key(pm[0]))
        return cls(tuple(entries))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.support)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor.of(list(self.support) + list(other.support))

    def __neg__(self) -> "Divisor":
        return Divisor.of((pt, -m) for pt, m in self.support)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)


def _point_key(pt: Point):
    if isinstance(pt, VertexPoint):
        return (0, pt.vertex, Fraction(0))
    return (1, pt.edge, pt.offset)


def normalize_point(G: MetricGraph, pt: Point) -> Point:
    """Edge points at offset 0 or l(e) become vertex points."""
    if isinstance(pt, VertexPoint):
        if pt.vertex not in G.vertices:
            raise DivisorError(f"unknown vertex {pt.vertex!r}")
        return pt
    try:
        e = G.edge(pt.edge)
    except GraphError as exc:
        raise DivisorError(str(exc)) from None
    t = Fraction(pt.offset)
    if t == 0:
        return VertexPoint(e.src)
    if t == e.length:
        return VertexPoint(e.dst)
    if not 0 < t < e.length:
        raise DivisorError(f"offset {t} outside edge {e.id} of length {e.length}")
    return EdgePoint(e.id, t)


def point_position(jd: JacobianData, pt: Point, via: str = "src") -> tuple:
    """Integral of the unit tangents along a path from the tree root to ``pt``.

    ``via`` selects which endpoint of the containing edge the path enters
    through; the two choices differ by an element of H_Z when the edge is a
    cotree edge, which is what the path-independence checks exercise.
    """
    G = jd.graph
    pt = normalize_point(G, pt)
    g = jd.g
    if isinstance(pt, VertexPoint):
        v = [Fraction(0)] * g
        for eid, s in jd.tree.path(jd.tree.root, pt.vertex):
            be = jd.b_edge(eid)
            ln = G.length(eid)
            v = [a + s * ln * b for a, b in zip(v, be)]
        return tuple(v)
    e = G.edge(pt.edge)
    be = jd.b_edge(e.id)
    if via == "src":
        base = point_position(jd, VertexPoint(e.src))
        return tuple(a + pt.offset * b for a, b in zip(base, be))
    base = point_position(jd, VertexPoint(e.dst))
    return tuple(a - (e.length - pt.offset) * b for a, b in zip(base, be))


def aj_representative(jd: JacobianData, D: Divisor, via: str = "src") -> tuple:
    if D.degree != 0:
        raise DivisorError(f"Abel–Jacobi needs a degree-0 divisor, got degree {D.degree}")
    out = [Fraction(0)] * jd.g
    for pt, m in D.support:
        pos = point_position(jd, pt, via=via)
        out = [a + m * b for a, b in zip(out, pos)]
    return tuple(out)


def aj(jd: JacobianData, D: Divisor):
    """Representative in R^g (b-coordinates) and its canonical class in R^g / Q Z^g."""
    rep = aj_representative(jd, D)
    return rep, jd.jh_quotient(1, 0).reduce(rep)


def aj_torsion(jd: JacobianData, D: Divisor):
    rep = aj_representative(jd, D)
    return jd.jh_quotient(1, 0).torsion_order(rep)


def tent_divisor(G: MetricGraph, eid: str, a, b, c) -> Divisor:
    """Divisor [a] + [c] - 2[b] of the tent function on ``eid`` (slopes +1 then -1)."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    e = G.edge(eid)
    if not 0 < a < b < c < e.length:
        raise DivisorError("tent offsets must satisfy 0 < a < b < c < length")
    if b - a != c - b:
        raise DivisorError("tent half-widths differ")
    return Divisor.of(
        [(EdgePoint(eid, a), 1), (EdgePoint(eid, c), 1), (EdgePoint(eid, b), -2)]
    )


def piecewise_linear_orders(breakpoints, slopes) -> dict:
    """Order of a piecewise-linear function at each breakpoint of an interval.

    ``slopes[i]`` is the slope on ``[breakpoints[i], breakpoints[i+1]]``; the
    function is constant (slope 0) outside the listed range.  The order at a
    point is the sum of the outgoing slopes there.
    """
    if len(slopes) != len(breakpoints) - 1:
        raise ValueError("need one slope per segment")
    padded = [0] + list(slopes) + [0]
    return {x: padded[i + 1] - padded[i] for i, x in enumerate(breakpoints)}
