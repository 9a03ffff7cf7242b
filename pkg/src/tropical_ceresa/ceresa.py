"""Pointed and unpointed tropical Ceresa classes and the Ceresa–Zharkov class.

The pointed class is assembled directly from the sign table:

    v_b = Σ_{e ∈ F, ε ∈ F^c} sgn_b(e, ε) · l(e) · a_ε ⊗ (b_ε ∧ b_e)

and reduced in JH_{2,1}.  The unpointed class uses the basepoint-free sign and
is reduced in JH̄_{2,1}, where ω ∧ H_{1,0} is also divided out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import graph as gr
from .abel_jacobi import Divisor, aj_representative
from .jacobian import JacobianData, TensorElement, WedgeIndex, monodromy_phi, tensor_from_terms, wedge_with_h10
from .linalg import QuotientStructure


class CeresaError(ValueError):
    pass


@dataclass(frozen=True)
class CeresaResult:
    representative: TensorElement
    reduced_class: tuple
    torsion_order: object  # int or INFINITE
    quotient: str
    note: str = ""

    @property
    def is_zero(self) -> bool:
        return not any(self.reduced_class)


@dataclass(frozen=True)
class WClassResult:
    representative: TensorElement
    reduced_class: tuple
    nonzero: bool
    note: str = ""


def _check_vertex(jd: JacobianData, base: str):
    if base not in jd.graph.vertices:
        raise CeresaError(f"basepoint {base!r} is not a vertex of the model")


def _sum_over_signs(jd: JacobianData, sign) -> TensorElement:
    T = jd.tree
    terms = []
    for e in T.tree_edges:
        le = jd.graph.length(e)
        be = jd.b_edge(e)
        for i, eps in enumerate(T.cotree_edges):
            s = sign(e, eps)
            if s:
                terms.append((s * le, [jd.a(i)], [jd.b(i), be]))
    return tensor_from_terms(WedgeIndex(jd.g, 2, 1), terms)


def pointed_representative(jd: JacobianData, base: str) -> TensorElement:
    _check_vertex(jd, base)
    return _sum_over_signs(jd, lambda e, eps: gr.sgn_pointed(jd.tree, base, e, eps))


def unpointed_representative(jd: JacobianData) -> TensorElement:
    return _sum_over_signs(jd, lambda e, eps: gr.sgn_unpointed(jd.tree, e, eps))


def _result(rep: TensorElement, q: QuotientStructure, note: str = "") -> CeresaResult:
    return CeresaResult(rep, q.reduce(rep.coords), q.torsion_order(rep.coords), q.name, note)


def _low_genus_note(jd: JacobianData) -> str:
    return "genus < 2: H_{2,1} of the Jacobian is zero" if jd.g < 2 else ""


def ceresa_pointed(jd: JacobianData, base: str) -> CeresaResult:
    rep = pointed_representative(jd, base)
    return _result(rep, jd.jh_quotient(2, 1), _low_genus_note(jd))


def ceresa_unpointed(jd: JacobianData) -> CeresaResult:
    rep = unpointed_representative(jd)
    return _result(rep, jd.jhbar_quotient(), _low_genus_note(jd))


def basepoint_shift(jd: JacobianData, base: str, other: str) -> TensorElement:
    """-2 · AJ(base - other) ∧ ω."""
    x = aj_representative(jd, Divisor.of([(gr.VertexPoint(base), 1), (gr.VertexPoint(other), -1)]))
    return -2 * wedge_with_h10(x, jd.omega)


def basepoint_dependence_check(jd: JacobianData, base: str, other: str):
    """Check v_base - v_other = -2 AJ(base - other) ∧ ω in JH_{2,1}.

    Returns ``(holds, lhs, rhs)`` with lhs and rhs as representatives.
    """
    lhs = pointed_representative(jd, base) - pointed_representative(jd, other)
    rhs = basepoint_shift(jd, base, other)
    return jd.jh_quotient(2, 1).is_zero((lhs - rhs).coords), lhs, rhs


def ceresa_w(jd: JacobianData, base: Optional[str] = None) -> WClassResult:
    """w(Γ) = N(v_b) in Q_{3,0}."""
    if base is None:
        base = jd.graph.vertices[0]
    rep = monodromy_phi(pointed_representative(jd, base))
    q = jd.q_quotient(3, 0)
    reduced = q.reduce(rep.coords)
    note = "genus < 3: ∧^3 of the tangent space is zero" if jd.g < 3 else ""
    return WClassResult(rep, reduced, any(reduced), note)


def torsion(jd: JacobianData, which: str = "unpointed", base: Optional[str] = None):
    if which == "pointed":
        if base is None:
            raise CeresaError("pointed torsion needs a basepoint")
        return ceresa_pointed(jd, base).torsion_order
    if which == "unpointed":
        return ceresa_unpointed(jd).torsion_order
    raise CeresaError(f"unknown class {which!r}")


def prepare(G: gr.MetricGraph, base: Optional[gr.Point] = None, tree=None):
    """Contract bridges, make the basepoint a vertex, pick a spanning tree.

    Returns ``(JacobianData, basepoint vertex id or None, contracted bridge ids)``.
    """
    br = gr.bridges(G)
    H, b = gr.contract_edges(G, br, base)
    vertex = None
    if tree is not None:
        tree = [t for t in tree if t not in br]
    if b is not None:
        H, vertex = gr.as_vertex(H, b)
        if isinstance(b, gr.EdgePoint) and tree is not None:
            # the halves replace the edge; one of them must join the tree
            eid = b.edge
            halves = [f"{eid}.a", f"{eid}.b"] if eid in tree else [f"{eid}.a"]
            tree = [t for t in tree if t != eid] + halves
    return JacobianData(gr.spanning_tree(H, tree)), vertex, br
