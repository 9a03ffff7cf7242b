"""The Jacobian of a metric graph as a polarized tropical torus.

Coordinates.  H_{p,q}(Jac, R) is identified with  ∧^q R^g ⊗ ∧^p R^g  where
both factors are written in the basis b_1, ..., b_g of unit tangent vectors
dual to the fundamental cycles of a spanning tree.  The integral cycle a_i is
the i-th column of Q.  A basis element b_J ⊗ b_K (|J| = q, |K| = p, both
increasing) sits at position ``index(J) * C(g, p) + index(K)`` with subsets
enumerated lexicographically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from . import graph as gr
from .linalg import DimensionError, QuotientStructure, det, matmul, transpose


@lru_cache(maxsize=None)
def subsets(g: int, k: int) -> tuple:
    return tuple(itertools.combinations(range(g), k))


@lru_cache(maxsize=None)
def subset_index(g: int, k: int) -> dict:
    return {s: i for i, s in enumerate(subsets(g, k))}


def insert_sign(j: int, K: tuple) -> tuple[int, Optional[tuple]]:
    """b_j ∧ b_K = sign · b_{K ∪ j};  sign 0 when j ∈ K."""
    if j in K:
        return 0, None
    before = sum(1 for k in K if k < j)
    return (-1) ** before, tuple(sorted(K + (j,)))


@dataclass(frozen=True)
class WedgeIndex:
    g: int
    p: int
    q: int

    @property
    def a_subsets(self) -> tuple:
        return subsets(self.g, self.q)

    @property
    def b_subsets(self) -> tuple:
        return subsets(self.g, self.p)

    @property
    def dim(self) -> int:
        return math.comb(self.g, self.q) * math.comb(self.g, self.p)

    def position(self, J: tuple, K: tuple) -> int:
        return subset_index(self.g, self.q)[J] * math.comb(self.g, self.p) + subset_index(self.g, self.p)[K]

    def pairs(self):
        for J in self.a_subsets:
            for K in self.b_subsets:
                yield J, K

    def label(self, J: tuple, K: tuple) -> str:
        left = "∧".join(f"b{j + 1}" for j in J) or "1"
        right = "∧".join(f"b{k + 1}" for k in K) or "1"
        return f"{left}⊗{right}"


@dataclass(frozen=True)
class TensorElement:
    index: WedgeIndex
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.index.dim:
            raise DimensionError(f"expected {self.index.dim} coordinates, got {len(self.coords)}")

    @classmethod
    def zero(cls, index: WedgeIndex) -> "TensorElement":
        return cls(index, (Fraction(0),) * index.dim)

    def __add__(self, other):
        self._check(other)
        return TensorElement(self.index, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return TensorElement(self.index, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return TensorElement(self.index, tuple(-a for a in self.coords))

    def __rmul__(self, c):
        c = Fraction(c)
        return TensorElement(self.index, tuple(c * a for a in self.coords))

    def _check(self, other):
        if self.index != other.index:
            raise DimensionError("tensor elements live in different spaces")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def terms(self):
        """Nonzero (coefficient, J, K) triples."""
        for (J, K), c in zip(self.index.pairs(), self.coords):
            if c:
                yield c, J, K


def wedge_coords(vectors: Sequence[Sequence], g: int) -> dict:
    """Coefficients of v_1 ∧ ... ∧ v_k in the basis b_I (I increasing): the k x k minors."""
    k = len(vectors)
    if k == 0:
        return {(): Fraction(1)}
    out = {}
    for I in subsets(g, k):
        d = det([[v[i] for i in I] for v in vectors])
        if d:
            out[I] = d
    return out


def tensor_from_terms(index: WedgeIndex, terms) -> TensorElement:
    """Assemble an element from (coef, a-part, b-part) with arbitrary vectors.

    ``a-part`` and ``b-part`` are sequences of coordinate vectors which get
    wedged together; the a-part has q vectors, the b-part p vectors.
    """
    coords = [Fraction(0)] * index.dim
    for c, avecs, bvecs in terms:
        if not c:
            continue
        A = wedge_coords(avecs, index.g)
        B = wedge_coords(bvecs, index.g)
        for J, x in A.items():
            for K, y in B.items():
                coords[index.position(J, K)] += c * x * y
    return TensorElement(index, tuple(coords))


def monodromy_phi(x: TensorElement) -> TensorElement:
    """u_1∧…∧u_q ⊗ v  ↦  Σ_k (-1)^k u_1∧…û_k…∧u_q ⊗ u_k∧v   (k counted from 1)."""
    idx = x.index
    if idx.q < 1:
        raise ValueError("monodromy needs q >= 1")
    out_idx = WedgeIndex(idx.g, idx.p + 1, idx.q - 1)
    coords = [Fraction(0)] * out_idx.dim
    for c, J, K in x.terms():
        for k, j in enumerate(J):
            sign, K2 = insert_sign(j, K)
            if not sign:
                continue
            J2 = J[:k] + J[k + 1:]
            coords[out_idx.position(J2, K2)] += (-1) ** (k + 1) * sign * c
    return TensorElement(out_idx, tuple(coords))


def wedge_with_h10(x: Sequence, y: TensorElement) -> TensorElement:
    """(x, u ⊗ v) ↦ u ⊗ (v ∧ x)."""
    idx = y.index
    if len(x) != idx.g:
        raise DimensionError("vector length does not equal the genus")
    out_idx = WedgeIndex(idx.g, idx.p + 1, idx.q)
    coords = [Fraction(0)] * out_idx.dim
    for c, J, K in y.terms():
        for j, xj in enumerate(x):
            if not xj:
                continue
            sign, K2 = insert_sign(j, K)
            if not sign:
                continue
            # v ∧ b_j = (-1)^p b_j ∧ v
            coords[out_idx.position(J, K2)] += (-1) ** idx.p * sign * c * Fraction(xj)
    return TensorElement(out_idx, tuple(coords))


# ---------------------------------------------------------------------------


class JacobianData:
    """Polarization and coordinate data of Jac(Γ) for a fixed spanning tree."""

    def __init__(self, tree: gr.SpanningTree):
        self.tree = tree
        self.graph = tree.graph
        self.g = tree.genus
        self.C = gr.fundamental_cycles(tree)
        self.B = gr.b_expansion(tree)
        self.lengths = tuple(e.length for e in self.graph.edges)
        g, E = self.g, len(self.lengths)
        self.Q = tuple(
            tuple(sum((self.C[i][e] * self.lengths[e] * self.C[j][e] for e in range(E)), Fraction(0)) for j in range(g))
            for i in range(g)
        )

    def __repr__(self):
        return f"JacobianData(g={self.g}, tree={list(self.tree.tree_edges)})"

    @property
    def cotree(self) -> tuple:
        return self.tree.cotree_edges

    def a(self, i: int) -> tuple:
        """Cycle a_i in b-coordinates (column i of Q)."""
        return tuple(self.Q[j][i] for j in range(self.g))

    def b(self, i: int) -> tuple:
        return tuple(Fraction(int(i == j)) for j in range(self.g))

    def b_edge(self, eid: str) -> tuple:
        return tuple(Fraction(x) for x in self.B[self.graph.edge_index(eid)])

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for row in self.Q for x in row)

    def integral_basis(self, p: int, q: int) -> list[tuple]:
        """Basis a_J ⊗ b_K of H_{p,q}(Z) as (a-vectors, b-vectors) pairs."""
        return [
            ([self.a(j) for j in J], [self.b(k) for k in K])
            for J in subsets(self.g, q)
            for K in subsets(self.g, p)
        ]

    def integral_element(self, p: int, q: int, J: tuple, K: tuple) -> TensorElement:
        return tensor_from_terms(
            WedgeIndex(self.g, p, q), [(1, [self.a(j) for j in J], [self.b(k) for k in K])]
        )

    def _phi_images(self, p_src: int, q_src: int, power: int) -> list[tuple]:
        out = []
        for J in subsets(self.g, q_src):
            for K in subsets(self.g, p_src):
                x = self.integral_element(p_src, q_src, J, K)
                for _ in range(power):
                    x = monodromy_phi(x)
                out.append(x.coords)
        return out

    @cached_property
    def _lattice_cache(self) -> dict:
        return {}

    def lattice_L(self, p: int, q: int) -> list[tuple]:
        """Generators of L_{p,q} = φ^{p-q}(H_{q,p}(Z))."""
        if p < q:
            raise ValueError("L_{p,q} needs p >= q")
        key = ("L", p, q)
        if key not in self._lattice_cache:
            self._lattice_cache[key] = self._phi_images(q, p, p - q)
        return self._lattice_cache[key]

    def lattice_K(self, p: int, q: int) -> list[tuple]:
        """Generators of K_{p,q} = φ^{p-q-1}(H_{q+1,p-1}(Z))."""
        if p < q + 1:
            raise ValueError("K_{p,q} needs p >= q + 1")
        key = ("K", p, q)
        if key not in self._lattice_cache:
            self._lattice_cache[key] = self._phi_images(q + 1, p - 1, p - q - 1)
        return self._lattice_cache[key]

    @cached_property
    def omega(self) -> TensorElement:
        return omega_class(self)

    def jh_quotient(self, p: int, q: int) -> QuotientStructure:
        key = ("JH", p, q)
        if key not in self._lattice_cache:
            idx = WedgeIndex(self.g, p, q)
            self._lattice_cache[key] = QuotientStructure(
                idx.dim, (), tuple(self.lattice_L(p, q)), name=f"JH_{p},{q}"
            )
        return self._lattice_cache[key]

    def q_quotient(self, p: int, q: int) -> QuotientStructure:
        key = ("Q", p, q)
        if key not in self._lattice_cache:
            idx = WedgeIndex(self.g, p, q)
            self._lattice_cache[key] = QuotientStructure(
                idx.dim, (), tuple(self.lattice_K(p, q)), name=f"Q_{p},{q}"
            )
        return self._lattice_cache[key]

    def jhbar_quotient(self) -> QuotientStructure:
        key = ("JHbar",)
        if key not in self._lattice_cache:
            idx = WedgeIndex(self.g, 2, 1)
            sub = tuple(wedge_with_h10(self.b(i), self.omega).coords for i in range(self.g))
            self._lattice_cache[key] = QuotientStructure(
                idx.dim, sub, tuple(self.lattice_L(2, 1)), name="JHbar_2,1"
            )
        return self._lattice_cache[key]


def polarization(tree: gr.SpanningTree) -> JacobianData:
    return JacobianData(tree)


def jacobian(G: gr.MetricGraph, tree: Optional[Sequence[str]] = None) -> JacobianData:
    return JacobianData(gr.spanning_tree(G, tree))


def lattice_L(jd: JacobianData, p: int, q: int):
    return jd.lattice_L(p, q)


def lattice_K(jd: JacobianData, p: int, q: int):
    return jd.lattice_K(p, q)


def jh_quotient(jd: JacobianData, p: int, q: int) -> QuotientStructure:
    return jd.jh_quotient(p, q)


def q_quotient(jd: JacobianData, p: int, q: int) -> QuotientStructure:
    return jd.q_quotient(p, q)


def jhbar_quotient(jd: JacobianData) -> QuotientStructure:
    return jd.jhbar_quotient()


def omega_class(jd: JacobianData) -> TensorElement:
    """ω = Σ_i a_i ⊗ b_i."""
    return tensor_from_terms(
        WedgeIndex(jd.g, 1, 1), [(1, [jd.a(i)], [jd.b(i)]) for i in range(jd.g)]
    )


# ---------------------------------------------------------------------------
# Comparing coordinates coming from two models of the same curve


def basis_change(src: JacobianData, dst: JacobianData) -> list[list[Fraction]]:
    """Matrix P with x_dst = P x_src for tangent vectors.

    Both Jacobians must come from the same vertex/edge sets; edges may be
    oriented differently, in which case the unit tangents differ by a sign.
    """
    if set(src.graph.edge_ids) != set(dst.graph.edge_ids):
        raise ValueError("models have different edge sets")
    cols = []
    for eps in src.cotree:
        e_src = src.graph.edge(eps)
        e_dst = dst.graph.edge(eps)
        if (e_src.src, e_src.dst) == (e_dst.src, e_dst.dst):
            s = 1
        elif (e_src.src, e_src.dst) == (e_dst.dst, e_dst.src):
            s = -1
        else:
            raise ValueError(f"edge {eps} has different endpoints in the two models")
        cols.append([s * x for x in dst.b_edge(eps)])
    return transpose(cols, dst.g)


def transform(x: TensorElement, P) -> TensorElement:
    """Apply ∧^q P ⊗ ∧^p P to ``x``."""
    idx = x.index
    g = idx.g
    Pcols = [tuple(P[r][c] for r in range(g)) for c in range(g)]
    terms = []
    for c, J, K in x.terms():
        terms.append((c, [Pcols[j] for j in J], [Pcols[k] for k in K]))
    return tensor_from_terms(idx, terms)


def transform_vector(v, P) -> tuple:
    return tuple(sum((P[r][c] * v[c] for c in range(len(v))), Fraction(0)) for r in range(len(P)))
