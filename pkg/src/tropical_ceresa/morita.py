"""The symplectic matrix of the multitwist, the group B̄(δ) and the Morita class.

Integral coordinates.  With H = X ⊕ Y, X = <α_1..α_g>, Y = <β_1..β_g>:

* X ⊗ ∧²Y uses the same positions as H_{2,1} (``WedgeIndex(g, 2, 1)``), so
  α_i ⊗ β_j∧β_k sits where b_i ⊗ b_j∧b_k does;
* ∧²X ⊗ Y uses ``WedgeIndex(g, 1, 2)``: α_i∧α_j ⊗ β_k at the slot of
  b_i∧b_j ⊗ b_k.

Φ replaces α_i by a_i (the i-th column of Q) and β_j by b_j.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from . import graph as gr
from .ceresa import unpointed_representative
from .jacobian import JacobianData, TensorElement, WedgeIndex, insert_sign, tensor_from_terms
from .linalg import DimensionError, FiniteAbelianGroup, cokernel, identity, matmul, transpose


class MoritaError(ValueError):
    pass


def _integral_q(jd: JacobianData) -> list[list[int]]:
    if not jd.integral:
        raise MoritaError("δ_Γ needs integral edge lengths")
    return [[int(x) for x in row] for row in jd.Q]


@dataclass(frozen=True)
class DeltaMatrix:
    """Matrix of δ_Γ on (α_1..α_g, β_1..β_g); column i is the image of the i-th basis vector."""

    g: int
    M: tuple

    def minus_identity(self) -> list[list[int]]:
        n = 2 * self.g
        return [[self.M[i][j] - (i == j) for j in range(n)] for i in range(n)]

    def is_symplectic(self) -> bool:
        g = self.g
        J = [[0] * (2 * g) for _ in range(2 * g)]
        for i in range(g):
            J[i][g + i] = 1
            J[g + i][i] = -1
        return matmul(matmul(transpose(self.M), J), self.M) == J


def delta_matrix(jd: JacobianData) -> DeltaMatrix:
    Q = _integral_q(jd)
    g = jd.g
    M = identity(2 * g)
    for i in range(g):
        for j in range(g):
            M[g + i][j] = Q[i][j]
    return DeltaMatrix(g, tuple(tuple(r) for r in M))


def _x_wedge2y_index(g: int) -> WedgeIndex:
    return WedgeIndex(g, 2, 1)


def _wedge2x_y_index(g: int) -> WedgeIndex:
    return WedgeIndex(g, 1, 2)


def _delta_minus_i_basis(Q, g: int, i: int, j: int, k: int) -> list[int]:
    """(δ - I)(α_i∧α_j ⊗ β_k) = α_i ⊗ Q(α_j)∧β_k - α_j ⊗ Q(α_i)∧β_k."""
    idx = _x_wedge2y_index(g)
    out = [0] * idx.dim
    for src, other, sign in ((i, j, 1), (j, i, -1)):
        for m in range(g):
            c = Q[m][other]
            if not c:
                continue
            s, K = insert_sign(m, (k,))
            if s:
                out[idx.position((src,), K)] += sign * s * c
    return out


def delta_minus_I_action(jd: JacobianData, x) -> tuple:
    """Apply δ - I to ∧²X ⊗ Y coordinates, landing in X ⊗ ∧²Y coordinates."""
    Q = _integral_q(jd)
    g = jd.g
    src = _wedge2x_y_index(g)
    if len(x) != src.dim:
        raise DimensionError(f"expected {src.dim} coordinates, got {len(x)}")
    out = [0] * _x_wedge2y_index(g).dim
    for (I, (k,)), c in zip(src.pairs(), x):
        if c:
            col = _delta_minus_i_basis(Q, g, I[0], I[1], k)
            out = [a + c * b for a, b in zip(out, col)]
    return tuple(out)


def omega_wedge_y(g: int, k: int) -> list[int]:
    """Σ_i α_i ⊗ β_i∧β_k."""
    idx = _x_wedge2y_index(g)
    out = [0] * idx.dim
    for i in range(g):
        s, K = insert_sign(i, (k,))
        if s:
            out[idx.position((i,), K)] += s
    return out


@dataclass(frozen=True)
class BGroupData:
    group: FiniteAbelianGroup
    relations: tuple
    labels: tuple
    g: int

    @property
    def dim(self) -> int:
        return len(self.labels)


def b_group(jd: JacobianData) -> BGroupData:
    Q = _integral_q(jd)
    g = jd.g
    idx = _x_wedge2y_index(g)
    rels = []
    for I, (k,) in _wedge2x_y_index(g).pairs():
        rels.append(tuple(_delta_minus_i_basis(Q, g, I[0], I[1], k)))
    for k in range(g):
        rels.append(tuple(omega_wedge_y(g, k)))
    rels = [r for r in rels if any(r)]
    n = idx.dim
    ambient = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    group = cokernel(rels, ambient, n) if n else FiniteAbelianGroup((), 0, ())
    labels = tuple(
        "α{}⊗{}".format(J[0] + 1, "∧".join(f"β{k + 1}" for k in K)) for J, K in idx.pairs()
    )
    return BGroupData(group, tuple(rels), labels, g)


def n_representative(jd: JacobianData) -> tuple:
    """Σ_{e∈F} l(e) Σ_{ε∈F^c} sgn̄(e, ε) α_ε ⊗ (β_ε ∧ β(e)) as integer coordinates."""
    _integral_q(jd)
    T = jd.tree
    g = jd.g
    terms = []
    for e in T.tree_edges:
        le = jd.graph.length(e)
        be = jd.b_edge(e)
        for i, eps in enumerate(T.cotree_edges):
            s = gr.sgn_unpointed(T, e, eps)
            if s:
                unit = tuple(Fraction(int(m == i)) for m in range(g))
                terms.append((s * le, [unit], [jd.b(i), be]))
    x = tensor_from_terms(_x_wedge2y_index(g), terms).coords
    return tuple(int(c) for c in x)


def n_class(jd: JacobianData, bg: BGroupData = None) -> tuple:
    """Coordinates of n(Γ) in the invariant-factor decomposition of B̄(δ_Γ)."""
    if bg is None:
        bg = b_group(jd)
    return bg.group.coordinates(n_representative(jd))


def phi_lift(jd: JacobianData, x) -> TensorElement:
    """Φ on X ⊗ ∧²Y coordinates, as an H_{2,1} representative."""
    idx = _x_wedge2y_index(jd.g)
    if len(x) != idx.dim:
        raise DimensionError(f"expected {idx.dim} coordinates, got {len(x)}")
    terms = []
    for (J, K), c in zip(idx.pairs(), x):
        if c:
            terms.append((Fraction(c), [jd.a(J[0])], [jd.b(K[0]), jd.b(K[1])]))
    return tensor_from_terms(idx, terms)


def phi_embed(jd: JacobianData, x) -> tuple:
    """Canonical class of Φ(x) in JH̄_{2,1}."""
    return jd.jhbar_quotient().reduce(phi_lift(jd, x).coords)


def enumerate_group(bg: BGroupData, limit: int = 100000) -> dict:
    """One ambient lift per element of B̄, keyed by group coordinates.

    Breadth-first search over sums of standard basis vectors.
    """
    G = bg.group
    if G.free_rank:
        raise MoritaError("group is infinite")
    if G.order > limit:
        raise MoritaError(f"group of order {G.order} exceeds enumeration limit {limit}")
    n = bg.dim
    zero = (0,) * n
    seen = {G.coordinates(zero): zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for j in range(n):
            y = x[:j] + (x[j] + 1,) + x[j + 1 :]
            c = G.coordinates(y)
            if c not in seen:
                seen[c] = y
                queue.append(y)
    return seen


def compare_morita_ceresa(jd: JacobianData) -> bool:
    """Does Φ(n(Γ)) equal v̄(Γ) in JH̄_{2,1}?"""
    lhs = phi_lift(jd, n_representative(jd))
    rhs = unpointed_representative(jd)
    return jd.jhbar_quotient().equal(lhs.coords, rhs.coords)

