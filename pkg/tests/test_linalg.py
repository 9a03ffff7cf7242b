import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from tropical_ceresa.linalg import (
    INFINITE,
    DimensionError,
    LatticeBasis,
    LinalgError,
    QuotientStructure,
    cokernel,
    det,
    hnf,
    identity,
    lattice_contains,
    matmul,
    rank,
    rref,
    snf,
)

small = st.integers(-9, 9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def sympy_invariants(M):
    S = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    return [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]


def test_det_small():
    assert det([[2, 1], [1, 2]]) == 3
    assert det([[0, 1], [1, 0]]) == -1
    assert det([]) == 1


def test_rref_and_rank():
    rows, piv = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert piv == [0, 1]
    assert rows[0] == [1, 0, 1]
    assert rank([[1, 1], [2, 2]]) == 1


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul([[1, 2]], [[1, 2]])


@given(matrices())
def test_hnf_is_unimodular_transform(M):
    H, U = hnf(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1
    # echelon with positive pivots and reduced entries above them
    last = -1
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(r) for r in H[i:])
            break
        c = nz[0]
        assert c > last and row[c] > 0
        for k in range(i):
            assert 0 <= H[k][c] < row[c]
        last = c


def test_hnf_matches_sympy_on_full_rank_square():
    from sympy.matrices.normalforms import hermite_normal_form

    M = [[2, 3, 6], [4, 1, 5], [7, 8, 9]]
    H, _ = hnf(M)
    # sympy returns the column-style HNF; its transpose of M^T is our row HNF
    ours = sympy.Matrix(H)
    theirs = hermite_normal_form(sympy.Matrix(M).T).T
    assert abs(ours.det()) == abs(theirs.det()) == abs(sympy.Matrix(M).det())
    assert ours.rref() == theirs.rref()


@given(matrices())
def test_snf_against_sympy(M):
    dec = snf(M)
    assert matmul(matmul(dec.U, M), dec.V) == dec.S
    assert abs(det(dec.U)) == 1 and abs(det(dec.V)) == 1
    d = [x for x in dec.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert d == sympy_invariants(M)
    off = [dec.S[i][j] for i in range(len(M)) for j in range(len(M[0])) if i != j]
    assert not any(off)


def test_snf_example():
    assert snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal == [2, 6, 12]


def test_lattice_membership_brute_force():
    gens = [(2, 1), (0, 3)]
    inside = {(a * 2, a + 3 * b) for a in range(-6, 7) for b in range(-6, 7)}
    for x in range(-4, 5):
        for y in range(-4, 5):
            ok, z = lattice_contains(gens, (x, y))
            assert ok == ((x, y) in inside)
            if ok:
                assert tuple(z[0] * g0 + z[1] * g1 for g0, g1 in zip(*gens)) == (x, y)


def test_lattice_rational_generators():
    L = LatticeBasis.from_generators([(Fraction(1, 2), 0), (0, Fraction(1, 3))], 2)
    assert L.rank == 2
    assert L.coordinates((1, 1)) == (2, 3)
    assert L.coordinates((Fraction(1, 4), 0)) == (Fraction(1, 2), 0)
    assert L.reduce((Fraction(3, 4), Fraction(1, 2))) == (Fraction(1, 4), Fraction(1, 6))


def test_lattice_outside_span():
    L = LatticeBasis.from_generators([(1, 1, 0)], 3)
    assert L.coordinates((1, 0, 0)) is None


def test_quotient_circle():
    q = QuotientStructure(1, (), [(Fraction(5, 2),)])
    assert q.reduce((Fraction(7),)) == (Fraction(2),)
    assert q.torsion_order((Fraction(1, 2),)) == 5
    assert q.is_zero((Fraction(-5, 2),))


def test_quotient_with_subspace():
    q = QuotientStructure(2, [(1, 1)], [(1, 0)])
    # R^2 / (R(1,1) + Z(1,0)) ~ R / Z via x - y
    assert q.equal((Fraction(1, 3), 0), (0, Fraction(2, 3)))
    assert not q.equal((Fraction(1, 3), 0), (0, Fraction(1, 3)))
    assert q.torsion_order((Fraction(1, 6), 0)) == 6


def test_quotient_infinite_order():
    q = QuotientStructure(2, (), [(1, 0)])
    assert q.torsion_order((0, Fraction(1, 2))) == INFINITE


@given(st.lists(st.tuples(small, small), min_size=1, max_size=3), st.tuples(small, small), st.integers(1, 12))
def test_torsion_order_brute_force(gens, num, den):
    x = (Fraction(num[0], den), Fraction(num[1], den))
    q = QuotientStructure(2, (), gens)
    n = q.torsion_order(x)
    if n == INFINITE:
        assert all(not q.is_zero((k * x[0], k * x[1])) for k in range(1, 30))
    else:
        assert q.is_zero((n * x[0], n * x[1]))
        assert all(not q.is_zero((k * x[0], k * x[1])) for k in range(1, n))


def test_cokernel_square_order_is_det():
    M = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    G = cokernel(M, identity(3))
    assert G.free_rank == 0
    assert G.order == abs(det(M))
    for r in M:
        assert G.is_zero(r)


def test_cokernel_free_part_and_orders():
    G = cokernel([(2, 0, 0), (0, 6, 0)], identity(3))
    assert G.invariant_factors == (2, 6)
    assert G.free_rank == 1
    assert G.order == INFINITE
    assert G.element_order((0, 0, 1)) == INFINITE
    assert G.element_order((1, 3, 0)) == 2
    assert G.exponent == INFINITE


def test_cokernel_rejects_foreign_relation():
    with pytest.raises(LinalgError):
        cokernel([(Fraction(1, 2), 0)], identity(2))


@given(matrices(3, 3))
def test_cokernel_order_matches_sympy(M):
    n = len(M[0])
    G = cokernel(M, identity(n), n)
    inv = sympy_invariants(M)
    assert G.free_rank == n - len(inv)
    assert G.invariant_factors == tuple(d for d in inv if d > 1)
    for r in M:
        assert G.is_zero(r)


def test_hnf_examples():
    H, U = hnf([[2, 4], [1, 1]])
    assert H == [[1, 1], [0, 2]]
    assert hnf(identity(3)) == (identity(3), identity(3))
    assert hnf([[0, 0], [0, 0]])[0] == [[0, 0], [0, 0]]


def test_snf_examples():
    assert snf([[2, 0], [0, 3]]).diagonal == [1, 6]
    assert snf(identity(2)).S == identity(2)
    assert snf([[0]]).S == [[0]]


def test_snf_cokernel_brute_force():
    # Z^2 / <(2,0),(0,3)> has exactly six cosets, and (1,1) generates it
    G = cokernel([(2, 0), (0, 3)], identity(2))
    assert G.invariant_factors == (6,)
    classes = {G.coordinates((x, y)) for x in range(6) for y in range(6)}
    assert len(classes) == 6
    assert G.element_order((1, 1)) == 6


def test_cokernel_trivial_and_free():
    assert cokernel([(1, 0), (0, 1)], identity(2)).order == 1
    G = cokernel([], identity(2), 2)
    assert G.free_rank == 2 and G.invariant_factors == ()


def test_lattice_contains_examples():
    ok, z = lattice_contains([(2, 0), (0, 3)], (4, 3))
    assert ok and tuple(z) == (2, 1)
    assert not lattice_contains([(2, 0), (0, 3)], (1, 0))[0]
    ok, z = lattice_contains([(Fraction(1, 2), 0)], (Fraction(3, 2), 0))
    assert ok and tuple(z) == (3,)
    with pytest.raises(DimensionError):
        lattice_contains([(1, 0)], (1, 0, 0))


def test_quotient_reduce_examples():
    q = QuotientStructure(2, (), identity(2))
    assert q.reduce((Fraction(5, 2), Fraction(-1, 3))) == (Fraction(1, 2), Fraction(2, 3))
    assert q.torsion_order((Fraction(1, 2), Fraction(1, 3))) == 6
    assert q.torsion_order((1, 0)) == 1
    assert QuotientStructure(1, (), [(1,)]).torsion_order((Fraction(3, 4),)) == 4


@given(
    st.tuples(st.integers(-20, 20), st.integers(-20, 20)),
    st.integers(1, 7),
    st.fractions(max_denominator=7),
    st.integers(-5, 5),
)
def test_quotient_reduce_is_class_function(num, den, t, k):
    q = QuotientStructure(2, [(1, 1)], [(1, 0)])
    x = (Fraction(num[0], den), Fraction(num[1], den))
    y = (x[0] + t + k, x[1] + t)
    r = q.reduce(x)
    assert q.reduce(y) == r
    assert q.reduce(r) == r


def test_quotient_dimension_mismatch():
    q = QuotientStructure(2, (), identity(2))
    with pytest.raises(DimensionError):
        q.reduce((1, 2, 3))


@given(matrices(3, 3), st.permutations(range(3)))
def test_cokernel_invariant_under_relation_reordering(M, perm):
    n = len(M[0])
    rows = [M[i] for i in perm if i < len(M)]
    assert cokernel(M, identity(n), n).invariant_factors == cokernel(rows, identity(n), n).invariant_factors
