import pytest
from hypothesis import given, strategies as st

from svir.algebra import CENTERLESS0, SVIR0
from svir.linalg import (DimensionMismatch, Matrix, OutOfWindow, Subspace, Window, column_image, intersect,
                         kernel, member, rank, rref, solve, subspace_sum)
from svir.scalar import I, ONE, ZERO, Scalar

from conftest import scalars

W2 = Window(CENTERLESS0, [CENTERLESS0.L(1).support()[0], CENTERLESS0.L(2).support()[0]])
W3 = Window.degree(CENTERLESS0, 1, "L")


def vec(*xs):
    return [Scalar.coerce(x) for x in xs]


def e(i, n=3):
    return [ONE if j == i else ZERO for j in range(n)]


def test_rref_examples():
    red, piv, rk = rref(Matrix([[2, 4], [1, 2]]))
    assert red == Matrix([[1, 2], [0, 0]]) and rk == 1 and piv == [0]
    assert rref(Matrix.identity(3))[0] == Matrix.identity(3)
    red, _, rk = rref(Matrix([[I, 1]]))
    assert red == Matrix([[1, -I]]) and rk == 1


def test_solve_examples():
    s = solve(Matrix([[1, 0], [0, 1]]), [3, 4])
    assert s.kind == "unique" and s.particular == vec(3, 4)
    s = solve(Matrix([[1, 1]]), [2])
    assert s.kind == "parametrized" and s.particular == vec(2, 0) and s.kernel == [vec(-1, 1)]
    s = solve(Matrix([[1], [1]]), [1, 2])
    assert s.kind == "none" and not s.solvable


def test_obstruction_certifies():
    a = Matrix([[1, 2], [2, 4], [0, 1]])
    b = vec(1, 3, 0)
    s = solve(a, b)
    y = s.obstruction
    assert all(sum((y[i] * a[i, j] for i in range(a.rows)), ZERO) == 0 for j in range(a.cols))
    assert sum((yi * bi for yi, bi in zip(y, b)), ZERO) != 0


def test_dimension_errors():
    with pytest.raises(DimensionMismatch):
        solve(Matrix([[1, 0]]), [1, 2])
    with pytest.raises(DimensionMismatch):
        Matrix([[1, 0], [1]])


def test_column_image_examples():
    assert column_image(Matrix.zeros(2, 2), W2).dim == 0
    assert column_image(Matrix.identity(2), W2) == Subspace.full(W2)
    s = column_image(Matrix([[1], [2]]), W2)
    assert s.dim == 1 and s.basis() == [CENTERLESS0.L(1) + CENTERLESS0.L(2).scale(2)]


def test_intersect_examples():
    e1, e2 = e(0, 2), e(1, 2)
    assert intersect(Subspace(W2, [e1, e2]), Subspace(W2, [e1])) == Subspace(W2, [e1])
    assert intersect(Subspace(W2, [e1]), Subspace(W2, [e2])).dim == 0
    s = Subspace(W2, [vec(1, 1)])
    assert intersect(s, Subspace(W2, [e1, e2])) == s


def test_member_examples():
    c = CENTERLESS0
    L1, L2 = c.L(1), c.L(2)
    assert member(Subspace(W2, [vec(1, 0)]), c.zero()) == (True, [ZERO])
    assert member(Subspace(W2, [vec(0, 1)]), L1) == (False, None)
    assert member(Subspace(W2, [vec(1, 1)]), L1 + L2) == (True, [ONE])
    with pytest.raises(OutOfWindow) as info:
        member(Subspace(W2, [vec(1, 1)]), c.L(5))
    assert [str(s) for s in info.value.escaping] == ["L(5)"]


def test_window_round_trip():
    w = Window.degree(SVIR0, 2)
    x = SVIR0.L(-2) + SVIR0.G(1).scale(I) + SVIR0.C()
    assert w.element(w.vector(x)) == x


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(scalars, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rank_nullity(rows):
    a = Matrix(rows)
    ker = kernel(a)
    assert rank(a) + len(ker) == a.cols
    for v in ker:
        assert all(x == 0 for x in a.apply(v))


@given(matrices, st.data())
def test_solve_agrees_with_member(rows, data):
    a = Matrix(rows)
    b = data.draw(st.lists(scalars, min_size=a.rows, max_size=a.rows))
    s = solve(a, b)
    w = Window.degree(CENTERLESS0, a.rows, "L")
    w = Window(CENTERLESS0, list(w)[:a.rows])
    img = column_image(a, w)
    assert s.solvable == (img.coordinates(b) is not None)
    if s.solvable:
        assert a.apply(s.particular) == b
        for v in s.kernel:
            assert all(x == 0 for x in a.apply(v))


def _subspaces(n):
    return st.lists(st.lists(scalars, min_size=n, max_size=n), max_size=3).map(lambda g: Subspace(W3, g))


@given(_subspaces(3), _subspaces(3))
def test_grassmann_identity(u, v):
    inter = intersect(u, v)
    assert subspace_sum(u, v).dim + inter.dim == u.dim + v.dim
    for x in inter.basis():
        assert u.contains(x) and v.contains(x)
    assert intersect(u, v) == intersect(v, u)


@given(_subspaces(3))
def test_canonical_form_is_unique(u):
    # re-spanning a subspace by its own basis reproduces the same rows
    assert Subspace(W3, [list(r) for r in u.rows]) == u
