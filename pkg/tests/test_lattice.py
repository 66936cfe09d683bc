from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqmorse import catalog
from eqmorse.errors import InputError, NotUnimodular, Unbounded
from eqmorse.fan import gamma_zero_system
from eqmorse.lattice import (
    GT,
    Constraint,
    LinearSystem,
    det,
    feasible,
    lattice_points,
    primitive,
    project,
    rational_solve,
    unimodular_inverse,
)
from eqmorse.morse import box_window, index_coefficients


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@pytest.mark.parametrize(
    "A,b,x",
    [
        ([[1, 0], [0, 1]], (3, 5), (3, 5)),
        ([[1, 0, 0], [0, 0, 1], [-2, -1, 0]], (0, 0, 3), (0, -3, 0)),
        ([[-1, -1], [0, 1]], (-2, 0), (2, 0)),
    ],
)
def test_rational_solve(A, b, x):
    assert rational_solve(A, b) == x


def test_rational_solve_singular_and_shape():
    assert rational_solve([[1, 2], [2, 4]], (1, 2)) is None
    with pytest.raises(InputError):
        rational_solve([[1, 0], [0, 1]], (1, 2, 3))


def test_rational_solve_fractional():
    assert rational_solve([[2, 0], [0, 3]], (1, 1)) == (Fraction(1, 2), Fraction(1, 3))


def test_unimodular_inverse_examples():
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    assert unimodular_inverse(I3) == I3
    assert unimodular_inverse([[1, 0], [0, 1]]) == [[1, 0], [0, 1]]
    inv = unimodular_inverse([[-1, -1], [0, 1]])
    # columns are the dual basis of the rows
    assert [list(c) for c in zip(*inv)] == [[-1, 0], [-1, 1]]
    with pytest.raises(NotUnimodular):
        unimodular_inverse([[2, 0], [0, 1]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_unimodular_inverse_is_inverse(entries):
    # products of elementary matrices are unimodular
    a, b, c, d = entries
    M = _matmul(_matmul([[1, a], [0, 1]], [[1, 0], [b, 1]]), [[1, c], [0, 1]])
    M = _matmul(M, [[1, 0], [d, 1]])
    assert det(M) == 1
    assert _matmul(unimodular_inverse(M), M) == [[1, 0], [0, 1]]


@pytest.mark.parametrize("v,p", [((2, 4, 6), (1, 2, 3)), ((0, -2, -1), (0, -2, -1)), ((-3, 0), (-1, 0))])
def test_primitive(v, p):
    assert primitive(v) == p


def test_primitive_zero():
    with pytest.raises(InputError):
        primitive((0, 0))


def test_feasible_strict():
    s = LinearSystem.build(1, [((1,), ">", 0), ((1,), "<", 1)])
    x = feasible(s)
    assert x is not None and 0 < x[0] < 1
    assert feasible(LinearSystem.build(1, [((1,), ">", 0), ((-1,), ">", 0)])) is None
    assert feasible(LinearSystem.build(1, [((1,), ">=", 0), ((-1,), ">=", 0)])) == (0,)


def test_feasible_empty_system():
    assert feasible(LinearSystem(3, ())) == (0, 0, 0)


def test_feasible_equalities():
    s = LinearSystem.build(2, [((1, 1), "=", 3), ((1, -1), ">", 0), ((0, 1), ">=", 1)])
    x = feasible(s)
    assert s.contains(x)


def test_project_triangle():
    # x, y >= 0, x + y <= 2 projected onto x gives 0 <= x <= 2
    s = LinearSystem.build(2, [((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 1), "<=", 2)])
    p = project(s, [0])
    assert [x for x in range(-3, 5) if p.contains((x,))] == [0, 1, 2]


def test_lattice_points_simplex():
    s = LinearSystem.build(2, [((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 1), "<=", 2)])
    assert len(lattice_points(s)) == 6
    s0 = LinearSystem.build(2, [((1, 0), ">=", 0), ((0, 1), ">=", 0), ((1, 1), "<=", 0)])
    assert lattice_points(s0) == [(0, 0)]


def test_lattice_points_strict_and_empty():
    s = LinearSystem(2, (Constraint((1, 0), 0, GT), Constraint((0, 1), 0, GT), Constraint((-1, -1), -2, GT)))
    assert lattice_points(s) == []


def test_lattice_points_unbounded():
    with pytest.raises(Unbounded):
        lattice_points(LinearSystem.build(2, [((1, 0), ">=", 0), ((0, 1), ">=", 0)]))


def test_lattice_points_hirzebruch_h0_count():
    fan, pl = catalog.hirzebruch_fan(1), catalog.hirzebruch_pl(2, 1)
    sc = catalog.hirzebruch(1, 2, 1)
    idx = index_coefficients(sc, box_window(sc, 3))
    assert len(lattice_points(gamma_zero_system(fan, pl))) == sum(1 for c in idx.values() if c > 0)


def test_constraint_rejects_unknown_relation():
    with pytest.raises(InputError):
        Constraint((1,), 0, "<>")
