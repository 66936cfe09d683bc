import pytest

from eqmorse import catalog
from eqmorse.chambers import (
    enumerate_chambers,
    enumerate_chambers_by_signs,
    find_chamber,
    opposite,
    polarize,
    polarizing_index,
)
from eqmorse.errors import InputError, PolarizationError
from eqmorse.fan import FixedPointDatum, Scenario
from eqmorse.charring import FormalCharacter

SCENARIOS = {
    "cp1": lambda: catalog.cpn(1, 2),
    "cp2": lambda: catalog.cpn(2, 2),
    "cp3": lambda: catalog.cpn(3, 1),
    "hirzebruch": lambda: catalog.hirzebruch(2, 1, 3),
    "tolman": catalog.tolman,
    "flag-a2": lambda: catalog.flag("A2", (1, 1)),
}


def test_chamber_counts():
    assert len(enumerate_chambers(catalog.cpn(2, 1))) == 6
    assert len(enumerate_chambers(catalog.cpn(1, 4))) == 2


def test_tolman_chamber():
    chs = enumerate_chambers(catalog.tolman())
    assert any(c.closure_contains((1, -1)) and c.closure_contains((0, -1)) for c in chs)


def test_polarize():
    assert polarize((1,), (1,)) == ((1,), False)
    assert polarize((-1,), (1,)) == ((1,), True)
    with pytest.raises(PolarizationError):
        polarize((1, -1), (1, 1))


def test_cp2_indices():
    sc = catalog.cpn(2, 2)
    chs = enumerate_chambers(sc)
    c = find_chamber(chs, (2, 1))
    assert [polarizing_index(p, c) for p in sc.points] == [0, 1, 2]
    assert [polarizing_index(p, opposite(chs, c)) for p in sc.points] == [2, 1, 0]


def test_hirzebruch_indices():
    sc = catalog.hirzebruch(1, 2, 1)
    c = find_chamber(enumerate_chambers(sc), (-2, -1))  # between -e1 and -e1-e2
    assert [polarizing_index(p, c) for p in sc.points] == [0, 1, 2, 1]


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_opposite_indices(name):
    sc = SCENARIOS[name]()
    chs = enumerate_chambers(sc)
    assert len(chs) % 2 == 0
    for c in chs:
        o = opposite(chs, c)
        for p in sc.points:
            assert polarizing_index(p, c) + polarizing_index(p, o) == sc.dim
        for nv in c.normals:
            assert c.side(nv) * o.side(nv) == -1


@pytest.mark.parametrize("name", ["cp2", "cp3", "hirzebruch", "tolman"])
def test_sign_search_agrees(name):
    sc = SCENARIOS[name]()
    a = {c.signs for c in enumerate_chambers(sc)}
    b = {c.signs for c in enumerate_chambers_by_signs(sc.all_weights(), sc.rank)}
    assert a == b


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_representatives_interior(name):
    sc = SCENARIOS[name]()
    for c in enumerate_chambers(sc):
        assert c.contains(c.representative)
        assert all(isinstance(x, int) for x in c.representative)


def test_find_chamber_on_wall():
    chs = enumerate_chambers(catalog.cpn(2, 1))
    with pytest.raises(InputError):
        find_chamber(chs, (1, 1))
    with pytest.raises(InputError):
        find_chamber(chs, (1, 0, 0))


def test_zero_weight_rejected():
    with pytest.raises(InputError):
        Scenario(1, 1, (FixedPointDatum("p", ((0,),), FormalCharacter.monomial((0,))),))
