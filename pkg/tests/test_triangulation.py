import pytest

from emptysimplex.families import generate_G
from emptysimplex.groebner import initial_ideal_generators
from emptysimplex.monomials import CompositeOrder
from emptysimplex.triangulation import (
    complex_from_initial_ideal,
    maximal_faces,
    verify_triangulation,
)


def complex_for(k, m):
    G = generate_G(k, m)
    gens = initial_ideal_generators(G.members(), CompositeOrder(G.cat))
    return G, complex_from_initial_ideal(G.cat, gens)


@pytest.fixture(scope="module")
def cx22():
    return complex_for(2, 2)[1]


def test_maximal_faces_basics():
    assert maximal_faces(3, []) == [(0, 1, 2)]
    assert maximal_faces(3, [(0, 2)]) == [(0, 1), (1, 2)]
    assert maximal_faces(4, [(0, 1), (2, 3)]) == [(0, 2), (0, 3), (1, 2), (1, 3)]
    assert maximal_faces(2, [(1,)]) == [(0,)]
    assert maximal_faces(2, [()]) == []


def test_maximal_faces_of_a_boundary():
    # the boundary of a triangle: the only nonface is the full triangle
    assert maximal_faces(3, [(0, 1, 2)]) == [(0, 1), (0, 2), (1, 2)]


def test_rejects_non_squarefree():
    G = generate_G(2, 2)
    y1 = G.cat.y(1)
    with pytest.raises(ValueError):
        complex_from_initial_ideal(G.cat, [(y1, y1)])


@pytest.mark.parametrize("m,cells", [(2, 16), (3, 24)])
def test_triangulation_is_unimodular(m, cells):
    _, cx = complex_for(2, m)
    rep = verify_triangulation(cx)
    assert rep.ok, rep.first_witness()
    assert rep.cells == cells and rep.volume_sum == cells
    assert rep.first_witness() is None


def test_deleting_a_cell_is_detected(cx22):
    rep = verify_triangulation(cx22.without_cell(0))
    assert not rep.ok
    assert not rep.checks["volume"]
    assert rep.first_witness().startswith("15 cells of total volume 15, expected 16 / 16")


def test_every_deleted_cell_is_detected(cx22):
    for i in range(len(cx22.facets)):
        assert not verify_triangulation(cx22.without_cell(i)).ok


def test_duplicated_cell_overlaps(cx22):
    cx = cx22.without_cell(0)
    cx.facets = cx.facets + [cx.facets[0]]
    rep = verify_triangulation(cx)
    assert not rep.ok and rep.overlaps


def test_to_json(cx22):
    data = cx22.to_json()
    assert data["dim"] == 3 and data["dilation"] == 2
    assert len(data["cells"]) == 16 and all(len(c) == 4 for c in data["cells"])
    assert len(data["points"]) == 11
    used = {v for c in data["cells"] for v in c}
    assert used == set(data["points"])
