import pytest

from gibbslearn.geometry import (
    UNREACHABLE,
    ball_term_ids,
    build_graph,
    patch_term_ids,
    surface_count,
    term_distance,
    truncate_to_ball,
    volume_count,
)
from gibbslearn.models import chain, lattice2d, tfim


@pytest.fixture
def chain7():
    return tfim(chain(7))


def test_site_set_distance_on_chain(chain7):
    # terms touching site 1 to terms touching site 6: four hops through
    # the overlapping ZZ edges
    assert term_distance(chain7.graph, {1}, {6}) == 4
    assert term_distance(chain7.graph, {3}, {3}) == 0


def test_distances_from_site(chain7):
    dist = chain7.graph.distances_from({3})
    # edge terms are 0..5 left to right, field terms 6..12
    assert dist[2] == 0 and dist[3] == 0 and dist[9] == 0
    assert dist[1] == 1 and dist[4] == 1
    assert dist[6] == 3 and dist[12] == 3


def test_ball_and_patch(chain7):
    ball1 = ball_term_ids(chain7.graph, {3}, 1)
    assert ball1 == {1, 2, 3, 4, 8, 9, 10}
    # patch radius is strict: ell = 1 is empty, ell = 2 keeps distance-0 terms
    assert patch_term_ids(chain7.graph, {3}, 1) == set()
    assert patch_term_ids(chain7.graph, {3}, 2) == {2, 3, 9}


def test_volume_surface_counts(chain7):
    assert volume_count(chain7.graph, 1, {3}) == 7
    assert surface_count(chain7.graph, 1, {3}) == 4
    # whole chain is reachable at large radius
    assert volume_count(chain7.graph, 10, {3}) == len(chain7.terms)


def test_disconnected_component_unreachable():
    graph = build_graph(
        {0: frozenset({0, 1}), 1: frozenset({1, 2}), 2: frozenset({7, 8})}
    )
    dist = graph.distances_from({0})
    assert dist[1] == 1
    assert dist[2] == UNREACHABLE


def test_truncate_to_ball_keeps_near_terms(chain7):
    small = truncate_to_ball(chain7, {0}, 1, inclusive=True)
    kept = set(small.term_ids)
    assert kept == ball_term_ids(chain7.graph, {0}, 1)
    # ids survive the restriction
    for t in kept:
        assert small.terms[t][0].to_text() == chain7.terms[t][0].to_text()
    assert truncate_to_ball(chain7, {0}, 1).term_ids == []


def test_lattice2d_degree_exceeds_chain():
    sq = tfim(lattice2d(3, 3))
    ch = tfim(chain(9))
    assert sq.degree > ch.degree
    assert sq.n_sites == ch.n_sites == 9


def test_empty_patch_when_radius_small(chain7):
    assert patch_term_ids(chain7.graph, {3}, 0) == set()
    assert patch_term_ids(chain7.graph, {3}, -1) == set()
