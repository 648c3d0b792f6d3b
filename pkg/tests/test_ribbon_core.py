from __future__ import annotations

import pytest

from conftest import SIX_VERTEX_TEXT
from ribbon_core import (
    DisconnectedGraphError,
    InvalidGraphError,
    ParseError,
    RibbonGraph,
    boundary_components,
    euler_genus,
    is_connected,
    parse,
    partial_petrial,
    petrial,
    require_connected,
    serialize,
)


def _bouquet(*word: int) -> RibbonGraph:
    return RibbonGraph(rotations=(word,))


def test_parse_six_vertex_example() -> None:
    G = parse(SIX_VERTEX_TEXT)
    assert G.vertex_count == 6
    assert G.edge_count == 12
    assert G.rotations[1] == (9, 4, 2, 3, 8)
    assert not G.twisted
    assert is_connected(G)


def test_parse_accepts_parenthesised_rotations_and_newlines() -> None:
    G = parse("v1: (1, 8, 12)\nv2: (9,4,2,3,8)\nv3: (11,10,5,6,9)\nv4: (7,4,11)\nv5: (5,2,1,6,12)\nv6: (3,7,10)")
    assert G == parse(SIX_VERTEX_TEXT)


def test_single_loops_and_twists() -> None:
    plain, twisted = parse("v1: 1 1"), parse("v1: 1 -1")
    assert plain.is_loop(1) and not plain.is_twisted(1)
    assert twisted.is_twisted(1)
    assert twisted.twisted == frozenset({1})


def test_comments_are_ignored() -> None:
    G = parse("# a loop\nv1: 1 1  # untwisted\n")
    assert G.rotations == ((1, 1),)


@pytest.mark.parametrize(
    "text, line",
    [
        ("v1: 1 2\nv2: 1 x 2", 2),
        ("v1: 1 1\nv1: 2 2", 2),
        ("v1: 1 1\nv2:", 2),
        ("v1: 0 0", 1),
        ("v1: 1 3\nv2: 1 3", 2),
        ("v1: 1 1 1", 1),
        ("\nw1: 1 1", 2),
        ("v2: 1 1 / v1: 2 2", 1),
        ("v1: 1 2\nv3: 1 2", 2),
    ],
)
def test_parse_errors_name_the_line(text: str, line: int) -> None:
    with pytest.raises(ParseError) as excinfo:
        parse(text)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"line {line}: ")


def test_parse_rejects_empty_input() -> None:
    with pytest.raises(ParseError):
        parse("# nothing here\n")


def test_constructor_validates_label_counts() -> None:
    with pytest.raises(InvalidGraphError):
        RibbonGraph(rotations=((1, 2),))
    with pytest.raises(InvalidGraphError):
        RibbonGraph(rotations=((1, 1), ()))


def test_serialize_reparses_to_the_same_graph(six_vertex: RibbonGraph) -> None:
    twisted = partial_petrial(six_vertex, [2, 5, 11])
    assert parse(serialize(twisted)) == twisted
    assert serialize(_bouquet()) == "v1:"


@pytest.mark.parametrize(
    "word, faces",
    [((), 1), ((1, 1), 2), ((1, -1), 1), ((1, 2, 1, 2), 1), ((1, 1, 2, 2), 3), ((1, 2, 2, 1), 3)],
)
def test_boundary_components_of_small_bouquets(word, faces: int) -> None:
    assert boundary_components(_bouquet(*word)) == faces


@pytest.mark.parametrize(
    "word, genus",
    [((), 0), ((1, 1), 0), ((1, -1), 1), ((1, 2, 1, 2), 2), ((1, -1, 2, -2), 2), ((1, 2, -1, 2), 2)],
)
def test_euler_genus_of_small_bouquets(word, genus: int) -> None:
    assert euler_genus(_bouquet(*word)) == genus


def test_plane_tree_has_genus_zero_with_or_without_twists() -> None:
    G = parse("v1: 1 / v2: 1 2 / v3: 2")
    assert euler_genus(G) == 0
    assert euler_genus(partial_petrial(G, [1, 2])) == 0


def test_disconnected_graphs() -> None:
    G = parse("v1: 1 1\nv2: 2 2")
    assert not is_connected(G)
    assert euler_genus(G) == 0
    with pytest.raises(DisconnectedGraphError, match="graph must be connected"):
        require_connected(G)


def test_partial_petrial_is_an_involution(six_vertex: RibbonGraph) -> None:
    A = [1, 4, 9]
    once = partial_petrial(six_vertex, A)
    assert once.twisted == frozenset(A)
    assert partial_petrial(once, A) == six_vertex


def test_petrial_twists_every_edge(six_vertex: RibbonGraph) -> None:
    assert petrial(six_vertex).twisted == frozenset(six_vertex.labels)


def test_partial_petrial_rejects_unknown_edges(six_vertex: RibbonGraph) -> None:
    with pytest.raises(InvalidGraphError):
        partial_petrial(six_vertex, [13])
