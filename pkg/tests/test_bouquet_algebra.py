from __future__ import annotations

import numpy as np
import pytest

from bouquet_algebra import (
    Bouquet,
    Gf2Matrix,
    SignedGraph,
    adjacency_gf2,
    diagonal_rank_profile,
    genus_via_rank,
    gf2_rank,
    gf2_rank_batch,
    intersection_graph,
    join,
    parse_chord_diagram,
    parse_signed_graph,
    serialize_chord_diagram,
    serialize_signed_graph,
    signed_intersection_graph,
)
from random_instances import all_bouquets, random_bouquet, random_signed_graph
from ribbon_core import InvalidGraphError, ParseError, RibbonGraph, euler_genus


def _matrix(*rows: str) -> Gf2Matrix:
    """Rows written left to right as '0110'."""
    return Gf2Matrix.from_array([[int(c) for c in row] for row in rows])


def test_bouquet_requires_one_vertex() -> None:
    with pytest.raises(InvalidGraphError):
        Bouquet(rotations=((1,), (1,)))


def test_from_graph_keeps_the_word() -> None:
    B = Bouquet.from_graph(RibbonGraph(rotations=((1, 2, -1, 2),)))
    assert B.word == (1, 2, -1, 2)
    assert B.twisted == frozenset({1})


def test_parse_chord_diagram() -> None:
    B = parse_chord_diagram("# torus\n1 2 -1 2\n")
    assert B.word == (1, 2, -1, 2)
    assert serialize_chord_diagram(B) == "1 2 -1 2"


@pytest.mark.parametrize("text", ["1 2 x 2", "1 2 1", "1 1\n2 2", "0 0"])
def test_parse_chord_diagram_errors(text: str) -> None:
    with pytest.raises(ParseError):
        parse_chord_diagram(text)


def test_is_rotation_of() -> None:
    B = Bouquet.from_word((1, 2, -1, 3, 2, 3))
    assert B.is_rotation_of(Bouquet.from_word((3, 2, 3, 1, 2, -1)))
    assert not B.is_rotation_of(Bouquet.from_word((1, 2, 1, 3, 2, 3)))


def test_join_relabels_and_concatenates() -> None:
    joined = join(Bouquet.from_word((1, 1)), Bouquet.from_word((1, -1)))
    assert joined.word == (1, 1, 2, -2)


def test_join_intersection_graph_is_the_disjoint_union(rng: np.random.Generator) -> None:
    for _ in range(30):
        B1 = random_bouquet(int(rng.integers(0, 6)), rng)
        B2 = random_bouquet(int(rng.integers(0, 6)), rng)
        offset = B1.edge_count
        I1, I2 = intersection_graph(B1), intersection_graph(B2)
        union = SignedGraph(
            vertices=I1.vertices + tuple(v + offset for v in I2.vertices),
            edges=I1.edges | frozenset((a + offset, b + offset) for a, b in I2.edges),
        )
        assert intersection_graph(join(B1, B2)) == union


@pytest.mark.parametrize(
    "word, edges",
    [
        ((1, 2, 3, 1, 2, 3), {(1, 2), (1, 3), (2, 3)}),
        ((1, 1, 2, 2), set()),
        ((1, 2, 2, 1), set()),
        ((1, 2, 1, 2), {(1, 2)}),
        ((1, 3, 2, 1, 3, 2), {(1, 3), (2, 3), (1, 2)}),
    ],
)
def test_intersection_graph(word, edges) -> None:
    assert intersection_graph(Bouquet.from_word(word)).edges == frozenset(edges)


def test_intersection_graph_ignores_framing_and_reflection(rng: np.random.Generator) -> None:
    for _ in range(25):
        B = random_bouquet(6, rng)
        plain = Bouquet.from_word(abs(x) for x in B.word)
        assert intersection_graph(B) == intersection_graph(plain)
        assert intersection_graph(B.reflect()) == intersection_graph(B)


def test_signed_intersection_graph_marks_twisted_loops() -> None:
    SI = signed_intersection_graph(Bouquet.from_word((1, -1, 2, 3, 2, -3)))
    assert SI.negative == frozenset({1, 3})
    assert SI.edges == frozenset({(2, 3)})


def test_parse_signed_graph_round_trip() -> None:
    text = "signs: + - +\nedges: 1-2, 2-3, 1-3"
    S = parse_signed_graph(text)
    assert S.negative == frozenset({2})
    assert S.neighbours(1) == frozenset({2, 3})
    assert parse_signed_graph(serialize_signed_graph(S)) == S


@pytest.mark.parametrize(
    "text, line",
    [
        ("signs: + x", 1),
        ("signs: + +\nedges: 1-3", 2),
        ("signs: + +\nedges: 1-1", 2),
        ("signs: + +\nedges: 1-2, 2-1", 2),
        ("signs: +\nsigns: +", 2),
        ("colours: red", 1),
    ],
)
def test_parse_signed_graph_errors(text: str, line: int) -> None:
    with pytest.raises(ParseError) as excinfo:
        parse_signed_graph(text)
    assert excinfo.value.line == line


def test_signed_graph_rejects_loops_and_unknown_vertices() -> None:
    with pytest.raises(InvalidGraphError):
        SignedGraph(vertices=(1, 2), edges=frozenset({(1, 1)}))
    with pytest.raises(InvalidGraphError):
        SignedGraph(vertices=(1, 2), edges=frozenset({(1, 3)}))


def test_adjacency_matrix_round_trips_through_signed_graph(rng: np.random.Generator) -> None:
    for _ in range(20):
        S = random_signed_graph(6, rng)
        M = adjacency_gf2(S)
        assert M.is_symmetric()
        assert M.diagonal_mask() == M.mask_of(S.negative)
        assert SignedGraph.from_matrix(M) == S


def test_from_matrix_rejects_asymmetric_input() -> None:
    with pytest.raises(InvalidGraphError):
        SignedGraph.from_matrix(_matrix("01", "00"))


@pytest.mark.parametrize(
    "rows, rank",
    [
        (("100", "010", "001"), 3),
        (("111", "111", "111"), 1),
        (("000", "000", "000"), 0),
        (("110", "011", "101"), 2),
        (("11", "10"), 2),
        ((), 0),
    ],
)
def test_gf2_rank(rows, rank: int) -> None:
    M = _matrix(*rows) if rows else Gf2Matrix(rows=(), labels=())
    assert gf2_rank(M) == rank


def test_gf2_rank_batch_matches_scalar_rank(rng: np.random.Generator) -> None:
    n = 7
    rows = rng.integers(0, 1 << n, size=(200, n)).astype(np.uint64)
    expected = [gf2_rank(Gf2Matrix(rows=tuple(int(r) for r in batch), labels=tuple(range(n)))) for batch in rows]
    assert gf2_rank_batch(rows).tolist() == expected


def test_gf2_rank_ignores_transpose_and_relabelling(rng: np.random.Generator) -> None:
    for _ in range(50):
        n = int(rng.integers(1, 10))
        M = Gf2Matrix.from_array(rng.integers(0, 2, size=(n, n)))
        rank = gf2_rank(M)
        assert gf2_rank(M.transpose()) == rank
        assert gf2_rank(M.permuted(rng.permutation(n).tolist())) == rank


def test_with_diagonal_and_off_diagonal() -> None:
    M = _matrix("11", "10")
    assert M.with_diagonal(0b11) == _matrix("01", "11")
    assert M.off_diagonal() == _matrix("01", "10")


def test_diagonal_rank_profile_of_the_torus() -> None:
    profile = diagonal_rank_profile(_matrix("01", "10"))
    assert profile.even == (0, 1, 1)
    assert profile.odd == (0, 0, 2)
    assert profile.total == (0, 1, 3)
    assert profile.alternating == (0, 1, -1)


def test_diagonal_rank_profile_batches_agree(rng: np.random.Generator) -> None:
    S = random_signed_graph(8, rng)
    M = adjacency_gf2(S)
    assert diagonal_rank_profile(M, batch_size=7) == diagonal_rank_profile(M)
    assert sum(diagonal_rank_profile(M).total) == 1 << 8


def test_diagonal_rank_profile_of_the_empty_matrix() -> None:
    profile = diagonal_rank_profile(Gf2Matrix(rows=(), labels=()))
    assert profile.total == (1,)


@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_genus_equals_rank_for_every_small_bouquet(m: int) -> None:
    for B in all_bouquets(m):
        assert euler_genus(B) == genus_via_rank(B), serialize_chord_diagram(B)


def test_genus_equals_rank_on_random_bouquets(rng: np.random.Generator) -> None:
    for _ in range(40):
        B = random_bouquet(int(rng.integers(5, 12)), rng)
        assert euler_genus(B) == genus_via_rank(B)
