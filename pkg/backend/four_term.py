"""
Four-term relations.

Chord-diagram side: for adjacent chords a, b of a bouquet B,

    B′_{a,b}   exchange the two adjacent endpoints;
    B̃_{a,b}   slide the adjacent endpoint of a along b to b's other end.

Signed-graph side: S′_{a,b} toggles the edge ab; S̃_{a,b} is defined by its
adjacency matrix, adj(S) with row and column b added into row and column a.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from bouquet_algebra import (
    Bouquet,
    Gf2Matrix,
    SignedGraph,
    adjacency_gf2,
)
from petrial_poly import (
    ZERO,
    GenusPolynomial,
    bouquet_rank_poly,
    modified_poly_bouquet,
    modified_poly_signed_graph,
)
from ribbon_core import InvalidGraphError, RibbonGraphError

log = logging.getLogger(__name__)

PolyFn = Callable[[Bouquet], GenusPolynomial]


class NotAdjacentError(RibbonGraphError):
    pass


@dataclass(frozen=True)
class ChordPair:
    """
    Adjacent chords a, b with their witness: word[position] and
    word[position + 1] (cyclically) are one endpoint of each; `a_first`
    tells which comes first.
    """
    a: int
    b: int
    position: int
    a_first: bool


def _require_chords(B: Bouquet, a: int, b: int) -> None:
    if a == b:
        raise InvalidGraphError("chords a and b must be distinct")
    for label in (a, b):
        if label not in B.labels:
            raise InvalidGraphError(f"chord {label} is not in the diagram")


def adjacent_witnesses(B: Bouquet, a: int, b: int) -> List[ChordPair]:
    """Every position where an endpoint of a and an endpoint of b are neighbours."""
    _require_chords(B, a, b)
    word = B.word
    size = len(word)
    found = []
    for p in range(size):
        pair = (abs(word[p]), abs(word[(p + 1) % size]))
        if pair == (a, b):
            found.append(ChordPair(a, b, p, True))
        elif pair == (b, a):
            found.append(ChordPair(a, b, p, False))
    return found


def chords_adjacent(B: Bouquet, a: int, b: int) -> Tuple[bool, Optional[ChordPair]]:
    """(True, leftmost witness) when a and b are adjacent, else (False, None)."""
    witnesses = adjacent_witnesses(B, a, b)
    return (True, witnesses[0]) if witnesses else (False, None)


def _witness(B: Bouquet, a: int, b: int, witness: Optional[ChordPair]) -> ChordPair:
    if witness is None:
        ok, witness = chords_adjacent(B, a, b)
        if not ok:
            raise NotAdjacentError(f"chords {a} and {b} are not adjacent")
        return witness
    if witness not in adjacent_witnesses(B, a, b):
        raise NotAdjacentError(f"{witness} is not an adjacency of chords {a} and {b}")
    return witness


# ---------------------- Chord-diagram transforms ----------------------

def _exchange(word: Tuple[int, ...], w: ChordPair) -> Tuple[Tuple[int, ...], ChordPair]:
    out = list(word)
    p, q = w.position, (w.position + 1) % len(word)
    out[p], out[q] = out[q], out[p]
    return tuple(out), ChordPair(w.a, w.b, w.position, not w.a_first)


def _slide(word: Tuple[int, ...], w: ChordPair) -> Tuple[Tuple[int, ...], ChordPair]:
    """
    Move the witnessed endpoint of a to b's other endpoint.

    Crossing an untwisted ribbon swaps sides: an endpoint just before b's near
    end lands just after its far end and vice versa. Crossing a twisted ribbon
    keeps the side and negates the sign of the moved endpoint.
    """
    size = len(word)
    p, q = w.position, (w.position + 1) % size
    a_pos, b_near = (p, q) if w.a_first else (q, p)
    b_far = next(i for i, x in enumerate(word) if abs(x) == w.b and i != b_near)
    b_twisted = (word[b_near] > 0) != (word[b_far] > 0)

    moved = -word[a_pos] if b_twisted else word[a_pos]
    rest = list(word[:a_pos] + word[a_pos + 1:])
    far = b_far if b_far < a_pos else b_far - 1

    land_after = w.a_first != b_twisted
    if land_after:
        rest.insert(far + 1, moved)
        return tuple(rest), ChordPair(w.a, w.b, far, False)
    rest.insert(far, moved)
    return tuple(rest), ChordPair(w.a, w.b, far, True)


def exchange_transform(B: Bouquet, a: int, b: int, witness: Optional[ChordPair] = None) -> Bouquet:
    """B′_{a,b}."""
    word, _ = _exchange(B.word, _witness(B, a, b, witness))
    return Bouquet.from_word(word)


def slide_transform(B: Bouquet, a: int, b: int, witness: Optional[ChordPair] = None) -> Bouquet:
    """B̃_{a,b}."""
    word, _ = _slide(B.word, _witness(B, a, b, witness))
    return Bouquet.from_word(word)


def tilde_prime_transform(
    B: Bouquet, a: int, b: int, witness: Optional[ChordPair] = None, slide_first: bool = True
) -> Bouquet:
    """B̃′_{a,b}: slide then exchange, or exchange then slide (the two agree up to rotation)."""
    w = _witness(B, a, b, witness)
    if slide_first:
        word, w = _slide(B.word, w)
        word, _ = _exchange(word, w)
    else:
        word, w = _exchange(B.word, w)
        word, _ = _slide(word, w)
    return Bouquet.from_word(word)


# ---------------------- Signed-graph transforms ----------------------

def prime_matrix(M: Gf2Matrix, a: int, b: int) -> Gf2Matrix:
    """adj(S′_{a,b}): add one to entries (a, b) and (b, a)."""
    i, j = M.index(a), M.index(b)
    rows = list(M.rows)
    rows[i] ^= 1 << j
    rows[j] ^= 1 << i
    return Gf2Matrix(rows=tuple(rows), labels=M.labels)


def tilde_matrix(M: Gf2Matrix, a: int, b: int) -> Gf2Matrix:
    """adj(S̃_{a,b}): add row b into row a, then column b into column a."""
    i, j = M.index(a), M.index(b)
    rows = list(M.rows)
    rows[i] ^= rows[j]
    rows = [r ^ (((r >> j) & 1) << i) for r in rows]
    return Gf2Matrix(rows=tuple(rows), labels=M.labels)


def _require_pair(S: SignedGraph, a: int, b: int) -> None:
    if a == b:
        raise InvalidGraphError("vertices a and b must be distinct")
    S.require_vertex(a)
    S.require_vertex(b)


def graph_prime_transform(S: SignedGraph, a: int, b: int) -> SignedGraph:
    """S′_{a,b}: toggle the edge ab, signs unchanged."""
    _require_pair(S, a, b)
    return SignedGraph.from_matrix(prime_matrix(adjacency_gf2(S), a, b))


def graph_tilde_transform(S: SignedGraph, a: int, b: int) -> SignedGraph:
    """
    S̃_{a,b}: toggle ac for every c in N(b)∖{a}; if b is negative, also
    toggle ab and flip the sign of a.
    """
    _require_pair(S, a, b)
    return SignedGraph.from_matrix(tilde_matrix(adjacency_gf2(S), a, b))


def graph_tilde_prime_transform(S: SignedGraph, a: int, b: int) -> SignedGraph:
    return graph_tilde_transform(graph_prime_transform(S, a, b), a, b)


# ---------------------- Four-term checkers ----------------------

def _chord_quadruple(B: Bouquet, w: ChordPair) -> Tuple[Bouquet, Bouquet, Bouquet]:
    """(B̃, B̃′, B′) at the witness w."""
    return (
        slide_transform(B, w.a, w.b, w),
        tilde_prime_transform(B, w.a, w.b, w),
        exchange_transform(B, w.a, w.b, w),
    )


def _first_nonzero(residuals: List[GenusPolynomial]) -> GenusPolynomial:
    return next((r for r in residuals if not r.is_zero()), ZERO)


def check_four_term_chord(
    B: Bouquet,
    a: int,
    b: int,
    witness: Optional[ChordPair] = None,
    all_witnesses: bool = False,
    poly: PolyFn = bouquet_rank_poly,
) -> GenusPolynomial:
    """
    Residual P(B) − P(B̃) − P(B̃′) + P(B′) of the partial Petrial polynomial.

    With `all_witnesses` every adjacency of a and b is tried and the first
    nonzero residual is returned.
    """
    if all_witnesses:
        _require_chords(B, a, b)
        witnesses = adjacent_witnesses(B, a, b)
        if not witnesses:
            raise NotAdjacentError(f"chords {a} and {b} are not adjacent")
    else:
        witnesses = [_witness(B, a, b, witness)]

    residuals = []
    for w in witnesses:
        tilde, tilde_prime, prime = _chord_quadruple(B, w)
        residuals.append(poly(B) - poly(tilde) - poly(tilde_prime) + poly(prime))
    return _first_nonzero(residuals)


def _modified_by_genus(B: Bouquet) -> GenusPolynomial:
    return modified_poly_bouquet(B, "genus")


def check_four_term_modified_bouquet(
    B: Bouquet,
    a: int,
    b: int,
    witness: Optional[ChordPair] = None,
    all_witnesses: bool = False,
    poly: PolyFn = _modified_by_genus,
) -> GenusPolynomial:
    """
    Residual M(B) − M(B̃) + M(B̃′) − M(B′) of the modified polynomial, by
    default traced partial Petrial by partial Petrial. Passing the signed
    intersection graph form as `poly` gives the graph four-term relation.
    """
    if all_witnesses:
        _require_chords(B, a, b)
        witnesses = adjacent_witnesses(B, a, b)
        if not witnesses:
            raise NotAdjacentError(f"chords {a} and {b} are not adjacent")
    else:
        witnesses = [_witness(B, a, b, witness)]

    residuals = []
    for w in witnesses:
        tilde, tilde_prime, prime = _chord_quadruple(B, w)
        residuals.append(poly(B) - poly(tilde) + poly(tilde_prime) - poly(prime))
    return _first_nonzero(residuals)


def check_four_term_signed_graph(S: SignedGraph, a: int, b: int) -> GenusPolynomial:
    """Residual g(S) − g(S̃) + g(S̃′) − g(S′) with g the modified polynomial."""
    _require_pair(S, a, b)
    g = modified_poly_signed_graph
    return (
        g(S)
        - g(graph_tilde_transform(S, a, b))
        + g(graph_tilde_prime_transform(S, a, b))
        - g(graph_prime_transform(S, a, b))
    )
