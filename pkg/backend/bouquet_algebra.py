"""
Bouquets as framed chord diagrams, their (signed) intersection graphs and the
GF(2) linear algebra behind the genus-equals-rank identity.

Chord-diagram text format: one line of 2m signed integers, e.g. "1 2 -1 2".
Signed-graph text format:

    signs: + - +
    edges: 1-2, 2-3
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ribbon_core import (
    InvalidGraphError,
    ParseError,
    RibbonGraph,
    check_label_cover,
)

log = logging.getLogger(__name__)

DEFAULT_BATCH = 1 << 16
MAX_PACKED_SIZE = 63


# ---------------------- Bouquets ----------------------

@dataclass(frozen=True)
class Bouquet(RibbonGraph):
    """One-vertex ribbon graph; `word` is its single signed rotation."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.vertex_count != 1:
            raise InvalidGraphError(f"a bouquet has one vertex, got {self.vertex_count}")

    @classmethod
    def from_word(cls, word: Iterable[int]) -> "Bouquet":
        return cls(rotations=(tuple(word),))

    @classmethod
    def from_graph(cls, G: RibbonGraph) -> "Bouquet":
        return cls(rotations=G.rotations)

    @property
    def word(self) -> Tuple[int, ...]:
        return self.rotations[0]

    def chord_positions(self) -> Dict[int, Tuple[int, int]]:
        return {label: (first[1], second[1]) for label, (first, second) in self._where.items()}

    def is_rotation_of(self, other: "Bouquet") -> bool:
        """Cyclic equality of the signed words."""
        mine, theirs = self.word, other.word
        if len(mine) != len(theirs):
            return False
        if not mine:
            return True
        return any(mine[k:] + mine[:k] == theirs for k in range(len(mine)))

    def reflect(self) -> "Bouquet":
        return Bouquet.from_word(reversed(self.word))


def parse_chord_diagram(text: str) -> Bouquet:
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((line_no, line))
    if len(lines) != 1:
        raise ParseError(f"a chord diagram is a single line of signed integers, found {len(lines)} lines")

    line_no, line = lines[0]
    word = []
    for token in line.replace(",", " ").split():
        try:
            value = int(token)
        except ValueError:
            raise ParseError(f"bad chord endpoint {token!r}", line_no) from None
        if value == 0:
            raise ParseError("chord endpoint 0 is not allowed", line_no)
        word.append(value)

    check_label_cover([(line_no, word)])
    return Bouquet.from_word(word)


def serialize_chord_diagram(B: Bouquet) -> str:
    return " ".join(str(x) for x in B.word)


def join(B1: Bouquet, B2: Bouquet) -> Bouquet:
    """
    B1 ∨ B2: concatenate the two words, relabelling B2 above the labels of B1.

    The merge arc sits between the end and the start of each word.
    """
    offset = max(B1.labels, default=0)
    shifted = tuple(x + offset if x > 0 else x - offset for x in B2.word)
    return Bouquet.from_word(B1.word + shifted)


# ---------------------- Signed graphs ----------------------

@dataclass(frozen=True)
class SignedGraph:
    """Simple graph with a sign per vertex; `negative` holds the − vertices."""
    vertices: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int]]
    negative: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        vertices = tuple(int(v) for v in self.vertices)
        if len(set(vertices)) != len(vertices):
            raise InvalidGraphError("duplicate vertex in signed graph")
        known = set(vertices)

        edges = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise InvalidGraphError(f"loop at vertex {a} (signed graphs are simple)")
            if a not in known or b not in known:
                raise InvalidGraphError(f"edge {a}-{b} uses an unknown vertex")
            edges.add((min(a, b), max(a, b)))

        negative = frozenset(int(v) for v in self.negative)
        if not negative <= known:
            raise InvalidGraphError("sign given for an unknown vertex")

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "negative", negative)

    @property
    def order(self) -> int:
        return len(self.vertices)

    def require_vertex(self, v: int) -> None:
        if v not in self.vertices:
            raise InvalidGraphError(f"vertex {v} is not in the graph")

    def sign(self, v: int) -> int:
        self.require_vertex(v)
        return -1 if v in self.negative else 1

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbours(self, v: int) -> FrozenSet[int]:
        self.require_vertex(v)
        return frozenset(b if a == v else a for a, b in self.edges if v in (a, b))

    @classmethod
    def from_matrix(cls, M: "Gf2Matrix") -> "SignedGraph":
        """Off-diagonal ones are edges, diagonal ones are − signs."""
        if not M.is_symmetric():
            raise InvalidGraphError("only a symmetric matrix describes a signed graph")
        n = M.size
        edges = {
            (M.labels[i], M.labels[j])
            for i in range(n) for j in range(i + 1, n) if M.entry(i, j)
        }
        negative = {M.labels[i] for i in range(n) if M.entry(i, i)}
        return cls(vertices=M.labels, edges=frozenset(edges), negative=frozenset(negative))


def parse_signed_graph(text: str) -> SignedGraph:
    signs: Optional[List[str]] = None
    edge_tokens: List[Tuple[int, str]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, body = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("signs", "edges"):
            raise ParseError(f"expected 'signs:' or 'edges:', got {line!r}", line_no)
        if key == "signs":
            if signs is not None:
                raise ParseError("'signs:' given twice", line_no)
            signs = body.split()
            for s in signs:
                if s not in ("+", "-"):
                    raise ParseError(f"bad sign {s!r} (expected + or -)", line_no)
        else:
            edge_tokens += [(line_no, tok) for tok in body.replace(",", " ").split()]

    if signs is None:
        raise ParseError("missing 'signs:' line")

    n = len(signs)
    edges = set()
    for line_no, tok in edge_tokens:
        left, dash, right = tok.partition("-")
        if not dash or not left.isdigit() or not right.isdigit():
            raise ParseError(f"bad edge {tok!r} (expected a-b)", line_no)
        a, b = int(left), int(right)
        if not (1 <= a <= n and 1 <= b <= n):
            raise ParseError(f"edge {tok} uses a vertex outside 1..{n}", line_no)
        if a == b:
            raise ParseError(f"edge {tok} is a loop", line_no)
        pair = (min(a, b), max(a, b))
        if pair in edges:
            raise ParseError(f"edge {tok} listed twice", line_no)
        edges.add(pair)

    negative = {k for k, s in enumerate(signs, start=1) if s == "-"}
    return SignedGraph(vertices=tuple(range(1, n + 1)), edges=frozenset(edges), negative=frozenset(negative))


def serialize_signed_graph(S: SignedGraph) -> str:
    signs = " ".join("-" if v in S.negative else "+" for v in S.vertices)
    edges = ", ".join(f"{a}-{b}" for a, b in sorted(S.edges))
    return f"signs: {signs}\nedges: {edges}"


# ---------------------- Intersection graphs ----------------------

def interlaced(p: Tuple[int, int], q: Tuple[int, int]) -> bool:
    """Chords with endpoint positions p and q alternate around the circle."""
    lo, hi = p
    return (lo < q[0] < hi) != (lo < q[1] < hi)


def intersection_graph(B: Bouquet) -> SignedGraph:
    """I(B): one vertex per loop, an edge per interlaced pair, all signs +."""
    positions = B.chord_positions()
    labels = B.labels
    edges = {
        (a, b)
        for i, a in enumerate(labels)
        for b in labels[i + 1:]
        if interlaced(positions[a], positions[b])
    }
    return SignedGraph(vertices=labels, edges=frozenset(edges))


def signed_intersection_graph(B: Bouquet) -> SignedGraph:
    """SI(B): I(B) with sign − on the twisted loops."""
    plain = intersection_graph(B)
    return SignedGraph(vertices=plain.vertices, edges=plain.edges, negative=B.twisted)


# ---------------------- GF(2) matrices ----------------------

@dataclass(frozen=True)
class Gf2Matrix:
    """
    Square bit matrix. Bit j of rows[i] is entry (i, j); `labels` names the
    vertex behind each row and column so diagonal sets line up across modules.
    """
    rows: Tuple[int, ...]
    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if len(self.rows) != len(self.labels):
            raise InvalidGraphError("matrix needs one label per row")
        limit = 1 << len(self.rows)
        if any(r < 0 or r >= limit for r in self.rows):
            raise InvalidGraphError("matrix row has bits outside the square")

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidGraphError(f"vertex {label} is not in the matrix") from None

    def mask_of(self, labels: Iterable[int]) -> int:
        return sum(1 << self.index(v) for v in labels)

    def transpose(self) -> "Gf2Matrix":
        n = self.size
        rows = [sum(self.entry(j, i) << j for j in range(n)) for i in range(n)]
        return Gf2Matrix(rows=tuple(rows), labels=self.labels)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def diagonal_mask(self) -> int:
        return sum(self.entry(i, i) << i for i in range(self.size))

    def with_diagonal(self, mask: int) -> "Gf2Matrix":
        """self + D_mask over GF(2)."""
        rows = tuple(r ^ (((mask >> i) & 1) << i) for i, r in enumerate(self.rows))
        return Gf2Matrix(rows=rows, labels=self.labels)

    def off_diagonal(self) -> "Gf2Matrix":
        return self.with_diagonal(self.diagonal_mask())

    def permuted(self, order: Sequence[int]) -> "Gf2Matrix":
        """Simultaneous row/column permutation: new index k is old index order[k]."""
        rows = [
            sum(self.entry(old_i, old_j) << k for k, old_j in enumerate(order))
            for old_i in order
        ]
        return Gf2Matrix(rows=tuple(rows), labels=tuple(self.labels[i] for i in order))

    def to_array(self) -> np.ndarray:
        n = self.size
        return np.array([[self.entry(i, j) for j in range(n)] for i in range(n)], dtype=np.uint8)

    @classmethod
    def from_array(cls, arr, labels: Optional[Sequence[int]] = None) -> "Gf2Matrix":
        arr = np.asarray(arr, dtype=np.uint8) % 2
        n = arr.shape[0]
        if arr.shape != (n, n):
            raise InvalidGraphError(f"square matrix expected, got shape {arr.shape}")
        rows = tuple(sum(int(arr[i, j]) << j for j in range(n)) for i in range(n))
        return cls(rows=rows, labels=tuple(labels) if labels is not None else tuple(range(1, n + 1)))


def adjacency_gf2(S: SignedGraph) -> Gf2Matrix:
    """adj(S): off-diagonal 1 per edge, diagonal 1 per − vertex."""
    pos = {v: i for i, v in enumerate(S.vertices)}
    rows = [0] * S.order
    for a, b in S.edges:
        i, j = pos[a], pos[b]
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    for v in S.negative:
        rows[pos[v]] |= 1 << pos[v]
    return Gf2Matrix(rows=tuple(rows), labels=S.vertices)


def gf2_rank(M: Gf2Matrix) -> int:
    """Rank over GF(2) by forward elimination on int-packed rows."""
    work = list(M.rows)
    rank = 0
    for col in range(M.size):
        bit = 1 << col
        pivot = next((r for r in range(rank, len(work)) if work[r] & bit), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(rank + 1, len(work)):
            if work[r] & bit:
                work[r] ^= work[rank]
        rank += 1
    return rank


def gf2_rank_batch(rows: np.ndarray, n_cols: Optional[int] = None) -> np.ndarray:
    """
    Ranks of many bit matrices at once.

    `rows` has shape (batch, n) with uint64 packed rows. Each column step XORs
    the pivot row into every row holding that bit, pivot included, so a used
    pivot drops out of later steps as a zero row.
    """
    work = np.array(rows, dtype=np.uint64, copy=True)
    if work.ndim != 2:
        raise ValueError(f"expected a (batch, n) array, got shape {work.shape}")
    batch, n = work.shape
    if n_cols is None:
        n_cols = n

    rank = np.zeros(batch, dtype=np.int64)
    picks = np.arange(batch)
    zero = np.uint64(0)
    for col in range(n_cols):
        bit = np.uint64(1) << np.uint64(col)
        has = (work & bit) != zero
        pivot = has.argmax(axis=1)
        found = has[picks, pivot]
        pivot_rows = np.where(found, work[picks, pivot], zero)
        work ^= np.where(has, pivot_rows[:, None], zero)
        rank += found
    return rank


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.int64)


@dataclass(frozen=True)
class RankProfile:
    """
    Histogram of rank(M + D_Y) over every diagonal subset Y, split by the
    parity of |Y|: even[r] (resp. odd[r]) counts the even (odd) Y of rank r.
    """
    even: Tuple[int, ...]
    odd: Tuple[int, ...]

    @property
    def total(self) -> Tuple[int, ...]:
        return tuple(e + o for e, o in zip(self.even, self.odd))

    @property
    def alternating(self) -> Tuple[int, ...]:
        return tuple(e - o for e, o in zip(self.even, self.odd))


def diagonal_rank_profile(M: Gf2Matrix, batch_size: int = DEFAULT_BATCH) -> RankProfile:
    """Sweep all 2^n diagonal additions D_Y of M in ascending bitmask order."""
    if M.size > MAX_PACKED_SIZE:
        raise InvalidGraphError(f"matrix of size {M.size} exceeds the packed limit {MAX_PACKED_SIZE}")
    return _profile_for_rows(M.rows, batch_size)


@lru_cache(maxsize=4096)
def _profile_for_rows(rows: Tuple[int, ...], batch_size: int) -> RankProfile:
    n = len(rows)
    even = np.zeros(n + 1, dtype=np.int64)
    odd = np.zeros(n + 1, dtype=np.int64)
    if n == 0:
        even[0] = 1
        return RankProfile(even=tuple(int(x) for x in even), odd=tuple(int(x) for x in odd))

    base = np.array(rows, dtype=np.uint64)
    total = 1 << n
    one = np.uint64(1)
    for start in range(0, total, batch_size):
        ys = np.arange(start, min(start + batch_size, total), dtype=np.uint64)
        work = np.repeat(base[None, :], len(ys), axis=0)
        for i in range(n):
            shift = np.uint64(i)
            work[:, i] ^= ((ys >> shift) & one) << shift
        ranks = gf2_rank_batch(work)
        parity = _parity(ys)
        even += np.bincount(ranks[parity == 0], minlength=n + 1)[: n + 1]
        odd += np.bincount(ranks[parity == 1], minlength=n + 1)[: n + 1]

    return RankProfile(even=tuple(int(x) for x in even), odd=tuple(int(x) for x in odd))


# ---------------------- Genus via rank ----------------------

def genus_via_rank(B: Bouquet) -> int:
    """ε(B) = rank(adj(SI(B))) over GF(2)."""
    return gf2_rank(adjacency_gf2(signed_intersection_graph(B)))
