"""
Ribbon graphs as signed rotation systems.

Every vertex carries a cyclic rotation of half-edge occurrences. An occurrence
is a nonzero integer: its absolute value is the edge label, its sign is the
half-edge sign. An edge is twisted iff its two occurrences carry opposite signs.

Text format (one record per vertex, named v1..vn in order, records separated
by newlines or " / "):

    v1: 1 8 12
    v2: 9 4 2 3 8   # comments start with '#'

Signs default to + when omitted; the parenthesised form "v1: (1,8,12)" is accepted too.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

import networkx as nx

log = logging.getLogger(__name__)

Rotation = Tuple[int, ...]
EdgeSet = FrozenSet[int]

_RECORD = re.compile(r"^\s*(v\d+)\s*:(.*)$")
_TOKEN = re.compile(r"^[+-]?\d+$")


# ---------------------- Errors ----------------------

class RibbonGraphError(ValueError):
    """Base class for every input or precondition failure in this package."""


class ParseError(RibbonGraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvalidGraphError(RibbonGraphError):
    pass


class DisconnectedGraphError(RibbonGraphError):
    pass


class CapExceededError(RibbonGraphError):
    pass


# ---------------------- Data model ----------------------

@dataclass(frozen=True)
class RibbonGraph:
    """
    Immutable signed rotation system.

    `rotations[k]` is the cyclic rotation of vertex v(k+1), stored starting
    from its first listed occurrence.
    """
    rotations: Tuple[Rotation, ...]
    _where: Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        rotations = tuple(tuple(int(x) for x in rot) for rot in self.rotations)
        object.__setattr__(self, "rotations", rotations)
        object.__setattr__(self, "_where", _index_occurrences(rotations))

    # -- shape --

    @property
    def vertex_count(self) -> int:
        return len(self.rotations)

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(sorted(self._where))

    @property
    def edge_count(self) -> int:
        return len(self._where)

    def occurrences(self, label: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """(vertex, position) of both occurrences of `label`, in scan order."""
        try:
            return self._where[label]
        except KeyError:
            raise InvalidGraphError(f"edge {label} is not in the graph") from None

    def endpoints(self, label: int) -> Tuple[int, int]:
        first, second = self.occurrences(label)
        return first[0], second[0]

    def is_loop(self, label: int) -> bool:
        u, v = self.endpoints(label)
        return u == v

    def is_twisted(self, label: int) -> bool:
        (v1, p1), (v2, p2) = self.occurrences(label)
        return (self.rotations[v1][p1] > 0) != (self.rotations[v2][p2] > 0)

    @property
    def twisted(self) -> EdgeSet:
        return frozenset(lbl for lbl in self._where if self.is_twisted(lbl))

    def __str__(self) -> str:
        return serialize(self)


def _index_occurrences(rotations: Tuple[Rotation, ...]) -> Dict[int, Tuple[Tuple[int, int], Tuple[int, int]]]:
    if not rotations:
        raise InvalidGraphError("a ribbon graph needs at least one vertex")

    seen: Dict[int, List[Tuple[int, int]]] = {}
    for v, rot in enumerate(rotations):
        if not rot and len(rotations) > 1:
            raise InvalidGraphError(f"vertex v{v + 1} has an empty rotation")
        for pos, occ in enumerate(rot):
            if occ == 0:
                raise InvalidGraphError(f"vertex v{v + 1} contains the label 0")
            seen.setdefault(abs(occ), []).append((v, pos))

    where = {}
    for label, places in seen.items():
        if len(places) != 2:
            raise InvalidGraphError(f"edge {label} appears {len(places)} times (expected 2)")
        where[label] = (places[0], places[1])
    return where


def edge_set(labels: Iterable[int]) -> EdgeSet:
    return frozenset(int(x) for x in labels)


# ---------------------- Text format ----------------------

def parse(text: str) -> RibbonGraph:
    """Parse the rotation-system text format. Every failure names its line."""
    records: List[Tuple[int, str, List[int]]] = []
    names = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for chunk in line.split("/"):
            chunk = chunk.strip()
            if not chunk:
                continue
            m = _RECORD.match(chunk)
            if not m:
                raise ParseError(f"expected 'v<k>: s1 s2 ...', got {chunk!r}", line_no)
            name, body = m.group(1), m.group(2)
            if name in names:
                raise ParseError(f"vertex {name} listed twice", line_no)
            expected = f"v{len(records) + 1}"
            if name != expected:
                raise ParseError(f"vertices must be named v1..vn in order: expected {expected}, got {name}", line_no)
            names.add(name)
            body = body.replace("(", " ").replace(")", " ").replace(",", " ")
            occs = []
            for token in body.split():
                if not _TOKEN.match(token) or int(token) == 0:
                    raise ParseError(f"bad half-edge {token!r} (nonzero signed integer expected)", line_no)
                occs.append(int(token))
            records.append((line_no, name, occs))

    if not records:
        raise ParseError("no vertex records found")
    if len(records) > 1:
        for line_no, name, occs in records:
            if not occs:
                raise ParseError(f"vertex {name} has an empty rotation", line_no)

    check_label_cover([(line_no, occs) for line_no, _, occs in records])
    try:
        return RibbonGraph(rotations=tuple(tuple(occs) for _, _, occs in records))
    except InvalidGraphError as exc:
        raise ParseError(str(exc), records[0][0]) from exc


def check_label_cover(lines: List[Tuple[int, List[int]]]) -> None:
    """Labels must cover 1..m, each exactly twice."""
    counts: Dict[int, int] = {}
    last_line: Dict[int, int] = {}
    for line_no, occs in lines:
        for occ in occs:
            counts[abs(occ)] = counts.get(abs(occ), 0) + 1
            last_line[abs(occ)] = line_no

    m = len(counts)
    for label in sorted(counts):
        if label > m:
            raise ParseError(f"label {label} is outside 1..{m}", last_line[label])
        if counts[label] != 2:
            raise ParseError(f"label {label} appears {counts[label]} times (expected 2)", last_line[label])


def serialize(G: RibbonGraph) -> str:
    return "\n".join(
        f"v{k}:" + "".join(f" {occ}" for occ in rot)
        for k, rot in enumerate(G.rotations, start=1)
    )


# ---------------------- Boundary tracing ----------------------

class FaceTracer:
    """
    Boundary-component counter for a fixed rotation system.

    Each occurrence i has two sides: L (towards the previous corner of its
    vertex) and R (towards the next one). A corner joins (i, R) to (next(i), L).
    An untwisted ribbon joins L to R across its two ends; a twisted ribbon
    joins L to L and R to R. Boundary curves are the cycles of these links.

    The twist status is an input so that every partial Petrial of the same
    rotation system can be traced without rebuilding anything.
    """

    def __init__(self, G: RibbonGraph):
        self.labels: Tuple[int, ...] = G.labels
        self.bit = {label: k for k, label in enumerate(self.labels)}
        self.empty_vertices = sum(1 for rot in G.rotations if not rot)

        flat: List[int] = []
        nxt: List[int] = []
        prv: List[int] = []
        for rot in G.rotations:
            base = len(flat)
            size = len(rot)
            for pos, occ in enumerate(rot):
                flat.append(occ)
                nxt.append(base + (pos + 1) % size)
                prv.append(base + (pos - 1) % size)

        first: Dict[int, int] = {}
        partner = [0] * len(flat)
        for i, occ in enumerate(flat):
            j = first.setdefault(abs(occ), i)
            if j != i:
                partner[i], partner[j] = j, i

        self._next = nxt
        self._prev = prv
        self._partner = partner
        self._edge_bit = [self.bit[abs(occ)] for occ in flat]
        self.twist_mask = sum(1 << self.bit[lbl] for lbl in G.twisted)

    def mask_of(self, labels: Iterable[int]) -> int:
        return sum(1 << self.bit[lbl] for lbl in labels)

    def count(self, twist_mask: int | None = None) -> int:
        if twist_mask is None:
            twist_mask = self.twist_mask

        nxt, prv, partner, edge_bit = self._next, self._prev, self._partner, self._edge_bit
        darts = 2 * len(nxt)
        visited = bytearray(darts)
        faces = self.empty_vertices

        for start in range(darts):
            if visited[start]:
                continue
            faces += 1
            d = start
            while True:
                visited[d] = 1
                i, side = d >> 1, d & 1
                # corner step
                d = 2 * nxt[i] if side else 2 * prv[i] + 1
                visited[d] = 1
                # ribbon step
                i, side = d >> 1, d & 1
                if (twist_mask >> edge_bit[i]) & 1:
                    d = 2 * partner[i] + side
                else:
                    d = 2 * partner[i] + (1 - side)
                if d == start:
                    break
        return faces


def boundary_components(G: RibbonGraph) -> int:
    """|F(G)|: number of boundary curves of the ribbon surface."""
    return FaceTracer(G).count()


# ---------------------- Genus ----------------------

def underlying_multigraph(G: RibbonGraph) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(G.vertex_count))
    for label in G.labels:
        u, v = G.endpoints(label)
        graph.add_edge(u, v, key=label)
    return graph


def connected_components(G: RibbonGraph) -> int:
    return nx.number_connected_components(underlying_multigraph(G))


def is_connected(G: RibbonGraph) -> bool:
    return connected_components(G) == 1


def require_connected(G: RibbonGraph) -> None:
    if not is_connected(G):
        raise DisconnectedGraphError("graph must be connected")


def euler_genus(G: RibbonGraph) -> int:
    """ε(G) = 2c(G) − (|V| − |E| + |F|)."""
    chi = G.vertex_count - G.edge_count + boundary_components(G)
    return 2 * connected_components(G) - chi


# ---------------------- Partial Petrials ----------------------

def partial_petrial(G: RibbonGraph, A: Iterable[int]) -> RibbonGraph:
    """
    G^{×|A}: toggle the twist of every edge in A.

    The sign of the later occurrence in scan order is negated, so applying the
    same A twice gives back G exactly.
    """
    rotations = [list(rot) for rot in G.rotations]
    for label in edge_set(A):
        _, (v, pos) = G.occurrences(label)
        rotations[v][pos] = -rotations[v][pos]
    return type(G)(rotations=tuple(tuple(rot) for rot in rotations))


def petrial(G: RibbonGraph) -> RibbonGraph:
    return partial_petrial(G, G.labels)
