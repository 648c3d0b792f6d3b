"""
Instance generators: seeded random ribbon graphs, bouquets and signed graphs,
plus exhaustive enumerations for small sizes.
"""
from __future__ import annotations

import itertools
from typing import Iterator, List, Optional, Tuple

import numpy as np

from bouquet_algebra import Bouquet, SignedGraph
from ribbon_core import EdgeSet, RibbonGraph, require_connected

Seed = Optional[int]


def make_rng(seed: Seed = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def _framed(word: List[int], twisted: List[bool]) -> Tuple[int, ...]:
    """Negate the second occurrence of every twisted label."""
    seen = set()
    out = []
    for x in word:
        if x in seen and twisted[x - 1]:
            out.append(-x)
        else:
            out.append(x)
        seen.add(x)
    return tuple(out)


def random_bouquet(m: int, rng: np.random.Generator) -> Bouquet:
    """Uniform chord placement; each chord twisted with probability 1/2."""
    if m < 0:
        raise ValueError("chord count must be non-negative")
    word = [int(x) for x in rng.permutation(np.repeat(np.arange(1, m + 1), 2))]
    twisted = [bool(t) for t in rng.integers(0, 2, size=m)]
    return Bouquet.from_word(_framed(word, twisted))


def random_ribbon_graph(n: int, m: int, rng: np.random.Generator) -> RibbonGraph:
    """
    Connected random ribbon graph with n vertices and m edges.

    A random tree comes first; the remaining edges join uniform vertex pairs
    (loops included). Rotations are then shuffled and every half-edge gets a
    random sign.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    if m < n - 1:
        raise ValueError(f"{m} edges cannot connect {n} vertices")
    if n == 1:
        return random_bouquet(m, rng)

    ends: List[Tuple[int, int]] = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    ends += [(int(rng.integers(0, n)), int(rng.integers(0, n))) for _ in range(m - n + 1)]
    labels = [int(x) for x in rng.permutation(np.arange(1, m + 1))]

    rotations: List[List[int]] = [[] for _ in range(n)]
    for label, (u, v) in zip(labels, ends):
        rotations[u].append(label)
        rotations[v].append(label)

    signed = []
    for rot in rotations:
        order = rng.permutation(len(rot))
        signs = rng.choice([-1, 1], size=len(rot))
        signed.append(tuple(int(rot[k]) * int(s) for k, s in zip(order, signs)))
    return RibbonGraph(rotations=tuple(signed))


def random_signed_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> SignedGraph:
    edges = {(a, b) for a, b in itertools.combinations(range(1, n + 1), 2) if rng.random() < p}
    negative = {v for v in range(1, n + 1) if rng.random() < 0.5}
    return SignedGraph(vertices=tuple(range(1, n + 1)), edges=frozenset(edges), negative=frozenset(negative))


def random_spanning_tree(G: RibbonGraph, rng: np.random.Generator) -> EdgeSet:
    """Kruskal over a random edge order."""
    require_connected(G)
    parent = list(range(G.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for idx in rng.permutation(G.edge_count):
        label = G.labels[int(idx)]
        ru, rv = (find(x) for x in G.endpoints(label))
        if ru != rv:
            parent[ru] = rv
            tree.add(label)
    return frozenset(tree)


# ---------------------- Exhaustive enumeration ----------------------

def _matchings(points: List[int]) -> Iterator[List[Tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for k, other in enumerate(rest):
        for tail in _matchings(rest[:k] + rest[k + 1:]):
            yield [(first, other)] + tail


def all_bouquets(m: int) -> Iterator[Bouquet]:
    """
    Every framed chord diagram on m chords: (2m − 1)!! placements times 2^m
    framings. Chords are labelled in order of their first endpoint.
    """
    for matching in _matchings(list(range(2 * m))):
        word = [0] * (2 * m)
        for label, (i, j) in enumerate(matching, start=1):
            word[i] = word[j] = label
        for twisted in itertools.product((False, True), repeat=m):
            yield Bouquet.from_word(_framed(word, list(twisted)))


def all_signed_graphs(n: int) -> Iterator[SignedGraph]:
    """Every labelled signed graph on vertices 1..n."""
    vertices = tuple(range(1, n + 1))
    pairs = list(itertools.combinations(vertices, 2))
    for edge_bits in range(1 << len(pairs)):
        edges = frozenset(p for k, p in enumerate(pairs) if (edge_bits >> k) & 1)
        for sign_bits in range(1 << n):
            negative = frozenset(v for v in vertices if (sign_bits >> (v - 1)) & 1)
            yield SignedGraph(vertices=vertices, edges=edges, negative=negative)
