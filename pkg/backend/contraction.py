"""
Spanning trees, edge contraction and the auxiliary bouquet Aux(G, T).
"""
from __future__ import annotations

import itertools
import logging
from typing import Iterable, Iterator, List, Sequence, Tuple

import networkx as nx

from bouquet_algebra import Bouquet
from ribbon_core import (
    EdgeSet,
    InvalidGraphError,
    RibbonGraph,
    RibbonGraphError,
    edge_set,
    partial_petrial,
    require_connected,
)

log = logging.getLogger(__name__)


class TreeError(RibbonGraphError):
    pass


# ---------------------- Spanning trees ----------------------

def spanning_tree(G: RibbonGraph) -> EdgeSet:
    """Depth-first tree from v1, trying incident edges in ascending label order."""
    require_connected(G)

    incident: List[List[Tuple[int, int]]] = [[] for _ in range(G.vertex_count)]
    for label in G.labels:
        u, v = G.endpoints(label)
        if u != v:
            incident[u].append((label, v))
            incident[v].append((label, u))

    tree = set()
    visited = {0}
    stack: List[Iterator[Tuple[int, int]]] = [iter(incident[0])]
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            continue
        label, w = step
        if w not in visited:
            visited.add(w)
            tree.add(label)
            stack.append(iter(incident[w]))
    return frozenset(tree)


def validate_tree(G: RibbonGraph, labels: Iterable[int]) -> EdgeSet:
    """Check that `labels` is a spanning tree of G's underlying multigraph."""
    tree = edge_set(labels)
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(G.vertex_count))
    for label in sorted(tree):
        if label not in G.labels:
            raise TreeError(f"tree edge {label} is not in the graph")
        u, v = G.endpoints(label)
        if u == v:
            raise TreeError(f"tree edge {label} is a loop")
        graph.add_edge(u, v, key=label)
    if not nx.is_tree(graph):
        raise TreeError(
            f"edges {sorted(tree)} do not form a spanning tree on {G.vertex_count} vertices"
        )
    return tree


def spanning_trees(G: RibbonGraph) -> Iterator[EdgeSet]:
    """Every spanning tree; parallel edges give distinct trees."""
    require_connected(G)
    proper = [label for label in G.labels if not G.is_loop(label)]
    for combo in itertools.combinations(proper, G.vertex_count - 1):
        parent = list(range(G.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for label in combo:
            ru, rv = (find(x) for x in G.endpoints(label))
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
        if acyclic:
            yield frozenset(combo)


# ---------------------- Contraction ----------------------

def contract_edge(G: RibbonGraph, e: int) -> RibbonGraph:
    """
    G/e for a non-loop edge e = uv.

    With u read as (e, A) and v read as (e, B) from the occurrences of e, the
    merged vertex is (A, B) when e is untwisted and (A, B⁻¹) when e is
    twisted, B⁻¹ being B reversed with every sign negated. u is the endpoint
    scanned first, so the merged vertex takes its place and v disappears.
    """
    (u, pu), (v, pv) = G.occurrences(e)
    if u == v:
        raise InvalidGraphError(f"edge {e} is a loop and cannot be contracted")

    rot_u, rot_v = G.rotations[u], G.rotations[v]
    rest_u = rot_u[pu + 1:] + rot_u[:pu]
    rest_v = rot_v[pv + 1:] + rot_v[:pv]
    if G.is_twisted(e):
        rest_v = tuple(-x for x in reversed(rest_v))

    rotations = [
        rest_u + rest_v if k == u else rot
        for k, rot in enumerate(G.rotations)
        if k != v
    ]
    if len(rotations) == 1:
        return Bouquet(rotations=tuple(rotations))
    return RibbonGraph(rotations=tuple(rotations))


def contract_edges(G: RibbonGraph, order: Sequence[int]) -> RibbonGraph:
    """Contract the given edges one after another; endpoints are re-derived each time."""
    result = G
    for label in order:
        result = contract_edge(result, label)
    return result


def aux_bouquet(G: RibbonGraph, T: Iterable[int]) -> Bouquet:
    """Aux(G, T): contract every tree edge, in ascending label order."""
    require_connected(G)
    tree = validate_tree(G, T)
    result = contract_edges(G, sorted(tree))
    log.debug("Aux bouquet: contracted %d tree edges, %d loops remain", len(tree), result.edge_count)
    return Bouquet.from_graph(result)


def twist_edges(G: RibbonGraph, X: Iterable[int]) -> RibbonGraph:
    """G_X: twist every edge in X (the partial Petrial G^{×|X})."""
    return partial_petrial(G, X)
