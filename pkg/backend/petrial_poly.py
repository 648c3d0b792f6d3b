"""
Partial Petrial polynomials.

Two independent engines compute Σ_{A ⊆ E(G)} z^{ε(G^{×|A})}:

  - brute force: trace the boundary of every partial Petrial;
  - rank: sum, over the twists X of the tree edges, the diagonal rank sweep
    of the auxiliary bouquet Aux(G_X, T).

The modified (signed) polynomials of bouquets and of signed graphs live here
as well.
"""
from __future__ import annotations

import logging
import multiprocessing as mp
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from bouquet_algebra import (
    Bouquet,
    SignedGraph,
    adjacency_gf2,
    diagonal_rank_profile,
    gf2_rank,
    intersection_graph,
    signed_intersection_graph,
)
from contraction import aux_bouquet, spanning_tree, twist_edges, validate_tree
from ribbon_core import (
    CapExceededError,
    FaceTracer,
    InvalidGraphError,
    RibbonGraph,
    require_connected,
)
from settings import get_settings

log = logging.getLogger(__name__)

METHODS = ("rank", "bruteforce")


# ---------------------- Polynomials ----------------------

@dataclass(frozen=True)
class GenusPolynomial:
    """Sparse integer polynomial in z; `terms` are (exponent, coefficient), ascending, nonzero."""
    terms: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        acc: Dict[int, int] = {}
        for exp, coef in self.terms:
            if exp < 0:
                raise ValueError(f"negative exponent {exp}")
            acc[int(exp)] = acc.get(int(exp), 0) + int(coef)
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in acc.items() if c)))

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, int]) -> "GenusPolynomial":
        return cls(terms=tuple(coefficients.items()))

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "GenusPolynomial":
        """counts[k] is the coefficient of z^k."""
        return cls(terms=tuple(enumerate(counts)))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def coefficient_sum(self) -> int:
        return sum(c for _, c in self.terms)

    def __add__(self, other: "GenusPolynomial") -> "GenusPolynomial":
        return GenusPolynomial(terms=self.terms + other.terms)

    def __neg__(self) -> "GenusPolynomial":
        return GenusPolynomial(terms=tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "GenusPolynomial") -> "GenusPolynomial":
        return self + (-other)

    def __mul__(self, other: Union["GenusPolynomial", int]) -> "GenusPolynomial":
        if isinstance(other, int):
            return GenusPolynomial(terms=tuple((e, c * other) for e, c in self.terms))
        return GenusPolynomial(
            terms=tuple((e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms)
        )

    __rmul__ = __mul__

    def to_text(self) -> str:
        """Descending powers, e.g. '1412z^7 + 1692z^6 + z^2'."""
        parts: List[str] = []
        for exp, coef in reversed(self.terms):
            mag = abs(coef)
            if exp == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("z" if exp == 1 else f"z^{exp}")
            if not parts:
                parts.append(("-" if coef < 0 else "") + body)
            else:
                parts.append((" - " if coef < 0 else " + ") + body)
        return "".join(parts) or "0"

    def to_json_dict(self) -> Dict[str, int]:
        return {str(e): c for e, c in self.terms}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, int]) -> "GenusPolynomial":
        return cls(terms=tuple((int(e), int(c)) for e, c in data.items()))

    def __str__(self) -> str:
        return self.to_text()


ZERO = GenusPolynomial()


def poly_add(p: GenusPolynomial, q: GenusPolynomial) -> GenusPolynomial:
    return p + q


def poly_multiply(p: GenusPolynomial, q: GenusPolynomial) -> GenusPolynomial:
    return p * q


def poly_negate(p: GenusPolynomial) -> GenusPolynomial:
    return -p


def is_interpolating(p: GenusPolynomial) -> bool:
    """Nonzero coefficients sit on consecutive exponents."""
    exps = [e for e, _ in p.terms]
    return not exps or exps == list(range(exps[0], exps[-1] + 1))


def _check_cap(size: int, cap: int, method: str, unit: str = "edges") -> None:
    if size > cap:
        log.warning("%s engine refused: %d %s exceeds the cap of %d", method, size, unit, cap)
        raise CapExceededError(
            f"{size} {unit} exceeds the {method} cap of {cap} (raise the cap or use --force)"
        )


# ---------------------- Brute force ----------------------

def petrial_poly_bruteforce(G: RibbonGraph, cap: Optional[int] = None) -> GenusPolynomial:
    """Trace the boundary of all 2^m partial Petrials."""
    require_connected(G)
    _check_cap(G.edge_count, cap or get_settings().bruteforce_cap, "bruteforce")

    n, m = G.vertex_count, G.edge_count
    tracer = FaceTracer(G)
    counts: Counter = Counter()
    for A in range(1 << m):
        faces = tracer.count(tracer.twist_mask ^ A)
        counts[2 - (n - m + faces)] += 1
    return GenusPolynomial.from_mapping(counts)


# ---------------------- Rank decomposition ----------------------

def _sweep_tree_twists(job: Tuple[RibbonGraph, Tuple[int, ...], Sequence[int], int]) -> Counter:
    """Worker: accumulate rank histograms for a slice of tree-twist masks X."""
    G, tree_labels, masks, batch_size = job
    counts: Counter = Counter()
    for mask in masks:
        X = [label for k, label in enumerate(tree_labels) if (mask >> k) & 1]
        aux = aux_bouquet(twist_edges(G, X), tree_labels)
        profile = diagonal_rank_profile(adjacency_gf2(intersection_graph(aux)), batch_size)
        for rank, count in enumerate(profile.total):
            if count:
                counts[rank] += count
    return counts


def petrial_poly_rank(
    G: RibbonGraph,
    T: Optional[Iterable[int]] = None,
    *,
    cap: Optional[int] = None,
    threads: Optional[int] = None,
    batch_size: Optional[int] = None,
    progress: bool = False,
) -> GenusPolynomial:
    """
    Σ_{X ⊆ E(T)} Σ_{Y ⊆ E(G)∖E(T)} z^{rank(adj(I(Aux(G_X, T))) + D_Y)}.

    The X-sweep is the parallel unit; workers return partial histograms that
    are added together, so the result does not depend on the schedule.
    """
    require_connected(G)
    if G.vertex_count < 2:
        raise InvalidGraphError("the rank decomposition needs at least two vertices; use bouquet_rank_poly")

    settings = get_settings()
    _check_cap(G.edge_count, cap or settings.rank_cap, "rank")
    threads = threads or settings.threads
    batch_size = batch_size or settings.batch_size

    tree = spanning_tree(G) if T is None else validate_tree(G, T)
    tree_labels = tuple(sorted(tree))
    outer = 1 << len(tree_labels)
    log.info(
        "rank engine: %d auxiliary bouquets x %d diagonal subsets (threads=%d)",
        outer, 1 << (G.edge_count - len(tree_labels)), threads,
    )

    chunk = max(1, outer // (threads * 4)) if threads > 1 else 1
    jobs = [
        (G, tree_labels, range(start, min(start + chunk, outer)), batch_size)
        for start in range(0, outer, chunk)
    ]

    total: Counter = Counter()
    bar = tqdm(total=len(jobs), desc="tree twists", disable=not progress)
    if threads > 1:
        with mp.Pool(processes=threads) as pool:
            for part in pool.imap_unordered(_sweep_tree_twists, jobs):
                total.update(part)
                bar.update(1)
    else:
        for job in jobs:
            total.update(_sweep_tree_twists(job))
            bar.update(1)
    bar.close()
    return GenusPolynomial.from_mapping(total)


def bouquet_rank_poly(B: Bouquet) -> GenusPolynomial:
    """Σ_{A} z^{rank(adj(I(B)) + D_A)}."""
    profile = diagonal_rank_profile(adjacency_gf2(intersection_graph(B)))
    return GenusPolynomial.from_counts(profile.total)


def petrial_poly(
    G: RibbonGraph,
    method: str = "rank",
    T: Optional[Iterable[int]] = None,
    **options,
) -> GenusPolynomial:
    """Dispatch to an engine; one-vertex inputs use the bouquet sweep for the rank method."""
    if method == "bruteforce":
        return petrial_poly_bruteforce(G, cap=options.get("cap"))
    if method != "rank":
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if G.vertex_count == 1:
        if T is not None:
            validate_tree(G, T)
        _check_cap(G.edge_count, options.get("cap") or get_settings().rank_cap, "rank")
        return bouquet_rank_poly(Bouquet.from_graph(G))
    return petrial_poly_rank(G, T, **options)


# ---------------------- Modified polynomials ----------------------

def _alternating(A: int) -> int:
    return -1 if bin(A).count("1") & 1 else 1


def modified_poly_bouquet(B: Bouquet, method: str = "rank", cap: Optional[int] = None) -> GenusPolynomial:
    """
    Σ_{A ⊆ E(B)} (−1)^{|A|} z^{ε(B^{×|A})}.

    method="genus" traces every partial Petrial; method="rank" reads each
    genus off rank(adj(SI(B^{×|A}))), i.e. adj(SI(B)) with D_A added.
    """
    if method not in ("genus", "rank"):
        raise ValueError(f"unknown method {method!r}; expected 'genus' or 'rank'")
    settings = get_settings()
    m = B.edge_count
    if method == "genus":
        _check_cap(m, cap or settings.bruteforce_cap, "modified genus")
    else:
        _check_cap(m, cap or settings.rank_cap, "modified rank")

    counts: Counter = Counter()
    if method == "genus":
        tracer = FaceTracer(B)
        for A in range(1 << m):
            counts[1 + m - tracer.count(tracer.twist_mask ^ A)] += _alternating(A)
    else:
        signed = adjacency_gf2(signed_intersection_graph(B))
        for A in range(1 << m):
            counts[gf2_rank(signed.with_diagonal(A))] += _alternating(A)
    return GenusPolynomial.from_mapping(counts)


def modified_poly_signed_graph(S: SignedGraph, method: str = "rank", cap: Optional[int] = None) -> GenusPolynomial:
    """
    Σ_{A ⊆ V(S)} (−1)^{|A|} z^{rank(adj(S) + D_{X Δ A})}, X the − vertices and
    adj(S) taken without its signed diagonal.

    method="direct" ranks each of the 2^n matrices in turn. method="rank"
    substitutes Y = X Δ A, which turns the sum into (−1)^{|X|} times the
    alternating diagonal sweep of the unsigned adjacency matrix.
    """
    if method not in ("direct", "rank"):
        raise ValueError(f"unknown method {method!r}; expected 'direct' or 'rank'")
    settings = get_settings()
    unsigned = adjacency_gf2(S).off_diagonal()

    if method == "direct":
        _check_cap(S.order, cap or settings.bruteforce_cap, "modified direct", "vertices")
        negative = unsigned.mask_of(S.negative)
        counts: Counter = Counter()
        for A in range(1 << S.order):
            counts[gf2_rank(unsigned.with_diagonal(negative ^ A))] += _alternating(A)
        return GenusPolynomial.from_mapping(counts)

    _check_cap(S.order, cap or settings.rank_cap, "modified rank", "vertices")
    profile = diagonal_rank_profile(unsigned, settings.batch_size)
    sign = -1 if len(S.negative) % 2 else 1
    return GenusPolynomial.from_counts([sign * c for c in profile.alternating])
