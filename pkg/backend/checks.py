"""
Identity harness behind `cli.py check`.

Each mode runs an exhaustive sweep over small instances (up to `max_size`)
followed by `trials` seeded random instances, and returns a CheckReport.
Failures carry the offending instance and, for four-term modes, the nonzero
residual verbatim.
"""
from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from bouquet_algebra import Bouquet, genus_via_rank, join, serialize_chord_diagram, serialize_signed_graph
from contraction import aux_bouquet, spanning_tree
from four_term import (
    adjacent_witnesses,
    check_four_term_chord,
    check_four_term_modified_bouquet,
    check_four_term_signed_graph,
    exchange_transform,
    slide_transform,
    tilde_prime_transform,
)
from petrial_poly import (
    is_interpolating,
    modified_poly_bouquet,
    petrial_poly,
    petrial_poly_bruteforce,
)
from random_instances import (
    all_bouquets,
    all_signed_graphs,
    make_rng,
    random_bouquet,
    random_ribbon_graph,
    random_signed_graph,
    random_spanning_tree,
)
from ribbon_core import RibbonGraph, euler_genus, partial_petrial, serialize

log = logging.getLogger(__name__)


class CheckReport(BaseModel):
    mode: str
    cases: int = 0
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, describe: Callable[[], str]) -> None:
        self.cases += 1
        if not ok:
            message = describe()
            log.warning("[%s] failure: %s", self.mode, message)
            self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.failures)} failures)"
        return f"{self.mode}: {self.cases} cases, {status}"


def _one_line(text: str) -> str:
    return " / ".join(text.splitlines())


def _iterate(items: Iterable, progress: bool, desc: str):
    return tqdm(items, desc=desc, disable=not progress, leave=False)


# ---------------------- Modes ----------------------

def check_genus_rank(trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, **_) -> CheckReport:
    """Face-traced genus equals the GF(2) rank of the auxiliary bouquet's signed matrix."""
    report = CheckReport(mode="genus-rank")

    for m in range(max_size + 1):
        for B in _iterate(all_bouquets(m), progress, f"bouquets m={m}"):
            traced, ranked = euler_genus(B), genus_via_rank(B)
            report.record(traced == ranked, lambda: f"{serialize_chord_diagram(B)}: traced {traced}, rank {ranked}")

    for _ in _iterate(range(trials), progress, "random graphs"):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(n - 1, 15))
        G = random_ribbon_graph(n, m, rng)
        traced = euler_genus(G)
        trees = {spanning_tree(G), random_spanning_tree(G, rng), random_spanning_tree(G, rng)}
        for T in trees:
            ranked = genus_via_rank(aux_bouquet(G, T))
            report.record(
                traced == ranked,
                lambda: f"{_one_line(serialize(G))} with T={sorted(T)}: traced {traced}, rank {ranked}",
            )
    return report


def check_poly_rank(
    trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, threads: int = 1, **_
) -> CheckReport:
    """Rank engine equals brute force; interpolation and coefficient sum hold."""
    report = CheckReport(mode="poly-rank")

    for m in range(max_size + 1):
        for B in _iterate(all_bouquets(m), progress, f"bouquets m={m}"):
            ranked, brute = petrial_poly(B, "rank"), petrial_poly_bruteforce(B)
            report.record(ranked == brute, lambda: f"{serialize_chord_diagram(B)}: rank {ranked}, bruteforce {brute}")

    for _ in _iterate(range(trials), progress, "random graphs"):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(n - 1, 13))
        G = random_ribbon_graph(n, m, rng)
        brute = petrial_poly_bruteforce(G)
        report.record(
            is_interpolating(brute) and brute.coefficient_sum() == 1 << m,
            lambda: f"{_one_line(serialize(G))}: {brute} is not interpolating or does not sum to 2^{m}",
        )
        for T in {spanning_tree(G), random_spanning_tree(G, rng)}:
            ranked = petrial_poly(G, "rank", T, threads=threads)
            report.record(
                ranked == brute,
                lambda: f"{_one_line(serialize(G))} with T={sorted(T)}: rank {ranked}, bruteforce {brute}",
            )
    return report


def _random_adjacent_pair(B: Bouquet, rng: np.random.Generator):
    word = B.word
    p = int(rng.integers(0, len(word)))
    a, b = abs(word[p]), abs(word[(p + 1) % len(word)])
    return (a, b) if rng.random() < 0.5 else (b, a)


def _chord_cases(B: Bouquet) -> Iterable:
    for a in B.labels:
        for b in B.labels:
            if a != b and adjacent_witnesses(B, a, b):
                yield a, b


def check_four_term_chords(
    trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, chords: int = 8, **_
) -> CheckReport:
    """
    Four-term relation of the partial Petrial polynomial over every adjacency
    witness. The exhaustive part also checks that slides keep the genus and
    that slide and exchange commute up to rotation.
    """
    report = CheckReport(mode="four-term-chord")

    for m in range(2, max_size + 1):
        for B in _iterate(all_bouquets(m), progress, f"bouquets m={m}"):
            genus = euler_genus(B)
            for a, b in _chord_cases(B):
                residual = check_four_term_chord(B, a, b, all_witnesses=True)
                report.record(residual.is_zero(), lambda: f"{serialize_chord_diagram(B)} a={a} b={b}: residual {residual}")
                for w in adjacent_witnesses(B, a, b):
                    slid = slide_transform(B, a, b, w)
                    report.record(
                        euler_genus(slid) == genus,
                        lambda: f"slide of {serialize_chord_diagram(B)} at {w} changed the genus",
                    )
                    one = tilde_prime_transform(B, a, b, w, slide_first=True)
                    other = tilde_prime_transform(B, a, b, w, slide_first=False)
                    report.record(
                        one.is_rotation_of(other),
                        lambda: f"slide/exchange do not commute on {serialize_chord_diagram(B)} at {w}",
                    )

    for _ in _iterate(range(trials), progress, "random bouquets"):
        B = random_bouquet(chords, rng)
        a, b = _random_adjacent_pair(B, rng)
        if a == b:
            continue
        residual = check_four_term_chord(B, a, b, all_witnesses=True)
        report.record(residual.is_zero(), lambda: f"{serialize_chord_diagram(B)} a={a} b={b}: residual {residual}")
    return report


def check_four_term_graphs(
    trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, vertices: int = 9, **_
) -> CheckReport:
    """Four-term relation of the modified polynomial on signed graphs."""
    report = CheckReport(mode="four-term-graph")

    for n in range(2, max_size + 1):
        for S in _iterate(all_signed_graphs(n), progress, f"signed graphs n={n}"):
            for a in S.vertices:
                for b in S.vertices:
                    if a == b:
                        continue
                    residual = check_four_term_signed_graph(S, a, b)
                    report.record(
                        residual.is_zero(),
                        lambda: f"{_one_line(serialize_signed_graph(S))} a={a} b={b}: residual {residual}",
                    )

    for _ in _iterate(range(trials), progress, "random signed graphs"):
        S = random_signed_graph(vertices, rng)
        a, b = (int(x) for x in rng.choice(S.vertices, size=2, replace=False))
        residual = check_four_term_signed_graph(S, a, b)
        report.record(
            residual.is_zero(),
            lambda: f"{_one_line(serialize_signed_graph(S))} a={a} b={b}: residual {residual}",
        )
    return report


def check_four_term_modified(
    trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, chords: int = 8, **_
) -> CheckReport:
    """Four-term relation of the modified polynomial on chord diagrams; the genus and rank forms must agree."""
    report = CheckReport(mode="four-term-modified")

    for m in range(2, max_size + 1):
        for B in _iterate(all_bouquets(m), progress, f"bouquets m={m}"):
            by_genus, by_rank = modified_poly_bouquet(B, "genus"), modified_poly_bouquet(B, "rank")
            report.record(
                by_genus == by_rank,
                lambda: f"{serialize_chord_diagram(B)}: genus form {by_genus}, rank form {by_rank}",
            )
            for a, b in _chord_cases(B):
                residual = check_four_term_modified_bouquet(B, a, b, all_witnesses=True)
                report.record(residual.is_zero(), lambda: f"{serialize_chord_diagram(B)} a={a} b={b}: residual {residual}")

    for _ in _iterate(range(trials), progress, "random bouquets"):
        B = random_bouquet(chords, rng)
        a, b = _random_adjacent_pair(B, rng)
        if a == b:
            continue
        residual = check_four_term_modified_bouquet(B, a, b, all_witnesses=True)
        report.record(residual.is_zero(), lambda: f"{serialize_chord_diagram(B)} a={a} b={b}: residual {residual}")
    return report


def check_join(trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, **_) -> CheckReport:
    """The polynomial of a join is the product of the polynomials."""
    report = CheckReport(mode="join")
    for _ in _iterate(range(trials), progress, "random joins"):
        B1 = random_bouquet(int(rng.integers(0, 6)), rng)
        B2 = random_bouquet(int(rng.integers(0, 6)), rng)
        joined = petrial_poly(join(B1, B2))
        product = petrial_poly(B1) * petrial_poly(B2)
        report.record(
            joined == product,
            lambda: f"{serialize_chord_diagram(B1)} v {serialize_chord_diagram(B2)}: {joined} != {product}",
        )
    return report


def check_petrial_invariance(trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, **_) -> CheckReport:
    """Pre-twisting any edge set leaves the polynomial unchanged."""
    report = CheckReport(mode="petrial-invariance")
    for _ in _iterate(range(trials), progress, "random twists"):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(n - 1, 11))
        G = random_ribbon_graph(n, m, rng)
        A = [label for label in G.labels if rng.random() < 0.5]
        before, after = petrial_poly(G), petrial_poly(partial_petrial(G, A))
        report.record(before == after, lambda: f"{_one_line(serialize(G))} twisted on {A}: {before} != {after}")
    return report


def check_sign_relation(trials: int, rng: np.random.Generator, max_size: int, progress: bool = False, **_) -> CheckReport:
    """Retwisting W multiplies the modified polynomial by (−1)^{|W|}."""
    report = CheckReport(mode="sign-relation")
    for _ in _iterate(range(trials), progress, "random retwists"):
        B = random_bouquet(int(rng.integers(0, 8)), rng)
        W = [label for label in B.labels if rng.random() < 0.5]
        retwisted = partial_petrial(B, W)
        lhs = modified_poly_bouquet(B)
        rhs = modified_poly_bouquet(retwisted) * (-1 if len(W) % 2 else 1)
        report.record(lhs == rhs, lambda: f"{serialize_chord_diagram(B)} retwisted on {W}: {lhs} != {rhs}")
    return report


CHECKS: Dict[str, Callable[..., CheckReport]] = {
    "genus-rank": check_genus_rank,
    "poly-rank": check_poly_rank,
    "four-term-chord": check_four_term_chords,
    "four-term-graph": check_four_term_graphs,
    "four-term-modified": check_four_term_modified,
    "join": check_join,
    "petrial-invariance": check_petrial_invariance,
    "sign-relation": check_sign_relation,
}

MODES = tuple(CHECKS) + ("all",)

DEFAULT_MAX_SIZE = {
    "genus-rank": 4,
    "poly-rank": 4,
    "four-term-chord": 4,
    "four-term-graph": 4,
    "four-term-modified": 4,
}


def run_checks(
    mode: str,
    trials: int = 0,
    seed: Optional[int] = None,
    max_size: Optional[int] = None,
    progress: bool = False,
    threads: int = 1,
) -> List[CheckReport]:
    """Run one mode, or every mode for 'all'. All randomness comes from one generator seeded with `seed`."""
    if mode not in MODES:
        raise ValueError(f"unknown check mode {mode!r}; expected one of {MODES}")
    rng = make_rng(seed)
    modes = list(CHECKS) if mode == "all" else [mode]

    reports = []
    for name in modes:
        size = DEFAULT_MAX_SIZE.get(name, 0) if max_size is None else max_size
        log.info("check %s: max_size=%d trials=%d", name, size, trials)
        reports.append(CHECKS[name](trials=trials, rng=rng, max_size=size, progress=progress, threads=threads))
    return reports
