"""Constructive chaos evidence and topological entropy estimation.

A periodic tree is presented by a complete prefix set P and a seed labeling
of the fundamental domain (nodes with no prefix in P).  The infinite tree is
the unrolling t_y = seed[strip(y)], where strip repeatedly removes the
unique P-prefix; shifting by any element of P then fixes the tree by
construction, and membership in the shift reduces to finitely many edge
checks (interior edges plus the wrap-around edges into the root label).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .blocks import Block, enumerate_blocks, vertex_allows_block
from .deciders import (
    IrreducibilityReport,
    MixingReport,
    decide_irreducible,
    decide_mixing,
)
from .graphs import VertexTsft
from .words import WORD_KEY, CompletePrefixSet, words_up_to


class NotIrreducibleError(ValueError):
    """The construction requires an irreducible shift."""


# ---------------------------------------------------------------------------
# Patterns (partial labelings on prefix-closed supports)


@dataclass(frozen=True)
class TreePattern:
    """Labels on a finite prefix-closed set of nodes."""

    d: int
    labels: tuple[tuple[str, int], ...]  # sorted by (len, word)

    def __post_init__(self) -> None:
        support = {w for w, _ in self.labels}
        for w in support:
            if w and w[:-1] not in support:
                raise ValueError(f"support not prefix-closed at {w!r}")
        ordered = tuple(sorted(self.labels, key=lambda p: WORD_KEY(p[0])))
        object.__setattr__(self, "labels", ordered)

    @classmethod
    def from_map(cls, d: int, labels: dict[str, int]) -> "TreePattern":
        return cls(d, tuple(labels.items()))

    def as_map(self) -> dict[str, int]:
        return dict(self.labels)

    @property
    def depth(self) -> int:
        return max((len(w) for w, _ in self.labels), default=0)

    def contains_block(self, block: Block) -> tuple[str, ...]:
        """Nodes at which ``block`` occurs as an exact sub-pattern."""
        labels = self.as_map()
        hits = []
        for x in sorted(labels, key=WORD_KEY):
            nodes = (
                (x + y, v) for y, v in block.as_map().items()
            )
            if all(labels.get(w) == v for w, v in nodes):
                hits.append(x)
        return tuple(hits)


# ---------------------------------------------------------------------------
# Periodic trees


@dataclass(frozen=True)
class PeriodicTreeCertificate:
    """Period CPS plus a seed pattern covering the fundamental domain."""

    cps: CompletePrefixSet
    seed: TreePattern

    @property
    def d(self) -> int:
        return self.seed.d

    def strip(self, word: str) -> str:
        """Remove leading CPS elements until none is a prefix."""
        again = True
        while again:
            again = False
            for p in self.cps:
                if word.startswith(p):
                    word = word[len(p) :]
                    again = True
                    break
        return word

    def unroll(self, depth: int) -> dict[str, int]:
        """Labels of the periodic tree on all nodes of length <= depth."""
        seed = self.seed.as_map()
        out = {}
        for w in words_up_to(self.d, depth):
            z = self.strip(w)
            if z not in seed:
                raise ValueError(f"seed does not cover fundamental node {z!r}")
            out[w] = seed[z]
        return out


def build_periodic_tree(
    tsft: VertexTsft, u: Block, max_depth: Optional[int] = None
) -> PeriodicTreeCertificate:
    """Periodic tree agreeing with ``u`` on its support.

    Searches directly for a CPS P (elements no shorter than the block
    height) and seed labels above the frontier such that interior edges are
    admissible and every frontier edge wraps back onto the root label of u.
    Frontier placements are preferred over deeper recursion, so the period
    set is shallow; irreducibility guarantees a solution exists.
    """
    if not vertex_allows_block(tsft, u):
        raise ValueError("seed block is not allowed by the shift")
    report = decide_irreducible(tsft)
    if not report.verdict:
        raise NotIrreducibleError(
            "periodic-tree construction requires an irreducible shift"
        )
    n, d, h = tsft.n, tsft.d, u.height
    if max_depth is None:
        max_depth = h + n * 2 ** (n - 1) + 2
    root_label = u.root
    infinity = float("inf")

    # rank[s] = least extra depth below symbol s after which every branch
    # can wrap back onto the root label; value iteration reaches the least
    # fixpoint in at most n rounds.
    rank: list[float] = [infinity] * n
    for _ in range(n + 1):
        changed = False
        for s in range(n):
            worst = 0.0
            for k in range(d):
                if tsft.allows_edge(k, s, root_label):
                    continue
                best = min(
                    (rank[c] for c in tsft.successors(k, s)), default=infinity
                )
                worst = max(worst, best + 1)
            if worst < rank[s]:
                rank[s] = worst
                changed = True
        if not changed:
            break

    budget = max_depth - h
    leafs = [w for w in words_up_to(d, h - 1) if len(w) == h - 1]
    if not all(rank[u.label(w)] <= budget for w in leafs):
        raise NotIrreducibleError(
            f"no periodic extension of the block within depth {max_depth}"
        )

    seed = u.as_map()
    frontier: list[str] = []

    def extend(word: str, symbol: int) -> None:
        for k in range(d):
            child = word + str(k)
            if tsft.allows_edge(k, symbol, root_label):
                frontier.append(child)
                continue
            # Steepest descent on the rank keeps the seed depth minimal.
            c = min(tsft.successors(k, symbol), key=lambda v: rank[v])
            seed[child] = c
            extend(child, c)

    for w in leafs:
        extend(w, u.label(w))

    cps = CompletePrefixSet(tuple(frontier), d)
    return PeriodicTreeCertificate(cps=cps, seed=TreePattern.from_map(d, seed))


def verify_periodic(
    cert: PeriodicTreeCertificate, tsft: VertexTsft, depth: int
) -> tuple[bool, Optional[str]]:
    """Re-check a certificate at finite depth.

    Verifies that the unrolling is well defined, matches the seed wherever
    the seed speaks, is invariant under shifting by every period element,
    and violates no adjacency constraint.  Returns (ok, first violation).
    """
    try:
        tree = cert.unroll(depth)
    except ValueError as exc:
        return False, str(exc)
    seed = cert.seed.as_map()
    for w, v in sorted(seed.items(), key=lambda p: WORD_KEY(p[0])):
        if len(w) <= depth and tree[w] != v:
            return False, f"seed disagrees with unrolling at node {w!r}"
    for x in cert.cps:
        for y, v in sorted(tree.items(), key=lambda p: WORD_KEY(p[0])):
            if len(x) + len(y) <= depth and tree[x + y] != v:
                return False, f"shift by {x!r} moves node {y!r}"
    for w, v in tree.items():
        for k in range(cert.d):
            child = w + str(k)
            if child in tree and not tsft.allows_edge(k, v, tree[child]):
                return False, f"forbidden edge {w!r} -> {child!r}"
    return True, None


# ---------------------------------------------------------------------------
# Dense orbits


def dense_orbit_prefix(
    tsft: VertexTsft, targets: Sequence[Block]
) -> TreePattern:
    """Finite pattern containing every target block as an exact sub-block.

    Chains the targets down a single branch: after planting one block, walk
    from one of its leaves to the next block's root symbol through the
    labeled graph.  Irreducibility makes every such walk possible.
    """
    if not targets:
        raise ValueError("need at least one target block")
    for b in targets:
        if not vertex_allows_block(tsft, b):
            raise ValueError(f"target block {b.to_text()} is not allowed")
    if not decide_irreducible(tsft).verdict:
        raise NotIrreducibleError("dense-orbit construction needs irreducibility")

    labels: dict[str, int] = {}

    def plant(at: str, block: Block) -> None:
        for y, v in block.as_map().items():
            labels[at + y] = v

    def walk_to(at: str, symbol: int) -> str:
        """Extend labels from node ``at`` to some node labeled ``symbol``."""
        start = labels[at]
        # BFS over (vertex, path) through per-direction edges.
        seen = {start}
        queue: list[tuple[int, tuple[tuple[int, int], ...]]] = [(start, ())]
        while queue:
            nxt = []
            for vtx, path in queue:
                if vtx == symbol:
                    node = at
                    for k, c in path:
                        node = node + str(k)
                        labels[node] = c
                    return node
                for k in range(tsft.d):
                    for c in tsft.successors(k, vtx):
                        if c not in seen:
                            seen.add(c)
                            nxt.append((c, path + ((k, c),)))
            queue = nxt
        raise NotIrreducibleError(f"symbol {symbol} unreachable from {start}")

    plant("", targets[0])
    anchor = "0" * (targets[0].height - 1)  # leftmost leaf of the first block
    for block in targets[1:]:
        site = walk_to(anchor, block.root)
        plant(site, block)
        anchor = site + "0" * (block.height - 1)
    return TreePattern.from_map(tsft.d, labels)


# ---------------------------------------------------------------------------
# Topological entropy


@dataclass(frozen=True)
class EntropyEstimate:
    ms: tuple[int, ...]
    log_counts: tuple[float, ...]  # natural log of the block count per height
    h_values: tuple[float, ...]  # ln(ln |B_m|) / m
    limit: Optional[float]
    degenerate: bool  # single-tree shift: the double log is undefined, h = 0
    exact_through: int  # largest m computed with exact integers


def entropy_estimate(
    tsft: VertexTsft, m_max: int, exact_digit_cap: int = 10**6
) -> EntropyEstimate:
    """h_m = ln(ln |B_m|)/m with exact big-integer counts, switching to a
    stabilized log-space recursion once counts exceed the digit cap."""
    if m_max < 2:
        raise ValueError("need m_max >= 2")
    ms, logs, hs = [], [], []
    exact_counts = [1] * tsft.n  # N_1
    log_counts: Optional[list[float]] = None
    exact_through = 0
    for m in range(1, m_max + 1):
        if m > 1:
            if log_counts is None:
                nxt = []
                for a in range(tsft.n):
                    prod = 1
                    for k in range(tsft.d):
                        prod *= sum(
                            exact_counts[b] for b in tsft.successors(k, a)
                        )
                    nxt.append(prod)
                exact_counts = nxt
                if max(exact_counts).bit_length() > exact_digit_cap * 3.33:
                    log_counts = [math.log(c) for c in exact_counts]
                    exact_counts = []
            else:
                nxt_l = []
                for a in range(tsft.n):
                    acc = 0.0
                    for k in range(tsft.d):
                        terms = [log_counts[b] for b in tsft.successors(k, a)]
                        acc += _logsumexp(terms)
                    nxt_l.append(acc)
                log_counts = nxt_l
        if log_counts is None:
            total_log = math.log(sum(exact_counts))
            exact_through = m
        else:
            total_log = _logsumexp(log_counts)
        ms.append(m)
        logs.append(total_log)
        hs.append(math.log(total_log) / m if total_log > 0 else 0.0)

    degenerate = logs[-1] == 0.0
    limit: Optional[float]
    if degenerate:
        limit = 0.0
    elif len(hs) >= 2 and logs[-2] > 0:
        # h_m = h + c/m: eliminate the 1/m term from the last two points.
        m1, m2 = ms[-2], ms[-1]
        limit = m2 * hs[-1] - m1 * hs[-2]
    else:
        limit = hs[-1]
    return EntropyEstimate(
        ms=tuple(ms),
        log_counts=tuple(logs),
        h_values=tuple(hs),
        limit=limit,
        degenerate=degenerate,
        exact_through=exact_through,
    )


def _logsumexp(values: Iterable[float]) -> float:
    vals = list(values)
    if not vals:
        return float("-inf")
    top = max(vals)
    return top + math.log(sum(math.exp(v - top) for v in vals))


# ---------------------------------------------------------------------------
# Chaos verdicts


@dataclass(frozen=True)
class ChaosReport:
    chaotic: Optional[bool]  # None = not established (sufficient conditions only)
    clause: Optional[str]  # "irreducible-finite-type" or "mixing"
    irreducibility: IrreducibilityReport
    mixing: MixingReport
    periodic_certificate: Optional[PeriodicTreeCertificate]
    dense_prefix: Optional[TreePattern]
    dense_targets: tuple[Block, ...]
    sensitive: bool  # expansivity holds whenever the shift has >= 2 trees
    sensitivity_delta: float


def chaos_report(
    tsft: VertexTsft, verify_depth: int = 6
) -> ChaosReport:
    """Run both deciders and attach constructive evidence when one fires."""
    irr = decide_irreducible(tsft)
    mix = decide_mixing(tsft)
    clause: Optional[str] = None
    if mix.verdict:
        clause = "mixing"
    elif irr.verdict:
        clause = "irreducible-finite-type"

    cert = None
    prefix = None
    targets: tuple[Block, ...] = ()
    if clause is not None:
        seed = Block(tsft.d, 1, (0,))
        cert = build_periodic_tree(tsft, seed)
        ok, why = verify_periodic(cert, tsft, verify_depth)
        if not ok:
            raise AssertionError(f"periodic certificate failed its check: {why}")
        targets = tuple(Block(tsft.d, 1, (a,)) for a in range(tsft.n))
        prefix = dense_orbit_prefix(tsft, targets)
    return ChaosReport(
        chaotic=True if clause else None,
        clause=clause,
        irreducibility=irr,
        mixing=mix,
        periodic_certificate=cert,
        dense_prefix=prefix,
        dense_targets=targets,
        sensitive=tsft.n >= 2,
        sensitivity_delta=0.5,
    )
