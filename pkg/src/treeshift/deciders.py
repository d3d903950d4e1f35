"""Exact irreducibility and mixing decisions with re-verifiable evidence.

The production deciders run cover fixpoints over finite state spaces instead
of enumerating direction words:

* irreducibility, per symbol pair (i, j): states are subsets of symbols
  reachable from {i}; a state is accepting when it contains j; a state is
  covered when it is accepting or all of its d successors are covered.
  The pair passes when every successor of {i} is covered (the connecting
  words must be nonempty, so the root itself never accepts).
* mixing: the state is the boolean positivity pattern of the word matrix,
  starting from the identity, with the same cover recursion; accepting
  states are the all-positive patterns.

A YES ships one complete prefix set per pair (or one uniform set); a NO
ships a zero cycle: a word returning to its initial terminal-state set whose
every prefix leaves the (i, j) entry at zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .blocks import Block, enumerate_blocks, vertex_allows_block
from .graphs import (
    Matrix,
    VertexTsft,
    is_essential,
    mat_all_positive,
    word_matrix,
)
from .words import WORD_KEY, CompletePrefixSet, is_complete_prefix_set


class EmptyShiftError(ValueError):
    """The shift has no trees at all; decisions are refused."""


class CapExceededError(RuntimeError):
    """A brute-force search refused to run past its configured cap."""


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class ZeroCycleWitness:
    """Evidence of non-irreducibility for one symbol pair.

    ``word`` starts and ends with the same letter, returns to the terminal
    state set of its first letter, and every nonempty prefix leaves entry
    (i, j) of the corresponding word matrix at zero.
    """

    pair: tuple[int, int]
    word: str
    trace: tuple[tuple[int, ...], ...]  # terminal-state sets, one per prefix


@dataclass(frozen=True)
class IrreducibilityReport:
    verdict: bool
    witnesses: dict[tuple[int, int], CompletePrefixSet]
    counterexample: Optional[ZeroCycleWitness]
    bound_used: int  # the n*2^(n-1) witness-depth bound the report validates against
    justification: str
    failing_pairs: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class MixingReport:
    verdict: bool
    witness: Optional[CompletePrefixSet]
    k_found: Optional[int]  # uniform depth the witness refines to
    justification: str


# ---------------------------------------------------------------------------
# Subset-state machinery


def _delta_tables(tsft: VertexTsft) -> list[dict[frozenset, frozenset]]:
    """Successor maps R -> {m : some r in R steps to m} per direction,
    filled lazily by the callers."""
    return [dict() for _ in range(tsft.d)]


def _delta(tsft: VertexTsft, table: dict, k: int, state: frozenset) -> frozenset:
    hit = table.get(state)
    if hit is None:
        hit = frozenset(
            m for r in state for m in tsft.successors(k, r)
        )
        table[state] = hit
    return hit


def _cover_fixpoint(start, delta, good, d: int):
    """Least covered set over states reachable from ``start``.

    Returns (covered rank map, successor cache).  rank[s] is the round in
    which s became covered: 0 for accepting states, else 1 + max over the d
    successors.  States never covered are absent.
    """
    succs: dict = {}
    reachable = [start]
    seen = {start}
    while reachable:
        frontier = []
        for s in reachable:
            kids = tuple(delta(k, s) for k in range(d))
            succs[s] = kids
            for t in kids:
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
        reachable = frontier

    rank: dict = {s: 0 for s in seen if good(s)}
    changed = True
    while changed:
        changed = False
        for s in seen:
            if s in rank:
                continue
            kids = succs[s]
            if all(t in rank for t in kids):
                rank[s] = 1 + max(rank[t] for t in kids)
                changed = True
    return rank, succs


def _reconstruct_cps(start, succs, rank, good, d: int) -> CompletePrefixSet:
    """Unwind a cover derivation into a concrete CPS, shallow first.

    The root is forced to recurse once so that every witness word is
    nonempty, matching the definition's requirement on word lengths.
    """
    words: list[str] = []

    def emit(state, prefix: str) -> None:
        if good(state):
            words.append(prefix)
            return
        for k in range(d):
            emit(succs[state][k], prefix + str(k))

    for k in range(d):
        emit(succs[start][k], str(k))
    return CompletePrefixSet(tuple(words), d)


# ---------------------------------------------------------------------------
# Irreducibility


def irreducibility_bound(n: int) -> int:
    """Witness-depth bound n * 2^(n-1) used as a validator diagnostic."""
    return n * 2 ** (n - 1)


def mixing_depth_bound(n: int) -> int:
    """Uniform-depth bound n^3 * 2^(2(n-1)) for mixing witnesses."""
    return n**3 * 2 ** (2 * (n - 1))


def _require_decidable(tsft: VertexTsft) -> None:
    if tsft.n == 0:
        raise EmptyShiftError("empty shift: no symbols")


def decide_irreducible(tsft: VertexTsft) -> IrreducibilityReport:
    """Per-pair subset-state cover fixpoint; exact and terminating."""
    _require_decidable(tsft)
    if tsft.size_mismatch:
        cex = None
        # A symbol padded in from the smaller matrix can never be reached in
        # every direction; surface a concrete failing pair when a cycle exists.
        small = min(tsft.original_sizes)
        cex = find_zero_cycle(tsft, 0, small)
        return IrreducibilityReport(
            verdict=False,
            witnesses={},
            counterexample=cex,
            bound_used=irreducibility_bound(tsft.n),
            justification="size-mismatch: the direction matrices have unequal "
            "sizes, so some symbol pair can never be connected",
            failing_pairs=((0, small),),
        )
    if not is_essential(tsft):
        raise EmptyShiftError(
            "shift is not essential; essentialize before deciding"
        )

    tables = _delta_tables(tsft)
    witnesses: dict[tuple[int, int], CompletePrefixSet] = {}
    failing: list[tuple[int, int]] = []
    for i in range(tsft.n):
        start = frozenset([i])
        delta = lambda k, s: _delta(tsft, tables[k], k, s)  # noqa: E731
        for j in range(tsft.n):
            good = lambda s: j in s  # noqa: E731
            rank, succs = _cover_fixpoint(start, delta, good, tsft.d)
            if all(succs[start][k] in rank for k in range(tsft.d)):
                witnesses[(i, j)] = _reconstruct_cps(
                    start, succs, rank, good, tsft.d
                )
            else:
                failing.append((i, j))
    if not failing:
        return IrreducibilityReport(
            verdict=True,
            witnesses=witnesses,
            counterexample=None,
            bound_used=irreducibility_bound(tsft.n),
            justification="per-pair-cps-witness: every symbol pair is joined "
            "by a complete prefix set of positive connecting words",
        )
    cex = None
    for i, j in failing:
        cex = find_zero_cycle(tsft, i, j)
        if cex is not None:
            break
    justification = (
        "zero-cycle: a cycle word keeps the pair entry at zero on every prefix"
        if cex is not None
        else "no, witness unavailable: a pair fails the cover fixpoint but no "
        "short zero cycle was located"
    )
    return IrreducibilityReport(
        verdict=False,
        witnesses=witnesses,
        counterexample=cex,
        bound_used=irreducibility_bound(tsft.n),
        justification=justification,
        failing_pairs=tuple(failing),
    )


# ---------------------------------------------------------------------------
# Mixing


def _bool_rows(mat: Matrix) -> tuple[int, ...]:
    return tuple(
        sum(1 << j for j, v in enumerate(row) if v) for row in mat
    )


def decide_mixing(tsft: VertexTsft) -> MixingReport:
    """Cover fixpoint over boolean positivity patterns of word matrices."""
    _require_decidable(tsft)
    if tsft.size_mismatch:
        return MixingReport(
            verdict=False,
            witness=None,
            k_found=None,
            justification="size-mismatch: a mixing shift is irreducible, and "
            "unequal matrix sizes already preclude irreducibility",
        )
    if not is_essential(tsft):
        raise EmptyShiftError(
            "shift is not essential; essentialize before deciding"
        )
    n, d = tsft.n, tsft.d
    full = (1 << n) - 1
    mats = [_bool_rows(a) for a in tsft.matrices]
    cols = [
        [sum(1 << i for i in range(n) if a[i][j]) for j in range(n)]
        for a in tsft.matrices
    ]

    def step(k: int, state: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for bits in state:
            row = 0
            for j in range(n):
                if bits & cols[k][j]:
                    row |= 1 << j
            out.append(row)
        return tuple(out)

    identity = tuple(1 << i for i in range(n))
    good = lambda s: all(r == full for r in s)  # noqa: E731
    cache: list[dict] = [dict() for _ in range(d)]

    def delta(k: int, s):
        hit = cache[k].get(s)
        if hit is None:
            hit = step(k, s)
            cache[k][s] = hit
        return hit

    rank, succs = _cover_fixpoint(identity, delta, good, d)
    if all(succs[identity][k] in rank for k in range(d)):
        cps = _reconstruct_cps(identity, succs, rank, good, d)
        return MixingReport(
            verdict=True,
            witness=cps,
            k_found=cps.depth,
            justification="uniform-cps-witness: one complete prefix set makes "
            "every word matrix entrywise positive",
        )
    return MixingReport(
        verdict=False,
        witness=None,
        k_found=None,
        justification="no uniform complete prefix set of all-positive word "
        "matrices exists (boolean-pattern cover fixpoint is exhaustive)",
    )


# ---------------------------------------------------------------------------
# Shortcuts and witnesses


def _classically_irreducible(mat: Matrix) -> bool:
    """Standard digraph irreducibility: every pair connected by some power."""
    n = len(mat)
    reach = [set(j for j in range(n) if mat[i][j]) for i in range(n)]
    for i in range(n):
        frontier = set(reach[i])
        seen = set(frontier)
        while frontier:
            nxt = {k for j in frontier for k in range(n) if mat[j][k]}
            frontier = nxt - seen
            seen |= nxt
        if len(seen) != n:
            return False
    return True


def commuting_2x2_shortcut(tsft: VertexTsft) -> Optional[bool]:
    """Sufficient condition only: two commuting irreducible 2x2 matrices.

    Returns True when it applies, None (not False) otherwise.
    """
    if tsft.n != 2 or tsft.d != 2 or tsft.size_mismatch:
        return None
    a0, a1 = tsft.matrices
    if not (_classically_irreducible(a0) and _classically_irreducible(a1)):
        return None
    from .graphs import mat_mul

    if mat_mul(a0, a1) != mat_mul(a1, a0):
        return None
    return True


def find_zero_cycle(
    tsft: VertexTsft, i: int, j: int
) -> Optional[ZeroCycleWitness]:
    """Shortest word w with w_last = w_first, terminal-state set of w equal to
    that of its first letter, and entry (i, j) zero on every nonempty prefix.

    The search runs over the product of the subset state from {i} (tracking
    the prefix-zero condition) and the terminal-state set from the full
    vertex set (tracking the cycle condition); it is complete over that
    finite space, so absence means no such cycle exists at any length.
    """
    n, d = tsft.n, tsft.d
    every = frozenset(range(n))
    tables = _delta_tables(tsft)

    def dk(k: int, s: frozenset) -> frozenset:
        return _delta(tsft, tables[k], k, s)

    for first in range(d):
        r0 = dk(first, frozenset([i]))
        if j in r0:
            continue
        v_first = dk(first, every)
        start = (r0, v_first, first)
        parents: dict = {start: None}
        queue = [start]
        goal = None  # (closing direction, state the cycle closes from)
        while queue and goal is None:
            nxt = []
            for state in queue:
                r, v, _last = state
                for k in range(d):
                    r2, v2 = dk(k, r), dk(k, v)
                    if j in r2:
                        continue
                    if k == first and v2 == v_first:
                        goal = (k, state)
                        break
                    child = (r2, v2, k)
                    if child in parents:
                        continue
                    parents[child] = state
                    nxt.append(child)
                if goal is not None:
                    break
            queue = nxt
        if goal is None:
            continue
        close_k, node = goal
        letters = [str(close_k)]
        states = []
        while node is not None:
            letters.append(str(node[2]))
            states.append(node[1])
            node = parents[node]
        letters.reverse()
        states.reverse()
        states.append(dk(close_k, states[-1] if states else v_first))
        return ZeroCycleWitness(
            pair=(i, j),
            word="".join(letters),
            trace=tuple(tuple(sorted(v)) for v in states),
        )
    return None


# ---------------------------------------------------------------------------
# Validators (independent re-checks used by the report verifier and tests)


def validate_pair_witness(
    tsft: VertexTsft, i: int, j: int, words
) -> bool:
    """CPS whose every word makes entry (i, j) of the word matrix positive."""
    ws = list(words)
    if not is_complete_prefix_set(ws, tsft.d):
        return False
    if any(w == "" for w in ws):
        return False
    return all(word_matrix(tsft, w)[i][j] > 0 for w in ws)


def validate_mixing_witness(tsft: VertexTsft, words) -> bool:
    ws = list(words)
    if not is_complete_prefix_set(ws, tsft.d):
        return False
    if any(w == "" for w in ws):
        return False
    return all(mat_all_positive(word_matrix(tsft, w)) for w in ws)


def validate_zero_cycle(tsft: VertexTsft, witness: ZeroCycleWitness) -> bool:
    w = witness.word
    i, j = witness.pair
    if len(w) < 2 or w[0] != w[-1]:
        return False
    try:
        for ln in range(1, len(w) + 1):
            if word_matrix(tsft, w[:ln])[i][j] != 0:
                return False
    except (ValueError, IndexError):
        return False
    every = frozenset(range(tsft.n))
    tables = _delta_tables(tsft)
    v = every
    trace = []
    for ch in w:
        v = _delta(tsft, tables[int(ch)], int(ch), v)
        trace.append(tuple(sorted(v)))
    if trace != list(witness.trace):
        return False
    return trace[-1] == trace[0]


# ---------------------------------------------------------------------------
# Definition-level brute force (one-sided oracle)


def brute_force_irreducible(
    tsft: VertexTsft,
    height: int = 1,
    depth_cap: int = 8,
    block_cap: int = 4096,
) -> bool:
    """Exhaustive single-tree search per the definition of irreducibility.

    For every ordered pair of allowed height-``height`` blocks (u, v), looks
    for one consistently labeled finite tree carrying u at the root and v at
    every element of some complete prefix set of depth <= ``depth_cap``.
    True is authoritative; False only means "not within this depth".
    """
    _require_decidable(tsft)
    count = enumerate_blocks(tsft, height, list_cap=block_cap)
    if count.blocks is None:
        raise CapExceededError(
            f"{count.total} blocks of height {height} exceed the cap {block_cap}"
        )
    blocks = count.blocks
    n, d = tsft.n, tsft.d
    leaf_words = [w for w in _leaf_words(d, height)]

    for u in blocks:
        for v in blocks:
            if not _connects(tsft, u, v, leaf_words, depth_cap):
                return False
    return True


def _leaf_words(d: int, height: int) -> list[str]:
    from .words import all_words

    return list(all_words(d, height - 1))


def _connects(
    tsft: VertexTsft, u: Block, v: Block, leaf_words, depth_cap: int
) -> bool:
    """One tree with u at the root and v planted on a full frontier below."""
    v_root = v.root
    cache: dict[tuple[int, int], bool] = {}

    def cover(symbol: int, budget: int) -> bool:
        # Planting v here ends this branch; v itself is allowed and the
        # graph is essential, so the tree extends below the planted copy.
        if symbol == v_root:
            return True
        key = (symbol, budget)
        hit = cache.get(key)
        if hit is not None:
            return hit
        ok = False
        if budget > 0:
            ok = all(
                any(cover(c, budget - 1) for c in tsft.successors(k, symbol))
                for k in range(tsft.d)
            )
        cache[key] = ok
        return ok

    # Frontier elements must sit strictly below the support of u.
    for w in leaf_words:
        symbol = u.label(w)
        start_ok = all(
            any(cover(c, depth_cap - 1) for c in tsft.successors(k, symbol))
            for k in range(tsft.d)
        )
        if not start_ok:
            return False
    return True
