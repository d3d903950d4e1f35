"""Finite tree patterns, blocks, forbidden-set shifts, and block counting.

A block of height h labels every node of the complete d-ary tree of depth
h-1.  Labels are stored in canonical node order (shallow first, then
lexicographic by node word), which fixes serialization, hashing, and the
total order used for deterministic enumeration.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .graphs import VertexTsft
from .words import WORD_KEY, all_words, words_up_to


class HeightMismatchError(ValueError):
    """Block too short for the check requested against it."""


@functools.lru_cache(maxsize=None)
def nodes_for(d: int, height: int) -> tuple[str, ...]:
    """Canonical node order of the support of a height-``height`` block."""
    return tuple(sorted(words_up_to(d, height - 1), key=WORD_KEY))


@functools.lru_cache(maxsize=None)
def _node_index(d: int, height: int) -> dict[str, int]:
    return {w: i for i, w in enumerate(nodes_for(d, height))}


@dataclass(frozen=True, order=True)
class Block:
    """A fully labeled d-ary tree of finite height."""

    d: int
    height: int
    labels: tuple[int, ...]  # aligned with nodes_for(d, height)

    def __post_init__(self) -> None:
        if self.height < 1:
            raise ValueError("block height must be >= 1")
        if len(self.labels) != len(nodes_for(self.d, self.height)):
            raise ValueError("label count does not match support size")

    @classmethod
    def from_map(cls, d: int, height: int, labels: dict[str, int]) -> "Block":
        nodes = nodes_for(d, height)
        missing = [w for w in nodes if w not in labels]
        if missing:
            raise ValueError(f"missing labels at {missing[:3]}")
        return cls(d, height, tuple(labels[w] for w in nodes))

    @property
    def root(self) -> int:
        return self.labels[0]

    def label(self, word: str) -> int:
        return self.labels[_node_index(self.d, self.height)[word]]

    def as_map(self) -> dict[str, int]:
        return dict(zip(nodes_for(self.d, self.height), self.labels))

    def subblock(self, word: str, height: Optional[int] = None) -> "Block":
        """The block of the given height rooted at ``word``."""
        if height is None:
            height = self.height - len(word)
        if len(word) + height > self.height:
            raise HeightMismatchError("sub-block extends below the support")
        return Block(
            self.d,
            height,
            tuple(self.label(word + y) for y in nodes_for(self.d, height)),
        )

    def child(self, k: int) -> "Block":
        """The shift of the block in direction k (height drops by one)."""
        if self.height < 2:
            raise HeightMismatchError("height-1 block has no child blocks")
        return self.subblock(str(k))

    def top(self, height: int) -> "Block":
        """Truncation to the top ``height`` levels."""
        return self.subblock("", height)

    def to_text(self) -> str:
        """Nested-parentheses form, e.g. ``1(0(1,1),1(0,1))``."""

        def render(word: str, h: int) -> str:
            lab = str(self.label(word))
            if h == 1:
                return lab
            kids = ",".join(render(word + str(k), h - 1) for k in range(self.d))
            return f"{lab}({kids})"

        return render("", self.height)


def parse_block(text: str, d: int) -> Block:
    """Inverse of :meth:`Block.to_text`."""
    pos = 0

    def error(msg: str) -> ValueError:
        return ValueError(f"block text, column {pos + 1}: {msg}")

    def read_label() -> int:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise error("expected a label")
        return int(text[start:pos])

    def read_node() -> tuple[dict[str, int], int]:
        nonlocal pos
        labels = {"": read_label()}
        if pos < len(text) and text[pos] == "(":
            pos += 1
            height = None
            for k in range(d):
                if k:
                    if pos >= len(text) or text[pos] != ",":
                        raise error("expected ','")
                    pos += 1
                sub, h = read_node()
                if height is None:
                    height = h
                elif h != height:
                    raise error("sibling subtrees of unequal height")
                labels.update({str(k) + w: v for w, v in sub.items()})
            if pos >= len(text) or text[pos] != ")":
                raise error("expected ')'")
            pos += 1
            return labels, (height or 0) + 1
        return labels, 1

    labels, height = read_node()
    if pos != len(text.rstrip()):
        raise error("trailing characters")
    return Block.from_map(d, height, labels)


def all_blocks(alphabet_size: int, d: int, height: int) -> Iterator[Block]:
    """All blocks of the given height over a free alphabet, canonical order."""
    size = len(nodes_for(d, height))
    for labels in itertools.product(range(alphabet_size), repeat=size):
        yield Block(d, height, labels)


def tree_distance(t: Block, u: Block):
    """2^{-n} for the minimal disagreement depth n; 0 when equal."""
    from fractions import Fraction

    if t.d != u.d or t.height != u.height:
        raise HeightMismatchError("distance requires a common support")
    best = None
    for word, a, b in zip(nodes_for(t.d, t.height), t.labels, u.labels):
        if a != b:
            best = len(word) if best is None else min(best, len(word))
    if best is None:
        return Fraction(0)
    return Fraction(1, 2**best)


# ---------------------------------------------------------------------------
# Tree-shifts by forbidden sets


@dataclass(frozen=True)
class ForbiddenTsft:
    """Finite-type tree-shift given by forbidden blocks of a single height.

    Mixed-height inputs are normalized by extending shorter forbidden blocks
    to the maximal height in every possible way (every extension of a
    forbidden block is forbidden).
    """

    alphabet_size: int
    d: int
    forbidden: frozenset[Block]

    def __post_init__(self) -> None:
        if self.alphabet_size < 1:
            raise ValueError("alphabet must be nonempty")
        blocks = set(self.forbidden)
        for b in blocks:
            if b.d != self.d:
                raise ValueError("forbidden block arity mismatch")
            if b.height < 2:
                raise ValueError("forbidden blocks must have height >= 2")
            if any(v >= self.alphabet_size for v in b.labels):
                raise ValueError("forbidden block label out of alphabet")
        height = max((b.height for b in blocks), default=2)
        normalized = set()
        for b in blocks:
            if b.height == height:
                normalized.add(b)
            else:
                normalized.update(_extensions(b, self.alphabet_size, height))
        object.__setattr__(self, "forbidden", frozenset(normalized))

    @property
    def forbidden_height(self) -> int:
        return max((b.height for b in self.forbidden), default=2)

    @property
    def markov_height(self) -> int:
        """k for a k-height finite-type shift (forbidden blocks of height k+1)."""
        return self.forbidden_height - 1


def _extensions(block: Block, alphabet_size: int, height: int) -> Iterator[Block]:
    """All blocks of the target height whose top agrees with ``block``."""
    base = block.as_map()
    free = [w for w in nodes_for(block.d, height) if w not in base]
    for choice in itertools.product(range(alphabet_size), repeat=len(free)):
        labels = dict(base)
        labels.update(zip(free, choice))
        yield Block.from_map(block.d, height, labels)


def block_is_allowed(block: Block, tsft: ForbiddenTsft) -> bool:
    """True iff no forbidden block occurs rooted at any node of ``block``."""
    h = tsft.forbidden_height
    if block.height < h:
        raise HeightMismatchError(
            f"block of height {block.height} cannot be checked against "
            f"forbidden blocks of height {h}"
        )
    if not tsft.forbidden:
        return True
    for word in words_up_to(block.d, block.height - h):
        if block.subblock(word, h) in tsft.forbidden:
            return False
    return True


def allowed_blocks(tsft: ForbiddenTsft, height: int) -> list[Block]:
    """Locally allowed blocks: no forbidden sub-block anywhere in the support."""
    out = []
    for b in all_blocks(tsft.alphabet_size, tsft.d, height):
        if height >= tsft.forbidden_height:
            if block_is_allowed(b, tsft):
                out.append(b)
        else:
            out.append(b)
    return out


# ---------------------------------------------------------------------------
# Block counting on vertex tree-shifts


@dataclass(frozen=True)
class BlockCount:
    m: int
    per_root: tuple[int, ...]  # exact count of height-m blocks per root symbol
    total: int
    blocks: Optional[tuple[Block, ...]]  # explicit list, when under the cap


def vertex_allows_block(tsft: VertexTsft, block: Block) -> bool:
    """Every parent-child edge of the block obeys the direction matrices."""
    for word in words_up_to(block.d, block.height - 2):
        for k in range(block.d):
            if not tsft.allows_edge(k, block.label(word), block.label(word + str(k))):
                return False
    return True


def enumerate_blocks(tsft: VertexTsft, m: int, list_cap: int = 10**4) -> BlockCount:
    """Counts of height-m blocks via the product recursion, exact integers.

    The explicit block list is produced only when the total fits ``list_cap``.
    """
    if m < 1:
        raise ValueError("height must be >= 1")
    counts = [1] * tsft.n
    for _ in range(m - 1):
        nxt = []
        for a in range(tsft.n):
            prod = 1
            for k in range(tsft.d):
                prod *= sum(counts[b] for b in tsft.successors(k, a))
            nxt.append(prod)
        counts = nxt
    total = sum(counts)
    blocks: Optional[tuple[Block, ...]] = None
    if total <= list_cap:
        blocks = tuple(
            b
            for root in range(tsft.n)
            for b in _assemble_blocks(tsft, root, m)
        )
        assert len(blocks) == total
    return BlockCount(m=m, per_root=tuple(counts), total=total, blocks=blocks)


def _assemble_blocks(tsft: VertexTsft, root: int, m: int) -> Iterator[Block]:
    if m == 1:
        yield Block(tsft.d, 1, (root,))
        return
    child_lists = [
        [
            blk
            for b in tsft.successors(k, root)
            for blk in _assemble_blocks(tsft, b, m - 1)
        ]
        for k in range(tsft.d)
    ]
    for kids in itertools.product(*child_lists):
        labels = {"": root}
        for k, kid in enumerate(kids):
            labels.update({str(k) + w: v for w, v in kid.as_map().items()})
        yield Block.from_map(tsft.d, m, labels)


# ---------------------------------------------------------------------------
# Higher-block presentations


@dataclass(frozen=True)
class HigherBlockTsft:
    tsft: ForbiddenTsft  # over the relabeled alphabet {0..N-1}
    alphabet: tuple[Block, ...]  # alphabet[i] is the m-block named i
    markov: bool  # False when m is too small to absorb the forbidden height


def _combine(d: int, m: int, parent: Block, children: Sequence[Block]) -> Block:
    """The (m+1)-pattern determined by a parent m-block and its d child m-blocks."""
    labels = parent.as_map()
    for k, child in enumerate(children):
        for w, v in child.as_map().items():
            labels[str(k) + w] = v
    return Block.from_map(d, m + 1, labels)


def higher_block_tsft(tsft: ForbiddenTsft, m: int) -> HigherBlockTsft:
    """Present the shift on the alphabet of its allowed m-blocks.

    The new forbidden set consists of 2-blocks over the m-block alphabet that
    violate overlap consistency or whose combined (m+1)-pattern contains one
    of the original forbidden blocks.  For m >= the original forbidden height
    minus one, the result captures every original constraint (it is Markov).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    d = tsft.d
    alphabet = tuple(sorted(allowed_blocks(tsft, m)))
    index = {b: i for i, b in enumerate(alphabet)}
    markov = m >= tsft.markov_height

    forbidden: set[Block] = set()
    hf = tsft.forbidden_height
    for parent in alphabet:
        tops = [parent.child(k) if m >= 2 else None for k in range(d)]
        for kids in itertools.product(alphabet, repeat=d):
            ok = True
            if m >= 2:
                ok = all(kids[k].top(m - 1) == tops[k] for k in range(d))
            if ok and m + 1 >= hf:
                combined = _combine(d, m, parent, kids)
                ok = block_is_allowed(combined, tsft)
            if not ok:
                labels = {"": index[parent]}
                labels.update({str(k): index[kids[k]] for k in range(d)})
                forbidden.add(Block.from_map(d, 2, labels))
    new = ForbiddenTsft(
        alphabet_size=len(alphabet), d=d, forbidden=frozenset(forbidden)
    )
    return HigherBlockTsft(tsft=new, alphabet=alphabet, markov=markov)


@dataclass(frozen=True)
class VertexPresentation:
    tsft: VertexTsft
    alphabet: tuple[Block, ...]  # alphabet[i] is the block that symbol i names


def vertex_from_forbidden(tsft: ForbiddenTsft) -> VertexPresentation:
    """Conjugate vertex tree-shift of a finite-type shift.

    Symbols are the locally allowed blocks of the forbidden height; the
    direction-k matrix admits (U, W) when the k-shift of U overlaps the top
    of W.  Every original constraint is then carried by the alphabet itself.
    """
    h = tsft.forbidden_height
    alphabet = tuple(sorted(allowed_blocks(tsft, h)))
    index = {b: i for i, b in enumerate(alphabet)}
    n = len(alphabet)
    mats = []
    for k in range(tsft.d):
        rows = []
        for u in alphabet:
            shifted = u.child(k)
            rows.append(
                tuple(1 if w.top(h - 1) == shifted else 0 for w in alphabet)
            )
        mats.append(tuple(rows))
    vertex = VertexTsft(n=n, d=tsft.d, matrices=tuple(mats))
    return VertexPresentation(tsft=vertex, alphabet=alphabet)
