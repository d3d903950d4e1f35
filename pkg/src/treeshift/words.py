"""Direction words and complete prefix sets.

Words over the direction alphabet {0, ..., d-1} are plain strings of digit
characters; the empty string is the empty word.  A complete prefix set (CPS)
is a finite antichain under the prefix order whose elements form the leaf set
of a finite d-ary tree in which every internal node has all d children.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

EPSILON = ""

#: Canonical ordering for word collections: shallow first, then lexicographic.
WORD_KEY = lambda w: (len(w), w)  # noqa: E731


def check_word(word: str, d: int) -> None:
    """Raise ValueError unless every letter of ``word`` is a digit < d."""
    for ch in word:
        if not ch.isdigit() or int(ch) >= d:
            raise ValueError(f"letter {ch!r} out of range for arity {d}")


def all_words(d: int, length: int) -> Iterator[str]:
    """All words of exactly the given length, lexicographic order."""
    digits = [str(i) for i in range(d)]
    for tup in itertools.product(digits, repeat=length):
        yield "".join(tup)


def words_up_to(d: int, max_len: int) -> Iterator[str]:
    """All words of length <= max_len, shallow first."""
    for length in range(max_len + 1):
        yield from all_words(d, length)


def is_prefix(p: str, w: str) -> bool:
    return w.startswith(p)


def is_prefix_set(words: Iterable[str]) -> bool:
    """True iff no word is a prefix of another (the antichain condition)."""
    ws = sorted(set(words), key=len)
    for i, p in enumerate(ws):
        for w in ws[i + 1 :]:
            if w != p and w.startswith(p):
                return False
    return True


def prefix_set_depth(words: Iterable[str]) -> int:
    """The length of the longest word in the set."""
    return max((len(w) for w in words), default=0)


def has_prefix_in(word: str, words: Iterable[str]) -> bool:
    return any(word.startswith(p) for p in words)


def is_complete_prefix_set(words: Iterable[str], d: int) -> bool:
    """True iff ``words`` is a prefix set covering every sufficiently long word.

    Checked by exhaustive enumeration of all words of the maximal length.
    The empty set is not a CPS; {empty word} is.
    """
    ws = set(words)
    if not ws:
        return False
    try:
        for w in ws:
            check_word(w, d)
    except ValueError:
        return False
    if not is_prefix_set(ws):
        return False
    depth = prefix_set_depth(ws)
    return all(has_prefix_in(x, ws) for x in all_words(d, depth))


@dataclass(frozen=True)
class CompletePrefixSet:
    """A validated CPS with a canonical (shallow-first) word order."""

    words: tuple[str, ...]
    d: int

    def __post_init__(self) -> None:
        if not is_complete_prefix_set(self.words, self.d):
            raise ValueError(f"not a complete prefix set: {sorted(self.words)}")
        ordered = tuple(sorted(set(self.words), key=WORD_KEY))
        object.__setattr__(self, "words", ordered)

    @property
    def depth(self) -> int:
        """The length of the longest element (|P|)."""
        return prefix_set_depth(self.words)

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def covers(self, word: str) -> bool:
        """True iff ``word`` has a prefix in this set."""
        return has_prefix_in(word, self.words)

    def refined_to_uniform(self) -> "CompletePrefixSet":
        """Replace each element by all its extensions to the maximal length."""
        depth = self.depth
        out = []
        for w in self.words:
            for suffix in all_words(self.d, depth - len(w)):
                out.append(w + suffix)
        return CompletePrefixSet(tuple(out), self.d)


def extract_cps(
    good: Callable[[str], bool], d: int, max_len: int
) -> Optional[CompletePrefixSet]:
    """Shallowest frontier of good words forming a CPS, if one exists.

    Uses the cover recursion: a node is covered if it is good, or all of its
    d children are covered; recursion truncated at depth ``max_len``.  Good
    nodes are accepted before recursing, so the result has minimal depth
    along every branch.
    """
    cache: dict[str, bool] = {}

    def cover(x: str) -> bool:
        if x in cache:
            return cache[x]
        if good(x):
            cache[x] = True
        elif len(x) >= max_len:
            cache[x] = False
        else:
            cache[x] = all(cover(x + str(k)) for k in range(d))
        return cache[x]

    if not cover(EPSILON):
        return None

    frontier: list[str] = []

    def collect(x: str) -> None:
        if good(x):
            frontier.append(x)
        else:
            for k in range(d):
                collect(x + str(k))

    collect(EPSILON)
    return CompletePrefixSet(tuple(frontier), d)
