"""Vertex tree-shifts, labeled graphs, and symbolic adjacency matrices.

A vertex tree-shift on a d-ary tree is given by a d-tuple of n x n 0-1
matrices (A_0, ..., A_{d-1}); a labeling of the infinite tree is admitted
when A_k(parent, child) = 1 along every direction-k edge.  The symbolic
adjacency matrix collects, per vertex pair, the set of direction words
labeling connecting paths; its powers live in the idempotent semiring of
finite word languages (set union / elementwise concatenation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .words import WORD_KEY, check_word

Matrix = tuple[tuple[int, ...], ...]


class TsftFormatError(ValueError):
    """Malformed tree-shift input file."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _freeze(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p))
        for i in range(n)
    )


def mat_all_positive(a: Matrix) -> bool:
    return all(v > 0 for row in a for v in row)


@dataclass(frozen=True)
class VertexTsft:
    """Alphabet {0..n-1} plus one 0-1 adjacency matrix per direction."""

    n: int
    d: int
    matrices: tuple[Matrix, ...]
    #: Original matrix sizes before zero-padding (differ only for
    #: size-mismatched input, which can never be irreducible).
    original_sizes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 1 or self.d != len(self.matrices):
            raise ValueError("need one matrix per direction")
        if not self.original_sizes:
            object.__setattr__(self, "original_sizes", (self.n,) * self.d)
        for a in self.matrices:
            if len(a) != self.n or any(len(row) != self.n for row in a):
                raise ValueError("matrix size does not match alphabet size")
            if any(v not in (0, 1) for row in a for v in row):
                raise ValueError("matrix entries must be 0 or 1")

    @classmethod
    def from_matrices(
        cls, matrices: Sequence[Sequence[Sequence[int]]], d: Optional[int] = None
    ) -> "VertexTsft":
        """Build from possibly unequal-sized matrices, zero-padding the smaller."""
        mats = [_freeze(a) for a in matrices]
        if d is None:
            d = len(mats)
        sizes = tuple(len(a) for a in mats)
        n = max(sizes)
        padded = []
        for a in mats:
            m = len(a)
            rows = [row + (0,) * (n - m) for row in a] + [(0,) * n] * (n - m)
            padded.append(tuple(rows))
        return cls(n=n, d=d, matrices=tuple(padded), original_sizes=sizes)

    @property
    def size_mismatch(self) -> bool:
        return len(set(self.original_sizes)) > 1

    def allows_edge(self, k: int, parent: int, child: int) -> bool:
        return self.matrices[k][parent][child] == 1

    def successors(self, k: int, symbol: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.matrices[k][symbol][j])


@dataclass(frozen=True)
class EssentializeResult:
    tsft: Optional[VertexTsft]  # None when every vertex is stranded
    removed: tuple[int, ...]  # original vertex indices, deletion order
    kept: tuple[int, ...]  # original index of each surviving vertex


def is_essential(tsft: VertexTsft) -> bool:
    return not _stranded(tsft.matrices, list(range(tsft.n)))


def _stranded(matrices: tuple[Matrix, ...], alive: list[int]) -> list[int]:
    """Vertices lacking an outgoing edge in some direction or incoming in all."""
    bad = []
    for v in alive:
        out_ok = all(any(a[v][w] for w in alive) for a in matrices)
        in_ok = any(a[w][v] for a in matrices for w in alive)
        if not (out_ok and in_ok):
            bad.append(v)
    return bad


def essentialize(tsft: VertexTsft) -> EssentializeResult:
    """Iteratively delete stranded vertices until the graph is essential."""
    alive = list(range(tsft.n))
    removed: list[int] = []
    while alive:
        bad = _stranded(tsft.matrices, alive)
        if not bad:
            break
        for v in bad:
            alive.remove(v)
        removed.extend(bad)
    if not alive:
        return EssentializeResult(None, tuple(removed), ())
    index = {v: i for i, v in enumerate(alive)}
    mats = tuple(
        tuple(tuple(a[v][w] for w in alive) for v in alive) for a in tsft.matrices
    )
    reduced = VertexTsft(n=len(alive), d=tsft.d, matrices=mats)
    return EssentializeResult(reduced, tuple(removed), tuple(alive))


def word_matrix(tsft: VertexTsft, word: str) -> Matrix:
    """Path-count matrix A_x: entry (i, j) counts labeled paths from i to j
    reading the word left to right (first letter = edge out of the root).
    The empty word gives the identity."""
    check_word(word, tsft.d)
    acc = mat_identity(tsft.n)
    for ch in word:
        acc = mat_mul(acc, tsft.matrices[int(ch)])
    return acc


# ---------------------------------------------------------------------------
# Labeled graph view


@dataclass(frozen=True)
class LabeledGraph:
    n: int
    edges: tuple[tuple[int, int, int], ...]  # (source, target, direction)


def labeled_graph(tsft: VertexTsft) -> LabeledGraph:
    edges = tuple(
        sorted(
            (i, j, k)
            for k, a in enumerate(tsft.matrices)
            for i in range(tsft.n)
            for j in range(tsft.n)
            if a[i][j]
        )
    )
    return LabeledGraph(tsft.n, edges)


def to_dot(tsft: VertexTsft) -> str:
    """Deterministic DOT export, one edge per (source, target, direction)."""
    lines = ["digraph tsft {", "  rankdir=LR;"]
    for v in range(tsft.n):
        lines.append(f"  {v};")
    for i, j, k in labeled_graph(tsft).edges:
        lines.append(f'  {i} -> {j} [label="{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Symbolic adjacency matrices

Language = frozenset[str]


@dataclass(frozen=True)
class SymbolicMatrix:
    """n x n matrix of finite word languages; the empty set is the zero."""

    n: int
    entries: tuple[tuple[Language, ...], ...]

    def entry(self, i: int, j: int) -> Language:
        return self.entries[i][j]


def symbolic_adjacency(tsft: VertexTsft) -> SymbolicMatrix:
    """S(i, j) = set of directions k with A_k(i, j) = 1, as length-1 words."""
    entries = tuple(
        tuple(
            frozenset(str(k) for k in range(tsft.d) if tsft.matrices[k][i][j])
            for j in range(tsft.n)
        )
        for i in range(tsft.n)
    )
    return SymbolicMatrix(tsft.n, entries)


def symbolic_mul(a: SymbolicMatrix, b: SymbolicMatrix) -> SymbolicMatrix:
    n = a.n
    entries = tuple(
        tuple(
            frozenset(
                x + y
                for m in range(n)
                for x in a.entries[i][m]
                for y in b.entries[m][j]
            )
            for j in range(n)
        )
        for i in range(n)
    )
    return SymbolicMatrix(n, entries)


def symbolic_power(s: SymbolicMatrix, k: int) -> SymbolicMatrix:
    """k-th power in the language semiring; every entry word has length k."""
    if k < 1:
        raise ValueError("power must be >= 1")
    acc = s
    for _ in range(k - 1):
        acc = symbolic_mul(acc, s)
    return acc


def format_language(lang: Language) -> str:
    return ",".join(sorted(lang, key=WORD_KEY)) if lang else "-"


# ---------------------------------------------------------------------------
# Text format: "tsft n=<n> d=<d>" header, one n x n 0-1 block per direction,
# matrices separated by blank lines.  Smaller blocks are allowed (and padded)
# so that size-mismatched inputs can be expressed.


def format_tsft(tsft: VertexTsft) -> str:
    chunks = [f"tsft n={tsft.n} d={tsft.d}"]
    for a in tsft.matrices:
        chunks.append("")
        for row in a:
            chunks.append(" ".join(str(v) for v in row))
    return "\n".join(chunks) + "\n"


def parse_tsft(text: str) -> VertexTsft:
    lines = text.splitlines()
    header_no = None
    for no, raw in enumerate(lines, start=1):
        if raw.strip() and not raw.lstrip().startswith("#"):
            header_no = no
            break
    if header_no is None:
        raise TsftFormatError("empty input")
    header = lines[header_no - 1].split()
    if not header or header[0] != "tsft":
        raise TsftFormatError("expected 'tsft n=<n> d=<d>' header", header_no)
    fields = {}
    for tok in header[1:]:
        if "=" not in tok:
            raise TsftFormatError(f"bad header token {tok!r}", header_no)
        key, _, val = tok.partition("=")
        if not val.isdigit():
            raise TsftFormatError(f"bad header value {tok!r}", header_no)
        fields[key] = int(val)
    if "n" not in fields or "d" not in fields:
        raise TsftFormatError("header must give n= and d=", header_no)
    n, d = fields["n"], fields["d"]
    if n < 1 or d < 1:
        raise TsftFormatError("n and d must be positive", header_no)

    matrices: list[list[list[int]]] = []
    current: list[list[int]] = []
    for no in range(header_no + 1, len(lines) + 1):
        raw = lines[no - 1]
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            if current:
                matrices.append(current)
                current = []
            continue
        row = []
        for tok in stripped.split():
            if tok not in ("0", "1"):
                raise TsftFormatError(f"matrix entry must be 0 or 1, got {tok!r}", no)
            row.append(int(tok))
        if current and len(row) != len(current[0]):
            raise TsftFormatError("ragged matrix row", no)
        current.append(row)
        if len(current) == len(current[0]) == n:
            matrices.append(current)
            current = []
    if current:
        matrices.append(current)
    if len(matrices) != d:
        raise TsftFormatError(f"expected {d} matrices, found {len(matrices)}")
    for a in matrices:
        if len(a) != len(a[0]):
            raise TsftFormatError(f"matrix is {len(a)}x{len(a[0])}, must be square")
        if len(a) > n:
            raise TsftFormatError(f"matrix larger than declared n={n}")
    return VertexTsft.from_matrices(matrices, d=d)
