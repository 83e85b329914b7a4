"""Exhaustive verification of partition arrow properties at desk scale.

The arrow S -> (H)^P_k holds when every k-coloring of the copies of P in S
admits a copy of H all of whose P-copies share one color.  Inputs must be
ordered structures: orderedness makes every finite substructure rigid, so
copies are plain subsets and coloring substructures is the same thing as
coloring tuples.  Unordered inputs are rejected for exactly that reason.

The product version colors grid cells of a power and asks for a
monochromatic combinatorial box; the negative search walks column by column
instead of enumerating all colorings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CapExceeded, InvalidStructure, ReductLabError
from .structures import FiniteStructure, chain, embeddings


def is_ordered_structure(s: FiniteStructure) -> bool:
    lt = s.tuples("<")
    if ("<", 2) not in s.signature:
        return False
    for i in range(s.size):
        if (i, i) in lt:
            return False
        for j in range(s.size):
            if i != j and ((i, j) in lt) == ((j, i) in lt):
                return False
    for i, j in lt:
        for j2, k in lt:
            if j == j2 and (i, k) not in lt and i != k:
                return False
    return True


def copies(p: FiniteStructure, s: FiniteStructure) -> list[tuple[int, ...]]:
    """Copies of p in s as sorted point sets; p and s must be ordered, so
    every copy corresponds to exactly one embedding."""
    embs = embeddings(p, s)
    return sorted({tuple(sorted(e)) for e in embs})


@dataclass(frozen=True)
class ArrowQuery:
    S: FiniteStructure
    H: FiniteStructure
    P: FiniteStructure
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ReductLabError("at least one color is required")
        for name, s in (("S", self.S), ("H", self.H), ("P", self.P)):
            if not is_ordered_structure(s):
                raise InvalidStructure(
                    f"{name} is not ordered: the arrow property is checked "
                    "for ordered structures only, where copies are rigid and "
                    "coloring substructures and coloring tuples coincide")


@dataclass
class ArrowResult:
    holds: bool
    n_copies: int
    n_colorings: int
    bad_coloring: dict[tuple[int, ...], int] | None = None
    samples: list[tuple[dict[tuple[int, ...], int], tuple[int, ...]]] = \
        field(default_factory=list)

    def to_json(self) -> dict:
        data = {"holds": self.holds, "p_copies": self.n_copies,
                "colorings": self.n_colorings}
        if self.bad_coloring is not None:
            data["bad_coloring"] = [
                {"copy": list(c), "color": col}
                for c, col in sorted(self.bad_coloring.items())]
        if self.samples:
            data["samples"] = [
                {"mono_copy": list(h)} for _, h in self.samples[:8]]
        return data


def _mono_copy(coloring, h_copies_with_subsets) -> tuple[int, ...] | None:
    for h_copy, inner in h_copies_with_subsets:
        colors = {coloring[c] for c in inner}
        if len(colors) == 1:
            return h_copy
    return None


def arrows(q: ArrowQuery, copy_budget: int = 24,
           coloring_budget: int = 1 << 25) -> ArrowResult:
    """Exhaustively decide S -> (H)^P_k.

    Positive answers record a spot-checkable sample of (coloring,
    monochromatic copy) pairs; negative answers return an explicit bad
    coloring.
    """
    p_copies = copies(q.P, q.S)
    n = len(p_copies)
    if n > copy_budget:
        raise CapExceeded("arrow-copies", f"{n} copies of P exceed {copy_budget}")
    total = q.k ** n
    if total > coloring_budget:
        raise CapExceeded("arrow-colorings", f"{q.k}^{n} colorings exceed budget")
    h_copies = copies(q.H, q.S)
    h_with_subsets = []
    for h_copy in h_copies:
        inner = [c for c in p_copies if set(c) <= set(h_copy)]
        h_with_subsets.append((h_copy, inner))

    samples = []
    sample_stride = max(1, total // 16)
    if q.k == 2 and n <= 25:
        masks = []
        index = {c: i for i, c in enumerate(p_copies)}
        for h_copy, inner in h_with_subsets:
            m = 0
            for c in inner:
                m |= 1 << index[c]
            masks.append((h_copy, m))
        for bits in range(total):
            hit = None
            for h_copy, m in masks:
                if bits & m == m or bits & m == 0:
                    hit = h_copy
                    break
            if hit is None:
                coloring = {c: (bits >> i) & 1 for c, i in index.items()}
                return ArrowResult(False, n, total, bad_coloring=coloring)
            if bits % sample_stride == 0 and len(samples) < 16:
                coloring = {c: (bits >> i) & 1 for c, i in index.items()}
                samples.append((coloring, hit))
        return ArrowResult(True, n, total, samples=samples)

    for idx, assignment in enumerate(itertools.product(range(q.k), repeat=n)):
        coloring = dict(zip(p_copies, assignment))
        hit = _mono_copy(coloring, h_with_subsets)
        if hit is None:
            return ArrowResult(False, n, total, bad_coloring=coloring)
        if idx % sample_stride == 0 and len(samples) < 16:
            samples.append((coloring, hit))
    return ArrowResult(True, n, total, samples=samples)


def recheck_bad_coloring(q: ArrowQuery, coloring: dict) -> bool:
    """A bad coloring re-checks when no copy of H is monochromatic under it."""
    p_copies = copies(q.P, q.S)
    if set(coloring) != set(p_copies):
        return False
    for h_copy in copies(q.H, q.S):
        inner = [c for c in p_copies if set(c) <= set(h_copy)]
        if len({coloring[c] for c in inner}) == 1:
            return False
    return True


def chain_query(s: int, h: int, p: int, k: int) -> ArrowQuery:
    return ArrowQuery(chain(s), chain(h), chain(p), k)


# --- product version -----------------------------------------------------------

@dataclass
class ProductResult:
    holds: bool
    grid: tuple[int, ...]
    block: tuple[int, ...]
    k: int
    bad_coloring: list[list[int]] | None = None

    def to_json(self) -> dict:
        data = {"holds": self.holds, "grid": list(self.grid),
                "block": list(self.block), "k": self.k}
        if self.bad_coloring is not None:
            data["bad_coloring"] = self.bad_coloring
        return data


def product_arrows(factor_sizes: tuple[int, ...], block_sizes: tuple[int, ...],
                   k: int, cell_budget: int = 64) -> ProductResult:
    """Does every k-coloring of the grid of single-point tuples over the
    factors contain a monochromatic block of the requested sizes?

    m = 1 degenerates to the pigeonhole arrow on points; m = 2 searches for a
    bad coloring column by column, which decides the grid Ramsey question
    without enumerating all colorings.
    """
    m = len(factor_sizes)
    if m != len(block_sizes):
        raise ReductLabError("factor and block size lists differ in length")
    if m not in (1, 2):
        raise CapExceeded("product-arity", "products support m <= 2")
    if any(b > s for s, b in zip(factor_sizes, block_sizes)):
        return ProductResult(False, factor_sizes, block_sizes, k,
                             bad_coloring=[[0] * factor_sizes[-1]])
    cells = 1
    for s in factor_sizes:
        cells *= s
    if cells > cell_budget:
        raise CapExceeded("product-cells", f"{cells} cells exceed {cell_budget}")

    if m == 1:
        (s,), (b,) = factor_sizes, block_sizes
        # pigeonhole: some color class must reach size b
        if s >= k * (b - 1) + 1:
            return ProductResult(True, factor_sizes, block_sizes, k)
        bad = [[i % k for i in range(s)]]
        return ProductResult(False, factor_sizes, block_sizes, k,
                             bad_coloring=bad)

    rows, cols = factor_sizes
    br, bc = block_sizes
    columns: list[tuple[int, ...]] = []

    def column_ok(new: tuple[int, ...]) -> bool:
        # a monochromatic br x bc block needs bc columns agreeing in one
        # color on br common rows; check the new column against the chosen
        chosen = columns + [new]
        for combo in itertools.combinations(range(len(chosen)), bc):
            if len(chosen) - 1 not in combo:
                continue
            for color in range(k):
                common = [r for r in range(rows)
                          if all(chosen[c][r] == color for c in combo)]
                if len(common) >= br:
                    return False
        return True

    def extend() -> bool:
        if len(columns) == cols:
            return True
        for pattern in itertools.product(range(k), repeat=rows):
            if column_ok(pattern):
                columns.append(pattern)
                if extend():
                    return True
                columns.pop()
        return False

    if extend():
        bad = [list(col) for col in columns]
        return ProductResult(False, factor_sizes, block_sizes, k,
                             bad_coloring=bad)
    return ProductResult(True, factor_sizes, block_sizes, k)


def minimal_square_grid(block: tuple[int, int], k: int,
                        max_side: int = 8) -> int | None:
    """Smallest n with every k-coloring of the n x n grid containing a
    monochromatic block of the given shape."""
    for n in range(max(block), max_side + 1):
        if product_arrows((n, n), block, k).holds:
            return n
    return None
