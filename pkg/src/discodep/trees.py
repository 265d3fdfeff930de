"""Dependency trees over EDU positions and their structure metrics.

A tree lives on positions ``0..n`` where position 0 is the artificial ROOT.
``heads[d-1]`` gives the head of EDU ``d``.  Projectivity, gap degree and
edge degree follow the mildly-non-projective framework of Kuhlmann & Nivre;
the ROOT node takes part in all three (its projection is always contiguous,
so including it never changes the verdict).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from discodep.errors import TreeError


@dataclass(frozen=True)
class DepTree:
    """A rooted dependency tree over ``n`` EDUs plus the ROOT at position 0.

    ``heads`` has length ``n``; ``heads[d-1]`` is the head position of EDU
    ``d`` and lies in ``0..n``.  ``labels``, when present, aligns with
    ``heads`` and carries the relation of each EDU to its head.
    Construction validates acyclicity and reachability from ROOT.
    """

    heads: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "heads", tuple(int(h) for h in self.heads))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        n = len(self.heads)
        if n == 0:
            raise TreeError("a dependency tree needs at least one EDU")
        if self.labels is not None and len(self.labels) != n:
            raise TreeError(f"labels length {len(self.labels)} != heads length {n}")
        for d, h in enumerate(self.heads, start=1):
            if h == d:
                raise TreeError(f"EDU {d} is its own head")
            if not 0 <= h <= n:
                raise TreeError(f"EDU {d} has head {h} outside 0..{n}")
        # Every node must reach ROOT; a walk that revisits a node is a cycle.
        state = [0] * (n + 1)  # 0 unseen, 1 on current walk, 2 proven
        state[0] = 2
        for start in range(1, n + 1):
            walk = []
            v = start
            while state[v] == 0:
                state[v] = 1
                walk.append(v)
                v = self.heads[v - 1]
            if state[v] == 1:
                raise TreeError(f"cycle through EDU {v}")
            for w in walk:
                state[w] = 2

    @property
    def n(self) -> int:
        return len(self.heads)

    def head_of(self, d: int) -> int:
        return self.heads[d - 1]

    def label_of(self, d: int) -> str:
        if self.labels is None:
            raise TreeError("tree carries no labels")
        return self.labels[d - 1]

    def arcs(self) -> Iterator[tuple[int, int]]:
        """Yield (head, dependent) pairs."""
        for d, h in enumerate(self.heads, start=1):
            yield h, d

    def children(self) -> list[list[int]]:
        """Dependent lists indexed by head position, ascending."""
        out: list[list[int]] = [[] for _ in range(self.n + 1)]
        for d, h in enumerate(self.heads, start=1):
            out[h].append(d)
        return out


def _descendant_masks(tree: DepTree) -> list[int]:
    """Bitmask of each node's projection (descendants including itself)."""
    kids = tree.children()
    masks = [1 << v for v in range(tree.n + 1)]
    # Children are processed before their head: walk nodes in reverse DFS
    # finishing order from ROOT.
    order: list[int] = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(kids[v])
    for v in reversed(order):
        for c in kids[v]:
            masks[v] |= masks[c]
    return masks


def _block_count(mask: int) -> int:
    """Number of maximal runs of consecutive set bits."""
    # A run starts at every set bit whose lower neighbour is clear.
    return (mask & ~(mask >> 1)).bit_count()


def is_projective(tree: DepTree) -> bool:
    """True iff every arc's interior contains only descendants of its head."""
    masks = _descendant_masks(tree)
    for h, d in tree.arcs():
        lo, hi = (h, d) if h < d else (d, h)
        interior = ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)
        if interior & ~masks[h]:
            return False
    return True


def gap_degree(tree: DepTree) -> int:
    """Maximum number of discontinuities in any node's subtree projection."""
    masks = _descendant_masks(tree)
    return max(_block_count(m) - 1 for m in masks)


def edge_degree(tree: DepTree) -> int:
    """Maximum, over arcs, of the intervening components not under the head.

    For an arc (h, d) this counts the connected components formed by the
    nodes strictly inside the arc's span that are not descendants of h;
    each such component is rooted at a node whose own head lies outside
    the span.
    """
    masks = _descendant_masks(tree)
    worst = 0
    for h, d in tree.arcs():
        lo, hi = (h, d) if h < d else (d, h)
        count = 0
        for v in range(lo + 1, hi):
            if masks[h] >> v & 1:
                continue
            hv = tree.heads[v - 1]
            if hv <= lo or hv >= hi:
                count += 1
        worst = max(worst, count)
    return worst


def max_path_length(tree: DepTree) -> int:
    """Edge count of the longest directed path starting at ROOT."""
    kids = tree.children()
    depth = [0] * (tree.n + 1)
    best = 0
    stack = [0]
    while stack:
        v = stack.pop()
        for c in kids[v]:
            depth[c] = depth[v] + 1
            best = max(best, depth[c])
            stack.append(c)
    return best


def leaf_proportion(tree: DepTree) -> float:
    """Share of leaf nodes: no dependents and a head of their own.

    The denominator counts all n+1 tree nodes, ROOT included; ROOT itself
    never qualifies as a leaf (it has no head, and in a valid tree it
    always has at least one dependent).  A 3-EDU chain therefore scores
    1/4.
    """
    has_child = [False] * (tree.n + 1)
    for h in tree.heads:
        has_child[h] = True
    leaves = sum(1 for v in range(1, tree.n + 1) if not has_child[v])
    return leaves / (tree.n + 1)


@dataclass
class ComplexityReport:
    """Aggregated non-projectivity census over a set of documents."""

    counts_by_gap_degree: dict[int, int] = field(default_factory=dict)
    counts_by_edge_degree: dict[int, int] = field(default_factory=dict)
    projective_count: int = 0
    nonprojective_count: int = 0

    @property
    def total(self) -> int:
        return self.projective_count + self.nonprojective_count

    def add(self, tree: DepTree) -> None:
        g = gap_degree(tree)
        e = edge_degree(tree)
        self.counts_by_gap_degree[g] = self.counts_by_gap_degree.get(g, 0) + 1
        self.counts_by_edge_degree[e] = self.counts_by_edge_degree.get(e, 0) + 1
        if is_projective(tree):
            self.projective_count += 1
        else:
            self.nonprojective_count += 1

    def to_dict(self) -> dict:
        return {
            "counts_by_gap_degree": {str(k): v for k, v in sorted(self.counts_by_gap_degree.items())},
            "counts_by_edge_degree": {str(k): v for k, v in sorted(self.counts_by_edge_degree.items())},
            "projective": self.projective_count,
            "nonprojective": self.nonprojective_count,
            "total": self.total,
        }


def complexity_census(corpora: Iterable) -> ComplexityReport:
    """Census gap degree, edge degree and projectivity over gold trees.

    Accepts any iterable of corpora (objects with a ``documents`` sequence
    whose items expose ``gold_tree()``).  An empty iterable yields an
    all-zero report.
    """
    report = ComplexityReport()
    for corpus in corpora:
        for doc in corpus.documents:
            report.add(doc.gold_tree())
    return report


def gold_trees(corpora: Iterable) -> list[DepTree]:
    """Collect gold trees from corpora in document order."""
    return [doc.gold_tree() for corpus in corpora for doc in corpus.documents]


def trees_from_heads(head_rows: Sequence[Sequence[int]]) -> list[DepTree]:
    return [DepTree(tuple(row)) for row in head_rows]
