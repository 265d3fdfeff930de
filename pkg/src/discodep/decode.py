"""Arc-factored decoding over EDU score matrices.

Scores live in an (n+1) x (n+1) matrix indexed ``[head][dependent]`` where
position 0 is ROOT.  Column 0 and the diagonal are structural sentinels
(-inf): nothing heads ROOT and nothing heads itself.  ``eisner_decode``
finds the best projective tree in O(n^3); ``cle_decode`` finds the best
spanning arborescence, projective or not.

Ties break toward the smaller head index, then the shorter arc; both
decoders are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from discodep.errors import DecodeError

NEG_INF = float("-inf")


@dataclass
class ScoreSet:
    """One document's arc scores plus optional per-relation label scores.

    ``arc_scores`` has shape (n+1, n+1); ``label_scores``, when present,
    has shape (n+1, n+1, R) with ``labels`` naming the R relations in
    score order.  Construction copies the arrays and writes the -inf
    sentinels into column 0 and the diagonal.
    """

    arc_scores: np.ndarray
    label_scores: np.ndarray | None = None
    labels: tuple[str, ...] | None = None
    doc_id: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        arc = np.asarray(self.arc_scores, dtype=np.float64)
        if arc.ndim != 2 or arc.shape[0] != arc.shape[1] or arc.shape[0] < 2:
            raise DecodeError(f"arc score matrix must be square with n >= 1, got {arc.shape}")
        arc = arc.copy()
        arc[:, 0] = NEG_INF
        np.fill_diagonal(arc, NEG_INF)
        self.arc_scores = arc
        if (self.label_scores is None) != (self.labels is None):
            raise DecodeError("label_scores and labels must be given together")
        if self.label_scores is not None:
            lab = np.asarray(self.label_scores, dtype=np.float64)
            want = (arc.shape[0], arc.shape[0], len(self.labels))
            if lab.shape != want:
                raise DecodeError(f"label score tensor must have shape {want}, got {lab.shape}")
            if not self.labels:
                raise DecodeError("labels must be non-empty when label_scores are given")
            self.label_scores = lab.copy()
            self.labels = tuple(self.labels)

    @property
    def n(self) -> int:
        return self.arc_scores.shape[0] - 1

    @property
    def num_labels(self) -> int:
        return 0 if self.labels is None else len(self.labels)


def _as_matrix(scores: ScoreSet | np.ndarray) -> np.ndarray:
    if isinstance(scores, ScoreSet):
        return scores.arc_scores
    return ScoreSet(arc_scores=np.asarray(scores)).arc_scores


def eisner_decode(scores: ScoreSet | np.ndarray, single_root: bool = False) -> tuple[int, ...]:
    """Best projective tree; returns heads for EDUs 1..n.

    Four-table span DP: incomplete/complete spans with the head at the
    left or right end.  With ``single_root`` ROOT gets exactly one
    dependent r, scored as S[0,r] + C_left[1,r] + C_right[r,n].
    """
    S = _as_matrix(scores)
    n = S.shape[0] - 1

    # ir[i,j]: arc i->j plus best inner split; il[i,j]: arc j->i.
    # cr[i,j]: head i covering i..j; cl[i,j]: head j covering i..j.
    size = n + 1
    ir = np.full((size, size), NEG_INF)
    il = np.full((size, size), NEG_INF)
    cr = np.full((size, size), NEG_INF)
    cl = np.full((size, size), NEG_INF)
    np.fill_diagonal(cr, 0.0)
    np.fill_diagonal(cl, 0.0)
    bir = np.zeros((size, size), dtype=np.int64)
    bcr = np.zeros((size, size), dtype=np.int64)
    bcl = np.zeros((size, size), dtype=np.int64)

    for length in range(1, size):
        for i in range(0, size - length):
            j = i + length
            inner = cr[i, i:j] + cl[i + 1 : j + 1, j]
            r = int(np.argmax(inner))
            ir[i, j] = S[i, j] + inner[r]
            il[i, j] = S[j, i] + inner[r]
            bir[i, j] = i + r
            right = ir[i, i + 1 : j + 1] + cr[i + 1 : j + 1, j]
            r = int(np.argmax(right))
            cr[i, j] = right[r]
            bcr[i, j] = i + 1 + r
            left = cl[i, i:j] + il[i:j, j]
            r = int(np.argmax(left))
            cl[i, j] = left[r]
            bcl[i, j] = i + r

    heads = [0] * (n + 1)
    stack: list[tuple[str, int, int]] = []

    def expand(kind: str, i: int, j: int) -> None:
        if i != j:
            stack.append((kind, i, j))

    if single_root and n > 1:
        best_r, best = 1, NEG_INF
        for r in range(1, n + 1):
            total = S[0, r] + cl[1, r] + cr[r, n]
            if total > best:
                best_r, best = r, total
        heads[best_r] = 0
        expand("cl", 1, best_r)
        expand("cr", best_r, n)
    else:
        expand("cr", 0, n)

    while stack:
        kind, i, j = stack.pop()
        if kind == "cr":
            # cr[i,j] = ir[i,r] + cr[r,j]; the ir part places arc i->r.
            r = int(bcr[i, j])
            heads[r] = i
            rr = int(bir[i, r])
            expand("cr", i, rr)
            expand("cl", rr + 1, r)
            expand("cr", r, j)
        else:
            # cl[i,j] = cl[i,r] + il[r,j]; the il part places arc j->r.
            r = int(bcl[i, j])
            expand("cl", i, r)
            heads[r] = j
            rr = int(bir[r, j])
            expand("cr", r, rr)
            expand("cl", rr + 1, j)

    return tuple(heads[1:])


def _greedy_heads(S: np.ndarray) -> np.ndarray:
    heads = np.argmax(S, axis=0)
    heads[0] = 0
    return heads


def _find_cycle(heads: np.ndarray) -> list[int] | None:
    m = len(heads)
    color = [0] * m
    color[0] = 2
    for start in range(1, m):
        if color[start]:
            continue
        path: list[int] = []
        v = start
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = int(heads[v])
        if color[v] == 1:
            at = path.index(v)
            for u in path:
                color[u] = 2
            return path[at:]
        for u in path:
            color[u] = 2
    return None


def _cle(S: np.ndarray) -> np.ndarray:
    heads = _greedy_heads(S)
    cycle = _find_cycle(heads)
    if cycle is None:
        return heads
    m = S.shape[0]
    in_cycle = np.zeros(m, dtype=bool)
    in_cycle[cycle] = True
    rest = np.flatnonzero(~in_cycle)
    k = len(rest)
    cyc = np.asarray(cycle)

    into = S[np.ix_(rest, cyc)]
    with np.errstate(invalid="ignore"):
        gain = into - S[heads[cyc], cyc][None, :]
    gain[np.isneginf(into)] = NEG_INF
    best_in = np.argmax(gain, axis=1)
    out = S[np.ix_(cyc, rest)]
    best_out = np.argmax(out, axis=0)

    S2 = np.full((k + 1, k + 1), NEG_INF)
    S2[:k, :k] = S[np.ix_(rest, rest)]
    S2[:k, k] = gain[np.arange(k), best_in]
    S2[k, :k] = out[best_out, np.arange(k)]

    heads2 = _cle(S2)
    full = heads.copy()
    for j in range(1, k):
        h2 = int(heads2[j])
        full[rest[j]] = rest[h2] if h2 < k else cyc[best_out[j]]
    h2 = int(heads2[k])
    full[cyc[best_in[h2]]] = rest[h2]
    return full


def cle_decode(scores: ScoreSet | np.ndarray, single_root: bool = False) -> tuple[int, ...]:
    """Best spanning arborescence rooted at 0; returns heads for EDUs 1..n.

    Greedy per-dependent maxima plus recursive cycle contraction.  With
    ``single_root`` the exact optimum is found by trying every candidate
    ROOT dependent in turn.
    """
    S = _as_matrix(scores)
    n = S.shape[0] - 1
    if not single_root or n == 1:
        return tuple(int(h) for h in _cle(S)[1:])

    best_heads: np.ndarray | None = None
    best = NEG_INF
    for r in range(1, n + 1):
        masked = S.copy()
        keep = masked[0, r]
        masked[0, :] = NEG_INF
        masked[0, r] = keep
        heads = _cle(masked)
        total = float(masked[heads[1:], np.arange(1, n + 1)].sum())
        if best_heads is None or total > best:
            best_heads, best = heads, total
    return tuple(int(h) for h in best_heads[1:])


def assign_labels(scores: ScoreSet, heads: Sequence[int]) -> tuple[str, ...]:
    """Best relation per arc given fixed heads; ties pick the lowest id."""
    if scores.label_scores is None or scores.labels is None:
        raise DecodeError("score set carries no label scores")
    n = scores.n
    if len(heads) != n:
        raise DecodeError(f"expected {n} heads, got {len(heads)}")
    picks = []
    for d, h in enumerate(heads, start=1):
        row = scores.label_scores[h, d]
        picks.append(scores.labels[int(np.argmax(row))])
    return tuple(picks)


def tree_score(
    scores: ScoreSet | np.ndarray,
    heads: Sequence[int],
    labels: Sequence[str] | None = None,
) -> float:
    """Total score of a head assignment (plus label scores when given)."""
    S = _as_matrix(scores)
    n = S.shape[0] - 1
    if len(heads) != n:
        raise DecodeError(f"expected {n} heads, got {len(heads)}")
    total = float(sum(S[h, d] for d, h in enumerate(heads, start=1)))
    if labels is not None:
        if not isinstance(scores, ScoreSet) or scores.label_scores is None:
            raise DecodeError("labels given but score set carries no label scores")
        if len(labels) != n:
            raise DecodeError(f"expected {n} labels, got {len(labels)}")
        index = {lab: i for i, lab in enumerate(scores.labels)}
        for d, (h, lab) in enumerate(zip(heads, labels), start=1):
            if lab not in index:
                raise DecodeError(f"unknown relation label {lab!r}")
            total += float(scores.label_scores[h, d, index[lab]])
    return total
