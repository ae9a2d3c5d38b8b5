"""Brick diagrams of positive braid words and their quivers.

Each letter ``s_i`` becomes a vertical bar on level ``i`` (between strands
``i`` and ``i + 1``).  A compact brick is the region between two
consecutive bars on one level and becomes a vertex.  Arrows:

* same level: from a brick to the next brick on its right (they share a bar);
* adjacent levels: bricks ``[x1, x2]`` and ``[y1, y2]`` whose extents
  strictly interleave (``x1 < y1 < x2 < y2``) are joined by an arrow from
  the later-starting brick to the earlier-starting one.  Nested or disjoint
  extents are not joined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .braid import BraidWord, opposite
from .quiver import ExchangeMatrix, connected_components, is_acyclic


@dataclass(frozen=True)
class BrickDiagram:
    n: int
    bars: tuple[tuple[int, ...], ...]  # bars[i - 1]: 1-based positions of letter i

    def level(self, i: int) -> tuple[int, ...]:
        return self.bars[i - 1]


@dataclass(frozen=True, order=True)
class Brick:
    level: int
    left: int
    right: int


@dataclass(frozen=True)
class BrickQuiver:
    n: int
    bricks: tuple[Brick, ...]
    arrows: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.bricks)

    def matrix(self) -> ExchangeMatrix:
        return ExchangeMatrix.from_arrows(len(self.bricks), self.arrows)

    def to_json(self) -> dict:
        return {
            "vertices": [{"level": b.level, "left": b.left, "right": b.right} for b in self.bricks],
            "arrows": [list(a) for a in self.arrows],
        }

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for k, b in enumerate(self.bricks):
            lines.append(f'  v{k} [label="{b.level}:[{b.left},{b.right}]"];')
        for i, j in self.arrows:
            lines.append(f"  v{i} -> v{j};")
        lines.append("}")
        return "\n".join(lines)

    @classmethod
    def from_json(cls, data: dict | str, n: int | None = None) -> "BrickQuiver":
        if isinstance(data, str):
            data = json.loads(data)
        bricks = tuple(Brick(v["level"], v["left"], v["right"]) for v in data["vertices"])
        if n is None:
            n = max((b.level for b in bricks), default=1) + 1
        return cls(n, bricks, tuple((int(i), int(j)) for i, j in data["arrows"]))


def build_bricks(w: BraidWord) -> BrickDiagram:
    bars: list[list[int]] = [[] for _ in range(w.n - 1)]
    for pos, x in enumerate(w.letters, start=1):
        bars[x - 1].append(pos)
    return BrickDiagram(w.n, tuple(tuple(b) for b in bars))


def _interleave(a: Brick, b: Brick) -> bool:
    return a.left < b.left < a.right < b.right or b.left < a.left < b.right < a.right


def extract_quiver(w: BraidWord) -> BrickQuiver:
    diagram = build_bricks(w)
    bricks = []
    for i in range(1, w.n):
        bars = diagram.level(i)
        bricks.extend(Brick(i, bars[k], bars[k + 1]) for k in range(len(bars) - 1))
    index = {b: k for k, b in enumerate(bricks)}
    by_level: dict[int, list[Brick]] = {}
    for b in bricks:
        by_level.setdefault(b.level, []).append(b)

    arrows = []
    for i, row in by_level.items():
        arrows.extend((index[row[k]], index[row[k + 1]]) for k in range(len(row) - 1))
        for a in row:
            for b in by_level.get(i + 1, ()):
                if _interleave(a, b):
                    src, dst = (a, b) if a.left > b.left else (b, a)
                    arrows.append((index[src], index[dst]))
    return BrickQuiver(w.n, tuple(bricks), tuple(sorted(arrows)))


def quiver_matrix(w: BraidWord) -> ExchangeMatrix:
    return extract_quiver(w).matrix()


def vertex_count(w: BraidWord) -> int:
    return sum(max(0, w.count(i) - 1) for i in range(1, w.n))


# ---------------------------------------------------------------------------
# level-pair criteria


def _blocks(seq: list[int]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for x in seq:
        if out and out[-1][0] == x:
            out[-1] = (x, out[-1][1] + 1)
        else:
            out.append((x, 1))
    return out


def cyclic_blocks(w: BraidWord, i: int, j: int) -> list[tuple[int, int]]:
    """Runs of the letters ``s_i``/``s_j`` in ``w`` read cyclically.

    The first and last runs are merged when they carry the same letter, so
    the result is the run structure of the closed word.
    """
    seq = [x for x in w.letters if x in (i, j)]
    blocks = _blocks(seq)
    if len(blocks) > 1 and blocks[0][0] == blocks[-1][0]:
        first = blocks.pop(0)
        blocks[-1] = (first[0], blocks[-1][1] + first[1])
    return blocks


def _pair_ok(w: BraidWord, i: int) -> bool:
    blocks = _blocks([x for x in w.letters if x in (i, i + 1)])
    letters = [b[0] for b in blocks]
    return letters in ([i, i + 1, i, i + 1], [i + 1, i, i + 1, i])


def acyclicity_criterion(w: BraidWord) -> bool:
    """Level-pair test for acyclicity of the brick quiver.

    Under its hypotheses (``w`` contains ``s_1^2`` and ``s_{n-1}^2`` and
    the quiver is connected) the quiver is acyclic exactly when every
    ``w(i, i+1)`` has the run shape ``s_i^a s_{i+1}^b s_i^c s_{i+1}^d`` or
    its level-swapped form.  Outside the hypotheses the extracted quiver is
    tested directly.
    """
    q = quiver_matrix(w)
    hyp = (
        w.n >= 3
        and w.count(1) >= 2
        and w.count(w.n - 1) >= 2
        and len(connected_components(q)) == 1
    )
    if not hyp:
        return is_acyclic(q)
    return all(_pair_ok(w, i) for i in range(1, w.n - 1))


def _intertwined(w: BraidWord, i: int) -> bool:
    # contains s_i s_{i+1} s_i s_{i+1} or s_{i+1} s_i s_{i+1} s_i as a subsequence
    return len(_blocks([x for x in w.letters if x in (i, i + 1)])) >= 4


def disconnection_split(w: BraidWord) -> list[tuple[str, int]]:
    """Places where the brick quiver falls apart.

    Returns ``("level", i)`` when level ``i`` carries no brick (``s_i^2`` is
    not a subword) and ``("between", i)`` when levels ``i`` and ``i + 1``
    carry bricks but no intertwining pair.
    """
    cuts: list[tuple[str, int]] = []
    for i in range(1, w.n):
        if w.count(i) < 2:
            cuts.append(("level", i))
    for i in range(1, w.n - 1):
        if w.count(i) >= 2 and w.count(i + 1) >= 2 and not _intertwined(w, i):
            cuts.append(("between", i))
    return cuts


def opposite_quiver_reversed(w: BraidWord) -> bool:
    """True when the quiver of the opposite word is ``Q_w`` with arrows reversed."""
    q = quiver_matrix(w)
    qo = extract_quiver(opposite(w))
    length = len(w)
    # brick [l, r] of w corresponds to brick [L+1-r, L+1-l] of the opposite
    mirror = {Brick(b.level, length + 1 - b.right, length + 1 - b.left): k for k, b in enumerate(qo.bricks)}
    perm = [mirror[b] for b in extract_quiver(w).bricks]
    return bool(np.array_equal(q.b, -qo.matrix().b[np.ix_(perm, perm)]))


def render_ascii(w: BraidWord, show_arrows: bool = True) -> str:
    """Monospace wall of bricks, top strand first.

    Strands are ``-`` lines, crossings are ``|`` bars in the gap between
    the two strands, and each compact brick carries a ``*`` marker.
    """
    width = 4
    cols = width * (len(w) + 1) + 1
    rows: list[str] = []
    diagram = build_bricks(w)
    for strand in range(w.n, 0, -1):
        rows.append("-" * cols)
        level = strand - 1
        if level == 0:
            break
        gap = [" "] * cols
        bars = diagram.level(level)
        for p in bars:
            gap[width * p] = "|"
        for a, b in zip(bars, bars[1:]):
            gap[(width * a + width * b) // 2] = "*"
        rows.append("".join(gap).rstrip())
    text = "\n".join(rows)
    if show_arrows:
        q = extract_quiver(w)
        if q.arrows:
            names = [f"{b.level}:[{b.left},{b.right}]" for b in q.bricks]
            text += "\n" + "\n".join(f"{names[i]} -> {names[j]}" for i, j in q.arrows)
    return text
