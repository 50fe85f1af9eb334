"""Staircases: interval subquivers of the equioriented 2D grid and the thin hierarchy.

Coordinates are ``(row, column)``, rows counted from the bottom. Arrows point
up (``(i,j) -> (i+1,j)``) and right (``(i,j) -> (i,j+1)``).
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator

from .errors import InternalInconsistency
from .linalg import FieldSpec, Matrix
from .quiver import Arrow, GridQuiver, Vertex, equioriented, undirected_components, vertex_name
from .rep import Rep, base_change, indicator_rep, is_thin, require_valid, support


class NotAnInterval(ValueError):
    """A vertex set that is not a nonempty convex connected subquiver."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class RebaseError(ValueError):
    pass


class NotPreInterval(RebaseError):
    """The module is not a pre-interval representation."""


class InconsistentRebase(RebaseError):
    """Pre-interval, but no basis makes every support map the identity."""


@dataclass(frozen=True, order=True)
class Staircase:
    """Slices ``[b_i, d_i]`` for rows ``s..t`` with ``b_{i+1} <= b_i <= d_{i+1} <= d_i``."""

    s: int
    t: int
    slices: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple(tuple(x) for x in self.slices))
        if not 1 <= self.s <= self.t:
            raise ValueError(f"need 1 <= s <= t, got s={self.s}, t={self.t}")
        if len(self.slices) != self.t - self.s + 1:
            raise ValueError("one slice per row from s to t")
        for b, d in self.slices:
            if not 1 <= b <= d:
                raise ValueError(f"bad slice [{b},{d}]")
        for (b0, d0), (b1, d1) in zip(self.slices, self.slices[1:]):
            if not b1 <= b0 <= d1 <= d0:
                raise ValueError(f"slices [{b0},{d0}] then [{b1},{d1}] break the staircase chain")

    @property
    def rows(self) -> range:
        return range(self.s, self.t + 1)

    def slice(self, i: int) -> tuple[int, int]:
        return self.slices[i - self.s]

    @property
    def vertices(self) -> frozenset:
        return frozenset((i, j) for i, (b, d) in zip(self.rows, self.slices) for j in range(b, d + 1))

    def __len__(self):
        return sum(d - b + 1 for b, d in self.slices)

    @property
    def size(self) -> tuple[int, int]:
        """Bounding box ``(height, width)``; the widest reach is ``d_s - b_t + 1``."""
        return (self.t - self.s + 1, self.slices[0][1] - self.slices[-1][0] + 1)

    def fits(self, m: int, n: int) -> bool:
        return self.t <= m and self.slices[0][1] <= n

    def shifted(self, drow: int, dcol: int) -> "Staircase":
        return Staircase(self.s + drow, self.t + drow, tuple((b + dcol, d + dcol) for b, d in self.slices))

    def __str__(self):
        return f"{self.s}..{self.t}: " + ";".join(f"[{b},{d}]" for b, d in self.slices)

    @classmethod
    def parse(cls, text: str) -> "Staircase":
        """Parse ``"s..t: [b,d];[b,d];..."``."""
        m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*:\s*(.*?)\s*", text)
        if not m:
            raise ValueError(f"staircase must look like 's..t: [b,d];...', got {text!r}")
        slices = re.findall(r"\[\s*(\d+)\s*,\s*(\d+)\s*\]", m.group(3))
        if len(slices) != m.group(3).count("["):
            raise ValueError(f"cannot read slices in {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), tuple((int(b), int(d)) for b, d in slices))

    def display(self, m: int, n: int) -> str:
        """Dimension vector as 0/1 rows, top row first (row ``m`` at the top)."""
        verts = self.vertices
        return "\n".join("".join("1" if (i, j) in verts else "0" for j in range(1, n + 1))
                         for i in range(m, 0, -1))


def staircase_from_support(m: int, n: int, supp: Iterable[Vertex]) -> Staircase:
    """The staircase of a vertex set of the ``m x n`` grid, or :class:`NotAnInterval`."""
    supp = {tuple(v) for v in supp}
    for i, j in supp:
        if not (1 <= i <= m and 1 <= j <= n):
            raise ValueError(f"vertex {(i, j)} lies outside the {m}x{n} grid")
    if not supp:
        raise NotAnInterval("empty")
    rows = sorted({i for i, _ in supp})
    s, t = rows[0], rows[-1]
    slices = []
    for i in range(s, t + 1):
        cols = sorted(j for r, j in supp if r == i)
        if not cols:
            raise NotAnInterval(f"connectivity: row {i} is empty between rows {s} and {t}")
        if cols[-1] - cols[0] + 1 != len(cols):
            raise NotAnInterval(f"row-contiguity: row {i} has a gap")
        slices.append((cols[0], cols[-1]))
    for i, ((b0, d0), (b1, d1)) in enumerate(zip(slices, slices[1:]), start=s):
        if max(b0, b1) > min(d0, d1):
            raise NotAnInterval(f"connectivity: rows {i} and {i + 1} do not touch")
        if b1 > b0 or d1 > d0:
            raise NotAnInterval(f"chain: rows {i} and {i + 1} violate convexity")
    return Staircase(s, t, tuple(slices))


def support_from_staircase(st: Staircase) -> frozenset:
    return st.vertices


def _slice_chains(s: int, t: int, n: int, prev: tuple[int, int] | None) -> Iterator[tuple]:
    if s > t:
        yield ()
        return
    if prev is None:
        options = [(b, d) for b in range(1, n + 1) for d in range(b, n + 1)]
    else:
        b0, d0 = prev
        options = [(b, d) for b in range(1, b0 + 1) for d in range(max(b0, b), d0 + 1)]
    for sl in options:
        for rest in _slice_chains(s + 1, t, n, sl):
            yield (sl,) + rest


def enumerate_intervals(m: int, n: int) -> Iterator[Staircase]:
    """Every staircase of the ``m x n`` grid once, ordered by ``(s, t)`` then slices."""
    if m < 1 or n < 1:
        raise ValueError("grid sizes must be positive")
    for s in range(1, m + 1):
        for t in range(s, m + 1):
            for chain in _slice_chains(s, t, n, None):
                yield Staircase(s, t, chain)


def narayana(a: int, b: int) -> int:
    if not 1 <= b <= a:
        raise ValueError(f"narayana needs 1 <= b <= a, got ({a}, {b})")
    return comb(a, b) * comb(a, b - 1) // a


def count_by_size(m: int, n: int, h: int, w: int) -> int:
    if not (1 <= h <= m and 1 <= w <= n):
        raise ValueError(f"size {h}x{w} does not fit a {m}x{n} grid")
    return (m - h + 1) * (n - w + 1) * narayana(h + w - 1, h)


def count_intervals(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise ValueError("grid sizes must be positive")
    return sum(count_by_size(m, n, h, w) for h in range(1, m + 1) for w in range(1, n + 1))


def _grid_of(q: GridQuiver) -> tuple[int, int]:
    if not q.is_2d_equioriented:
        raise ValueError(f"needs an equioriented 2D grid, got {q}")
    return q.sizes


def interval_rep(q: GridQuiver, st: Staircase, field: FieldSpec) -> Rep:
    m, n = _grid_of(q)
    if not st.fits(m, n):
        raise ValueError(f"staircase {st} does not fit the {m}x{n} grid")
    return indicator_rep(q, field, st.vertices)


# --- classification ------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    thin: bool
    support_connected: bool
    support_convex: bool
    nonzero_over_support: bool
    identity_over_support: bool

    @property
    def is_thin(self) -> bool:
        return self.thin

    @property
    def is_pre_interval(self) -> bool:
        return self.thin and self.support_connected and self.support_convex and self.nonzero_over_support

    @property
    def is_interval(self) -> bool:
        return self.is_pre_interval and self.identity_over_support

    def as_dict(self) -> dict[str, bool]:
        return {
            "thin": self.thin,
            "support_connected": self.support_connected,
            "support_convex": self.support_convex,
            "nonzero_over_support": self.nonzero_over_support,
            "identity_over_support": self.identity_over_support,
            "is_thin": self.is_thin,
            "is_pre_interval": self.is_pre_interval,
            "is_interval": self.is_interval,
        }


def _internal_arrows(q: GridQuiver, verts: frozenset) -> list[Arrow]:
    return [a for a in q.arrows if a.source in verts and a.target in verts]


def is_convex(q: GridQuiver, verts: frozenset) -> bool:
    """No path between two members leaves the set.

    ``z`` lies on a path ``x -> y`` exactly when ``x`` reaches ``z`` and ``z``
    reaches ``y``, which covers every orientation.
    """
    outside = set()
    for x in verts:
        outside |= q.upper_set(x) - verts
    return all(not (q.upper_set(z) & verts) for z in outside)


def is_connected(q: GridQuiver, verts: frozenset) -> bool:
    if not verts:
        return False
    edges = [(a.source, a.target) for a in _internal_arrows(q, verts)]
    return len(undirected_components(verts, edges)) == 1


def classify(m: Rep) -> ClassificationReport:
    require_valid(m)
    q = m.quiver
    supp = support(m)
    inside = [m.map(a) for a in _internal_arrows(q, supp)]
    return ClassificationReport(
        thin=is_thin(m),
        support_connected=is_connected(q, supp),
        support_convex=is_convex(q, supp),
        nonzero_over_support=all(not x.is_zero() for x in inside),
        identity_over_support=all(x.is_identity() for x in inside),
    )


# --- rebasing ----------------------------------------------------------------------


def rebase(m: Rep) -> tuple[Rep, dict[Vertex, object]]:
    """An interval representation isomorphic to the pre-interval ``m``.

    Returns ``(interval, basis)`` where ``basis[v]`` is the scalar spanning
    ``m(v)`` that becomes the new unit vector; ``interval`` equals
    ``base_change(m, {v: 1/basis[v]})``. The basis is propagated through the
    support by breadth-first search from its least vertex, and every support
    arrow is then checked for consistency.
    """
    report = classify(m)
    if not report.is_pre_interval:
        failed = [k for k in ("thin", "support_connected", "support_convex", "nonzero_over_support")
                  if not getattr(report, k)]
        raise NotPreInterval("not pre-interval: " + ", ".join(failed or ["empty support"]))
    q, field = m.quiver, m.field
    supp = support(m)
    arrows = _internal_arrows(q, supp)
    scalar = {a: m.map(a)[0, 0] for a in arrows}
    nbrs: dict[Vertex, list] = {v: [] for v in supp}
    for a in arrows:
        nbrs[a.source].append((a, a.target, True))
        nbrs[a.target].append((a, a.source, False))
    root = min(supp)
    basis = {root: field(1)}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for a, w, forward in nbrs[v]:
            if w in basis:
                continue
            basis[w] = field(scalar[a] * basis[v]) if forward else field(basis[v] * field.inv(scalar[a]))
            queue.append(w)
    for a in arrows:
        if field(scalar[a] * basis[a.source]) != basis[a.target]:
            raise InconsistentRebase(
                f"arrow {a.name}: propagated bases disagree (no interval basis exists)")
    g = {v: Matrix.scalar(field, field.inv(c)) for v, c in basis.items()}
    return base_change(m, g), basis


# --- line propagation and thin splitting -----------------------------------------------


@dataclass(frozen=True)
class SeparatingLine:
    crossed: tuple[Arrow, ...]
    left: frozenset
    right: frozenset


def _is_zero_map(m: Rep, a: Arrow) -> bool:
    return m.dim(a.source) == 0 or m.dim(a.target) == 0 or m.map(a).is_zero()


def find_separating_line(m: Rep, alpha: Arrow) -> SeparatingLine:
    """Trace a line of zero maps through the grid, starting across ``alpha``.

    Cells are the unit squares, addressed by their lower-left corner. Walking
    forward the line enters a cell through its left or top side and leaves
    through its bottom or right side; backward, the mirror image. In each cell
    the exit is a zero arrow on the composite path opposite the entry, going
    straight when that side is zero and turning otherwise. Crossed arrows
    all run from the lower-left region to the upper-right region.
    """
    q = m.quiver
    rows, cols = _grid_of(q)
    require_valid(m)
    if not is_thin(m):
        raise ValueError("line propagation needs a thin module")
    if alpha not in q.arrow_index:
        raise ValueError(f"{alpha} is not an arrow of the grid")
    if not _is_zero_map(m, alpha) or m.dim(alpha.source) == 0 or m.dim(alpha.target) == 0:
        raise ValueError(f"arrow {alpha.name} must carry a zero map between nonzero spaces")

    def horiz(i, j):  # (i,j) -> (i,j+1)
        return Arrow((i, j), (i, j + 1), 1)

    def vert(i, j):  # (i,j) -> (i+1,j)
        return Arrow((i, j), (i + 1, j), 0)

    def cell_ok(i, j):
        return 1 <= i < rows and 1 <= j < cols

    def zero(a):
        return _is_zero_map(m, a)

    def walk(a: Arrow, forward: bool) -> list[Arrow]:
        out = []
        while True:
            (i, j) = a.source
            horizontal = a.axis == 1
            # cell on the far side of `a` in the walking direction
            if forward:
                cell = (i - 1, j) if horizontal else (i, j)
            else:
                cell = (i, j) if horizontal else (i, j - 1)
            ci, cj = cell
            if not cell_ok(ci, cj):
                return out
            bottom, top = horiz(ci, cj), horiz(ci + 1, cj)
            left, right = vert(ci, cj), vert(ci, cj + 1)
            if forward:
                straight, turn = (bottom, right) if horizontal else (right, bottom)
            else:
                straight, turn = (top, left) if horizontal else (left, top)
            if zero(straight):
                a = straight
            elif zero(turn):
                a = turn
            else:
                raise InternalInconsistency(f"cell at {vertex_name(cell)} has no zero exit: module not commutative")
            out.append(a)

    crossed = list(reversed(walk(alpha, False))) + [alpha] + walk(alpha, True)
    cut = set(crossed)
    edges = [(a.source, a.target) for a in q.arrows if a not in cut]
    comps = undirected_components(q.vertices, edges)
    left = next(c for c in comps if alpha.source in c)
    right = frozenset(q.vertices) - left
    if alpha.target in left or len(comps) != 2:
        raise InternalInconsistency("line does not separate the grid")
    for a in crossed:
        if a.source not in left or a.target not in right:
            raise InternalInconsistency(f"crossed arrow {a.name} does not run left-to-right")
    return SeparatingLine(tuple(crossed), left, frozenset(right))


def restrict_to_vertices(m: Rep, verts: frozenset) -> Rep:
    """``m`` with everything outside ``verts`` set to zero."""
    dims = {v: (m.dim(v) if v in verts else 0) for v in m.quiver.vertices}
    maps = {a: m.map(a) for a in m.quiver.arrows if a.source in verts and a.target in verts}
    return Rep(m.quiver, m.field, dims, maps)


def thin_components(m: Rep) -> list[frozenset]:
    """Components of the graph of support vertices joined by nonzero arrows."""
    supp = support(m)
    edges = [(a.source, a.target) for a in _internal_arrows(m.quiver, supp) if not m.map(a).is_zero()]
    return undirected_components(supp, edges)


def thin_decompose(m: Rep) -> list[Staircase]:
    """Interval summands of a thin module over the equioriented 2D grid, sorted."""
    rows, cols = _grid_of(m.quiver)
    require_valid(m)
    if not is_thin(m):
        raise ValueError("thin_decompose needs a thin module")
    out = []
    for comp in thin_components(m):
        piece = restrict_to_vertices(m, comp)
        if not classify(piece).is_pre_interval:
            raise InternalInconsistency(f"component at {vertex_name(min(comp))} is not pre-interval")
        rebase(piece)
        out.append(staircase_from_support(rows, cols, comp))
    return sorted(out)


def grid(m: int, n: int) -> GridQuiver:
    """The equioriented ``m x n`` commutative grid."""
    return equioriented(m, n)


def interval_supports(q: GridQuiver, max_vertices: int = 16) -> list[frozenset]:
    """All connected convex vertex sets of any grid, by exhaustive search.

    Meant for small grids of any shape or orientation; sets come out ordered
    by size, then by sorted vertex list.
    """
    verts = q.vertices
    if len(verts) > max_vertices:
        raise ValueError(f"exhaustive interval search is capped at {max_vertices} vertices")
    out = []
    for mask in range(1, 1 << len(verts)):
        s = frozenset(v for k, v in enumerate(verts) if mask >> k & 1)
        if is_connected(q, s) and is_convex(q, s):
            out.append(s)
    return sorted(out, key=lambda s: (len(s), sorted(s)))
