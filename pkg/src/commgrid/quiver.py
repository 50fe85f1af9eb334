"""Commutative grids: finite products of A_n quivers with orientations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

FORWARD = "forward"
BACKWARD = "backward"

Vertex = tuple  # tuple[int, ...], 1-based


@dataclass(frozen=True, order=True)
class Arrow:
    source: Vertex
    target: Vertex
    axis: int

    @property
    def name(self) -> str:
        return f"{vertex_name(self.source)}->{vertex_name(self.target)}"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class UnitSquare:
    """An elementary square; ``path1`` and ``path2`` run from ``source`` to ``sink``."""

    source: Vertex
    sink: Vertex
    path1: tuple[Arrow, Arrow]
    path2: tuple[Arrow, Arrow]

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.path1 + self.path2

    @property
    def name(self) -> str:
        return f"{vertex_name(self.source)}=>{vertex_name(self.sink)}"


def vertex_name(v: Vertex) -> str:
    return ",".join(str(c) for c in v)


def parse_vertex(text: str) -> Vertex:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise ValueError(f"bad vertex name {text!r}") from None


def _orientation_word(size: int, word) -> tuple[str, ...]:
    if word is None:
        return (FORWARD,) * (size - 1)
    if isinstance(word, str):
        if set(word) <= {"f", "b"}:
            word = [FORWARD if ch == "f" else BACKWARD for ch in word]
        else:
            raise ValueError(f"orientation string must use 'f'/'b', got {word!r}")
    word = tuple(word)
    if len(word) != size - 1:
        raise ValueError(f"orientation word of a size-{size} factor needs {size - 1} letters, got {len(word)}")
    for w in word:
        if w not in (FORWARD, BACKWARD):
            raise ValueError(f"orientation letters are {FORWARD!r} or {BACKWARD!r}, got {w!r}")
    return word


@dataclass(frozen=True)
class GridQuiver:
    """Product of A_n factors bound by full commutativity relations.

    ``sizes[k]`` is the length of factor ``k`` and ``orientations[k][c-1]``
    says whether the arrow between coordinates ``c`` and ``c+1`` points
    forward (``c -> c+1``) or backward.
    """

    sizes: tuple[int, ...]
    orientations: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("a grid needs at least one factor")
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"factor sizes must be positive, got {self.sizes}")
        if len(self.orientations) != len(self.sizes):
            raise ValueError("one orientation word per factor")

    # --- derived structure ---------------------------------------------------

    @property
    def ndim(self) -> int:
        return len(self.sizes)

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(product(*(range(1, s + 1) for s in self.sizes)))

    @cached_property
    def index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def _step(self, v: Vertex, axis: int, c: int) -> Arrow:
        lo = v[:axis] + (c,) + v[axis + 1:]
        hi = v[:axis] + (c + 1,) + v[axis + 1:]
        if self.orientations[axis][c - 1] == FORWARD:
            return Arrow(lo, hi, axis)
        return Arrow(hi, lo, axis)

    @cached_property
    def arrows(self) -> tuple[Arrow, ...]:
        out = []
        for v in self.vertices:
            for axis in range(self.ndim):
                c = v[axis]
                if c < self.sizes[axis]:
                    out.append(self._step(v, axis, c))
        out.sort(key=lambda a: (self.index[a.source], a.axis))
        return tuple(out)

    @cached_property
    def arrow_index(self) -> dict[Arrow, int]:
        return {a: i for i, a in enumerate(self.arrows)}

    @cached_property
    def arrows_by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def out_arrows(self) -> dict[Vertex, tuple[Arrow, ...]]:
        out: dict[Vertex, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a)
        return {v: tuple(a) for v, a in out.items()}

    @cached_property
    def in_arrows(self) -> dict[Vertex, tuple[Arrow, ...]]:
        out: dict[Vertex, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.target].append(a)
        return {v: tuple(a) for v, a in out.items()}

    @cached_property
    def squares(self) -> tuple[UnitSquare, ...]:
        out = []
        for v in self.vertices:
            for k in range(self.ndim):
                for l in range(k + 1, self.ndim):
                    if v[k] == self.sizes[k] or v[l] == self.sizes[l]:
                        continue
                    corners = [v[:k] + (v[k] + dk,) + v[k + 1:] for dk in (0, 1)]
                    corners = [c[:l] + (c[l] + dl,) + c[l + 1:] for c in corners for dl in (0, 1)]
                    sides = [self._step(c, k, v[k]) for c in corners if c[k] == v[k]]
                    sides += [self._step(c, l, v[l]) for c in corners if c[l] == v[l]]
                    targets = {a.target for a in sides}
                    src = next(c for c in corners if c not in targets)
                    sources = {a.source for a in sides}
                    snk = next(c for c in corners if c not in sources)
                    first = sorted((a for a in sides if a.source == src), key=lambda a: a.axis)
                    paths = []
                    for a in first:
                        b = next(b for b in sides if b.source == a.target and b.target == snk)
                        paths.append((a, b))
                    out.append(UnitSquare(src, snk, paths[0], paths[1]))
        return tuple(out)

    # --- predicates ----------------------------------------------------------

    @property
    def is_equioriented(self) -> bool:
        return all(w == FORWARD for word in self.orientations for w in word)

    @property
    def is_2d_equioriented(self) -> bool:
        return self.ndim == 2 and self.is_equioriented

    @property
    def shape(self) -> tuple[int, ...]:
        return self.sizes

    def check_vertex(self, v: Vertex) -> Vertex:
        v = tuple(v)
        if len(v) != self.ndim or any(not 1 <= c <= s for c, s in zip(v, self.sizes)):
            raise ValueError(f"vertex {v} is not in the {'x'.join(map(str, self.sizes))} grid")
        return v

    def _factor_reaches(self, axis: int, a: int, b: int) -> bool:
        word = self.orientations[axis]
        if a <= b:
            return all(word[c - 1] == FORWARD for c in range(a, b))
        return all(word[c - 1] == BACKWARD for c in range(b, a))

    def reachable(self, v: Vertex, w: Vertex) -> bool:
        """Whether a directed path ``v -> w`` exists (the empty path included).

        Paths in a product quiver are shuffles of paths in the factors, so
        this is a coordinatewise test.
        """
        v, w = self.check_vertex(v), self.check_vertex(w)
        return all(self._factor_reaches(k, a, b) for k, (a, b) in enumerate(zip(v, w)))

    def upper_set(self, v: Vertex) -> frozenset:
        v = self.check_vertex(v)
        return frozenset(w for w in self.vertices if self.reachable(v, w))

    def lower_set(self, v: Vertex) -> frozenset:
        v = self.check_vertex(v)
        return frozenset(w for w in self.vertices if self.reachable(w, v))

    def topological_order(self) -> list[Vertex]:
        indeg = {v: len(self.in_arrows[v]) for v in self.vertices}
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.out_arrows[v]:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    ready.append(a.target)
        return order

    # --- derived grids -------------------------------------------------------

    def opposite(self) -> "GridQuiver":
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
        return GridQuiver(self.sizes, tuple(tuple(flip[w] for w in word) for word in self.orientations))

    def opposite_arrow(self, a: Arrow) -> Arrow:
        return Arrow(a.target, a.source, a.axis)

    def subgrid(self, lo: Vertex, hi: Vertex) -> "GridQuiver":
        """The box ``lo <= v <= hi`` (coordinatewise) as a grid of its own."""
        sizes = tuple(h - l + 1 for l, h in zip(lo, hi))
        words = tuple(word[l - 1:h - 1] for word, l, h in zip(self.orientations, lo, hi))
        return GridQuiver(sizes, words)

    def __str__(self):
        parts = []
        for s, word in zip(self.sizes, self.orientations):
            tag = "".join("f" if w == FORWARD else "b" for w in word)
            parts.append(f"{s}" if all(w == FORWARD for w in word) else f"{s}[{tag}]")
        return "x".join(parts)


def make_grid(factors: Sequence) -> GridQuiver:
    """Build a grid from factors given as sizes or ``(size, orientation)`` pairs.

    An orientation is a sequence of ``"forward"``/``"backward"`` or a string
    over ``f``/``b``; a bare size means an equioriented factor.

    >>> q = make_grid([2, 3])
    >>> len(q.vertices), len(q.arrows), len(q.squares)
    (6, 7, 2)
    """
    factors = list(factors)
    if not factors:
        raise ValueError("a grid needs at least one factor")
    sizes, words = [], []
    for f in factors:
        if isinstance(f, int):
            size, word = f, None
        else:
            size, word = f
        if size < 1:
            raise ValueError(f"factor sizes must be positive, got {size}")
        sizes.append(size)
        words.append(_orientation_word(size, word))
    return GridQuiver(tuple(sizes), tuple(words))


def equioriented(*sizes: int) -> GridQuiver:
    return make_grid(list(sizes))


def undirected_components(vertices: Iterable[Vertex], edges: Iterable[tuple[Vertex, Vertex]]) -> list[frozenset]:
    """Connected components of an undirected graph, in order of least vertex."""
    vertices = sorted(vertices)
    adj: dict[Vertex, set] = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen: set = set()
    comps = []
    for v in vertices:
        if v in seen:
            continue
        stack, comp = [v], set()
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.add(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps
