"""Seeded random modules with known structure, for tests and benchmarks."""
from __future__ import annotations

from collections import Counter

import numpy as np

from .intervals import Staircase, _grid_of, enumerate_intervals, interval_rep
from .linalg import FieldSpec, Matrix, random_invertible, random_nonzero_scalar
from .quiver import GridQuiver, vertex_name
from .rep import IndicatorSum, Rep, base_change, cokernel, direct_sum, zero_rep


def random_base_change(m: Rep, rng: np.random.Generator) -> Rep:
    """Conjugate ``m`` by a random invertible matrix at every vertex."""
    g = {v: random_invertible(m.field, m.dim(v), rng) for v in m.quiver.vertices if m.dim(v)}
    return base_change(m, g)


def random_interval_sum(q: GridQuiver, k: int, field: FieldSpec, seed: int,
                        max_dim: int | None = None) -> tuple[Rep, Counter]:
    """A base-changed sum of ``k`` uniformly drawn interval modules, with the drawn multiset.

    With ``max_dim`` set, draws that would push some vertex above that
    dimension are rejected and redrawn (at most a few hundred times).
    """
    rng = np.random.default_rng(seed)
    m, n = _grid_of(q)
    pool = list(enumerate_intervals(m, n))
    load = Counter()
    drawn: list[Staircase] = []
    attempts = 0
    while len(drawn) < k and attempts < 200 * max(k, 1):
        attempts += 1
        st = pool[int(rng.integers(len(pool)))]
        if max_dim is not None and any(load[v] + 1 > max_dim for v in st.vertices):
            continue
        drawn.append(st)
        load.update(st.vertices)
    if not drawn:
        return zero_rep(q, field), Counter()
    total = direct_sum(*(interval_rep(q, st, field) for st in drawn))
    return random_base_change(total, rng), Counter(drawn)


def random_cokernel(q: GridQuiver, field: FieldSpec, seed: int, size_bound: int = 3,
                    max_dim: int | None = None) -> Rep:
    """Cokernel of a random morphism ``P1 -> P0`` between sums of projectives.

    ``P0`` has between 1 and ``size_bound`` summands and ``P1`` between 0 and
    ``size_bound``. A component ``P(v) -> P(w)`` may be nonzero only when ``w``
    reaches ``v``. With ``max_dim`` set, outputs exceeding it at some vertex
    are rejected and a fresh morphism is drawn.
    """
    rng = np.random.default_rng(seed)
    verts = q.vertices
    for _ in range(1000):
        tops = [verts[int(rng.integers(len(verts)))] for _ in range(int(rng.integers(1, size_bound + 1)))]
        rels = [verts[int(rng.integers(len(verts)))] for _ in range(int(rng.integers(0, size_bound + 1)))]
        p0 = IndicatorSum(q, field, [q.upper_set(w) for w in tops])
        p1 = IndicatorSum(q, field, [q.upper_set(v) for v in rels])
        scalars = [[random_nonzero_scalar(field, rng) if q.reachable(w, v) and rng.random() < 0.7 else 0
                    for v in rels] for w in tops]
        f = p1.morphism_to(p0, scalars)
        out, _ = cokernel(f, p0.rep)
        if max_dim is None or all(d <= max_dim for d in out.dims.values()):
            return out
    raise RuntimeError("could not satisfy the dimension bound")


def random_thin(q: GridQuiver, field: FieldSpec, seed: int, pieces: int | None = None) -> tuple[Rep, Counter]:
    """A thin module: pairwise disjoint intervals, each with random nonzero arrow scalars.

    Returns the module and the staircases used. Vertices outside every piece
    stay zero.
    """
    rng = np.random.default_rng(seed)
    m, n = _grid_of(q)
    pool = list(enumerate_intervals(m, n))
    if pieces is None:
        pieces = int(rng.integers(1, m * n // 2 + 1))
    used: set = set()
    chosen: list[Staircase] = []
    for _ in range(50 * pieces):
        if len(chosen) == pieces:
            break
        st = pool[int(rng.integers(len(pool)))]
        if used.isdisjoint(st.vertices):
            chosen.append(st)
            used |= st.vertices
    if not chosen:
        return zero_rep(q, field), Counter()
    total = direct_sum(*(interval_rep(q, st, field) for st in chosen))
    scal = {v: Matrix(field, [[random_nonzero_scalar(field, rng)]]) for v in used}
    return base_change(total, scal), Counter(chosen)


# The smallest non-interval indecomposable of a 2x3 grid, in local (row, col)
# coordinates: dimensions 1 2 1 over 0 1 1, glued at the top-right corner.
_ZIGZAG_DIMS = {(2, 1): 1, (2, 2): 2, (2, 3): 1, (1, 2): 1, (1, 3): 1}
_ZIGZAG_MAPS = {
    ((2, 1), (2, 2)): [[1], [0]],
    ((1, 2), (2, 2)): [[0], [1]],
    ((2, 2), (2, 3)): [[1, 1]],
    ((1, 2), (1, 3)): [[1]],
    ((1, 3), (2, 3)): [[1]],
}


def zigzag(q: GridQuiver, field: FieldSpec, corner=(0, 0), transpose: bool = False) -> Rep:
    """The 2x3 non-interval indecomposable placed with its lower-left box corner after ``corner``.

    ``transpose`` swaps its rows and columns, giving the 3x2 variant.
    """
    _grid_of(q)

    def place(v):
        r, c = (v[1], v[0]) if transpose else v
        return (r + corner[0], c + corner[1])

    dims = {place(v): d for v, d in _ZIGZAG_DIMS.items()}
    maps = {}
    for (a, b), rows in _ZIGZAG_MAPS.items():
        maps[f"{vertex_name(place(a))}->{vertex_name(place(b))}"] = Matrix(field, rows)
    return Rep(q, field, dims, maps)


def random_with_zigzag(q: GridQuiver, field: FieldSpec, seed: int, k: int = 2,
                       max_dim: int | None = None) -> tuple[Rep, Counter]:
    """A base-changed sum of one randomly placed :func:`zigzag` and up to ``k`` interval modules.

    The counter lists the interval summands only.
    """
    rng = np.random.default_rng(seed)
    m, n = _grid_of(q)
    placements = [(t, (r, c)) for t in (False, True)
                  for r in range(m - (3 if t else 2) + 1) for c in range(n - (2 if t else 3) + 1)]
    if not placements:
        raise ValueError(f"{q} has no room for a 2x3 box")
    t, corner = placements[int(rng.integers(len(placements)))]
    z = zigzag(q, field, corner, t)
    load = Counter({v: z.dim(v) for v in q.vertices if z.dim(v)})
    pool = list(enumerate_intervals(m, n))
    drawn: list[Staircase] = []
    for _ in range(200 * max(k, 1)):
        if len(drawn) == k:
            break
        st = pool[int(rng.integers(len(pool)))]
        if max_dim is not None and any(load[v] + 1 > max_dim for v in st.vertices):
            continue
        drawn.append(st)
        load.update(st.vertices)
    total = direct_sum(z, *(interval_rep(q, st, field) for st in drawn))
    return random_base_change(total, rng), Counter(drawn)


__all__ = ["random_base_change", "random_interval_sum", "random_cokernel", "random_thin", "zigzag",
           "random_with_zigzag"]
