"""Representations (persistence modules) of commutative grids."""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import (
    FieldSpec,
    Matrix,
    block_diag,
    image_basis,
    inverse,
    is_invertible,
    kernel_basis,
    left_kernel_basis,
    rank,
    solve,
)
from .quiver import Arrow, GridQuiver, Vertex, vertex_name

Morphism = dict  # Vertex -> Matrix, shape dims_target(v) x dims_source(v)


class Rep:
    """A finite-dimensional representation: a dimension per vertex, a matrix per arrow.

    Missing dimensions default to 0 and missing maps to zero matrices. The
    constructor does not check shapes or commutativity; see :func:`validate`.
    """

    __slots__ = ("quiver", "field", "_dims", "_maps", "_key")

    def __init__(self, quiver: GridQuiver, field: FieldSpec,
                 dims: Mapping[Vertex, int] | None = None,
                 maps: Mapping[Arrow | str, Matrix] | None = None):
        self.quiver = quiver
        self.field = field
        full = {v: 0 for v in quiver.vertices}
        for v, d in (dims or {}).items():
            v = quiver.check_vertex(v)
            if d < 0:
                raise ValueError(f"negative dimension at {vertex_name(v)}")
            full[v] = int(d)
        self._dims = full
        given = {}
        for a, m in (maps or {}).items():
            if isinstance(a, str):
                if a not in quiver.arrows_by_name:
                    raise ValueError(f"no arrow {a!r} in the grid")
                a = quiver.arrows_by_name[a]
            elif a not in quiver.arrow_index:
                raise ValueError(f"arrow {a} is not in the grid")
            if m.field != field:
                raise ValueError(f"map on {a} is over {m.field}, expected {field}")
            given[a] = m
        self._maps = {
            a: given.get(a) or Matrix.zeros(field, full[a.target], full[a.source])
            for a in quiver.arrows
        }
        self._key = None

    @property
    def dims(self) -> dict[Vertex, int]:
        return dict(self._dims)

    def dim(self, v: Vertex) -> int:
        return self._dims[v]

    def map(self, a: Arrow) -> Matrix:
        return self._maps[a]

    @property
    def maps(self) -> dict[Arrow, Matrix]:
        return dict(self._maps)

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.quiver, self.field, tuple(self._dims[v] for v in self.quiver.vertices),
                         tuple((m.shape, m.entries) for m in self._maps.values()))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Rep):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        dims = {vertex_name(v): d for v, d in self._dims.items() if d}
        return f"Rep({self.quiver}, {self.field}, dims={dims})"


def zero_rep(quiver: GridQuiver, field: FieldSpec) -> Rep:
    return Rep(quiver, field)


def validate(m: Rep) -> list[str]:
    """Shape and unit-square violations; an empty list means ``m`` is valid."""
    problems = []
    for a in m.quiver.arrows:
        want = (m.dim(a.target), m.dim(a.source))
        if m.map(a).shape != want:
            problems.append(f"arrow {a.name}: expected shape {want[0]}x{want[1]}, got "
                            f"{m.map(a).rows}x{m.map(a).cols}")
    if problems:
        return problems
    for sq in m.quiver.squares:
        a1, b1 = sq.path1
        a2, b2 = sq.path2
        if m.map(b1) @ m.map(a1) != m.map(b2) @ m.map(a2):
            problems.append(f"square {sq.name}: composites {a1.name} then {b1.name} and "
                            f"{a2.name} then {b2.name} differ")
    return problems


def is_valid(m: Rep) -> bool:
    return not validate(m)


def require_valid(m: Rep) -> Rep:
    problems = validate(m)
    if problems:
        raise ValueError("invalid representation: " + "; ".join(problems))
    return m


def _same_category(a: Rep, b: Rep):
    if a.quiver != b.quiver:
        raise ValueError(f"quiver mismatch: {a.quiver} vs {b.quiver}")
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")


def dim_vector(m: Rep) -> dict[Vertex, int]:
    return m.dims


def dim_total(m: Rep) -> int:
    return sum(m.dims.values())


def support(m: Rep) -> frozenset:
    return frozenset(v for v, d in m.dims.items() if d)


def is_thin(m: Rep) -> bool:
    return all(d <= 1 for d in m.dims.values())


def direct_sum(*reps: Rep) -> Rep:
    if not reps:
        raise ValueError("direct_sum needs at least one summand")
    first = reps[0]
    for r in reps[1:]:
        _same_category(first, r)
    q, field = first.quiver, first.field
    dims = {v: sum(r.dim(v) for r in reps) for v in q.vertices}
    maps = {a: block_diag(field, [r.map(a) for r in reps]) for a in q.arrows}
    return Rep(q, field, dims, maps)


def base_change(m: Rep, g: Mapping[Vertex, Matrix]) -> Rep:
    """Transport ``m`` along invertible ``g(v)``: maps become ``g(w) m(a) g(v)^-1``.

    Vertices missing from ``g`` keep the identity.
    """
    ginv = {}
    for v, gv in g.items():
        if gv.shape != (m.dim(v), m.dim(v)):
            raise ValueError(f"base change at {vertex_name(v)} must be {m.dim(v)}x{m.dim(v)}")
        if not is_invertible(gv):
            raise ValueError(f"base change at {vertex_name(v)} is not invertible")
        ginv[v] = inverse(gv)
    maps = {}
    for a in m.quiver.arrows:
        x = m.map(a)
        if a.target in g:
            x = g[a.target] @ x
        if a.source in ginv:
            x = x @ ginv[a.source]
        maps[a] = x
    return Rep(m.quiver, m.field, m.dims, maps)


def dual(m: Rep) -> Rep:
    """The dual representation over the opposite grid (transposed maps)."""
    qop = m.quiver.opposite()
    maps = {qop.opposite_arrow(a): m.map(a).T for a in m.quiver.arrows}
    return Rep(qop, m.field, m.dims, maps)


# --- Hom spaces ------------------------------------------------------------------


def _hom_system(x: Rep, m: Rep) -> tuple[np.ndarray, list[tuple[Vertex, int, int, int]]]:
    """Constraint matrix of Hom(x, m) and the layout of its unknowns.

    Unknowns are the entries of ``f_v`` (``dim m(v) x dim x(v)``), vertices in
    canonical order, entries row-major; one block of rows per arrow.
    """
    _same_category(x, m)
    q, field = x.quiver, x.field
    layout, offset = [], {}
    n = 0
    for v in q.vertices:
        r, c = m.dim(v), x.dim(v)
        if r and c:
            offset[v] = n
            layout.append((v, n, r, c))
            n += r * c
    blocks = []
    for a in q.arrows:
        v, w = a.source, a.target
        rows = m.dim(w) * x.dim(v)
        if rows == 0 or n == 0:
            continue
        block = Matrix.zeros(field, rows, n).array.copy()
        if v in offset:
            # m(a) f_v  ->  kron(m(a), I)
            k = np.kron(m.map(a).array, Matrix.identity(field, x.dim(v)).array)
            block[:, offset[v]:offset[v] + k.shape[1]] += k
        if w in offset:
            # f_w x(a)  ->  kron(I, x(a)^T)
            k = np.kron(Matrix.identity(field, m.dim(w)).array, x.map(a).array.T)
            block[:, offset[w]:offset[w] + k.shape[1]] -= k
        blocks.append(block)
    if blocks:
        arr = np.concatenate(blocks, axis=0)
    else:
        arr = Matrix.zeros(field, 0, n).array
    if field.is_prime:
        arr = arr % field.p
    else:
        arr = Matrix(field, arr, arr.shape[0], n).array if arr.size else arr
    return arr, layout


def hom_dim(x: Rep, m: Rep) -> int:
    """``dim Hom(x, m)``: number of unknowns minus the rank of the constraints."""
    arr, layout = _hom_system(x, m)
    n = sum(r * c for _, _, r, c in layout)
    if n == 0:
        return 0
    return n - rank(Matrix._wrap(x.field, arr))


def _unpack(field: FieldSpec, x: Rep, m: Rep, layout, col: np.ndarray) -> Morphism:
    f = {v: Matrix.zeros(field, m.dim(v), x.dim(v)) for v in x.quiver.vertices}
    for v, off, r, c in layout:
        f[v] = Matrix._wrap(field, np.array(col[off:off + r * c], dtype=field.dtype).reshape(r, c))
    return f


def hom_basis(x: Rep, m: Rep) -> list[Morphism]:
    """A basis of Hom(x, m) as per-vertex matrix families."""
    arr, layout = _hom_system(x, m)
    n = sum(r * c for _, _, r, c in layout)
    if n == 0:
        return []
    ker = kernel_basis(Matrix._wrap(x.field, arr))
    return [_unpack(x.field, x, m, layout, ker.array[:, j]) for j in range(ker.cols)]


def is_morphism(f: Morphism, a: Rep, b: Rep) -> bool:
    for arr in a.quiver.arrows:
        if b.map(arr) @ f[arr.source] != f[arr.target] @ a.map(arr):
            return False
    return True


def compose(g: Morphism, f: Morphism) -> Morphism:
    return {v: g[v] @ f[v] for v in f}


def identity_morphism(m: Rep) -> Morphism:
    return {v: Matrix.identity(m.field, m.dim(v)) for v in m.quiver.vertices}


def is_isomorphism(f: Morphism) -> bool:
    return all(is_invertible(fv) for fv in f.values())


# --- paths, sub- and quotient representations ----------------------------------


def path_maps_to(m: Rep, target: Vertex) -> dict[Vertex, Matrix]:
    """``m(path x -> target)`` for every ``x`` that reaches ``target``.

    Any path will do: the unit-square relations make the composite unique.
    """
    q = m.quiver
    out = {target: Matrix.identity(m.field, m.dim(target))}
    for v in reversed(q.topological_order()):
        if v in out:
            continue
        for a in q.out_arrows[v]:
            if a.target in out:
                out[v] = out[a.target] @ m.map(a)
                break
    return out


def path_maps_from(m: Rep, source: Vertex) -> dict[Vertex, Matrix]:
    """``m(path source -> y)`` for every ``y`` reachable from ``source``."""
    q = m.quiver
    out = {source: Matrix.identity(m.field, m.dim(source))}
    for v in q.topological_order():
        if v in out:
            continue
        for a in q.in_arrows[v]:
            if a.source in out:
                out[v] = m.map(a) @ out[a.source]
                break
    return out


def subrep(m: Rep, bases: Mapping[Vertex, Matrix]) -> Rep:
    """The subrepresentation spanned by the columns of ``bases[v]`` (assumed invariant)."""
    q, field = m.quiver, m.field
    dims = {v: bases[v].cols for v in q.vertices}
    maps = {}
    for a in q.arrows:
        maps[a] = solve(bases[a.target], m.map(a) @ bases[a.source])
    return Rep(q, field, dims, maps)


def kernel(f: Morphism, a: Rep) -> tuple[Rep, Morphism]:
    """Kernel of ``f: a -> b`` with its inclusion into ``a``."""
    bases = {v: kernel_basis(f[v]) for v in a.quiver.vertices}
    return subrep(a, bases), bases


def image(f: Morphism, b: Rep) -> tuple[Rep, Morphism]:
    bases = {v: image_basis(f[v]) for v in b.quiver.vertices}
    return subrep(b, bases), bases


def cokernel(f: Morphism, b: Rep) -> tuple[Rep, Morphism]:
    """Cokernel of ``f: a -> b`` with the projection ``b -> coker``."""
    q, field = b.quiver, b.field
    proj = {}
    section = {}
    for v in q.vertices:
        fv = f[v]
        if b.dim(v) == 0:
            proj[v] = Matrix.zeros(field, 0, 0)
        elif fv.cols == 0:
            proj[v] = Matrix.identity(field, b.dim(v))
        else:
            proj[v] = left_kernel_basis(fv)
        section[v] = solve(proj[v], Matrix.identity(field, proj[v].rows))
    dims = {v: proj[v].rows for v in q.vertices}
    maps = {a: proj[a.target] @ b.map(a) @ section[a.source] for a in q.arrows}
    return Rep(q, field, dims, maps), proj


def quotient(m: Rep, bases: Mapping[Vertex, Matrix]) -> tuple[Rep, Morphism]:
    """``m`` modulo the invariant subspaces spanned by ``bases``."""
    return cokernel(bases, m)


def restrict(m: Rep, quiver: GridQuiver, offset: Sequence[int]) -> Rep:
    """Restrict ``m`` to a box subgrid whose origin sits at ``offset + 1``."""
    def lift(v):
        return tuple(c + o for c, o in zip(v, offset))
    dims = {v: m.dim(lift(v)) for v in quiver.vertices}
    maps = {a: m.map(Arrow(lift(a.source), lift(a.target), a.axis)) for a in quiver.arrows}
    return Rep(quiver, m.field, dims, maps)


# --- sums of thin "indicator" modules ------------------------------------------------


class IndicatorSum:
    """A direct sum of thin modules, one per vertex set, with identity maps inside each set.

    Projectives (upper sets), injectives (lower sets) and interval modules are
    all of this form. ``position[k][v]`` is the coordinate of summand ``k``
    inside the space at ``v``.
    """

    def __init__(self, quiver: GridQuiver, field: FieldSpec, supports: Sequence[Iterable[Vertex]]):
        self.quiver = quiver
        self.field = field
        self.supports = [frozenset(s) for s in supports]
        self.position: list[dict[Vertex, int]] = [dict() for _ in self.supports]
        dims = {}
        for v in quiver.vertices:
            n = 0
            for k, s in enumerate(self.supports):
                if v in s:
                    self.position[k][v] = n
                    n += 1
            dims[v] = n
        maps = {}
        for a in quiver.arrows:
            mat = Matrix.zeros(field, dims[a.target], dims[a.source]).array.copy()
            for k, s in enumerate(self.supports):
                if a.source in s and a.target in s:
                    mat[self.position[k][a.target], self.position[k][a.source]] = field(1)
            maps[a] = Matrix._wrap(field, mat)
        self.rep = Rep(quiver, field, dims, maps)

    def morphism_to(self, other: "IndicatorSum", scalars) -> Morphism:
        """The map with component ``scalars[j][i]`` times the canonical map summand i -> j.

        The canonical map is 1 on the intersection of the two supports; it is a
        morphism whenever the pair is a projective pair ``P(v) -> P(w)`` or an
        injective pair ``I(v) -> I(w)`` with ``w`` reaching ``v``.
        """
        f = {}
        for v in self.quiver.vertices:
            mat = Matrix.zeros(self.field, other.rep.dim(v), self.rep.dim(v)).array.copy()
            for i, si in enumerate(self.supports):
                if v not in si:
                    continue
                for j, sj in enumerate(other.supports):
                    c = scalars[j][i]
                    if c and v in sj:
                        mat[other.position[j][v], self.position[i][v]] = self.field(c)
            f[v] = Matrix._wrap(self.field, mat)
        return f


def indicator_rep(quiver: GridQuiver, field: FieldSpec, vertices: Iterable[Vertex]) -> Rep:
    return IndicatorSum(quiver, field, [vertices]).rep


def projective(quiver: GridQuiver, v: Vertex, field: FieldSpec) -> Rep:
    """``P(v)``: supported on the upper set of ``v`` with identity maps."""
    return indicator_rep(quiver, field, quiver.upper_set(v))


def injective(quiver: GridQuiver, v: Vertex, field: FieldSpec) -> Rep:
    """``I(v)``: supported on the lower set of ``v`` with identity maps."""
    return indicator_rep(quiver, field, quiver.lower_set(v))


def simple(quiver: GridQuiver, v: Vertex, field: FieldSpec) -> Rep:
    return indicator_rep(quiver, field, [quiver.check_vertex(v)])


def is_zero(m: Rep) -> bool:
    return dim_total(m) == 0


def total_matrix(f: Morphism, quiver: GridQuiver) -> Matrix:
    """Block-diagonal operator of a morphism on the total space."""
    field = next(iter(f.values())).field
    return block_diag(field, [f[v] for v in quiver.vertices])


__all__ = [
    "Rep", "Morphism", "zero_rep", "validate", "is_valid", "require_valid", "dim_vector", "dim_total",
    "support", "is_thin", "direct_sum", "base_change", "dual", "hom_dim", "hom_basis", "is_morphism",
    "compose", "identity_morphism", "is_isomorphism", "path_maps_to", "path_maps_from", "subrep",
    "kernel", "image", "cokernel", "quotient", "restrict", "IndicatorSum", "indicator_rep",
    "projective", "injective", "simple", "is_zero", "total_matrix",
]
