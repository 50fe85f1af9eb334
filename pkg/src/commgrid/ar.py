"""Injective copresentations, the inverse translate, source maps and multiplicities.

Over a commutative grid ``Hom(I(v), I(w))`` is one-dimensional when ``w``
reaches ``v`` and zero otherwise, and likewise ``Hom(P(v), P(w))``. Both are
spanned by the canonical map that is 1 on the overlap of the supports, so a
map between sums of injectives is a scalar matrix, and the inverse Nakayama
functor carries it verbatim to sums of projectives.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InternalInconsistency
from .linalg import FieldSpec, Matrix, hstack, kernel_basis, left_kernel_basis, rank, solve, vstack
from .quiver import Vertex
from .rep import (
    IndicatorSum,
    Morphism,
    Rep,
    compose,
    cokernel,
    dim_total,
    dual,
    hom_basis,
    hom_dim,
    injective,
    path_maps_to,
    projective,
    require_valid,
    subrep,
    zero_rep,
)


class NotIndecomposable(ValueError):
    pass


# --- socle and injective envelopes ----------------------------------------------------


@dataclass(frozen=True)
class Socle:
    dims: dict
    embedding: dict  # Vertex -> Matrix whose columns span soc(v)

    def rep(self, m: Rep) -> Rep:
        return subrep(m, self.embedding)


def socle(m: Rep) -> Socle:
    """Vertexwise joint kernel of all outgoing maps."""
    q, field = m.quiver, m.field
    emb = {}
    for v in q.vertices:
        outs = [m.map(a) for a in q.out_arrows[v]]
        if outs:
            emb[v] = kernel_basis(vstack(field, outs, cols=m.dim(v)))
        else:
            emb[v] = Matrix.identity(field, m.dim(v))
    return Socle({v: e.cols for v, e in emb.items()}, emb)


@dataclass
class Envelope:
    labels: list  # one vertex per injective summand
    target: IndicatorSum
    map: Morphism  # m -> target


def injective_envelope(m: Rep) -> Envelope:
    """``m -> ⊕ I(v)^{dim soc(v)}``, injective because it is on the socle."""
    q, field = m.quiver, m.field
    soc = socle(m)
    labels, functionals = [], []
    for v in q.vertices:
        s = soc.embedding[v]
        if s.cols == 0:
            continue
        # rows phi with phi @ s = I pick a dual basis of the socle
        phi = solve(s.T, Matrix.identity(field, s.cols)).T
        for k in range(s.cols):
            labels.append(v)
            functionals.append(Matrix._wrap(field, phi.array[k:k + 1].copy()))
    target = IndicatorSum(q, field, [q.lower_set(v) for v in labels])
    paths = {v: path_maps_to(m, v) for v in set(labels)}
    f = {}
    for x in q.vertices:
        rows = [Matrix.zeros(field, 0, m.dim(x))] * target.rep.dim(x)
        for k, v in enumerate(labels):
            if x in target.position[k]:
                rows[target.position[k][x]] = functionals[k] @ paths[v][x]
        f[x] = vstack(field, rows, cols=m.dim(x)) if rows else Matrix.zeros(field, 0, m.dim(x))
    return Envelope(labels, target, f)


@dataclass
class InjectiveCopresentation:
    """``0 -> m -> I0 -> I1`` with ``I0``, ``I1`` minimal.

    ``scalars[j][i]`` is the coefficient of the canonical map from summand
    ``i`` of ``I0`` to summand ``j`` of ``I1``.
    """

    labels0: list
    labels1: list
    i0: IndicatorSum
    i1: IndicatorSum
    into: Morphism
    diff: Morphism
    scalars: list


def injective_copresentation(m: Rep) -> InjectiveCopresentation:
    require_valid(m)
    q = m.quiver
    env0 = injective_envelope(m)
    coker, proj = cokernel(env0.map, env0.target.rep)
    env1 = injective_envelope(coker)
    diff = compose(env1.map, proj)
    scalars = []
    for j, w in enumerate(env1.labels):
        row = []
        for i, v in enumerate(env0.labels):
            if q.reachable(w, v):
                row.append(diff[w][env1.target.position[j][w], env0.target.position[i][w]])
            else:
                row.append(0)
        scalars.append(row)
    return InjectiveCopresentation(env0.labels, env1.labels, env0.target, env1.target,
                                   env0.map, diff, scalars)


def tau_inverse(l: Rep) -> Rep:
    """Inverse Auslander-Reiten translate: ``coker(ν⁻¹I0 -> ν⁻¹I1)``."""
    pres = injective_copresentation(l)
    q, field = l.quiver, l.field
    if not pres.labels1:
        return zero_rep(q, field)
    p0 = IndicatorSum(q, field, [q.upper_set(v) for v in pres.labels0])
    p1 = IndicatorSum(q, field, [q.upper_set(w) for w in pres.labels1])
    g = p0.morphism_to(p1, pres.scalars)
    return cokernel(g, p1.rep)[0]


def tau(m: Rep) -> Rep:
    """Auslander-Reiten translate, by duality: ``D τ⁻¹ D``."""
    back = dual(tau_inverse(dual(m)))
    # dual of the opposite grid lands on the original grid object
    return Rep(m.quiver, m.field, back.dims, {a: back.map(a) for a in m.quiver.arrows})


def is_injective_module(l: Rep) -> bool:
    return dim_total(tau_inverse(l)) == 0


# --- extensions and the almost split sequence ------------------------------------------------


def _vec_offsets(shapes):
    out, n = [], 0
    for r, c in shapes:
        out.append(n)
        n += r * c
    return out, n


def _kron(field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if 0 in a.shape or 0 in b.shape:
        return Matrix.zeros(field, a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]).array.copy()
    return np.kron(a, b)


def _eye(field, n):
    return Matrix.identity(field, n).array


class _ExtensionSpace:
    """Cocycles ``h = (h_a : N(s a) -> L(t a))`` for extensions of ``n`` by ``l``.

    A cocycle defines the module ``E(a) = [[L(a), h_a], [0, N(a)]]``; the
    unit-square relations on ``E`` are linear in ``h``. Coboundaries come from
    ``phi_v : N(v) -> L(v)`` via ``h_a = L(a) phi_v - phi_w N(a)``.
    """

    def __init__(self, l: Rep, n: Rep):
        self.l, self.n = l, n
        q, field = l.quiver, l.field
        self.field = field
        self.shapes = [(l.dim(a.target), n.dim(a.source)) for a in q.arrows]
        self.offsets, self.size = _vec_offsets(self.shapes)
        off = dict(zip(q.arrows, self.offsets))

        rows = []
        for sq in q.squares:
            r = l.dim(sq.sink) * n.dim(sq.source)
            if r == 0 or self.size == 0:
                continue
            block = Matrix.zeros(field, r, self.size).array.copy()
            for sign, (a1, a2) in ((1, sq.path1), (-1, sq.path2)):
                # L(a2) h_a1 + h_a2 N(a1)
                k1 = _kron(field, l.map(a2).array, _eye(field, n.dim(a1.source)))
                k2 = _kron(field, _eye(field, l.dim(a2.target)), n.map(a1).array.T)
                block[:, off[a1]:off[a1] + k1.shape[1]] += sign * k1
                block[:, off[a2]:off[a2] + k2.shape[1]] += sign * k2
            rows.append(block)
        cons = Matrix(field, np.concatenate(rows, axis=0), 0, self.size) if rows else None
        self.cocycles = kernel_basis(cons) if cons is not None else Matrix.identity(field, self.size)

        cols = []
        for v in q.vertices:
            pr, pc = l.dim(v), n.dim(v)
            if pr * pc == 0:
                continue
            block = Matrix.zeros(field, self.size, pr * pc).array.copy()
            for a in q.out_arrows[v]:  # L(a) phi_v
                k = _kron(field, l.map(a).array, _eye(field, pc))
                block[off[a]:off[a] + k.shape[0], :] += k
            for a in q.in_arrows[v]:  # - phi_v N(a)
                k = _kron(field, _eye(field, pr), n.map(a).array.T)
                block[off[a]:off[a] + k.shape[0], :] -= k
            cols.append(block)
        if cols:
            self.coboundaries = Matrix(field, np.concatenate(cols, axis=1), self.size, 0)
        else:
            self.coboundaries = Matrix.zeros(field, self.size, 0)

    def dim_ext(self) -> int:
        return rank(self.cocycles) - rank(self.coboundaries)

    def act(self, g: Morphism) -> Matrix:
        """Matrix of ``h -> h . g`` (precomposition by ``g`` in End(N))."""
        field, q = self.field, self.l.quiver
        arr = Matrix.zeros(field, self.size, self.size).array.copy()
        for a, off, (r, c) in zip(q.arrows, self.offsets, self.shapes):
            if r * c == 0:
                continue
            k = _kron(field, _eye(field, r), g[a.source].array.T)
            arr[off:off + r * c, off:off + r * c] = k
        return Matrix(field, arr, self.size, self.size)

    def build(self, h: Matrix) -> Rep:
        l, n, field, q = self.l, self.n, self.field, self.l.quiver
        dims = {v: l.dim(v) + n.dim(v) for v in q.vertices}
        maps = {}
        for a, off, (r, c) in zip(q.arrows, self.offsets, self.shapes):
            ha = Matrix._wrap(field, h.array[off:off + r * c, 0].copy().reshape(r, c))
            top = hstack(field, [l.map(a), ha], rows=r)
            bottom = hstack(field, [Matrix.zeros(field, n.dim(a.target), l.dim(a.source)), n.map(a)],
                            rows=n.dim(a.target))
            maps[a] = vstack(field, [top, bottom], cols=dims[a.source])
        return Rep(q, field, dims, maps)


def _scalar_part(g: Morphism, m: Rep):
    """The unique eigenvalue of an endomorphism of an indecomposable, or None."""
    field = m.field
    verts = [v for v in m.quiver.vertices if m.dim(v)]
    lam = None
    for v in verts:
        d = m.dim(v)
        if not field.is_prime or d % field.p:
            lam = field(g[v].trace() * field.inv(field(d)))
            break
    if lam is None:
        v = verts[0]
        for c in field.elements():
            if rank(g[v] - Matrix.identity(field, m.dim(v)).scale(c)) < m.dim(v):
                lam = c
                break
        if lam is None:
            return None
    for v in verts:
        shifted = g[v] - Matrix.identity(field, m.dim(v)).scale(lam)
        if not shifted.power(m.dim(v)).is_zero():
            return None
    return lam


def endomorphism_radical(m: Rep) -> list[Morphism]:
    """Spanning set of the nilpotent endomorphisms of an indecomposable ``m``.

    Requires End(m)/rad = K; raises :class:`NotIndecomposable` otherwise.
    """
    out = []
    for g in hom_basis(m, m):
        lam = _scalar_part(g, m)
        if lam is None:
            raise NotIndecomposable("endomorphism without a unique eigenvalue in the ground field")
        out.append({v: g[v] - Matrix.identity(m.field, m.dim(v)).scale(lam) for v in g})
    return out


def almost_split_middle(l: Rep, n: Rep) -> Rep:
    """Middle term of the almost split sequence ``0 -> l -> E -> n -> 0``, ``n = τ⁻¹l``.

    The sequence is the extension class in the socle of Ext¹(n, l) as a right
    End(n)-module.
    """
    ext = _ExtensionSpace(l, n)
    field = l.field
    z = ext.cocycles
    if ext.dim_ext() <= 0:
        raise NotIndecomposable("Ext¹(τ⁻¹L, L) vanishes; L is not an indecomposable non-injective")
    # rows of `quot` vanish exactly on the coboundaries
    quot = left_kernel_basis(ext.coboundaries) if ext.coboundaries.cols else Matrix.identity(field, ext.size)
    conds = [quot @ ext.act(r) @ z for r in endomorphism_radical(n)]
    if conds:
        sol = kernel_basis(vstack(field, conds, cols=z.cols))
        cands = z @ sol
    else:
        cands = z
    for j in range(cands.cols):
        h = Matrix._wrap(field, cands.array[:, j:j + 1].copy())
        if not (quot @ h).is_zero():
            return ext.build(h)
    raise InternalInconsistency("socle of Ext¹ is empty")


@dataclass(frozen=True)
class SourceMapData:
    """Target ``E`` of the source map out of ``L`` and ``τ⁻¹L`` (zero if ``L`` is injective)."""

    L: Rep
    E: Rep
    tau_inv: Rep

    @property
    def injective(self) -> bool:
        return dim_total(self.tau_inv) == 0


@lru_cache(maxsize=8192)
def source_map_target(l: Rep) -> SourceMapData:
    """Source-map data for an indecomposable ``l`` (certified by the caller)."""
    require_valid(l)
    if dim_total(l) == 0:
        raise ValueError("the zero module has no source map")
    if hom_dim(l, l) > 1:
        endomorphism_radical(l)  # raises unless every endomorphism is scalar plus nilpotent
    n = tau_inverse(l)
    if dim_total(n) == 0:
        soc = socle(l)
        return SourceMapData(l, cokernel(soc.embedding, l)[0], n)
    return SourceMapData(l, almost_split_middle(l, n), n)


def multiplicity(l: Rep, m: Rep) -> int:
    """Krull-Schmidt multiplicity of the indecomposable ``l`` in ``m``."""
    data = source_map_target(l)
    return hom_dim(l, m) - hom_dim(data.E, m) + hom_dim(data.tau_inv, m)


__all__ = [
    "Socle", "socle", "Envelope", "injective_envelope", "InjectiveCopresentation",
    "injective_copresentation", "tau_inverse", "tau", "is_injective_module", "almost_split_middle",
    "endomorphism_radical", "SourceMapData", "source_map_target", "multiplicity", "projective",
    "injective", "NotIndecomposable",
]
