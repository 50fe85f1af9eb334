"""Ground-truth Krull-Schmidt decomposition over prime fields.

Splitting works on random endomorphisms: for ``g`` in End(M) and ``c`` in
F_p the Fitting decomposition ``M = ker (g-c)^D  (+)  im (g-c)^D`` is a
decomposition into subrepresentations, because ``g`` commutes with every
arrow map. A module is declared indecomposable only once End(M) is shown to
be local: every basis element is a scalar plus a nilpotent, and the
nilpotent parts span a nilpotent ideal.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .linalg import FieldSpec, Matrix, image_basis, is_invertible, kernel_basis
from .rep import Morphism, Rep, compose, dim_total, dim_vector, hom_basis, subrep


class UnsupportedField(ValueError):
    """Raised when an operation needs a finite field."""


class DecompositionError(RuntimeError):
    """The trial budget ran out before locality could be certified."""


@dataclass
class Decomposition:
    summands: list[tuple[Rep, int]]

    def dim_vector(self, quiver) -> dict:
        out = {v: 0 for v in quiver.vertices}
        for rep, k in self.summands:
            for v, d in rep.dims.items():
                out[v] += k * d
        return out

    @property
    def multiplicities(self) -> list[int]:
        return sorted(k for _, k in self.summands)


def _require_prime(field: FieldSpec, what: str):
    if not field.is_prime:
        raise UnsupportedField(f"{what} needs a prime field, got {field}")


def endomorphism_basis(m: Rep) -> list[Morphism]:
    return hom_basis(m, m)


# --- vertexwise helpers ------------------------------------------------------------


def _combine(field: FieldSpec, basis: list[Morphism], coeffs, verts) -> Morphism:
    p = field.p
    out = {}
    for v in verts:
        acc = None
        for c, b in zip(coeffs, basis):
            if c:
                term = b[v].array * int(c)
                acc = term if acc is None else acc + term
        if acc is None:
            acc = np.zeros(basis[0][v].shape, dtype=field.dtype)
        out[v] = Matrix._wrap(field, acc % p)
    return out


def _shift_power(gv: Matrix, c: int) -> Matrix:
    n = gv.rows
    return (gv - Matrix.identity(gv.field, n).scale(c)).power(n)


def _fitting_split(m: Rep, g: Morphism) -> tuple[dict, dict] | None:
    """A nontrivial Fitting splitting of ``m`` along ``g - c`` for some scalar ``c``."""
    field = m.field
    verts = [v for v in m.quiver.vertices if m.dim(v)]
    total = dim_total(m)
    for c in range(field.p):
        kers, ims, kdim = {}, {}, 0
        for v in verts:
            a = _shift_power(g[v], c)
            kers[v] = kernel_basis(a)
            ims[v] = image_basis(a)
            kdim += kers[v].cols
        if 0 < kdim < total:
            for v in m.quiver.vertices:
                if not m.dim(v):
                    kers[v] = ims[v] = Matrix.zeros(field, 0, 0)
            return kers, ims
    return None


def _eigenvalue(g: Morphism, m: Rep) -> int | None:
    """The scalar ``c`` with ``g - c`` nilpotent, if there is one."""
    verts = [v for v in m.quiver.vertices if m.dim(v)]
    for c in range(m.field.p):
        if all(_shift_power(g[v], c).is_zero() for v in verts):
            return c
    return None


def _flatten(f: Morphism, verts) -> np.ndarray:
    return np.concatenate([f[v].array.reshape(-1) for v in verts])


def _is_local(m: Rep, basis: list[Morphism]) -> bool:
    """Certify that End(m) is local with residue field F_p."""
    field = m.field
    verts = [v for v in m.quiver.vertices if m.dim(v)]
    nil = []
    for b in basis:
        c = _eigenvalue(b, m)
        if c is None:
            return False
        shifted = {v: b[v] - Matrix.identity(field, m.dim(v)).scale(c) for v in verts}
        if any(not x.is_zero() for x in shifted.values()):
            nil.append(shifted)
    if not nil:
        return True

    def span(fams):
        if not fams:
            return []
        mat = Matrix._wrap(field, np.stack([_flatten(f, verts) for f in fams], axis=1) % field.p)
        cols = image_basis(mat)
        out = []
        for j in range(cols.cols):
            flat, off, fam = cols.array[:, j], 0, {}
            for v in verts:
                d = m.dim(v)
                fam[v] = Matrix._wrap(field, flat[off:off + d * d].reshape(d, d).copy())
                off += d * d
            out.append(fam)
        return out

    # the nilpotent parts must span an ideal, and that ideal must be nilpotent
    ideal = span(nil)
    if len(ideal) != len(basis) - 1:
        return False
    if len(span(ideal + [compose(x, y) for x in ideal for y in ideal])) != len(ideal):
        return False
    power = ideal
    for _ in range(dim_total(m) + 1):
        if not power:
            return True
        power = span([compose(x, y) for x in power for y in ideal])
    return False


# --- decomposition -----------------------------------------------------------------


def _indecomposable_parts(m: Rep, rng: np.random.Generator) -> list[Rep]:
    if dim_total(m) == 0:
        return []
    basis = endomorphism_basis(m)
    if len(basis) == 1:
        return [m]
    verts = list(m.quiver.vertices)
    budget = 32 * len(basis)
    local = None
    for _ in range(budget):
        coeffs = rng.integers(0, m.field.p, size=len(basis))
        g = _combine(m.field, basis, coeffs, verts)
        split = _fitting_split(m, g)
        if split is not None:
            kers, ims = split
            return _indecomposable_parts(subrep(m, kers), rng) + _indecomposable_parts(subrep(m, ims), rng)
        if local is None:
            local = _is_local(m, basis)
            if local:
                return [m]
    raise DecompositionError(
        f"no splitting endomorphism found in {budget} trials and End is not certified local "
        f"(dim End = {len(basis)}, dim = {dim_total(m)})")


def isomorphic_indecomposables(a: Rep, b: Rep) -> bool:
    """Exact test, valid whenever ``a`` is indecomposable (any field).

    End(a) is local, so ``a`` is isomorphic to ``b`` iff some composite of
    basis morphisms ``a -> b -> a`` is invertible.
    """
    if dim_vector(a) != dim_vector(b):
        return False
    if a == b:
        return True
    fs = hom_basis(a, b)
    if not fs:
        return False
    gs = hom_basis(b, a)
    verts = [v for v in a.quiver.vertices if a.dim(v)]
    for f in fs:
        for g in gs:
            if all(is_invertible(g[v] @ f[v]) for v in verts):
                return True
    return False


def _merge(parts: list[Rep]) -> list[tuple[Rep, int]]:
    groups: list[list] = []
    for r in parts:
        for grp in groups:
            if isomorphic_indecomposables(grp[0], r):
                grp[1] += 1
                break
        else:
            groups.append([r, 1])
    return [(r, k) for r, k in groups]


def decompose(m: Rep, seed: int = 0) -> Decomposition:
    """Split ``m`` into indecomposables and group isomorphic ones."""
    _require_prime(m.field, "decompose")
    rng = np.random.default_rng(seed)
    return Decomposition(_merge(_indecomposable_parts(m, rng)))


def _has_invertible(hs: list[Morphism], verts, field: FieldSpec, rng, samples: int = 64,
                    exhaustive_limit: int = 4096) -> bool:
    if not hs:
        return not verts
    for _ in range(samples):
        f = _combine(field, hs, rng.integers(0, field.p, size=len(hs)), verts)
        if all(is_invertible(f[v]) for v in verts):
            return True
    if field.p ** len(hs) <= exhaustive_limit:
        for coeffs in itertools.product(range(field.p), repeat=len(hs)):
            f = _combine(field, hs, coeffs, verts)
            if all(is_invertible(f[v]) for v in verts):
                return True
        return False
    return None


def is_isomorphic(a: Rep, b: Rep, seed: int = 0) -> bool:
    """Whether ``a`` and ``b`` are isomorphic.

    Over the rationals only the fast paths are available.
    """
    if a.quiver != b.quiver or a.field != b.field:
        raise ValueError("representations live over different grids or fields")
    if dim_vector(a) != dim_vector(b):
        return False
    if a == b:
        return True
    _require_prime(a.field, "is_isomorphic beyond the fast paths")
    verts = [v for v in a.quiver.vertices if a.dim(v)]
    found = _has_invertible(hom_basis(a, b), verts, a.field, np.random.default_rng(seed))
    if found is not None:
        return found
    da, db = decompose(a, seed), decompose(b, seed)
    return _same_multiset(da, db)


def _same_multiset(da: Decomposition, db: Decomposition) -> bool:
    left = list(da.summands)
    for rb, kb in db.summands:
        for i, (ra, ka) in enumerate(left):
            if ka == kb and isomorphic_indecomposables(ra, rb):
                del left[i]
                break
        else:
            return False
    return not left


def multiplicity_bruteforce(l: Rep, m: Rep, seed: int = 0) -> int:
    """Number of summands of ``m`` isomorphic to the indecomposable ``l``."""
    _require_prime(m.field, "multiplicity_bruteforce")
    for r, k in decompose(m, seed).summands:
        if isomorphic_indecomposables(l, r):
            return k
    return 0


def summand_counter(dec: Decomposition, candidates: dict) -> Counter:
    """Match summands against labelled candidate indecomposables; unmatched go under ``None``."""
    out = Counter()
    for r, k in dec.summands:
        for label, c in candidates.items():
            if isomorphic_indecomposables(c, r):
                out[label] += k
                break
        else:
            out[None] += k
    return out


__all__ = [
    "UnsupportedField", "DecompositionError", "Decomposition", "endomorphism_basis", "decompose",
    "is_isomorphic", "isomorphic_indecomposables", "multiplicity_bruteforce", "summand_counter",
]
