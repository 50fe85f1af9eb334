"""Decomposability over a candidate set by dimension accounting.

For pairwise non-isomorphic indecomposables ``L`` with Krull-Schmidt
multiplicities ``d_M(L)`` read off Hom dimensions, ``M`` decomposes into
members of the set exactly when ``sum d_M(L) dim L = dim M``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .ar import source_map_target
from .bruteforce import isomorphic_indecomposables
from .errors import InternalInconsistency
from .intervals import Staircase, enumerate_intervals, interval_rep, interval_supports
from .quiver import vertex_name
from .rep import Rep, dim_total, dim_vector, hom_dim, indicator_rep, require_valid, restrict, support


class UnsupportedQuiver(ValueError):
    """The operation is only defined on equioriented 2D grids."""


@dataclass
class OracleVerdict:
    decomposable: bool
    multiplicities: dict = field(default_factory=dict)
    dim_accounted: int = 0
    dim_total: int = 0
    condition3_holds: bool = True

    def nonzero(self) -> dict:
        return {k: d for k, d in self.multiplicities.items() if d}


@dataclass(frozen=True)
class _Terms:
    d: int
    dim: int
    s_l: int
    s_e: int
    s_tau: int


def _terms(l: Rep, m: Rep) -> _Terms:
    data = source_map_target(l)
    s_l = hom_dim(l, m)
    s_e = hom_dim(data.E, m)
    s_tau = hom_dim(data.tau_inv, m) if dim_total(data.tau_inv) else 0
    return _Terms(s_l - s_e + s_tau, dim_total(l), s_l, s_e, s_tau)


def _as_rep(member, m: Rep) -> Rep:
    if isinstance(member, Staircase):
        return interval_rep(m.quiver, member, m.field)
    if isinstance(member, Rep):
        if member.quiver != m.quiver or member.field != m.field:
            raise ValueError("candidate lives over a different grid or field")
        return require_valid(member)
    raise TypeError(f"candidates are Staircases or Reps, got {type(member).__name__}")


def _check_distinct(members: list, reps: list[Rep]):
    staircases = [x for x in members if isinstance(x, Staircase)]
    if len(set(staircases)) != len(staircases):
        raise ValueError("candidate set lists a staircase twice")
    by_dims: dict = {}
    for i, r in enumerate(reps):
        if dim_total(r) == 0:
            raise ValueError("the zero module is not an indecomposable candidate")
        key = tuple(sorted(dim_vector(r).items()))
        for j in by_dims.get(key, []):
            both_staircases = isinstance(members[i], Staircase) and isinstance(members[j], Staircase)
            if not both_staircases and isomorphic_indecomposables(reps[j], r):
                raise ValueError(f"candidates {j} and {i} are isomorphic")
        by_dims.setdefault(key, []).append(i)


def s_decomposable(m: Rep, s: Sequence, workers: int = 1) -> OracleVerdict:
    """Whether ``m`` is a direct sum of members of ``s``.

    ``s`` holds Staircases or certified indecomposable Reps, pairwise
    non-isomorphic. Multiplicities are keyed by the members themselves.
    """
    require_valid(m)
    members = list(s)
    reps = [_as_rep(x, m) for x in members]
    _check_distinct(members, reps)
    if workers > 1 and len(reps) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            terms = list(pool.map(lambda l: _terms(l, m), reps))
    else:
        terms = [_terms(l, m) for l in reps]

    total = dim_total(m)
    mults: dict[Hashable, int] = {}
    for member, t in zip(members, terms):
        if t.d < 0:
            raise InternalInconsistency(f"negative multiplicity {t.d} for candidate {label(member)}")
        mults[member] = t.d
    accounted = sum(t.d * t.dim for t in terms)
    lhs = total + sum(t.s_e * t.dim for t in terms)
    rhs = sum((t.s_l + t.s_tau) * t.dim for t in terms)
    cond2, cond3 = accounted == total, lhs == rhs
    if cond2 != cond3:
        raise InternalInconsistency("dimension accounting and the Hom identity disagree")
    if accounted > total:
        raise InternalInconsistency(f"candidates account for {accounted} > {total} dimensions")
    return OracleVerdict(cond2, mults, accounted, total, cond3)


def _bounding_box(m: Rep) -> tuple[tuple[int, int], tuple[int, int]]:
    supp = support(m)
    rows = [v[0] for v in supp]
    cols = [v[1] for v in supp]
    return (min(rows), min(cols)), (max(rows), max(cols))


def interval_decomposable(m: Rep, shrink: bool = True, workers: int = 1) -> OracleVerdict:
    """Whether ``m`` over an equioriented 2D grid is a sum of interval modules.

    Only intervals with a positive multiplicity are reported, in the
    coordinates of ``m``'s grid.
    """
    if not m.quiver.is_2d_equioriented:
        raise UnsupportedQuiver(f"interval_decomposable needs an equioriented 2D grid, got {m.quiver}")
    require_valid(m)
    total = dim_total(m)
    if total == 0:
        return OracleVerdict(True, {}, 0, 0, True)
    if shrink:
        lo, hi = _bounding_box(m)
        sub = m.quiver.subgrid(lo, hi)
        local = restrict(m, sub, (lo[0] - 1, lo[1] - 1))
        shift = (lo[0] - 1, lo[1] - 1)
    else:
        sub, local, shift = m.quiver, m, (0, 0)
    verdict = s_decomposable(local, list(enumerate_intervals(*sub.sizes)), workers=workers)
    verdict.multiplicities = {st.shifted(*shift): d for st, d in verdict.multiplicities.items() if d}
    return verdict


def interval_candidates(m: Rep) -> list:
    """Every interval module of ``m``'s grid: Staircases in 2D, Reps otherwise."""
    q = m.quiver
    if q.is_2d_equioriented:
        return list(enumerate_intervals(*q.sizes))
    return [indicator_rep(q, m.field, s) for s in interval_supports(q)]


def label(member) -> str:
    if isinstance(member, Staircase):
        return str(member)
    if isinstance(member, Rep):
        return "{" + " ".join(vertex_name(v) for v in sorted(support(member))) + "}"
    return str(member)


__all__ = ["OracleVerdict", "UnsupportedQuiver", "s_decomposable", "interval_decomposable",
           "interval_candidates", "label"]
