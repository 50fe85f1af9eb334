"""Bundled fixture and invariant checks, run by ``commgrid selfcheck``."""
from __future__ import annotations

from typing import Callable

from .ar import multiplicity, source_map_target
from .bruteforce import decompose, isomorphic_indecomposables as iso
from .fixtures import CORRESPONDENCE, a3_interval, catalogue
from .intervals import (
    InconsistentRebase,
    Staircase,
    classify,
    count_intervals,
    enumerate_intervals,
    rebase,
    staircase_from_support,
    thin_decompose,
)
from .io import dumps, loads
from .oracle import interval_candidates, interval_decomposable, s_decomposable
from .rep import dim_vector, validate


def _expect_rebase_failure(m) -> bool:
    try:
        rebase(m)
    except InconsistentRebase:
        return True
    return False


def _checks() -> list[tuple[str, Callable[[], bool]]]:
    fx = catalogue()
    a3 = {(b, d): a3_interval(b, d) for b in range(1, 4) for d in range(b, 4)}

    def smt(b, d):
        return source_map_target(a3[(b, d)])

    return [
        ("count 2x2 is 11", lambda: count_intervals(2, 2) == 11),
        ("count 3x3 is 83", lambda: count_intervals(3, 3) == 83 == sum(1 for _ in enumerate_intervals(3, 3))),
        ("count 2x4 is 55", lambda: count_intervals(2, 4) == 55),
        ("fixtures validate", lambda: all(not validate(r) for r in fx.values())),
        ("fixtures round-trip", lambda: all(loads(dumps(r)) == r for r in fx.values())),
        ("4x6 staircases round-trip", lambda: all(
            staircase_from_support(4, 6, st.vertices) == st for st in CORRESPONDENCE)),
        ("M(0) not pre-interval", lambda: classify(fx["m_lambda_0"]).as_dict()["nonzero_over_support"] is False),
        ("M(0) indecomposable over F_2", lambda: [k for _, k in decompose(fx["m_lambda_0"]).summands] == [1]),
        ("M(0) not interval-decomposable", lambda: not s_decomposable(
            fx["m_lambda_0"], interval_candidates(fx["m_lambda_0"])).decomposable),
        ("M(1) is an interval module", lambda: classify(fx["m_lambda_1"]).is_interval),
        ("M(2) pre-interval, not interval", lambda: (
            classify(fx["m_lambda_2"]).is_pre_interval and not classify(fx["m_lambda_2"]).is_interval)),
        ("M(2) rebase inconsistent", lambda: _expect_rebase_failure(fx["m_lambda_2"])),
        ("mixed 3x3 with 2: rebase inconsistent", lambda: (
            classify(fx["non_equioriented_2"]).is_pre_interval and _expect_rebase_failure(fx["non_equioriented_2"]))),
        ("I[1,2] injective, E = I[1,1]", lambda: smt(1, 2).injective and smt(1, 2).E == a3[(1, 1)]),
        ("I[2,2]: E = I[1,2], tau^-1 = I[1,1]", lambda: (
            iso(a3[(1, 2)], smt(2, 2).E) and iso(a3[(1, 1)], smt(2, 2).tau_inv))),
        ("I[2,3]: E dims (1,2,1), tau^-1 = I[1,2]", lambda: (
            list(dim_vector(smt(2, 3).E).values()) == [1, 2, 1] and iso(a3[(1, 2)], smt(2, 3).tau_inv))),
        ("multiplicity of I[1,2] in I[1,2]+I[1,1] is 1", lambda: multiplicity(
            a3[(1, 2)], fx["i12_plus_i11_a3"]) == 1),
        ("thin 2x2 splits into two rows", lambda: thin_decompose(fx["thin_2x2"]) == [
            Staircase(1, 1, ((1, 2),)), Staircase(2, 2, ((1, 2),))]),
        ("thin 2x2 is interval-decomposable", lambda: interval_decomposable(fx["thin_2x2"]).decomposable),
    ]


def run() -> list[tuple[str, bool, str]]:
    out = []
    for name, check in _checks():
        try:
            ok, detail = bool(check()), ""
        except Exception as exc:  # a crash is a failed check, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, detail))
    return out
