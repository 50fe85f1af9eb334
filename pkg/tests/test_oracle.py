from collections import Counter

import numpy as np
import pytest

from commgrid.errors import InternalInconsistency
from commgrid.fixtures import m_lambda, non_equioriented, thin_2x2
from commgrid.generators import random_base_change, random_cokernel, random_interval_sum, random_thin
from commgrid.intervals import Staircase, enumerate_intervals, interval_rep, thin_decompose
from commgrid.oracle import (
    UnsupportedQuiver,
    interval_candidates,
    interval_decomposable,
    label,
    s_decomposable,
)
from commgrid.quiver import equioriented
from commgrid.rep import direct_sum, zero_rep

from conftest import F5, QQ

G33 = equioriented(3, 3)


def test_constructed_sum():
    q = equioriented(2, 3)
    i, j = Staircase.parse("1..1: [1,2]"), Staircase.parse("1..2: [2,3];[1,3]")
    m = direct_sum(*(interval_rep(q, s, F5) for s in (i, i, j)))
    v = s_decomposable(m, [i, j])
    assert v.decomposable and v.multiplicities == {i: 2, j: 1}
    assert v.dim_accounted == v.dim_total == 2 * len(i) + len(j)
    assert v.condition3_holds
    v = interval_decomposable(m)
    assert v.nonzero() == {i: 2, j: 1}


def test_m_lambda_zero_is_not_interval_decomposable():
    m = m_lambda(0)
    v = s_decomposable(m, interval_candidates(m))
    assert not v.decomposable and v.dim_accounted < 6 and not v.condition3_holds


def test_m_lambda_one_is_an_interval():
    m = m_lambda(1)
    v = s_decomposable(m, interval_candidates(m))
    assert v.decomposable and sorted(v.nonzero().values()) == [1]


def test_zero_and_rejections():
    v = interval_decomposable(zero_rep(G33, F5))
    assert v.decomposable and v.multiplicities == {} and v.dim_total == 0
    with pytest.raises(UnsupportedQuiver):
        interval_decomposable(non_equioriented(2))
    with pytest.raises(UnsupportedQuiver):
        interval_decomposable(m_lambda(1))


def test_thin_square_fixture():
    v = interval_decomposable(thin_2x2())
    assert v.decomposable
    assert v.multiplicities == {Staircase(1, 1, ((1, 2),)): 1, Staircase(2, 2, ((1, 2),)): 1}


def test_duplicate_candidates_rejected():
    m = thin_2x2()
    st = Staircase(1, 1, ((1, 2),))
    with pytest.raises(ValueError):
        s_decomposable(m, [st, st])
    r = interval_rep(m.quiver, st, m.field)
    with pytest.raises(ValueError):
        s_decomposable(m, [st, random_base_change(r, np.random.default_rng(0))])
    with pytest.raises(ValueError):
        s_decomposable(m, [zero_rep(m.quiver, m.field)])


def test_agrees_with_brute_force_on_g33():
    from commgrid.bruteforce import decompose, summand_counter

    cands = {st: interval_rep(G33, st, F5) for st in enumerate_intervals(3, 3)}
    for seed in range(40):
        if seed % 2:
            m = random_cokernel(G33, F5, seed, 3, max_dim=3)
        else:
            m, _ = random_interval_sum(G33, 3, F5, seed, max_dim=3)
        counts = summand_counter(decompose(m, seed), cands)
        v = interval_decomposable(m)
        assert v.decomposable == (counts[None] == 0)
        assert v.nonzero() == {k: d for k, d in counts.items() if k is not None}


def test_invariant_under_base_change_and_shrinking():
    rng = np.random.default_rng(4)
    for seed in range(20):
        m = random_cokernel(G33, QQ, seed, 2, max_dim=3)
        a = interval_decomposable(m)
        b = interval_decomposable(random_base_change(m, rng))
        c = interval_decomposable(m, shrink=False)
        assert a == b == c


def test_thin_modules_always_decompose():
    q = equioriented(3, 4)
    for seed in range(30):
        m, _ = random_thin(q, F5, seed)
        v = interval_decomposable(m)
        assert v.decomposable
        assert Counter(v.nonzero()) == Counter(thin_decompose(m))


def test_threads_give_same_verdict():
    m, _ = random_interval_sum(G33, 4, F5, 9, max_dim=3)
    assert interval_decomposable(m, workers=4) == interval_decomposable(m)


def test_negative_multiplicity_aborts(monkeypatch):
    import commgrid.oracle as oracle

    real = oracle._terms
    monkeypatch.setattr(oracle, "_terms", lambda l, m: real(l, m).__class__(-1, 1, 0, 1, 0))
    with pytest.raises(InternalInconsistency):
        interval_decomposable(thin_2x2())


def test_labels():
    assert label(Staircase(1, 1, ((1, 2),))) == "1..1: [1,2]"
    m = m_lambda(1)
    assert label(m).startswith("{1,1,2")
