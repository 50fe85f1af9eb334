from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commgrid.fixtures import m_lambda, non_equioriented, thin_2x2
from commgrid.generators import random_base_change, random_interval_sum, random_thin
from commgrid.intervals import (
    InconsistentRebase,
    NotAnInterval,
    NotPreInterval,
    Staircase,
    classify,
    count_by_size,
    count_intervals,
    enumerate_intervals,
    find_separating_line,
    interval_rep,
    interval_supports,
    narayana,
    rebase,
    staircase_from_support,
    support_from_staircase,
    thin_decompose,
)
from commgrid.linalg import Matrix
from commgrid.quiver import Arrow, equioriented
from commgrid.rep import Rep, base_change, dim_vector, direct_sum, validate

from conftest import F5, F7, QQ


def staircases(max_m=6, max_n=6):
    """Hypothesis strategy for valid staircases in grids up to max_m x max_n."""
    @st.composite
    def build(draw):
        s = draw(st.integers(1, max_m))
        t = draw(st.integers(s, max_m))
        d = draw(st.integers(1, max_n))
        b = draw(st.integers(1, d))
        slices = [(b, d)]
        for _ in range(s + 1, t + 1):
            pb, pd = slices[-1]
            nd = draw(st.integers(pb, pd))
            nb = draw(st.integers(1, pb))
            slices.append((nb, nd))
        return Staircase(s, t, tuple(slices))
    return build()


def test_correspondence_example():
    rows = ["011100", "001100", "001110", "000011"]
    supp = {(4 - r, c + 1) for r, line in enumerate(rows) for c, ch in enumerate(line) if ch == "1"}
    st_ = staircase_from_support(4, 6, supp)
    assert st_ == Staircase(1, 4, ((5, 6), (3, 5), (3, 4), (2, 4)))
    assert st_.display(4, 6) == "\n".join(rows)
    second = Staircase(2, 3, ((3, 5), (2, 4)))
    assert second.display(4, 6).splitlines() == ["000000", "011100", "001110", "000000"]
    assert staircase_from_support(4, 6, support_from_staircase(second)) == second


def test_support_to_staircase_edge_cases():
    assert staircase_from_support(3, 3, {(2, 3)}) == Staircase(2, 2, ((3, 3),))
    with pytest.raises(NotAnInterval, match="connectivity"):
        staircase_from_support(2, 2, {(1, 1), (2, 2)})
    with pytest.raises(NotAnInterval, match="empty"):
        staircase_from_support(2, 2, set())
    with pytest.raises(NotAnInterval, match="row-contiguity"):
        staircase_from_support(1, 3, {(1, 1), (1, 3)})
    with pytest.raises(NotAnInterval, match="chain"):
        staircase_from_support(2, 2, {(1, 1), (2, 1), (2, 2)})


@settings(max_examples=1000, deadline=None)
@given(staircases())
def test_bijection_round_trip(st_):
    assert staircase_from_support(6, 6, support_from_staircase(st_)) == st_
    assert Staircase.parse(str(st_)) == st_


def test_staircase_rejects_broken_chains():
    with pytest.raises(ValueError):
        Staircase(1, 2, ((1, 2), (2, 3)))
    with pytest.raises(ValueError):
        Staircase(1, 1, ((2, 1),))
    with pytest.raises(ValueError):
        Staircase.parse("1..2 [1,2]")


def test_size_is_bounding_box():
    assert Staircase(1, 4, ((5, 6), (3, 5), (3, 4), (2, 4))).size == (4, 5)
    assert Staircase(2, 2, ((3, 3),)).size == (1, 1)


def test_enumeration_counts_and_order():
    assert sum(1 for _ in enumerate_intervals(2, 1)) == 3
    assert sum(1 for _ in enumerate_intervals(2, 2)) == 11
    listed = list(enumerate_intervals(3, 4))
    assert len(set(listed)) == len(listed) == count_intervals(3, 4)
    keys = [(s.s, s.t, s.slices) for s in listed]
    assert keys == sorted(keys)
    assert listed == list(enumerate_intervals(3, 4))


def test_enumeration_matches_exhaustive_search():
    for m, n in [(2, 2), (2, 3), (3, 3)]:
        found = {staircase_from_support(m, n, s) for s in interval_supports(equioriented(m, n))}
        assert found == set(enumerate_intervals(m, n))


def test_narayana_and_counts():
    assert narayana(1, 1) == 1
    assert narayana(3, 2) == 3
    assert narayana(5, 3) == 20
    with pytest.raises(ValueError):
        narayana(2, 3)
    assert count_by_size(3, 3, 2, 2) == 12
    assert count_intervals(2, 4) == 55
    assert count_intervals(3, 3) == 83
    with pytest.raises(ValueError):
        count_by_size(2, 2, 3, 1)


def test_interval_rep_construction():
    q = equioriented(2, 3)
    full = interval_rep(q, Staircase(1, 2, ((1, 3), (1, 3))), QQ)
    assert all(d == 1 for d in full.dims.values())
    assert all(full.map(a).is_identity() for a in q.arrows)
    with pytest.raises(ValueError):
        interval_rep(q, Staircase(1, 3, ((1, 1),) * 3), QQ)


@settings(max_examples=300, deadline=None)
@given(staircases(4, 5))
def test_interval_reps_classify_as_intervals(st_):
    r = interval_rep(equioriented(4, 5), st_, F5)
    assert validate(r) == []
    assert classify(r).is_interval


def test_classify_fixtures():
    m0 = classify(m_lambda(0))
    assert m0.thin and m0.support_connected and m0.support_convex and not m0.nonzero_over_support
    m2 = classify(m_lambda(2))
    assert m2.is_pre_interval and not m2.is_interval
    assert classify(m_lambda(1)).is_interval
    assert classify(non_equioriented(2)).is_pre_interval
    assert not classify(non_equioriented(0)).is_pre_interval


def test_convexity_and_connectivity_flags():
    q = equioriented(2, 2)
    corners = Rep(q, QQ, {(1, 1): 1, (2, 2): 1})
    rep = classify(corners)
    assert not rep.support_connected and not rep.support_convex
    two = Rep(q, QQ, {(1, 1): 2})
    assert not classify(two).thin


def test_hierarchy_on_random_modules():
    q = equioriented(3, 3)
    for seed in range(60):
        r = random_thin(q, F5, seed)[0] if seed % 2 else random_interval_sum(q, 2, F5, seed)[0]
        c = classify(r)
        assert not c.is_interval or c.is_pre_interval
        assert not c.is_pre_interval or (c.thin and c.support_connected and c.support_convex)


def test_rebase_examples():
    q = equioriented(1, 2)
    v = Rep(q, QQ, {(1, 1): 1, (1, 2): 1}, {"1,1->1,2": Matrix(QQ, [[2]])})
    out, basis = rebase(v)
    assert classify(out).is_interval
    assert basis[(1, 1)] == 1 and basis[(1, 2)] == 2
    iv = interval_rep(equioriented(3, 4), Staircase(1, 2, ((2, 4), (1, 3))), F7)
    out, basis = rebase(iv)
    assert out == iv and set(basis.values()) == {1}
    with pytest.raises(NotPreInterval):
        rebase(m_lambda(0))
    with pytest.raises(InconsistentRebase):
        rebase(m_lambda(2))
    with pytest.raises(InconsistentRebase):
        rebase(non_equioriented(2))
    assert classify(rebase(m_lambda(1))[0]).is_interval


@pytest.mark.parametrize("field", [F7, QQ], ids=["F7", "Q"])
def test_rebase_random_pre_intervals(field):
    q = equioriented(3, 4)
    pool = list(enumerate_intervals(3, 4))
    rng = np.random.default_rng(11)
    for _ in range(50):
        st_ = pool[int(rng.integers(len(pool)))]
        m = random_base_change(interval_rep(q, st_, field), rng)
        out, basis = rebase(m)
        assert classify(out).identity_over_support
        g = {v: Matrix.scalar(field, field.inv(c)) for v, c in basis.items()}
        assert base_change(m, g) == out


def test_separating_line_on_square():
    m = thin_2x2()
    right = Arrow((1, 2), (2, 2), 0)
    left = Arrow((1, 1), (2, 1), 0)
    line = find_separating_line(m, right)
    assert set(line.crossed) == {right, left}
    assert line.left == {(1, 1), (1, 2)} and line.right == {(2, 1), (2, 2)}


def test_separating_line_boundary_start():
    q = equioriented(2, 3)
    dims = {v: 1 for v in q.vertices}
    ones = Matrix(F5, [[1]])
    maps = {a: ones for a in q.arrows if not (a.axis == 1 and a.source[1] == 2)}
    m = Rep(q, F5, dims, maps)
    assert validate(m) == []
    line = find_separating_line(m, Arrow((1, 2), (1, 3), 1))
    assert len(line.crossed) >= 1 and line.left and line.right


def test_separating_line_rejects_nonzero_arrow():
    m = thin_2x2()
    with pytest.raises(ValueError):
        find_separating_line(m, Arrow((1, 1), (1, 2), 1))


def test_separating_lines_cross_only_zero_arrows():
    q = equioriented(4, 5)
    checked = 0
    seed = 0
    while checked < 100:
        m, _ = random_thin(q, F5, seed)
        seed += 1
        candidates = [a for a in q.arrows if m.dim(a.source) and m.dim(a.target) and m.map(a).is_zero()]
        if not candidates:
            continue
        line = find_separating_line(m, candidates[seed % len(candidates)])
        assert all(m.dim(a.source) == 0 or m.dim(a.target) == 0 or m.map(a).is_zero() for a in line.crossed)
        assert line.left.isdisjoint(line.right) and len(line.left | line.right) == len(q.vertices)
        checked += 1


def test_thin_decompose_examples():
    assert thin_decompose(thin_2x2()) == [Staircase(1, 1, ((1, 2),)), Staircase(2, 2, ((1, 2),))]
    st_ = Staircase(1, 2, ((2, 3), (1, 2)))
    assert thin_decompose(interval_rep(equioriented(2, 3), st_, F5)) == [st_]
    q = equioriented(4, 5)
    for seed in range(30):
        m, used = random_thin(q, F5, seed)
        assert sorted(used.elements()) == thin_decompose(m)
        total = {v: 0 for v in q.vertices}
        for s in thin_decompose(m):
            for v in s.vertices:
                total[v] += 1
        assert total == dim_vector(m)


def test_thin_decompose_rejects_thick_modules():
    q = equioriented(2, 2)
    with pytest.raises(ValueError):
        thin_decompose(Rep(q, QQ, {(1, 1): 2}))
