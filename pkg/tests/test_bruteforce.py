from collections import Counter

import numpy as np
import pytest

from commgrid.ar import multiplicity
from commgrid.bruteforce import (
    DecompositionError,
    UnsupportedField,
    decompose,
    endomorphism_basis,
    is_isomorphic,
    isomorphic_indecomposables,
    multiplicity_bruteforce,
    summand_counter,
)
from commgrid.fixtures import m_lambda
from commgrid.generators import random_base_change, random_cokernel, random_interval_sum, random_thin
from commgrid.intervals import enumerate_intervals, interval_rep, thin_decompose, staircase_from_support
from commgrid.linalg import FieldSpec, Matrix
from commgrid.quiver import equioriented
from commgrid.rep import base_change, direct_sum, support, validate, zero_rep

from conftest import F5, QQ

F2 = FieldSpec.prime(2)
G22, G23 = equioriented(2, 2), equioriented(2, 3)


def ivs(q, field=F5):
    return {st: interval_rep(q, st, field) for st in enumerate_intervals(*q.sizes)}


def test_endomorphism_basis_sizes():
    i = next(iter(ivs(G23).values()))
    assert len(endomorphism_basis(i)) == 1
    assert len(endomorphism_basis(direct_sum(i, i))) == 4
    assert len(endomorphism_basis(m_lambda(0, F5))) == 1


def test_decompose_examples():
    i = list(ivs(G23).values())[5]
    dec = decompose(i)
    assert dec.summands == [(i, 1)]
    dec = decompose(m_lambda(0, F2))
    assert len(dec.summands) == 1 and dec.summands[0][1] == 1
    assert decompose(zero_rep(G23, F5)).summands == []


def test_decompose_recovers_interval_sums():
    cands = ivs(G23)
    for seed in range(500):
        m, drawn = random_interval_sum(G23, 1 + seed % 5, F5, seed, max_dim=3)
        dec = decompose(m, seed)
        assert dec.dim_vector(G23) == m.dims
        assert summand_counter(dec, cands) == drawn


def test_decompose_is_seed_independent():
    q = equioriented(3, 3)
    for seed in range(20):
        m = random_cokernel(q, F5, seed, 3, max_dim=3)
        a, b = decompose(m, 1), decompose(m, 2)
        assert a.multiplicities == b.multiplicities
        for r, k in a.summands:
            assert sum(kb for rb, kb in b.summands if isomorphic_indecomposables(r, rb)) == k


def test_thin_supports_match_thin_decompose():
    q = equioriented(3, 4)
    for seed in range(40):
        m, _ = random_thin(q, F5, seed)
        dec = decompose(m, seed)
        supports = Counter()
        for r, k in dec.summands:
            supports[staircase_from_support(3, 4, support(r))] += k
        assert supports == Counter(thin_decompose(m))


def test_is_isomorphic_examples():
    assert is_isomorphic(m_lambda(0, F2), m_lambda(0, F2))
    assert not is_isomorphic(m_lambda(0, F2), m_lambda(1, F2))
    rng = np.random.default_rng(0)
    for st, i in ivs(G23).items():
        assert is_isomorphic(i, random_base_change(i, rng))
    a, b = list(ivs(G22).values())[:2]
    assert not is_isomorphic(direct_sum(a, a), direct_sum(a, b))


def test_is_isomorphic_falls_back_to_decomposition():
    q = equioriented(2, 3)
    m, _ = random_interval_sum(q, 6, F5, 7)
    other = random_base_change(m, np.random.default_rng(3))
    assert is_isomorphic(m, other)


def test_is_isomorphic_rational_fast_paths_only():
    a, b = list(ivs(G22, QQ).values())[:2]
    assert not is_isomorphic(a, b)
    assert is_isomorphic(a, a)
    full = interval_rep(G22, staircase_from_support(2, 2, G22.vertices), QQ)
    scaled = base_change(full, {(1, 1): Matrix(QQ, [[2]])})
    with pytest.raises(UnsupportedField):
        is_isomorphic(full, scaled)


def test_rational_decompose_unsupported():
    with pytest.raises(UnsupportedField):
        decompose(m_lambda(2))


def test_multiplicity_bruteforce_examples():
    cands = list(ivs(G22).values())
    i, j = cands[0], cands[3]
    assert multiplicity_bruteforce(i, direct_sum(i, j)) == 1
    assert multiplicity_bruteforce(i, zero_rep(G22, F5)) == 0


def test_cross_oracle_on_g22():
    cands = ivs(G22)
    for seed in range(100):
        m = random_cokernel(G22, F5, seed, 3) if seed % 2 else random_interval_sum(G22, 3, F5, seed)[0]
        counts = summand_counter(decompose(m, seed), cands)
        for st, l in cands.items():
            assert multiplicity(l, m) == counts[st]


def test_isomorphic_indecomposables_over_q():
    a = interval_rep(G23, next(iter(enumerate_intervals(2, 3))), QQ)
    assert isomorphic_indecomposables(a, random_base_change(a, np.random.default_rng(5)))


def test_budget_exhaustion_is_reported(monkeypatch):
    import commgrid.bruteforce as bf

    i = list(ivs(G22).values())[0]
    monkeypatch.setattr(bf, "_fitting_split", lambda m, g: None)
    monkeypatch.setattr(bf, "_is_local", lambda m, basis: False)
    with pytest.raises(DecompositionError, match="trials"):
        decompose(direct_sum(i, i))


def test_zigzag_is_a_non_interval_indecomposable():
    from commgrid.generators import zigzag

    q = equioriented(3, 3)
    for t in (False, True):
        z = zigzag(q, F5, (0, 0) if t else (1, 0), t)
        assert not validate(z)
        dec = decompose(z)
        assert len(dec.summands) == 1 and dec.summands[0][1] == 1
        assert summand_counter(dec, {st: interval_rep(q, st, F5) for st in enumerate_intervals(3, 3)})[None] == 1
