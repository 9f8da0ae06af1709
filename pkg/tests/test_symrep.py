import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from secantideals.errors import InvalidInput
from secantideals.partitions import Partition, conjugate, enumerate_partitions
from secantideals.symrep import (
    character,
    class_size,
    invariant_multiplicity,
    isotypic_decomposition,
    littlewood_richardson,
    lr_product,
    schur_dimension,
    weight_dimension,
    weight_product,
)

from oracles import averaged_invariants_dim, frobenius_character, ssyt_count, standard_rep_s3


@pytest.mark.parametrize("d", range(1, 6))
def test_characters_match_frobenius_formula(d):
    for lam in enumerate_partitions(d):
        for mu in enumerate_partitions(d):
            assert character(lam, mu) == frobenius_character(lam, mu)


@pytest.mark.parametrize("d", range(1, 8))
def test_character_orthogonality(d):
    parts = enumerate_partitions(d)
    f = math.factorial(d)
    for a, b in itertools.combinations_with_replacement(parts, 2):
        inner = sum(class_size(mu) * character(a, mu) * character(b, mu) for mu in parts)
        assert inner == (f if a == b else 0)


def test_class_sizes_sum_to_factorial():
    for d in range(1, 9):
        assert sum(class_size(mu) for mu in enumerate_partitions(d)) == math.factorial(d)


def test_character_weight_mismatch():
    with pytest.raises(InvalidInput):
        character((2, 1), (2,))


@pytest.mark.parametrize("d", range(1, 7))
def test_two_factor_multiplicity_is_kronecker_delta(d):
    parts = enumerate_partitions(d)
    for a in parts:
        for b in parts:
            assert invariant_multiplicity([a, b]) == (1 if a == b else 0)


def test_three_factor_value_211():
    assert invariant_multiplicity([(2, 1, 1)] * 3) == 1


def test_four_factor_value_21_against_group_average():
    oracle = averaged_invariants_dim([standard_rep_s3()] * 4)
    assert oracle == 3
    assert invariant_multiplicity([(2, 1)] * 4) == oracle


def test_degree_three_bookkeeping_four_qubits():
    comps = isotypic_decomposition(3, (2, 2, 2, 2))
    by_count = {}
    for c in comps:
        k = sum(1 for p in c.partitions if p == (2, 1))
        by_count[k] = by_count.get(k, 0) + c.multiplicity * c.dimension
    assert by_count == {0: 256, 2: 384, 3: 128, 4: 48}
    m = next(c.multiplicity for c in comps if all(p == (2, 1) for p in c.partitions))
    assert 816 == 256 + 384 + 128 + 16 * m


@pytest.mark.parametrize("shape,n", [((2, 1), 3), ((2, 2), 3), ((3, 1), 2), ((2, 1, 1), 3), ((1, 1, 1), 2), ((3,), 3)])
def test_schur_dimension_counts_tableaux(shape, n):
    assert schur_dimension(shape, n) == ssyt_count(shape, n)


def test_weyl_dimension_agrees_with_hook_content():
    for d in range(0, 7):
        for p in enumerate_partitions(d, 3):
            assert weight_dimension(Partition(p).padded(3)) == schur_dimension(p, 3)
    assert weight_dimension((0, -1)) == 2
    assert weight_dimension((-2, -2, -2)) == 1
    with pytest.raises(InvalidInput):
        weight_dimension((0, 1))


def test_isotypic_small_cases():
    # S^2(A x B) = S^2 A x S^2 B + L^2 A x L^2 B
    comps = {c.partitions: c.multiplicity for c in isotypic_decomposition(2, (3, 3))}
    assert comps == {((2,), (2,)): 1, ((1, 1), (1, 1)): 1}


def test_lr_known_values():
    assert littlewood_richardson((2, 1), (1,), (1, 1)) == 1
    assert littlewood_richardson((3, 2, 1), (2, 1), (2, 1)) == 2
    assert littlewood_richardson((2, 2), (2,), (1, 1)) == 0
    assert lr_product((1,), (1,)) == {(2,): 1, (1, 1): 1}


small = st.integers(0, 4).flatmap(lambda d: st.sampled_from(enumerate_partitions(d)))


@settings(max_examples=60, deadline=None)
@given(small, small)
def test_lr_dimension_identity(mu, nu):
    n = 4
    prod = lr_product(mu, nu, max_rows=n)
    assert sum(c * schur_dimension(lam, n) for lam, c in prod.items()) == schur_dimension(mu, n) * schur_dimension(nu, n)


@settings(max_examples=40, deadline=None)
@given(small, small)
def test_lr_symmetry_and_conjugation(mu, nu):
    for lam, c in lr_product(mu, nu).items():
        assert littlewood_richardson(lam, nu, mu) == c
        assert littlewood_richardson(conjugate(lam), conjugate(mu), conjugate(nu)) == c


def test_weight_product_with_negative_entries():
    # C^2 dual x C^2 = trivial + adjoint
    assert weight_product((0, -1), (1, 0)) == {(1, -1): 1, (0, 0): 1}
    total = sum(c * weight_dimension(w) for w, c in weight_product((2, -1, -3), (1, 1, 0)).items())
    assert total == weight_dimension((2, -1, -3)) * weight_dimension((1, 1, 0))
