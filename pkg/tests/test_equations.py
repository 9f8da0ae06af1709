import itertools
import math

import pytest
import sympy

from secantideals.equations import (
    BatchEvaluator,
    GeneratorSet,
    PullbackPoly,
    flattening_minor_polys,
    generator_differential,
    generator_evaluate,
    inherited_strassen,
    jacobian_rank_at,
    membership_verdict,
    secant_case,
    secant_generators,
    span_dimension,
    strassen_polys,
    subspace_variety_generators,
)
from secantideals.errors import InvalidInput, UnsupportedCase
from secantideals.exact_linalg import DEFAULT_PRIME, GF, SECOND_PRIME, SparseEliminator
from secantideals.polyring import differential_at, evaluate
from secantideals.resolution import codimension
from secantideals.tensors import Tensor, random_rank_tensor, random_tensor

P, Q = DEFAULT_PRIME, SECOND_PRIME
X3 = Tensor.basis((3, 3, 3), (1, 1, 1), (2, 2, 2), (3, 3, 3))
FOUR_QUBIT_FINGERPRINT = "1e023b5ad05a5c0a49fe1d587ed3b22343629626166dbe4849c75cd3f1091d7b"
X4 = Tensor.basis((2, 2, 2, 2), (1, 1, 1, 1), (2, 2, 2, 2))


def var3(i, j, k):
    return 9 * (i - 1) + 3 * (j - 1) + (k - 1)


def test_two_by_two_determinant():
    G = flattening_minor_polys((2, 2), {1}, 2)
    assert len(G) == 1
    assert G.polys[0].terms == {(0, 3): 1, (1, 2): -1}


@pytest.mark.parametrize("shape,split,s", [((2, 3, 3), (1, 2), 3), ((2, 2, 2, 2), (1, 3), 3), ((3, 3, 3), (1,), 2)])
def test_minor_counts_and_degrees(shape, split, s):
    G = flattening_minor_polys(shape, split, s)
    rows = math.prod(shape[i - 1] for i in split)
    cols = math.prod(shape) // rows
    assert len(G) == math.comb(rows, s) * math.comb(cols, s)
    assert all(g.degree == s and len(g) == math.factorial(s) for g in G)


def test_minor_too_large():
    with pytest.raises(InvalidInput):
        flattening_minor_polys((2, 2, 2), (1,), 3)


def test_balanced_split_spans():
    per_split = [flattening_minor_polys((2, 2, 2, 2), sp, 3) for sp in ((1, 2), (1, 3), (1, 4))]
    for G in per_split:
        assert span_dimension(G.polys, P) == 16
    union = [g for G in per_split for g in G]
    assert span_dimension(union, P) == span_dimension(union, Q) == 32


def test_subspace_generators():
    assert len(subspace_variety_generators((3, 3, 3), (3, 3, 3))) == 0
    G = subspace_variety_generators((2, 3, 3), (2, 2, 2))
    assert {tuple(n.split("]")[0].split("[")[1].split(", ")) for n in G.notes} == {("2",), ("3",)}
    for seed in range(20):
        T = random_rank_tensor((2, 3, 3), 2, seed)
        assert all(evaluate(g, T) == 0 for g in G)


def test_subspace_matches_two_factor_case_content():
    sub = subspace_variety_generators((2, 3, 3), (2, 2, 2)).polys
    sec = secant_generators((2, 3, 3), 2).polys
    assert span_dimension(sub, P) == span_dimension(sec, P) == span_dimension(sub + sec, P)


def test_strassen_shape_and_terms():
    S = strassen_polys()
    assert len(S) == 27 and all(g.degree == 4 and len(g) == 32 for g in S)
    for idx, g in enumerate(S.polys):
        i = idx // 9
        for mono in g.terms:
            slices = sorted(v // 9 for v in mono)
            others = [k for k in range(3) if k != i]
            assert slices == sorted([i, i] + others)


def test_strassen_matrix_form():
    S = strassen_polys()
    roles = {1: (0, 1, 2), 2: (1, 0, 2), 3: (2, 1, 0)}
    for seed in range(3):
        T = random_tensor((3, 3, 3), seed)
        sl = [sympy.Matrix(3, 3, lambda j, k: T[(i, j, k)]) for i in range(3)]
        for i, (a, b, c) in roles.items():
            X, Y, Z = sl[a], sl[b], sl[c]
            M = Y * X.adjugate() * Z - Z * X.adjugate() * Y
            for s, t in itertools.product(range(3), repeat=2):
                assert evaluate(S.polys[9 * (i - 1) + 3 * s + t], T) == M[s, t]


def test_strassen_differentials_at_unit_tensor():
    S = strassen_polys()
    P123 = S.polys[9 * 0 + 3 * 1 + 2]
    assert differential_at(P123, X3) == {var3(1, 2, 3): -1}
    P132 = S.polys[9 * 0 + 3 * 2 + 1]
    assert differential_at(P132, X3) == {var3(1, 3, 2): 1}
    for idx, g in enumerate(S.polys):
        i, s, t = idx // 9 + 1, idx // 3 % 3 + 1, idx % 3 + 1
        grad = differential_at(g, X3)
        if len({i, s, t}) == 3:
            assert set(grad) == {var3(i, s, t)} and grad[var3(i, s, t)] in (1, -1)
        else:
            assert grad == {}
    assert all(evaluate(g, X3) == 0 for g in S)


def test_strassen_span():
    S = strassen_polys()
    assert span_dimension(S.polys, P) == span_dimension(S.polys, Q) == 27


def test_jacobian_ranks():
    assert jacobian_rank_at(strassen_polys(), X3, P) == 6 == codimension((3, 3, 3), 3)
    G = secant_generators((2, 2, 2, 2), 2)
    assert jacobian_rank_at(G, X4, P) == 6 == codimension((2, 2, 2, 2), 2)
    assert jacobian_rank_at(G, Tensor.zeros((2, 2, 2, 2)), P) == 0


def test_four_qubit_mixed_differentials_come_from_minors_through_both_corners():
    # the two displayed splittings, 4 minors each through phi_1111 and phi_2222
    relevant = [
        g
        for split in ((1, 2), (1, 3))
        for g in flattening_minor_polys((2, 2, 2, 2), split, 3)
        if any(0 in m for m in g.terms) and any(15 in m for m in g.terms)
    ]
    assert len(relevant) == 8
    x = Tensor.basis((2, 2, 2, 2), (1, 1, 1, 1), (2, 2, 2, 2), domain=GF(P))
    elim = SparseEliminator(P)
    for g in relevant:
        elim.add(differential_at(g, x))
    mixed = [sum(b << (3 - k) for k, b in enumerate(idx)) for idx in itertools.product((0, 1), repeat=4) if sum(idx) == 2]
    assert len(mixed) == 6
    for v in mixed:
        assert not elim.add({v: 1})
    assert elim.rank == 6


@pytest.mark.parametrize("shape,r", [((2, 3, 3), 2), ((2, 2, 2, 2), 2), ((3, 3, 3), 3), ((3, 3, 4), 3)])
def test_jacobian_at_random_points_bounded_by_codim(shape, r):
    G = secant_generators(shape, r)
    T = random_rank_tensor(shape, r, 1, GF(P))
    assert jacobian_rank_at(G, T, P) <= codimension(shape, r)


def test_secant_cases():
    assert secant_case((2, 4, 4), 3) == "2xbxc"
    assert secant_case((3, 2, 5), 2) == "2xbxc"
    assert secant_case((2, 2, 2, 3), 2) == "four-factor-r2"
    assert secant_case((3, 4, 5), 3) == "three-factor-r3"
    for shape, r in [((3, 3, 3), 4), ((4, 4, 4), 2), ((2, 2, 2, 2), 3), ((2, 2, 2, 2, 2), 2)]:
        with pytest.raises(UnsupportedCase):
            secant_generators(shape, r)
    assert len(secant_generators((3, 3, 3), 3)) == 27


@pytest.mark.parametrize("shape,r", [((2, 3, 3), 2), ((2, 3, 4), 3), ((2, 2, 2, 3), 2), ((3, 3, 4), 3), ((3, 4, 4), 3)])
def test_vanishing_on_secant_samples(shape, r):
    G = secant_generators(shape, r)
    ev = BatchEvaluator(G, P)
    samples = [random_rank_tensor(shape, r, seed, GF(P)) for seed in range(20)]
    assert not ev.evaluate(samples).any()
    lower = [random_rank_tensor(shape, r - 1, seed, GF(P)) for seed in range(5)]
    assert not ev.evaluate(lower).any()
    generic = [random_tensor(shape, seed, GF(P)) for seed in range(10)]
    assert ev.evaluate(generic).any(axis=1).all()


def test_batch_evaluator_matches_pointwise():
    G = secant_generators((3, 3, 4), 3)
    tensors = [random_tensor((3, 3, 4), seed, GF(P)) for seed in range(3)]
    values = BatchEvaluator(G, P).evaluate(tensors)
    for row, T in zip(values, tensors):
        assert [int(x) for x in row] == [generator_evaluate(g, T) for g in G]


def test_pullback_expand_and_differential():
    G = inherited_strassen((3, 3, 4), changes=1, seed=3)
    pb = next(g for g in G if isinstance(g, PullbackPoly))
    expanded = pb.expand()
    T = random_tensor((3, 3, 4), 9, GF(P))
    assert pb.evaluate(T) == evaluate(expanded, T)
    assert pb.differential_at(T) == differential_at(expanded, T)
    assert generator_differential(pb, T) == differential_at(expanded, T)


def test_inherited_counts():
    G = inherited_strassen((3, 3, 4), changes=2, seed=1)
    slices = math.comb(4, 3)
    assert len(G.sparse_polys()) == 27 * slices
    assert len(G) == 27 * slices * 3
    assert len(inherited_strassen((3, 3, 3))) == 27


def test_membership_verdicts():
    T = random_rank_tensor((2, 2, 2, 2), 2, 3)
    assert not membership_verdict(T, 2).violates
    v = membership_verdict(random_tensor((2, 2, 2, 2), 3), 2)
    assert v.violates and v.witness.startswith("split") and "necessary" in v.note
    for shape, r in [((2, 3, 3), 2), ((2, 2, 2, 2), 2), ((3, 3, 3), 3)]:
        assert membership_verdict(random_rank_tensor(shape, 1, 0), r).status == "passes-all-implemented-equations"
    with pytest.raises(UnsupportedCase):
        membership_verdict(random_tensor((4, 4, 4), 0), 2)


def test_fingerprints_are_stable():
    assert strassen_polys().fingerprint() == "9de8e4c683a44915420a52588578bf10660fecf90eee29b89b849397156ccc9d"
    G = secant_generators((2, 2, 2, 2), 2)
    assert G.fingerprint() == secant_generators((2, 2, 2, 2), 2).fingerprint()
    assert G.fingerprint() == FOUR_QUBIT_FINGERPRINT


def test_generator_set_extend_rejects_other_shapes():
    G = GeneratorSet((2, 2), "flat-minors", {})
    with pytest.raises(InvalidInput):
        G.extend(GeneratorSet((2, 3), "flat-minors", {}))
