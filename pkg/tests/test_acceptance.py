"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
terminal summary. Running this file directly with python prints them as well.
"""

import itertools
import math
import random
import time

import pytest

from secantideals.bott import (
    check_acyclic_Sd_eta,
    shape_grid,
    twisted_dual_acyclicity,
    twisted_dual_box_scan,
    twisted_grid_partitions,
)
from secantideals.equations import BatchEvaluator, jacobian_rank_at, secant_generators, span_dimension, strassen_polys, flattening_minor_polys
from secantideals.exact_linalg import DEFAULT_PRIME, GF, SECOND_PRIME
from secantideals.partitions import enumerate_partitions
from secantideals.polyring import differential_at
from secantideals.resolution import (
    DISPLAYED_BETTI,
    betti_numbers,
    codimension,
    hilbert_comparison,
    load_table,
    max_first_part,
    partition_cap_violations,
    resolution_length_budget,
)
from secantideals.symrep import invariant_multiplicity, isotypic_decomposition
from secantideals.tensors import Tensor, random_rank_tensor, random_tensor

from conftest import ACCEPTANCE_LINES
from oracles import averaged_invariants_dim, standard_rep_s3

P, Q = DEFAULT_PRIME, SECOND_PRIME

# pinned budgets and sample sizes
HILBERT_DMAX = 6
HILBERT_BUDGET_SECONDS = 600.0
SECANT_SAMPLES = 500
GENERIC_SAMPLES = 100
BUDGET_SAMPLES = 10_000
BOTT_DMAX = 4
TWISTED_MIXED_SAMPLES = 20


def report(criterion: int, ok: bool, what: str, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {what}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_criterion_1_characters_and_multiplicities():
    start = time.perf_counter()
    delta_ok = all(
        invariant_multiplicity([a, b]) == (1 if a == b else 0)
        for d in range(1, 7)
        for a in enumerate_partitions(d)
        for b in enumerate_partitions(d)
    )
    three = invariant_multiplicity([(2, 1, 1)] * 3)
    four = invariant_multiplicity([(2, 1)] * 4)
    oracle = averaged_invariants_dim([standard_rep_s3()] * 4)
    comps = isotypic_decomposition(3, (2, 2, 2, 2))
    m = next(c.multiplicity for c in comps if all(p == (2, 1) for p in c.partitions))
    parts = {}
    for c in comps:
        k = sum(1 for p in c.partitions if p == (2, 1))
        parts[k] = parts.get(k, 0) + c.multiplicity * c.dimension
    bookkeeping = parts == {0: 256, 2: 384, 3: 128, 4: 16 * m} and 816 == 256 + 384 + 128 + 16 * m
    ok = delta_ok and three == 1 and four == oracle == m == 3 and bookkeeping
    report(
        1,
        ok,
        "two-factor delta for d<=6, ((2,1,1)^3) = 1, ((2,1)^4, d=3) = group-average oracle, 816 bookkeeping",
        f"m={four}, oracle={oracle}; the printed value 2 is a documented discrepancy; {time.perf_counter() - start:.1f}s",
    )
    assert ok


def test_criterion_2_betti_reconciliation():
    results = {case: betti_numbers(load_table(case)) for case in ("4factor", "3factor")}
    ok = all(results[c] == DISPLAYED_BETTI[c] for c in results)
    report(2, ok, "equivariant tables expand to 1;32;78;48+20;57;48;12 and 1;27;27+30;223+1;351;189;30+1")
    assert ok


def test_criterion_3_generator_spans():
    union = [g for sp in ((1, 2), (1, 3), (1, 4)) for g in flattening_minor_polys((2, 2, 2, 2), sp, 3)]
    four = (span_dimension(union, P), span_dimension(union, Q))
    S = strassen_polys().polys
    three = (span_dimension(S, P), span_dimension(S, Q))
    ok = four == (32, 32) and three == (27, 27)
    report(3, ok, "balanced-split cubics span 32, Strassen quartics span 27, two primes", f"{four}, {three}")
    assert ok


@pytest.mark.parametrize("case", ["4factor", "3factor"])
def test_criterion_4_hilbert_cross_check(case):
    start = time.perf_counter()
    rep = hilbert_comparison(case, HILBERT_DMAX, [P, Q])
    elapsed = time.perf_counter() - start
    ok = rep["agree"] and elapsed <= HILBERT_BUDGET_SECONDS
    tail = ", ".join(f"H({r['d']})={r['expected']}" for r in rep["degrees"][3:])
    report(4, ok, f"{case}: computed Hilbert function = table's for d<={HILBERT_DMAX}, two primes", f"{tail}; {elapsed:.1f}s")
    assert ok


def test_criterion_5_jacobian_ranks():
    x3 = Tensor.basis((3, 3, 3), (1, 1, 1), (2, 2, 2), (3, 3, 3))
    x4 = Tensor.basis((2, 2, 2, 2), (1, 1, 1, 1), (2, 2, 2, 2))
    S = strassen_polys()
    j3 = jacobian_rank_at(S, x3, P)
    j4 = jacobian_rank_at(secant_generators((2, 2, 2, 2), 2), x4, P)
    unit = differential_at(S.polys[5], x3) == {5: -1} and S.notes[5] == "P[1,2,3]"
    ok = j3 == 6 == codimension((3, 3, 3), 3) and j4 == 6 == codimension((2, 2, 2, 2), 2) and unit
    report(5, ok, "Jacobian rank 6 at both points; dP_123 = -dphi_123", f"ranks {j4}, {j3}")
    assert ok


SECANT_CASES = [
    ((2, 3, 3), 2),
    ((2, 3, 4), 2),
    ((2, 3, 4), 3),
    ((2, 4, 4), 2),
    ((2, 4, 4), 3),
    ((2, 2, 2, 2), 2),
    ((2, 2, 2, 3), 2),
    ((3, 3, 3, 3), 2),
    ((3, 3, 3), 3),
    ((3, 3, 4), 3),
    ((4, 4, 4), 3),
]


@pytest.mark.parametrize("shape,r", SECANT_CASES, ids=[f"{'x'.join(map(str, s))}-r{r}" for s, r in SECANT_CASES])
def test_criterion_6_vanishing_on_secant(shape, r):
    start = time.perf_counter()
    G = secant_generators(shape, r)
    ev = BatchEvaluator(G, P)
    F = GF(P)
    secant = [random_rank_tensor(shape, r, seed, F) for seed in range(SECANT_SAMPLES)]
    generic = [random_tensor(shape, 10**6 + seed, F) for seed in range(GENERIC_SAMPLES)]
    nonzero_on_secant = int(ev.evaluate(secant).any(axis=1).sum())
    violated = int(ev.evaluate(generic).any(axis=1).sum())
    ok = nonzero_on_secant == 0 and violated == GENERIC_SAMPLES
    report(
        6,
        ok,
        f"shape {shape}, r={r}: {len(G)} generators vanish on {SECANT_SAMPLES} rank-{r} samples; each of {GENERIC_SAMPLES} generic tensors violates one",
        f"{nonzero_on_secant} secant failures, {violated} generic violations, {time.perf_counter() - start:.1f}s",
    )
    assert ok


def test_criterion_7_bott():
    start = time.perf_counter()
    sd_bad = []
    sd_count = 0
    for shape, r in shape_grid((2, 3, 4), (1, 2, 3), 5):
        for d in range(1, BOTT_DMAX + 1):
            sd_count += 1
            if not check_acyclic_Sd_eta(shape, r, d)["acyclic"]:
                sd_bad.append((shape, r, d))
    tw_bad = []
    tw_count = 0
    covered = 0
    for shape, r in shape_grid((2, 3, 4), (1, 2, 3), 5):
        scan = twisted_dual_box_scan(shape, r)
        covered += scan["tuples_covered"]
        if not (scan["hypothesis_ok"] and scan["acyclic"]):
            tw_bad.append((shape, r, "box"))
        for pis in twisted_grid_partitions(len(shape), r, TWISTED_MIXED_SAMPLES, seed=repr((shape, r))):
            tw_count += 1
            rep = twisted_dual_acyclicity(pis, shape, r)
            if not (rep["hypothesis_ok"] and rep["acyclic"]):
                tw_bad.append((shape, r, pis))
    # one past the bound: the hypothesis flag trips and cohomology appears off the basic shape
    past = twisted_dual_box_scan((3, 4, 5), 3, cap=7)
    flag = not twisted_dual_acyclicity([(7,), (), ()], (3, 4, 5), 3)["hypothesis_ok"] and not past["hypothesis_ok"] and not past["acyclic"]
    ok = not sd_bad and not tw_bad and flag
    report(
        7,
        ok,
        "S^d(eta) acyclic for n<=4, r<=3, a_j<=5, d<=4; twisted dual weights meet the hypothesis and stay acyclic",
        f"{sd_count} S^d checks, {covered:.2e} box tuples by factorwise scan, {tw_count} direct tuples, {len(sd_bad) + len(tw_bad)} failures, {time.perf_counter() - start:.1f}s",
    )
    assert ok


def test_criterion_8_arithmetic_identities():
    rng = random.Random(8)
    failures = 0
    for _ in range(BUDGET_SAMPLES):
        n = rng.randint(2, 5)
        r = rng.randint(2, 4)
        shape = [rng.randint(r, 7) for _ in range(n)]
        b = resolution_length_budget(shape, r)
        failures += b.budget != b.ambient_codim
    codims = (codimension((2, 2, 2, 2), 2), codimension((3, 3, 3), 3))
    caps = {c: (max_first_part(load_table(c)), partition_cap_violations(load_table(c))) for c in ("4factor", "3factor")}
    ok = failures == 0 and codims == (6, 6) and all(m <= 6 and not v for m, v in caps.values())
    report(
        8,
        ok,
        f"length budget identity on {BUDGET_SAMPLES} samples, codim 6 twice, first parts <= 6 in both tables",
        f"max first parts {[caps[c][0] for c in caps]}",
    )
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
