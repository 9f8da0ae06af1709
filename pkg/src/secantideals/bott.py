"""Bott's algorithm for homogeneous bundles on products of Grassmannians G(r, A_j*).

Weight convention. A bundle ``S_pi R* (x) S_mu Q*`` on G(r, a) is the integer
sequence ``pi + mu`` of length a: the R* block (length r) first, then the Q*
block (length a - r). Dominant means weakly decreasing across the whole
sequence, and then H^0 is the GL(A) module with that highest weight, so
``S^d R*`` has sections ``S^d A``.

Worked example on P^1 = G(1, 2): R* = O(1), Q* = O(-1). The sequence (0, 2) is
``S^2 Q* = O(-2)``; adding rho = (1, 0) gives (1, 2), one swap gives (2, 1),
subtracting rho gives (1, 1): H^1 is one-dimensional.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInput
from .partitions import Partition, partitions_in_box
from .symrep import isotypic_decomposition, weight_dimension, weight_product


@dataclass(frozen=True)
class FactorWeight:
    a: int
    r: int
    sub: tuple[int, ...]
    quot: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.r <= self.a:
            raise InvalidInput(f"need 1 <= r <= a, got r={self.r}, a={self.a}")
        if len(self.sub) != self.r or len(self.quot) != self.a - self.r:
            raise InvalidInput("block lengths must be r and a - r")
        for block in (self.sub, self.quot):
            if any(block[i] < block[i + 1] for i in range(len(block) - 1)):
                raise InvalidInput(f"block {block} is not weakly decreasing")

    @classmethod
    def from_sequence(cls, a: int, r: int, alpha: Sequence[int]) -> "FactorWeight":
        alpha = tuple(int(x) for x in alpha)
        if len(alpha) != a:
            raise InvalidInput(f"weight {alpha} does not have length {a}")
        return cls(a, r, alpha[:r], alpha[r:])

    @classmethod
    def pure_sub(cls, a: int, r: int, weight: Sequence[int]) -> "FactorWeight":
        """``S_weight R*`` with trivial Q* block."""
        return cls(a, r, tuple(weight), (0,) * (a - r))

    @property
    def sequence(self) -> tuple[int, ...]:
        return self.sub + self.quot


@dataclass(frozen=True)
class Cohomology:
    degree: int
    weight: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return weight_dimension(self.weight)


def bott_resolve(w: FactorWeight) -> Cohomology | None:
    """The unique nonzero cohomology of the bundle, or None when all of it vanishes."""
    a = w.a
    shifted = [x + (a - 1 - i) for i, x in enumerate(w.sequence)]
    if len(set(shifted)) < a:
        return None
    inversions = sum(1 for i in range(a) for j in range(i + 1, a) if shifted[i] < shifted[j])
    ordered = sorted(shifted, reverse=True)
    return Cohomology(inversions, tuple(x - (a - 1 - i) for i, x in enumerate(ordered)))


@dataclass(frozen=True)
class ProductCohomology:
    degree: int
    weights: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        out = 1
        for wt in self.weights:
            out *= weight_dimension(wt)
        return out


def product_cohomology(bundle: Sequence[FactorWeight]) -> ProductCohomology | None:
    """Kunneth: vanishes if any factor does, otherwise degrees add."""
    degree = 0
    weights = []
    for w in bundle:
        c = bott_resolve(w)
        if c is None:
            return None
        degree += c.degree
        weights.append(c.weight)
    return ProductCohomology(degree, tuple(weights))


@lru_cache(maxsize=None)
def _isotypic(d: int, r: int, n: int):
    return tuple(isotypic_decomposition(d, (r,) * n))


@lru_cache(maxsize=None)
def _eta_power(e: int, r: int, n: int) -> tuple[tuple[Partition, ...], ...]:
    if e == 0:
        return ((Partition(()),) * n,)
    return tuple(c.partitions for c in _isotypic(e, r, n))


@lru_cache(maxsize=None)
def _factor_outcomes(a: int, r: int, w: tuple[int, ...], p: Partition) -> tuple:
    """Bott on each GL_r constituent of S_w R* (x) S_p R* on G(r, a)."""
    return tuple((nu, bott_resolve(FactorWeight.pure_sub(a, r, nu))) for nu in weight_product(w, p.padded(r)))


def normalized(seq: Sequence[int]) -> tuple[Fraction, ...]:
    """Subtract the mean entry; removes twists by powers of the determinant."""
    mean = Fraction(sum(seq), len(seq))
    return tuple(Fraction(x) - mean for x in seq)


def _check_params(shape: Sequence[int], r: int) -> tuple[int, ...]:
    shape = tuple(int(a) for a in shape)
    if not shape or r < 1 or any(a < r for a in shape):
        raise InvalidInput(f"need 1 <= r <= min a_j, got r={r}, shape={shape}")
    return shape


def _fmt(c: ProductCohomology | None):
    if c is None:
        return {"vanishes": True}
    return {"vanishes": False, "degree": c.degree, "weights": [list(w) for w in c.weights]}


def check_acyclic_Sd_eta(shape: Sequence[int], r: int, d: int) -> dict:
    """Bott on every summand of S^d(R_1* x ... x R_n*); acyclic when all sit in degree 0."""
    shape = _check_params(shape, r)
    n = len(shape)
    summands = []
    ok = True
    for comp in _isotypic(d, r, n):
        bundle = [FactorWeight.pure_sub(a, r, p.padded(r)) for p, a in zip(comp.partitions, shape)]
        c = product_cohomology(bundle)
        if c is None or c.degree != 0:
            ok = False
        summands.append({"partitions": [list(p) for p in comp.partitions], "multiplicity": comp.multiplicity, **_fmt(c)})
    return {"shape": list(shape), "r": r, "d": d, "acyclic": ok, "summands": summands}


def twisted_dual_weights(pis: Sequence[Sequence[int]], shape: Sequence[int], r: int) -> list[tuple[int, ...]]:
    """R*-block weights (r^(n-1) - a_j - p_{j,r}, ..., r^(n-1) - a_j - p_{j,1}) per factor."""
    shape = _check_params(shape, r)
    n = len(shape)
    if len(pis) != n:
        raise InvalidInput(f"need {n} partitions")
    top = r ** (n - 1)
    out = []
    for p, a in zip(pis, shape):
        p = Partition(p)
        if len(p) > r:
            raise InvalidInput(f"partition {tuple(p)} has more than {r} rows")
        out.append(tuple(top - a - x for x in reversed(p.padded(r))))
    return out


def twisted_dual_acyclicity(pis: Sequence[Sequence[int]], shape: Sequence[int], r: int, max_power: int = 2) -> dict:
    """Check the twisted dual weights and their products with S^e(eta), e <= max_power.

    The hypothesis holds for factor j when the last entry of its transformed
    weight is at least r - a_j, which is the same as p_{j,1} <= r^(n-1) - r.
    Failures are reported in the result rather than raised.
    """
    shape = _check_params(shape, r)
    n = len(shape)
    weights = twisted_dual_weights(pis, shape, r)
    hyp = [w[-1] >= r - a for w, a in zip(weights, shape)]
    bad = []
    checked = 0
    for e in range(max_power + 1):
        for parts in _eta_power(e, r, n):
            per_factor = [_factor_outcomes(a, r, w, p) for w, p, a in zip(weights, parts, shape)]
            checked += math.prod(len(x) for x in per_factor)
            # Kunneth: a product of constituents survives iff no factor vanishes, so
            # higher cohomology appears iff every factor has a surviving constituent
            # and at least one surviving constituent sits in positive degree.
            alive = [[(nu, c) for nu, c in x if c is not None] for x in per_factor]
            if all(alive):
                for j, x in enumerate(alive):
                    for nu, c in x:
                        if c.degree > 0:
                            bad.append({"power": e, "partitions": [list(p) for p in parts], "factor": j + 1, "weight": list(nu), "degree": c.degree})
    return {
        "shape": list(shape),
        "r": r,
        "partitions": [list(Partition(p)) for p in pis],
        "transformed": [list(w) for w in weights],
        "normalized": [[str(x) for x in normalized(w + (0,) * (a - r))] for w, a in zip(weights, shape)],
        "hypothesis": hyp,
        "hypothesis_ok": all(hyp),
        "bundles_checked": checked,
        "higher_cohomology": bad,
        "acyclic": not bad,
    }


def shape_grid(n_values=(2, 3, 4), r_values=(1, 2, 3), a_max: int = 5):
    """All (shape, r) with weakly increasing shapes and r <= a_j <= a_max."""
    for n in n_values:
        for r in r_values:
            for shape in itertools.combinations_with_replacement(range(max(r, 2), a_max + 1), n):
                yield shape, r


def twisted_grid_partitions(n: int, r: int, samples: int, seed: int) -> list[tuple[Partition, ...]]:
    """Tuples of partitions with p_{j,1} <= r^(n-1) - r: every uniform tuple
    (the same partition on each factor) plus ``samples`` seeded mixed tuples."""
    bound = r ** (n - 1) - r
    box = partitions_in_box(r, bound)
    rng = random.Random(seed)
    out = [(p,) * n for p in box]
    out += [tuple(rng.choice(box) for _ in range(n)) for _ in range(samples)]
    return out


def twisted_dual_box_scan(shape: Sequence[int], r: int, max_power: int = 2, cap: int | None = None) -> dict:
    """Exhaustive form of twisted_dual_acyclicity over every partition tuple in the box.

    Higher cohomology for a tuple needs every factor to survive and one factor
    to land in positive degree, and factors are chosen independently, so it is
    enough to record per factor and per S^e(eta) summand which box partitions
    survive and which reach positive degree. ``cap`` overrides the first-part
    bound r^(n-1) - r.
    """
    shape = _check_params(shape, r)
    n = len(shape)
    top = r ** (n - 1)
    box = partitions_in_box(r, top - r if cap is None else cap)
    hyp_ok = all(top - a - p.padded(r)[0] >= r - a for p in box for a in shape)
    witnesses = []
    scanned = 0
    for e in range(max_power + 1):
        for parts in _eta_power(e, r, n):
            alive = []
            positive = []
            for q, a in zip(parts, shape):
                some_alive = None
                some_positive = None
                for p in box:
                    w = tuple(top - a - x for x in reversed(p.padded(r)))
                    scanned += 1
                    for _nu, c in _factor_outcomes(a, r, w, q):
                        if c is None:
                            continue
                        if some_alive is None:
                            some_alive = p
                        if c.degree > 0 and some_positive is None:
                            some_positive = p
                alive.append(some_alive)
                positive.append(some_positive)
            if all(x is not None for x in alive) and any(x is not None for x in positive):
                witnesses.append({"power": e, "partitions": [list(q) for q in parts]})
    return {
        "shape": list(shape),
        "r": r,
        "box_size": len(box),
        "tuples_covered": len(box) ** n,
        "factor_weights_scanned": scanned,
        "hypothesis_ok": hyp_ok,
        "higher_cohomology": witnesses,
        "acyclic": not witnesses,
    }
