"""Characters of symmetric groups, Schur module dimensions, LR coefficients.

Multiplicities of ``S_{pi_1}A_1 x ... x S_{pi_n}A_n`` in ``S^d(A_1 x ... x A_n)``
are dimensions of the diagonal invariants ``([pi_1] x ... x [pi_n])^{S_d}``,
computed by averaging character products over conjugacy classes.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

from .errors import InternalError, InvalidInput
from .partitions import Partition, enumerate_partitions, hook_content_data


def class_size(cycle_type: Sequence[int]) -> int:
    """Number of permutations of the given cycle type: d! / z_lambda."""
    lam = Partition(cycle_type)
    z = 1
    for part, mult in Counter(lam).items():
        z *= part**mult * math.factorial(mult)
    size, rem = divmod(math.factorial(lam.weight), z)
    if rem:
        raise InternalError(f"z_lambda does not divide d! for {lam}")
    return size


def _beta_set(p: Partition, length: int) -> tuple[int, ...]:
    return tuple(part + length - 1 - i for i, part in enumerate(p.padded(length)))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama on beta-numbers: removing a k-rim hook slides one bead
    # down by k onto a free position; the sign counts the beads jumped over.
    if not cycles:
        return 1
    k, rest = cycles[0], cycles[1:]
    occupied = set(beta)
    total = 0
    for idx, b in enumerate(beta):
        target = b - k
        if target < 0 or target in occupied:
            continue
        jumped = sum(1 for c in beta if target < c < b)
        new_beta = tuple(sorted(beta[:idx] + (target,) + beta[idx + 1 :], reverse=True))
        total += (-1) ** jumped * _mn(new_beta, rest)
    return total


def character(p: Sequence[int], cycle_type: Sequence[int]) -> int:
    """chi_p evaluated on the conjugacy class with the given cycle type."""
    p, lam = Partition(p), Partition(cycle_type)
    if p.weight != lam.weight:
        raise InvalidInput(f"weights differ: |{tuple(p)}| != |{tuple(lam)}|")
    return _mn(_beta_set(p, len(p)), tuple(lam))


def multiplicity_terms(parts: Sequence[Sequence[int]]) -> list[tuple[Partition, int, int]]:
    """Per-class terms ``(cycle type, class size, prod_j chi_{pi_j})``."""
    parts = [Partition(p) for p in parts]
    if not parts:
        raise InvalidInput("need at least one partition")
    d = parts[0].weight
    if any(p.weight != d for p in parts):
        raise InvalidInput("all partitions must have the same weight")
    out = []
    for lam in enumerate_partitions(d):
        prod = 1
        for p in parts:
            prod *= character(p, lam)
        out.append((lam, class_size(lam), prod))
    return out


def invariant_multiplicity(parts: Sequence[Sequence[int]]) -> int:
    """dim ([pi_1] x ... x [pi_n])^{S_d}."""
    terms = multiplicity_terms(parts)
    d = Partition(parts[0]).weight
    total = sum(size * prod for _, size, prod in terms)
    value, rem = divmod(total, math.factorial(d))
    if rem or value < 0:
        raise InternalError(f"character average {total}/{d}! is not a non-negative integer")
    return value


def schur_dimension(p: Sequence[int], n: int) -> int:
    """dim S_p(C^n) by the hook content formula; 0 when l(p) > n."""
    p = Partition(p)
    if len(p) > n:
        return 0
    num = den = 1
    for _, hook, content in hook_content_data(p):
        num *= n + content
        den *= hook
    value, rem = divmod(num, den)
    if rem:
        raise InternalError(f"hook content quotient not integral for {p}, n={n}")
    return value


def weight_dimension(weight: Sequence[int]) -> int:
    """Weyl dimension of the GL_n module with dominant weight ``weight``.

    Entries may be negative; only differences matter.
    """
    w = list(weight)
    n = len(w)
    if any(w[i] < w[i + 1] for i in range(n - 1)):
        raise InvalidInput(f"weight not dominant: {w}")
    num = den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= w[i] - w[j] + j - i
            den *= j - i
    value, rem = divmod(num, den)
    if rem:
        raise InternalError(f"Weyl quotient not integral for {w}")
    return value


@dataclass(frozen=True)
class IsotypicComponent:
    partitions: tuple[Partition, ...]
    multiplicity: int
    dimension: int

    def to_dict(self) -> dict:
        return {
            "partitions": [list(p) for p in self.partitions],
            "multiplicity": self.multiplicity,
            "dimension": self.dimension,
        }


def isotypic_decomposition(d: int, dims: Sequence[int]) -> list[IsotypicComponent]:
    """Isotypic pieces of S^d(C^{a_1} x ... x C^{a_n}) with nonzero multiplicity.

    Raises InternalError if the total dimension disagrees with binomial(N+d-1, d).
    """
    if d < 1 or not dims or any(a < 1 for a in dims):
        raise InvalidInput("need d >= 1 and positive dimensions")
    classes = enumerate_partitions(d)
    sizes = [class_size(lam) for lam in classes]
    factorial = math.factorial(d)
    choices = [enumerate_partitions(d, a) for a in dims]
    chars = {
        p: [character(p, lam) for lam in classes]
        for p in {q for options in choices for q in options}
    }
    out = []
    total_dim = 0
    for combo in itertools.product(*choices):
        acc = 0
        for k, size in enumerate(sizes):
            prod = size
            for p in combo:
                prod *= chars[p][k]
                if not prod:
                    break
            acc += prod
        mult, rem = divmod(acc, factorial)
        if rem or mult < 0:
            raise InternalError(f"non-integral multiplicity for {combo}")
        if mult == 0:
            continue
        dim = math.prod(schur_dimension(p, a) for p, a in zip(combo, dims))
        out.append(IsotypicComponent(tuple(combo), mult, dim))
        total_dim += mult * dim
    expected = math.comb(math.prod(dims) + d - 1, d)
    if total_dim != expected:
        raise InternalError(f"isotypic dimensions sum to {total_dim}, expected {expected}")
    return out


def littlewood_richardson(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """c^lam_{mu,nu}: LR skew tableaux of shape lam/mu with content nu."""
    lam, mu, nu = Partition(lam), Partition(mu), Partition(nu)
    if mu.weight + nu.weight != lam.weight:
        raise InvalidInput("need |mu| + |nu| = |lam|")
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return 0
    if not nu:
        return 1
    rows = len(lam)
    mu_p = mu.padded(rows)
    # Fill in reading order: rows top to bottom, each row right to left, so the
    # reverse reading word is built incrementally and lattice checks are local.
    cells = [(i, j) for i in range(rows) for j in range(lam[i] - 1, mu_p[i] - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)

    def rec(k: int) -> int:
        if k == len(cells):
            return 1
        i, j = cells[k]
        total = 0
        for v in range(1, len(nu) + 1):
            if counts[v] >= nu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            right = filling.get((i, j + 1))
            if right is not None and v > right:
                continue
            above = filling.get((i - 1, j))
            if above is not None and v <= above:
                continue
            filling[(i, j)] = v
            counts[v] += 1
            total += rec(k + 1)
            counts[v] -= 1
            del filling[(i, j)]
        return total

    return rec(0)


def lr_product(mu: Sequence[int], nu: Sequence[int], max_rows: int | None = None) -> dict[Partition, int]:
    """Expand s_mu * s_nu, keeping shapes with at most ``max_rows`` rows."""
    mu, nu = Partition(mu), Partition(nu)
    size = nu.weight
    rows = len(mu) + len(nu) if max_rows is None else max_rows
    if len(mu) > rows:
        return {}
    base = mu.padded(rows)
    out: dict[Partition, int] = {}

    def rec(i: int, remaining: int, prefix: list[int]) -> None:
        if i == rows:
            if remaining == 0:
                lam = Partition(prefix)
                c = littlewood_richardson(lam, mu, nu)
                if c:
                    out[lam] = c
            return
        cap = prefix[-1] if prefix else base[0] + size
        for add in range(remaining, -1, -1):
            part = base[i] + add
            if part > cap:
                continue
            prefix.append(part)
            rec(i + 1, remaining - add, prefix)
            prefix.pop()

    rec(0, size, [])
    return out


def weight_product(alpha: Sequence[int], beta: Sequence[int]) -> dict[tuple[int, ...], int]:
    """Decompose S_alpha(C^n) x S_beta(C^n) for dominant GL_n weights of length n.

    Negative entries are handled by twisting with a power of the determinant.
    """
    n = len(alpha)
    if len(beta) != n:
        raise InvalidInput("weights must have equal length")
    shift_a = min(list(alpha) + [0])
    shift_b = min(list(beta) + [0])
    a = Partition(x - shift_a for x in alpha)
    b = Partition(x - shift_b for x in beta)
    return {
        tuple(x + shift_a + shift_b for x in lam.padded(n)): c
        for lam, c in lr_product(a, b, max_rows=n).items()
    }
