"""Sparse homogeneous polynomials in the tensor coordinates and graded ideal pieces.

Variables are the coordinates ``phi_I`` of a shape, numbered by the position of
``I`` in lexicographic order (so ``phi_{1,...,1}`` is variable 0). A monomial is
stored as the sorted tuple of its variable indices, repeated by exponent.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .errors import InvalidInput
from .exact_linalg import PrimeField, SparseEliminator
from .tensors import Tensor, multi_indices

log = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def _parse_coeff(c):
    if isinstance(c, str):
        c = Fraction(c)
    if isinstance(c, float):
        raise InvalidInput("floating point coefficients are not accepted")
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class SparsePoly:
    """Homogeneous polynomial with exact (int or Fraction) coefficients."""

    __slots__ = ("shape", "terms", "degree")

    def __init__(self, shape: Sequence[int], terms: dict[Monomial, object] | Iterable = ()):
        self.shape = tuple(shape)
        nvars = math.prod(self.shape)
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[Monomial, object] = defaultdict(int)
        for mono, c in items:
            mono = tuple(sorted(mono))
            if mono and (mono[0] < 0 or mono[-1] >= nvars):
                raise InvalidInput(f"variable index out of range in {mono}")
            acc[mono] += _parse_coeff(c)
        self.terms = {m: c for m, c in acc.items() if c != 0}
        degrees = {len(m) for m in self.terms}
        if len(degrees) > 1:
            raise InvalidInput(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        self.degree = degrees.pop() if degrees else 0

    @property
    def nvars(self) -> int:
        return math.prod(self.shape)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePoly) and self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.shape, {m: -c for m, c in self.terms.items()})

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        if other.shape != self.shape:
            raise InvalidInput("shapes differ")
        return SparsePoly(self.shape, itertools.chain(self.terms.items(), other.terms.items()))

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        if other.shape != self.shape:
            raise InvalidInput("shapes differ")
        return SparsePoly(
            self.shape,
            ((m1 + m2, c1 * c2) for m1, c1 in self.terms.items() for m2, c2 in other.terms.items()),
        )

    def scale(self, c) -> "SparsePoly":
        return SparsePoly(self.shape, {m: c * v for m, v in self.terms.items()})

    def times_monomial(self, mono: Monomial) -> dict[Monomial, object]:
        return {tuple(sorted(m + mono)): c for m, c in self.terms.items()}

    def torus_weight(self) -> tuple[int, ...] | None:
        """Common torus weight of all terms, or None if the terms disagree."""
        weights = {monomial_weight(m, self.shape) for m in self.terms}
        return weights.pop() if len(weights) == 1 else None

    def to_dict(self) -> dict:
        return {
            "shape": list(self.shape),
            "degree": self.degree,
            "terms": [
                [exponent_vector(m, self.nvars), c if isinstance(c, int) else f"{c.numerator}/{c.denominator}"]
                for m, c in sorted(self.terms.items(), key=lambda mc: grevlex_key(mc[0], self.nvars))
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SparsePoly":
        shape = tuple(data["shape"])
        terms = []
        for exps, c in data["terms"]:
            mono = tuple(i for i, e in enumerate(exps) for _ in range(e))
            terms.append((mono, c))
        return cls(shape, terms)

    def __repr__(self) -> str:
        return f"SparsePoly(shape={self.shape}, degree={self.degree}, nterms={len(self.terms)})"

    def pretty(self) -> str:
        """Human-readable form with 1-based coordinate names."""
        names = [",".join(str(i + 1) for i in idx) for idx in multi_indices(self.shape)]
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: grevlex_key(mc[0], self.nvars)):
            factors = "*".join(f"phi[{names[v]}]" for v in m)
            parts.append(f"{c}*{factors}" if factors else str(c))
        return " + ".join(parts) if parts else "0"


def variable(shape: Sequence[int], index: Sequence[int]) -> SparsePoly:
    """The coordinate function for a 1-based multi-index."""
    shape = tuple(shape)
    k = 0
    for i, a in zip(index, shape):
        if not 1 <= i <= a:
            raise InvalidInput(f"index {index} out of range for {shape}")
        k = k * a + (i - 1)
    return SparsePoly(shape, {(k,): 1})


def exponent_vector(mono: Monomial, nvars: int) -> list[int]:
    exps = [0] * nvars
    for v in mono:
        exps[v] += 1
    return exps


def grevlex_key(mono: Monomial, nvars: int) -> tuple:
    """Sort key realizing graded reverse-lex with phi_{1..1} the smallest variable.

    Ascending order of keys is ascending grevlex order: compare degrees, then the
    monomial with the smaller exponent of the smallest differing variable is larger.
    """
    exps = exponent_vector(mono, nvars)
    return (len(mono), tuple(-e for e in exps))


def monomial_weight(mono: Monomial, shape: Sequence[int]) -> tuple[int, ...]:
    """Torus weight: for each factor, how often each basis index occurs."""
    offsets = list(itertools.accumulate((0,) + tuple(shape[:-1])))
    counts = [0] * sum(shape)
    for v in mono:
        for j in range(len(shape) - 1, -1, -1):
            v, i = divmod(v, shape[j])
            counts[offsets[j] + i] += 1
    return tuple(counts)


def monomials(nvars: int, degree: int) -> Iterable[Monomial]:
    return itertools.combinations_with_replacement(range(nvars), degree)


def _check_domain(f: SparsePoly, T: Tensor) -> None:
    if tuple(T.shape) != f.shape:
        raise InvalidInput(f"tensor shape {T.shape} does not match polynomial shape {f.shape}")


def evaluate(f: SparsePoly, T: Tensor):
    """Exact value f(T) in the tensor's domain."""
    _check_domain(f, T)
    domain = T.domain
    vals = T.entries
    if isinstance(domain, PrimeField):
        p = domain.p
        total = 0
        for m, c in f.terms.items():
            term = domain.convert(c)
            for v in m:
                term = term * vals[v] % p
            total += term
        return total % p
    total = Fraction(0)
    for m, c in f.terms.items():
        term = Fraction(c)
        for v in m:
            term *= vals[v]
        total += term
    return total


def differential_at(f: SparsePoly, T: Tensor) -> dict[int, object]:
    """Gradient of f at T as ``{variable index: nonzero value}``."""
    _check_domain(f, T)
    domain = T.domain
    vals = T.entries
    grad: dict[int, object] = defaultdict(lambda: domain.zero)
    for m, c in f.terms.items():
        c = domain.convert(c)
        for pos, v in enumerate(m):
            if pos and m[pos - 1] == v:
                continue
            mult = m.count(v)
            rest = m[:pos] + m[pos + 1 :]
            term = domain.mul(c, domain.convert(mult))
            for u in rest:
                term = domain.mul(term, vals[u])
            grad[v] = domain.add(grad[v], term)
    return {v: x for v, x in grad.items() if x != 0}


# ---------------------------------------------------------------------------
# graded pieces of ideals


def _block_rank(task) -> int:
    gens, monos_by_weight, p, pairs = task
    nvars = gens[0].nvars
    rows = []
    for gi, wm in pairs:
        g = gens[gi]
        for m in monos_by_weight[wm]:
            rows.append(g.times_monomial(m))
    cols = sorted({mono for r in rows for mono in r}, key=lambda mono: grevlex_key(mono, nvars))
    index = {mono: k for k, mono in enumerate(cols)}
    field = PrimeField(p)
    elim = SparseEliminator(p)
    for r in rows:
        elim.add({index[mono]: field.convert(c) for mono, c in r.items()})
    return elim.rank


def graded_ideal_dimension(gens: Sequence[SparsePoly], d: int, p: int, threads: int = 1) -> int:
    """dim over GF(p) of the degree-d piece of the ideal generated by ``gens``.

    Rows ``m * g`` are grouped by torus weight when every generator is a weight
    vector; each weight block is eliminated independently.
    """
    gens = [g for g in gens if not g.is_zero()]
    gens = [g for g in gens if g.degree <= d]
    if not gens:
        return 0
    shape = gens[0].shape
    if any(g.shape != shape for g in gens):
        raise InvalidInput("generators live on different shapes")
    nvars = math.prod(shape)
    weights = [g.torus_weight() for g in gens]
    homogeneous = all(w is not None for w in weights)

    by_degree: dict[int, dict] = {}
    blocks: dict[tuple, list] = defaultdict(list)
    for gi, g in enumerate(gens):
        e = d - g.degree
        if e not in by_degree:
            groups: dict[tuple, list] = defaultdict(list)
            for m in monomials(nvars, e):
                groups[monomial_weight(m, shape) if homogeneous else ()].append(m)
            by_degree[e] = groups
        for wm in by_degree[e]:
            key = tuple(x + y for x, y in zip(weights[gi], wm)) if homogeneous else ()
            blocks[key].append((gi, (e, wm)))

    flat_groups = {(e, wm): ms for e, groups in by_degree.items() for wm, ms in groups.items()}
    tasks = [(gens, flat_groups, p, pairs) for _, pairs in sorted(blocks.items())]
    nrows = sum(len(flat_groups[k]) for _, pairs in blocks.items() for _, k in pairs)
    log.info("degree %d: %d rows in %d blocks", d, nrows, len(tasks))
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunk = max(1, len(tasks) // (threads * 4))
            return sum(pool.map(_block_rank, [_slim(t) for t in tasks], chunksize=chunk))
    return sum(_block_rank(t) for t in tasks)


def _slim(task):
    gens, groups, p, pairs = task
    return gens, {k: groups[k] for _, k in pairs}, p, pairs


def hilbert_function(gens: Sequence[SparsePoly], d_max: int, p: int, shape: Sequence[int] | None = None, threads: int = 1) -> list[tuple[int, int]]:
    """``[(d, H(A/I, d)) for d in 0..d_max]`` with I generated by ``gens``."""
    if shape is None:
        if not gens:
            raise InvalidInput("shape is required when there are no generators")
        shape = gens[0].shape
    nvars = math.prod(shape)
    out = []
    for d in range(d_max + 1):
        total = math.comb(nvars + d - 1, d)
        out.append((d, total - graded_ideal_dimension(gens, d, p, threads=threads)))
    return out


def polys_to_json(polys: Sequence[SparsePoly]) -> str:
    return json.dumps([f.to_dict() for f in polys])
