"""Generator sets for secant varieties of Segre products, and checks built on them.

Families:

* ``flat`` - s x s minors of a flattening (rank <= s-1 conditions),
* ``subspace`` - (b_j+1)-minors of the single-factor flattenings,
* ``strassen`` - the 27 Strassen quartics on 3 x 3 x 3 tensors,
* ``secant`` - the assembled generating sets for the supported (shape, r).

Inherited Strassen equations for factors of dimension > 3 are realized as
Strassen quartics composed with linear maps ``A_j -> C^3`` (coordinate
projections, and coordinate projections after seeded random invertible changes
of basis). These polynomials lie in the inherited module; they are not claimed
to span it.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidInput, UnsupportedCase
from .exact_linalg import QQ, PrimeField, SparseEliminator, _bareiss_rank
from .polyring import SparsePoly, differential_at, evaluate
from .tensors import Tensor, flattening_positions, multi_indices, strides, validate_shape

STRASSEN_SHAPE = (3, 3, 3)
DEFAULT_COORDINATE_CHANGES = 5
DEFAULT_CHANGE_SEED = 20070101


def _perm_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


_SIGNED_PERMS: dict[int, list] = {}


def _signed_perms(s: int):
    if s not in _SIGNED_PERMS:
        _SIGNED_PERMS[s] = [(perm, _perm_sign(perm)) for perm in itertools.permutations(range(s))]
    return _SIGNED_PERMS[s]


def minor_poly(shape: Sequence[int], matrix: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]) -> SparsePoly:
    """Leibniz expansion of the minor of a matrix of variable indices."""
    terms = []
    for perm, sign in _signed_perms(len(rows)):
        terms.append((tuple(matrix[r][cols[k]] for r, k in zip(rows, perm)), sign))
    return SparsePoly(shape, terms)


class PullbackPoly:
    """A polynomial on a small shape composed with per-factor linear maps.

    ``maps[j]`` is a ``b_j x a_j`` integer matrix sending A_j to C^{b_j}; the
    polynomial is ``T -> base((M_1 x ... x M_n) T)``.
    """

    __slots__ = ("shape", "base", "maps")

    def __init__(self, shape: Sequence[int], base: SparsePoly, maps: Sequence[Sequence[Sequence[int]]]):
        self.shape = tuple(shape)
        self.base = base
        self.maps = tuple(tuple(tuple(int(x) for x in row) for row in M) for M in maps)
        if tuple(len(M) for M in self.maps) != base.shape:
            raise InvalidInput("map targets do not match the base shape")
        if any(len(row) != a for M, a in zip(self.maps, self.shape) for row in M):
            raise InvalidInput("map sources do not match the shape")

    @property
    def degree(self) -> int:
        return self.base.degree

    def is_zero(self) -> bool:
        return self.base.is_zero()

    def contract(self, T: Tensor) -> Tensor:
        domain = T.domain
        cur = {idx: T[idx] for idx in multi_indices(T.shape)}
        cur_shape = list(T.shape)
        for j, M in enumerate(self.maps):
            nxt = {}
            out_shape = cur_shape.copy()
            out_shape[j] = len(M)
            for idx in itertools.product(*(range(a) for a in out_shape)):
                acc = domain.zero
                row = M[idx[j]]
                for k, c in enumerate(row):
                    if c:
                        src = idx[:j] + (k,) + idx[j + 1 :]
                        acc = domain.add(acc, domain.mul(domain.convert(c), cur[src]))
                nxt[idx] = acc
            cur, cur_shape = nxt, out_shape
        return Tensor(tuple(cur_shape), tuple(cur[idx] for idx in multi_indices(cur_shape)), domain)

    def evaluate(self, T: Tensor):
        return evaluate(self.base, self.contract(T))

    def differential_at(self, T: Tensor) -> dict[int, object]:
        domain = T.domain
        inner = differential_at(self.base, self.contract(T))
        small = multi_indices(self.base.shape)
        grad: dict[int, object] = {}
        for k, idx in enumerate(multi_indices(self.shape)):
            acc = domain.zero
            for v, g in inner.items():
                c = 1
                for M, a, b in zip(self.maps, small[v], idx):
                    c *= M[a][b]
                    if not c:
                        break
                if c:
                    acc = domain.add(acc, domain.mul(domain.convert(c), g))
            if acc != domain.zero:
                grad[k] = acc
        return grad

    def expand(self) -> SparsePoly:
        """Explicit SparsePoly; size grows like (number of variables)^degree."""
        big = multi_indices(self.shape)
        images = []
        for sidx in multi_indices(self.base.shape):
            terms = {}
            for k, idx in enumerate(big):
                c = math.prod(M[a][b] for M, a, b in zip(self.maps, sidx, idx))
                if c:
                    terms[(k,)] = c
            images.append(SparsePoly(self.shape, terms))
        total = SparsePoly(self.shape, {})
        for mono, c in self.base.terms.items():
            prod = images[mono[0]].scale(c)
            for v in mono[1:]:
                prod = prod * images[v]
            total = total + prod
        return total

    def to_dict(self) -> dict:
        return {"pullback": [list(map(list, M)) for M in self.maps], "base": self.base.to_dict()}


def generator_evaluate(g, T: Tensor):
    return g.evaluate(T) if isinstance(g, PullbackPoly) else evaluate(g, T)


def generator_differential(g, T: Tensor) -> dict[int, object]:
    return g.differential_at(T) if isinstance(g, PullbackPoly) else differential_at(g, T)


@dataclass
class GeneratorSet:
    shape: tuple[int, ...]
    label: str
    params: dict
    polys: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def extend(self, other: "GeneratorSet") -> None:
        if other.shape != self.shape:
            raise InvalidInput("shapes differ")
        self.polys.extend(other.polys)
        self.notes.extend(other.notes)

    def sparse_polys(self) -> list[SparsePoly]:
        """Members that are explicit SparsePolys (pullbacks excluded)."""
        return [g for g in self.polys if isinstance(g, SparsePoly)]

    def to_dict(self) -> dict:
        return {
            "shape": list(self.shape),
            "label": self.label,
            "params": self.params,
            "count": len(self.polys),
            "generators": [dict(g.to_dict(), note=n) for g, n in zip(self.polys, self.notes)],
        }

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# families


def flattening_minor_polys(shape: Sequence[int], split: Iterable[int], s: int) -> GeneratorSet:
    """All s x s minors of the generic flattening for ``split`` (1-based factors)."""
    shape = validate_shape(shape)
    split = tuple(sorted(set(split)))
    matrix = flattening_positions(shape, split)
    nr, nc = len(matrix), len(matrix[0])
    if s < 1 or s > min(nr, nc):
        raise InvalidInput(f"minor size {s} does not fit a {nr} x {nc} flattening")
    gs = GeneratorSet(shape, "flat-minors", {"split": list(split), "size": s})
    for rows in itertools.combinations(range(nr), s):
        for cols in itertools.combinations(range(nc), s):
            gs.polys.append(minor_poly(shape, matrix, rows, cols))
            gs.notes.append(
                f"split {list(split)} rows {[r + 1 for r in rows]} cols {[c + 1 for c in cols]}"
            )
    return gs


def subspace_variety_generators(shape: Sequence[int], b: Sequence[int]) -> GeneratorSet:
    """(b_j+1)-minors of the single-factor flattenings, for each j with b_j < a_j."""
    shape = validate_shape(shape)
    if len(b) != len(shape) or any(not 1 <= bj <= a for bj, a in zip(b, shape)):
        raise InvalidInput(f"need 1 <= b_j <= a_j, got b={tuple(b)} for shape {shape}")
    gs = GeneratorSet(shape, "subspace", {"b": list(b)})
    rest = math.prod(shape)
    for j, (bj, a) in enumerate(zip(b, shape), start=1):
        if bj + 1 <= a and bj + 1 <= rest // a:
            gs.extend(flattening_minor_polys(shape, [j], bj + 1))
    return gs


def _strassen_literal(X, Y, Z, s: int, t: int) -> SparsePoly:
    # sum_{j,k} (-1)^{j+k} det(X minus row j, col k) (Y^j_t Z^s_k - Y^s_k Z^j_t)
    terms = []
    for j in range(3):
        for k in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != k]
            sign = -1 if (j + k) % 2 else 1
            minor = [
                ((X[rows[0]][cols[0]], X[rows[1]][cols[1]]), sign),
                ((X[rows[0]][cols[1]], X[rows[1]][cols[0]]), -sign),
            ]
            for pair, c in minor:
                terms.append((pair + (Y[j][t], Z[s][k]), c))
                terms.append((pair + (Y[s][k], Z[j][t]), -c))
    return SparsePoly(STRASSEN_SHAPE, terms)


def strassen_polys() -> GeneratorSet:
    """The 27 quartics P_{ist} on C^3 x C^3 x C^3.

    X, Y, Z are the slices T(1,.,.), T(2,.,.), T(3,.,.) with rows indexed by the
    second factor; P_{2st}, P_{3st} swap X with Y, respectively Z. Each quartic
    is the negative of the cofactor expansion as literally written, which makes
    dP_{123} = -dphi_{123} and dP_{132} = dphi_{132} at e_111 + e_222 + e_333.
    """
    slices = [[[9 * i + 3 * j + k for k in range(3)] for j in range(3)] for i in range(3)]
    X, Y, Z = slices
    roles = {1: (X, Y, Z), 2: (Y, X, Z), 3: (Z, Y, X)}
    gs = GeneratorSet(STRASSEN_SHAPE, "strassen", {"r": 3})
    for i in (1, 2, 3):
        for s in (1, 2, 3):
            for t in (1, 2, 3):
                gs.polys.append(-_strassen_literal(*roles[i], s - 1, t - 1))
                gs.notes.append(f"P[{i},{s},{t}]")
    return gs


def _selection(rows: Sequence[int], a: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if c == r else 0 for c in range(a)) for r in rows)


def _random_invertible(rng: random.Random, a: int) -> list[list[int]]:
    while True:
        M = [[rng.randint(-9, 9) for _ in range(a)] for _ in range(a)]
        if _bareiss_rank(M) == a:
            return M


def coordinate_changes(shape: Sequence[int], count: int, seed: int) -> list[list[list[list[int]]]]:
    """``count`` seeded tuples of invertible integer matrices, one per factor."""
    rng = random.Random(seed)
    return [[_random_invertible(rng, a) for a in shape] for _ in range(count)]


def inherited_strassen(shape: Sequence[int], changes: int = DEFAULT_COORDINATE_CHANGES, seed: int = DEFAULT_CHANGE_SEED) -> GeneratorSet:
    """Strassen quartics inherited to a 3-factor shape with all a_j >= 3.

    For every choice of 3 coordinates in each factor the quartics are pulled back
    along the coordinate projection (explicit SparsePolys). When some a_j > 3 the
    same is repeated after each of ``changes`` seeded random changes of basis
    (PullbackPoly members).
    """
    shape = validate_shape(shape)
    if len(shape) != 3 or any(a < 3 for a in shape):
        raise InvalidInput("inherited Strassen equations need three factors of dimension >= 3")
    base = strassen_polys()
    gs = GeneratorSet(shape, "strassen", {"r": 3, "coordinate_changes": changes, "seed": seed})
    st = strides(shape)
    choices = list(itertools.product(*(itertools.combinations(range(a), 3) for a in shape)))
    for sel in choices:
        lookup = [sum(sel[j][x[j]] * st[j] for j in range(3)) for x in multi_indices(STRASSEN_SHAPE)]
        for f, note in zip(base.polys, base.notes):
            gs.polys.append(SparsePoly(shape, {tuple(lookup[v] for v in m): c for m, c in f.terms.items()}))
            gs.notes.append(f"{note} on coordinates {[[i + 1 for i in s] for s in sel]}")
    if shape != STRASSEN_SHAPE:
        for ci, change in enumerate(coordinate_changes(shape, changes, seed)):
            for sel in choices:
                maps = [[change[j][r] for r in sel[j]] for j in range(3)]
                for f, note in zip(base.polys, base.notes):
                    gs.polys.append(PullbackPoly(shape, f, maps))
                    gs.notes.append(f"{note} on coordinates {[[i + 1 for i in s] for s in sel]} after change {ci + 1}")
    return gs


def secant_case(shape: Sequence[int], r: int) -> str:
    """Family of generators used for sigma_r of this shape."""
    shape = validate_shape(shape)
    n = len(shape)
    if n == 3 and 2 in shape:
        others = list(shape)
        others.remove(2)
        if 1 <= r <= min(others):
            return "2xbxc"
    if n == 4 and r == 2:
        return "four-factor-r2"
    if n == 3 and r == 3 and min(shape) >= 3:
        return "three-factor-r3"
    raise UnsupportedCase(
        f"no generators known here for sigma_{r} of shape {shape}: supported are "
        "(2,b,c) with r <= min(b,c); four factors with r = 2; three factors >= 3 with r = 3"
    )


def secant_generators(shape: Sequence[int], r: int, changes: int = DEFAULT_COORDINATE_CHANGES, seed: int = DEFAULT_CHANGE_SEED) -> GeneratorSet:
    shape = validate_shape(shape)
    case = secant_case(shape, r)
    gs = GeneratorSet(shape, "secant-assembled", {"r": r, "case": case})
    if case == "2xbxc":
        a = shape.index(2) + 1
        b, c = [j for j in (1, 2, 3) if j != a]
        for first, other in ((b, c), (c, b)):
            # (A x first) vs other
            if r + 1 <= min(2 * shape[first - 1], shape[other - 1]):
                gs.extend(flattening_minor_polys(shape, sorted((a, first)), r + 1))
    elif case == "four-factor-r2":
        gs.extend(subspace_variety_generators(shape, (2, 2, 2, 2)))
        for split in ((1, 2), (1, 3), (1, 4)):
            gs.extend(flattening_minor_polys(shape, split, 3))
    else:
        gs.extend(subspace_variety_generators(shape, (3, 3, 3)))
        gs.extend(inherited_strassen(shape, changes, seed))
        gs.params.update(coordinate_changes=changes if shape != STRASSEN_SHAPE else 0, seed=seed)
    return gs


# ---------------------------------------------------------------------------
# checks


def _as_prime_tensor(T: Tensor, p: int) -> Tensor:
    if isinstance(T.domain, PrimeField):
        if T.domain.p != p:
            raise InvalidInput(f"tensor lives over GF({T.domain.p}), not GF({p})")
        return T
    F = PrimeField(p)
    return Tensor(T.shape, tuple(F.convert(x) for x in T.entries), F)


def jacobian_rank_at(G: GeneratorSet | Sequence, T: Tensor, p: int) -> int:
    """Rank over GF(p) of the differentials of the generators at T."""
    T = _as_prime_tensor(T, p)
    elim = SparseEliminator(p)
    for g in G:
        elim.add(generator_differential(g, T))
    return elim.rank


def span_dimension(polys: Sequence[SparsePoly], p: int) -> int:
    """Dimension over GF(p) of the linear span of same-degree polynomials."""
    F = PrimeField(p)
    index: dict = {}
    elim = SparseEliminator(p)
    for f in polys:
        elim.add({index.setdefault(m, len(index)): F.convert(c) for m, c in f.terms.items()})
    return elim.rank


@dataclass
class Verdict:
    status: str
    case: str
    generators_checked: int
    witness: str | None = None
    witness_index: int | None = None
    witness_value: object = None
    note: str = (
        "passing means every implemented equation vanishes; this is a necessary "
        "condition for membership, not a certificate"
    )

    @property
    def violates(self) -> bool:
        return self.status == "violates-equations"

    def to_dict(self, domain=QQ) -> dict:
        out = {
            "status": self.status,
            "case": self.case,
            "generators_checked": self.generators_checked,
            "note": self.note,
        }
        if self.violates:
            out.update(witness=self.witness, witness_index=self.witness_index, witness_value=domain.serialize(self.witness_value))
        return out


def membership_verdict(T: Tensor, r: int, generators: GeneratorSet | None = None) -> Verdict:
    G = generators if generators is not None else secant_generators(T.shape, r)
    case = G.params.get("case", G.label)
    for k, (g, note) in enumerate(zip(G.polys, G.notes)):
        value = generator_evaluate(g, T)
        if value != 0:
            return Verdict("violates-equations", case, k + 1, note, k, value)
    return Verdict("passes-all-implemented-equations", case, len(G))


# ---------------------------------------------------------------------------
# batched evaluation over GF(p)


class BatchEvaluator:
    """Evaluate a generator set on many GF(p) tensors at once with int64 arrays.

    Residues stay below 2**30, so products of two fit in int64 before reduction.
    """

    def __init__(self, G: GeneratorSet, p: int):
        if p >= 2**31:
            raise InvalidInput("batched evaluation needs p < 2**31")
        self.p = p
        self.shape = G.shape
        self.npolys = len(G)
        self._sparse = self._compile([(k, g) for k, g in enumerate(G.polys) if isinstance(g, SparsePoly)])
        groups: dict = {}
        for k, g in enumerate(G.polys):
            if isinstance(g, PullbackPoly):
                groups.setdefault(g.maps, []).append((k, g.base))
        self._pullbacks = []
        for maps, members in groups.items():
            self._pullbacks.append(([np.array(M, dtype=np.int64) for M in maps], self._compile(members)))

    def _compile(self, members):
        by_degree: dict[int, list] = {}
        for k, f in members:
            by_degree.setdefault(f.degree, []).append((k, f))
        out = []
        for deg, group in by_degree.items():
            var_idx, coeffs, owner = [], [], []
            for k, f in group:
                for m, c in f.terms.items():
                    var_idx.append(m)
                    coeffs.append(PrimeField(self.p).convert(c) if isinstance(c, Fraction) else c % self.p)
                    owner.append(k)
            if not var_idx:
                continue
            owner = np.array(owner, dtype=np.int64)
            order = np.argsort(owner, kind="stable")
            var_idx = np.array(var_idx, dtype=np.int64).reshape(len(owner), deg)[order]
            coeffs = np.array(coeffs, dtype=np.int64)[order]
            owner = owner[order]
            starts = np.flatnonzero(np.r_[True, owner[1:] != owner[:-1]])
            out.append((var_idx, coeffs, owner[starts], starts))
        return out

    def _eval_compiled(self, compiled, X: np.ndarray, result: np.ndarray) -> None:
        p = self.p
        for var_idx, coeffs, owners, starts in compiled:
            acc = np.broadcast_to(coeffs, (X.shape[0], len(coeffs))).copy()
            for col in range(var_idx.shape[1]):
                acc = acc * X[:, var_idx[:, col]] % p
            result[:, owners] = np.add.reduceat(acc, starts, axis=1) % p

    def evaluate(self, tensors: Sequence[Tensor], chunk: int = 16) -> np.ndarray:
        """Values as an int64 array of shape (len(tensors), len(G))."""
        p = self.p
        out = np.zeros((len(tensors), self.npolys), dtype=np.int64)
        for lo in range(0, len(tensors), chunk):
            batch = tensors[lo : lo + chunk]
            X = np.array([_as_prime_tensor(T, p).entries for T in batch], dtype=np.int64)
            view = out[lo : lo + len(batch)]
            self._eval_compiled(self._sparse, X, view)
            if self._pullbacks:
                cube = X.reshape((len(batch),) + self.shape)
                for mats, compiled in self._pullbacks:
                    Y = cube
                    for j, M in enumerate(mats):
                        # maps carry small signed integers, so each contraction stays in range
                        Y = np.moveaxis(np.tensordot(Y, M, axes=([j + 1], [1])), -1, j + 1) % p
                    self._eval_compiled(compiled, Y.reshape(len(batch), -1), view)
        return out
