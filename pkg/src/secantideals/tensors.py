"""Dense tensors over an exact domain, flattenings and rank tests.

Factors are numbered from 1 in every public signature (``flatten(T, {1, 2})``),
multi-indices are 0-based in memory and 1-based when printed.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput
from .exact_linalg import QQ, DenseMatrix, PrimeField, parse_domain, rank


def validate_shape(shape: Iterable[int]) -> tuple[int, ...]:
    shape = tuple(int(a) for a in shape)
    if len(shape) < 2 or any(a < 2 for a in shape):
        raise InvalidInput(f"shape needs at least two factors, each of size >= 2: {shape}")
    return shape


def strides(shape: Sequence[int]) -> tuple[int, ...]:
    out = []
    acc = 1
    for a in reversed(shape):
        out.append(acc)
        acc *= a
    return tuple(reversed(out))


def multi_indices(shape: Sequence[int]) -> list[tuple[int, ...]]:
    """All 0-based multi-indices in lexicographic (= row-major) order."""
    return list(itertools.product(*(range(a) for a in shape)))


@dataclass(frozen=True)
class Tensor:
    shape: tuple[int, ...]
    entries: tuple
    domain: object = QQ

    def __post_init__(self):
        if len(self.entries) != math.prod(self.shape):
            raise InvalidInput("entry count does not match shape")

    @classmethod
    def from_function(cls, shape, f, domain=QQ) -> "Tensor":
        shape = validate_shape(shape)
        return cls(shape, tuple(domain.convert(f(idx)) for idx in multi_indices(shape)), domain)

    @classmethod
    def zeros(cls, shape, domain=QQ) -> "Tensor":
        shape = validate_shape(shape)
        return cls(shape, (domain.zero,) * math.prod(shape), domain)

    @classmethod
    def basis(cls, shape, *indices: Sequence[int], domain=QQ) -> "Tensor":
        """Sum of basis tensors e_I for 1-based multi-indices I."""
        shape = validate_shape(shape)
        st = strides(shape)
        vals = [domain.zero] * math.prod(shape)
        for idx in indices:
            if len(idx) != len(shape) or any(not 1 <= i <= a for i, a in zip(idx, shape)):
                raise InvalidInput(f"index {idx} out of range for shape {shape}")
            k = sum((i - 1) * s for i, s in zip(idx, st))
            vals[k] = domain.add(vals[k], domain.one)
        return cls(shape, tuple(vals), domain)

    @property
    def nfactors(self) -> int:
        return len(self.shape)

    def __getitem__(self, idx: Sequence[int]):
        """Entry at a 0-based multi-index."""
        return self.entries[sum(i * s for i, s in zip(idx, strides(self.shape)))]

    def _check(self, other: "Tensor") -> None:
        if self.shape != other.shape or self.domain != other.domain:
            raise InvalidInput("tensors differ in shape or domain")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        add = self.domain.add
        return Tensor(self.shape, tuple(add(x, y) for x, y in zip(self.entries, other.entries)), self.domain)

    def scale(self, c) -> "Tensor":
        c = self.domain.convert(c)
        mul = self.domain.mul
        return Tensor(self.shape, tuple(mul(c, x) for x in self.entries), self.domain)

    def to_dict(self) -> dict:
        return {
            "shape": list(self.shape),
            "domain": self.domain.name,
            "entries": [self.domain.serialize(x) for x in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Tensor":
        shape = validate_shape(data["shape"])
        domain = parse_domain(str(data.get("domain", "QQ")))
        return cls(shape, tuple(domain.convert(x) for x in data["entries"]), domain)

    @classmethod
    def from_json(cls, text: str) -> "Tensor":
        return cls.from_dict(json.loads(text))


def outer(vectors: Sequence[Sequence], domain=QQ) -> Tensor:
    shape = tuple(len(v) for v in vectors)
    mul = domain.mul
    entries = []
    for idx in multi_indices(shape):
        acc = domain.one
        for v, i in zip(vectors, idx):
            acc = mul(acc, v[i])
        entries.append(acc)
    return Tensor(validate_shape(shape), tuple(entries), domain)


def _random_vector(rng: random.Random, a: int, domain) -> list:
    while True:
        if isinstance(domain, PrimeField):
            v = [rng.randrange(domain.p) for _ in range(a)]
        else:
            v = [Fraction(rng.randint(-9, 9)) for _ in range(a)]
        if any(v):
            return v


def random_rank_tensor(shape, r: int, seed: int, domain=QQ) -> Tensor:
    """Sum of ``r`` random decomposable tensors; deterministic in ``seed``."""
    shape = validate_shape(shape)
    if r < 1:
        raise InvalidInput("r must be positive")
    rng = random.Random(seed)
    total = Tensor.zeros(shape, domain)
    for _ in range(r):
        total = total + outer([_random_vector(rng, a, domain) for a in shape], domain)
    return total


def random_tensor(shape, seed: int, domain=QQ) -> Tensor:
    """Tensor with independent random entries (integers in [-9, 9] over QQ)."""
    shape = validate_shape(shape)
    rng = random.Random(seed)
    n = math.prod(shape)
    if isinstance(domain, PrimeField):
        vals = tuple(rng.randrange(domain.p) for _ in range(n))
    else:
        vals = tuple(Fraction(rng.randint(-9, 9)) for _ in range(n))
    return Tensor(shape, vals, domain)


def _normalize_split(split: Iterable[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    I = tuple(sorted(set(int(i) for i in split)))
    if not I or len(I) >= n or I[0] < 1 or I[-1] > n:
        raise InvalidInput(f"split must be a nonempty proper subset of 1..{n}: {I}")
    J = tuple(j for j in range(1, n + 1) if j not in I)
    return I, J


def flattening_positions(shape: Sequence[int], split: Iterable[int]) -> list[list[int]]:
    """Row-major entry positions of the flattening matrix for ``split``.

    Rows run over the factors in the split, columns over the complement, each in
    lexicographic order of the restricted multi-index.
    """
    I, J = _normalize_split(split, len(shape))
    st = strides(shape)
    rows = itertools.product(*(range(shape[i - 1]) for i in I))
    cols = list(itertools.product(*(range(shape[j - 1]) for j in J)))
    out = []
    for ri in rows:
        base = sum(x * st[i - 1] for x, i in zip(ri, I))
        out.append([base + sum(y * st[j - 1] for y, j in zip(cj, J)) for cj in cols])
    return out


def flatten(T: Tensor, split: Iterable[int]) -> DenseMatrix:
    pos = flattening_positions(T.shape, split)
    entries = tuple(T.entries[k] for row in pos for k in row)
    return DenseMatrix(len(pos), len(pos[0]), entries, T.domain)


def splits(n: int) -> list[tuple[int, ...]]:
    """One representative (the side containing factor 1) per complementary pair."""
    out = []
    for size in range(1, n):
        for rest in itertools.combinations(range(2, n + 1), size - 1):
            out.append((1,) + rest)
    return out


def multilinear_rank(T: Tensor) -> tuple[int, ...]:
    return tuple(rank(flatten(T, [j])) for j in range(1, T.nfactors + 1))


def flattening_rank_test(T: Tensor, r: int) -> list[tuple[tuple[int, ...], bool]]:
    """For each split, whether the flattening has rank at most ``r``."""
    return [(I, rank(flatten(T, I)) <= r) for I in splits(T.nfactors)]
