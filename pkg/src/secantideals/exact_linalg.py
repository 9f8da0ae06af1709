"""Exact scalar domains and rank computations.

Two domains are supported: ``QQ`` (``fractions.Fraction``) and ``GF(p)``, whose
elements are plain ints in ``[0, p)``. Nothing here touches floating point.
"""

from __future__ import annotations

import math
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidInput

# Largest two primes below 2**30; products of residues fit in 64 bits.
DEFAULT_PRIME = 1073741789
SECOND_PRIME = 1073741783
PRIME_ENV_VAR = "SECANTIDEALS_PRIME"


def default_prime() -> int:
    value = os.environ.get(PRIME_ENV_VAR)
    if value is None:
        return DEFAULT_PRIME
    p = int(value)
    if not is_prime(p):
        raise InvalidInput(f"{PRIME_ENV_VAR}={value} is not prime")
    return p


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin bases for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    name = "QQ"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, float):
            raise InvalidInput("floating point values are not accepted")
        return Fraction(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def serialize(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidInput(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def convert(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self.convert(Fraction(x))
        if isinstance(x, float):
            raise InvalidInput("floating point values are not accepted")
        return int(x) % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    def neg(self, x):
        return -x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def serialize(self, x) -> int:
        return int(x)

    def __repr__(self) -> str:
        return self.name


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_domain(text: str):
    """``"QQ"`` or ``"GF(p)"`` / ``"p"``."""
    text = text.strip()
    if text.upper() == "QQ":
        return QQ
    if text.upper().startswith("GF(") and text.endswith(")"):
        text = text[3:-1]
    return PrimeField(int(text))


@dataclass(frozen=True)
class DenseMatrix:
    nrows: int
    ncols: int
    entries: tuple
    domain: object = QQ

    def __post_init__(self):
        if len(self.entries) != self.nrows * self.ncols:
            raise InvalidInput("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain=QQ) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InvalidInput("ragged rows")
        entries = tuple(domain.convert(x) for r in rows for x in r)
        return cls(len(rows), ncols, entries, domain)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i * self.ncols + j]

    def rows(self) -> list[list]:
        c = self.ncols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.nrows)]

    def transpose(self) -> "DenseMatrix":
        entries = tuple(self[i, j] for j in range(self.ncols) for i in range(self.nrows))
        return DenseMatrix(self.ncols, self.nrows, entries, self.domain)

    def to_dict(self) -> dict:
        return {
            "nrows": self.nrows,
            "ncols": self.ncols,
            "domain": self.domain.name,
            "rows": [[self.domain.serialize(x) for x in r] for r in self.rows()],
        }


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        piv = m[rank][col]
        for i in range(rank + 1, nrows):
            row, factor = m[i], m[i][col]
            top = m[rank]
            for j in range(col + 1, ncols):
                num = piv * row[j] - factor * top[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise InternalError("Bareiss division was not exact")
                row[j] = q
            row[col] = 0
        prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        top = m[rank]
        inv = pow(top[col], -1, p)
        for j in range(col, ncols):
            top[j] = top[j] * inv % p
        for i in range(rank + 1, nrows):
            f = m[i][col]
            if f:
                row = m[i]
                for j in range(col, ncols):
                    row[j] = (row[j] - f * top[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(M: DenseMatrix) -> int:
    """Exact rank: Bareiss over QQ, Gaussian elimination over GF(p)."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if isinstance(M.domain, PrimeField):
        return _rank_mod_p(M.rows(), M.domain.p)
    int_rows = []
    for r in M.rows():
        lcm = math.lcm(*(Fraction(x).denominator for x in r))
        int_rows.append([int(Fraction(x) * lcm) for x in r])
    return _bareiss_rank(int_rows)


class SparseRowSet:
    """Sparse vectors ``{column: value}`` over a shared column universe."""

    def __init__(self, rows: Iterable[dict[int, int]] = (), p: int | None = None):
        self.p = p
        self.rows: list[dict[int, int]] = []
        for r in rows:
            self.add(r)

    def add(self, row: dict[int, int]) -> None:
        if self.p is not None:
            row = {c: v % self.p for c, v in row.items()}
        self.rows.append({c: v for c, v in row.items() if v})

    def __len__(self) -> int:
        return len(self.rows)

    def columns(self) -> set[int]:
        return {c for r in self.rows for c in r}


class SparseEliminator:
    """Incremental echelon form over GF(p) keyed by leading column.

    Pivots are the smallest column index of each reduced row; stored pivot
    rows are normalized to leading coefficient 1.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict[int, int]) -> bool:
        """Reduce ``row`` against the pivots; keep it if independent."""
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        pivots = self.pivots
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                inv = pow(row[lead], -1, p)
                pivots[lead] = {c: v * inv % p for c, v in row.items()}
                return True
            f = row[lead]
            for c, v in pivot.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return False


def row_space_dimension(S: SparseRowSet | Iterable[dict[int, int]], p: int) -> int:
    """Dimension over GF(p) of the span of sparse rows."""
    rows = S.rows if isinstance(S, SparseRowSet) else S
    elim = SparseEliminator(p)
    for r in rows:
        elim.add(r)
    return elim.rank
