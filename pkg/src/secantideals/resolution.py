"""Reference minimal free resolutions and their numeric consequences.

Two equivariant Betti tables ship as JSON data: sigma_2 of four copies of P^1
(``4factor``) and sigma_3 of three copies of P^2 (``3factor``). Each entry is a
homological degree j, a twist k, a tuple of partitions standing for the sum of
all distinct factor permutations of it, and a multiplicity.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources

from .errors import InternalError, InvalidInput
from .partitions import Partition
from .symrep import schur_dimension

TABLE_FILES = {"4factor": "betti_4factor.json", "3factor": "betti_3factor.json"}
TABLE_SHA256 = {
    "4factor": "18857bc635bbc477e28c6944353d5ee44ee3920202fa8793854688af9943cdfb",
    "3factor": "8f634fc9f54d81fad1db747cae25c8b24ae95ba21b3897df77eb7219c47a7043",
}

# Numeric resolutions as displayed alongside the equivariant tables: {(j, twist): rank}.
DISPLAYED_BETTI = {
    "4factor": {
        (0, 0): 1, (1, 3): 32, (2, 4): 78, (3, 5): 48, (3, 6): 20,
        (4, 8): 57, (5, 9): 48, (6, 10): 12,
    },
    "3factor": {
        (0, 0): 1, (1, 4): 27, (2, 5): 27, (2, 6): 30, (3, 6): 1, (3, 9): 223,
        (4, 10): 351, (5, 11): 189, (6, 12): 30, (6, 15): 1,
    },
}


@dataclass(frozen=True)
class BettiEntry:
    j: int
    twist: int
    orbit: tuple[Partition, ...]
    copies: int

    def orbit_members(self) -> list[tuple[Partition, ...]]:
        """Distinct rearrangements of the partition tuple, in sorted order."""
        return sorted(set(itertools.permutations(self.orbit)))


@dataclass(frozen=True)
class EquivariantBettiTable:
    name: str
    n: int
    dims: tuple[int, ...]
    r: int
    entries: tuple[BettiEntry, ...]

    def __post_init__(self):
        for e in self.entries:
            if len(e.orbit) != self.n:
                raise InvalidInput(f"orbit {e.orbit} does not have {self.n} partitions")
            if any(p.weight != e.twist for p in e.orbit):
                raise InvalidInput(f"partition weights in {e.orbit} differ from twist {e.twist}")
            if e.copies < 1:
                raise InvalidInput("copies must be positive")

    @property
    def length(self) -> int:
        return max(e.j for e in self.entries)

    @classmethod
    def from_dict(cls, data: dict) -> "EquivariantBettiTable":
        entries = tuple(
            BettiEntry(int(t["j"]), int(t["twist"]), tuple(Partition(p) for p in t["orbit"]), int(t["copies"]))
            for t in data["terms"]
        )
        return cls(data["name"], int(data["n"]), tuple(data["dims"]), int(data["r"]), entries)


def load_table(case: str, verify: bool = True) -> EquivariantBettiTable:
    if case not in TABLE_FILES:
        raise InvalidInput(f"unknown table {case!r}; choose from {sorted(TABLE_FILES)}")
    raw = resources.files("secantideals").joinpath("data", TABLE_FILES[case]).read_bytes()
    if verify and hashlib.sha256(raw).hexdigest() != TABLE_SHA256[case]:
        raise InternalError(f"checksum mismatch for embedded table {case}")
    return EquivariantBettiTable.from_dict(json.loads(raw))


def betti_numbers(table: EquivariantBettiTable, dims=None) -> dict[tuple[int, int], int]:
    """``{(j, twist): rank}`` by expanding each orbit over distinct permutations."""
    dims = tuple(table.dims if dims is None else dims)
    if len(dims) != table.n:
        raise InvalidInput(f"need {table.n} dimensions, got {dims}")
    out: dict[tuple[int, int], int] = {}
    for e in table.entries:
        rank = e.copies * sum(
            math.prod(schur_dimension(p, a) for p, a in zip(member, dims)) for member in e.orbit_members()
        )
        if rank:
            out[(e.j, e.twist)] = out.get((e.j, e.twist), 0) + rank
    return dict(sorted(out.items()))


def hilbert_from_resolution(betti: dict[tuple[int, int], int], N: int, d: int) -> int:
    if N < 1:
        raise InvalidInput("N must be positive")
    total = 0
    for (j, k), b in betti.items():
        if d >= k:
            total += (-1) ** j * b * math.comb(d - k + N - 1, N - 1)
    return total


def max_first_part(table: EquivariantBettiTable) -> int:
    return max((p[0] for e in table.entries for p in e.orbit if p), default=0)


def partition_cap_violations(table: EquivariantBettiTable, cap: int | None = None) -> list[tuple[int, int, Partition]]:
    """Entries whose partitions have first part above ``cap`` (default r^(n-1) - r)."""
    if cap is None:
        cap = table.r ** (table.n - 1) - table.r
    return [(e.j, e.twist, p) for e in table.entries for p in e.orbit if p and p[0] > cap]


def codimension(shape, r: int) -> int:
    """Expected codimension of sigma_r of the Segre product of P^{a_j - 1}."""
    shape = tuple(shape)
    n = len(shape)
    return math.prod(shape) - 1 - (r * (sum(shape) - n) + (r - 1))


@dataclass(frozen=True)
class LengthBudget:
    rank_xi: int
    dim_B: int
    basic_codim: int
    budget: int
    ambient_codim: int

    def to_dict(self) -> dict:
        return {
            "rank_xi": self.rank_xi,
            "dim_B": self.dim_B,
            "basic_codim": self.basic_codim,
            "budget": self.budget,
            "ambient_codim": self.ambient_codim,
        }


def resolution_length_budget(shape, r: int) -> LengthBudget:
    """Resolution length bookkeeping for the desingularization over a product of Grassmannians.

    rank_xi = prod a_j - r^n, dim B = r * sum(a_j - r), and L is the codimension
    in the basic case a_j = r. Their combination must equal the ambient codimension.
    """
    shape = tuple(int(a) for a in shape)
    if r < 1 or any(a < r for a in shape):
        raise InvalidInput(f"need 1 <= r <= a_j, got r={r}, shape={shape}")
    n = len(shape)
    rank_xi = math.prod(shape) - r**n
    dim_B = r * (sum(shape) - n * r)
    L = r**n - r * r * n + r * (n - 1)
    budget = rank_xi - dim_B + L
    amb = codimension(shape, r)
    if budget != amb:
        raise InternalError(f"length budget {budget} != codimension {amb} for {shape}, r={r}")
    return LengthBudget(rank_xi, dim_B, L, budget, amb)


def betti_check(case: str) -> dict:
    table = load_table(case)
    computed = betti_numbers(table)
    expected = DISPLAYED_BETTI[case]
    rows = []
    for key in sorted(set(computed) | set(expected)):
        rows.append({"j": key[0], "twist": key[1], "computed": computed.get(key, 0), "expected": expected.get(key, 0)})
    return {
        "case": case,
        "dims": list(table.dims),
        "entries": rows,
        "agree": computed == expected,
        "max_first_part": max_first_part(table),
        "cap": table.r ** (table.n - 1) - table.r,
        "cap_ok": not partition_cap_violations(table),
    }


def case_generators(case: str):
    """Generator set whose ideal the table resolves."""
    from .equations import secant_generators, strassen_polys

    if case == "4factor":
        return secant_generators((2, 2, 2, 2), 2)
    if case == "3factor":
        return strassen_polys()
    raise InvalidInput(f"unknown case {case!r}")


def hilbert_comparison(case: str, d_max: int, primes, threads: int = 1) -> dict:
    """Per-degree comparison of the computed Hilbert function with the table's."""
    from .polyring import hilbert_function

    table = load_table(case)
    betti = betti_numbers(table)
    G = case_generators(case)
    N = math.prod(table.dims)
    expected = [hilbert_from_resolution(betti, N, d) for d in range(d_max + 1)]
    computed = {
        p: [h for _, h in hilbert_function(G.sparse_polys(), d_max, p, shape=G.shape, threads=threads)] for p in primes
    }
    rows = []
    for d in range(d_max + 1):
        values = {str(p): computed[p][d] for p in primes}
        rows.append({"d": d, "expected": expected[d], "computed": values, "agree": all(v == expected[d] for v in values.values())})
    return {"case": case, "N": N, "degrees": rows, "agree": all(r["agree"] for r in rows)}
