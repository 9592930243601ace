#
# For licensing see accompanying LICENSE file.
#
"""Explicit constructions: the diagonally cyclic squares H_{p,r}, the loops L_{p,r}
and their blocked generalisation L^{S,I}_{p,r}, idempotent Latin squares and the
composite block polynomials whose sums vanish in them."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cache

import numpy as np

from heffter_loops.exceptions import InputError
from heffter_loops.loops import LoopEntry, PartialLoop
from heffter_loops.residues import inverse_mod, is_primitive_root, require_odd_prime
from heffter_loops.sumpoly import Sum, SumPolynomial, natural

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimeParams:
    p: int
    r: int

    def __post_init__(self):
        require_odd_prime(self.p)
        if not is_primitive_root(self.r, self.p):
            raise InputError(f"{self.r} is not a primitive root of {self.p}")


def build_hpr(p: int, r: int) -> np.ndarray:
    """H[i, j] = j + (i - j)/r over Z_p."""
    PrimeParams(p, r)
    r_inv = inverse_mod(r, p)
    i, j = np.indices((p, p))
    return (j + (i - j) * r_inv) % p


def symmetry_check(table: np.ndarray) -> bool:
    return bool(np.array_equal(table, table.T))


def _lpr_operation(p: int, r: int) -> Callable[[int, int], int]:
    hpr = build_hpr(p, r)

    def operation(x: int, y: int) -> int:
        if x == -y:
            return 0
        i, j = abs(x), abs(y)
        h = int(hpr[i - 1, j - 1]) + 1
        if x > 0 and y > 0:
            return -h
        if x < 0 and y < 0:
            return i if i == j else -h
        return h

    return operation


@cache
def build_lpr(p: int, r: int) -> PartialLoop:
    """The total loop L_{p,r} over [p]~, built on H_{p,r}."""
    return PartialLoop.from_operation(p, _lpr_operation(p, r))


def partial_sum_formula(p: int, r: int, ell: int) -> int:
    """Closed form of the natural partial sum ((1+2)+...)+ell in L_{p,r}."""
    PrimeParams(p, r)
    if not 1 <= ell <= p:
        raise InputError(f"Partial sums are defined for 1 <= ell <= {p}, got {ell}")
    if ell == p:
        return 0
    value = ((pow(r, 1 - ell, p) - 1) * inverse_mod(r - 1, p) + ell - 1) % p
    return (-1) ** (ell + 1) * (value + 1)


def lpr_associates(p: int, r: int, i: int, j: int, k: int) -> bool:
    loop = build_lpr(p, r)
    return loop.add(loop.add(i, j), k) == loop.add(i, loop.add(j, k))


def validate_idempotent(table: Sequence[Sequence[int]]) -> list[str]:
    """Problems that stop `table` from being an idempotent Latin square over [k]."""
    k = len(table)
    problems = []
    if any(len(row) != k for row in table):
        return [f"table is not a {k}x{k} square"]
    symbols = set(range(1, k + 1))
    for ell, row in enumerate(table, start=1):
        if set(row) != symbols:
            problems.append(f"row {ell} is not a permutation of [{k}]")
        if row[ell - 1] != ell:
            problems.append(f"diagonal cell ({ell},{ell}) holds {row[ell - 1]}")
    for ell in range(k):
        if {row[ell] for row in table} != symbols:
            problems.append(f"column {ell + 1} is not a permutation of [{k}]")
    return problems


@dataclass(frozen=True)
class IdempotentLatinSquare:
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        problems = validate_idempotent(self.table)
        if problems:
            raise InputError(f"Not an idempotent Latin square: {'; '.join(problems)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IdempotentLatinSquare":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def k(self) -> int:
        return len(self.table)

    def __getitem__(self, cell: tuple[int, int]) -> int:
        """I[ℓ1, ℓ2] with blocks numbered from 1."""
        return self.table[cell[0] - 1][cell[1] - 1]


def _search_idempotent(k: int) -> list[list[int]]:
    grid = [[ell + 1 if ell == col else 0 for col in range(k)] for ell in range(k)]
    empties = [(i, j) for i in range(k) for j in range(k) if i != j]

    def fill(index: int) -> bool:
        if index == len(empties):
            return True
        i, j = empties[index]
        for symbol in range(1, k + 1):
            if symbol in grid[i] or any(grid[row][j] == symbol for row in range(k)):
                continue
            grid[i][j] = symbol
            if fill(index + 1):
                return True
            grid[i][j] = 0
        return False

    if not fill(0):
        raise InputError(f"No idempotent Latin square of order {k}")
    return grid


def idempotent_square(k: int) -> IdempotentLatinSquare:
    """The canonical idempotent Latin square of order `k` (any k except 2)."""
    if k < 1 or k == 2:
        raise InputError(f"No idempotent Latin square of order {k}")
    if k % 2:
        half = inverse_mod(2, k) if k > 1 else 0
        rows = [[(i + j) * half % k + 1 for j in range(k)] for i in range(k)]
    else:
        logger.debug(f"Backtracking for an idempotent Latin square of order {k}")
        rows = _search_idempotent(k)
    return IdempotentLatinSquare.from_rows(rows)


def general_entries(
    symbols: Sequence[int], p: int, r: int, square: IdempotentLatinSquare
) -> list[LoopEntry]:
    """Entries of L^{S,I}_{p,r} for S the ordered `symbols`, where s_{ℓ,i} is
    ``symbols[(ℓ-1)p + i - 1]``.

    Inside one block the table is a copy of L_{p,r}; across blocks ℓ1 ≠ ℓ2 the sum
    of ±s_{ℓ1,i1} and ±s_{ℓ2,i2} is the product of the signs times s_{I[ℓ1,ℓ2], L_{p,r}[i1,i2]}.
    """
    k = square.k
    if k == 2:
        raise InputError("Blocked loops need k != 2")
    if len(symbols) != k * p or len(set(symbols)) != len(symbols):
        raise InputError(f"Expected {k * p} distinct symbols, got {list(symbols)}")
    lpr = build_lpr(p, r)

    def element(ell: int, i: int) -> int:
        if i == 0:
            return 0
        s = symbols[(ell - 1) * p + abs(i) - 1]
        return s if i > 0 else -s

    signed = [(ell, sign * i) for ell in range(1, k + 1) for i in range(1, p + 1) for sign in (1, -1)]
    entries = []
    for ell1, a in signed:
        for ell2, b in signed:
            if ell1 == ell2:
                value = element(ell1, lpr.add(a, b))
            else:
                sign = (1 if a > 0 else -1) * (1 if b > 0 else -1)
                value = sign * element(square[ell1, ell2], lpr.add(abs(a), abs(b)))
            entries.append((element(ell1, a), element(ell2, b), value))
    return entries


def build_general(
    p: int, r: int, k: int, square: IdempotentLatinSquare | None = None
) -> PartialLoop:
    """The total loop L^{[kp],I}_{p,r}."""
    square = square or idempotent_square(k)
    if square.k != k:
        raise InputError(f"Idempotent square has order {square.k}, expected {k}")
    n = k * p
    return PartialLoop.from_entries(n, general_entries(range(1, n + 1), p, r, square))


def composite_block_poly(blocks: Sequence[Sequence[int]]) -> SumPolynomial:
    """((ν_{B1} + ν_{B2}) + ...) + ν_{Bk} for symbol-disjoint ordered blocks."""
    if not blocks:
        raise InputError("A composite polynomial needs at least one block")
    seen: set[int] = set()
    for block in blocks:
        overlap = seen & set(block)
        if overlap:
            raise InputError(f"Blocks overlap in symbols {sorted(overlap)}")
        seen |= set(block)
    poly = natural(blocks[0])
    for block in blocks[1:]:
        poly = Sum(poly, natural(block))
    return poly
