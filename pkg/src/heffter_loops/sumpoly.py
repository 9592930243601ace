#
# For licensing see accompanying LICENSE file.
#
"""Non-associative sum polynomials as full binary trees over distinct symbols."""

import itertools
import logging
from abc import ABC, abstractmethod
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, factorial

from heffter_loops.aliases import PolynomialText
from heffter_loops.constants import DEFAULT_AUT_CAP, DEFAULT_POLY_CAP
from heffter_loops.exceptions import (
    InputError,
    PolynomialSyntaxError,
    SearchTooLargeError,
)
from heffter_loops.loops import PartialLoop, automorphisms
from heffter_loops.schema import CompatibilityReport, Evaluation, SupportConflict
from heffter_loops.symbols import Element, SignedPermutation, is_defined

logger = logging.getLogger(__name__)


class SumPolynomial(ABC):
    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(self.leaves())

    @abstractmethod
    def leaves(self) -> tuple[int, ...]:
        """Leaf labels from left to right."""

    @abstractmethod
    def shape(self) -> str:
        """The bracket structure with every leaf written as ``x``."""

    @abstractmethod
    def relabel(self, mapping: Mapping[int, int]) -> "SumPolynomial":
        pass

    @property
    def degree(self) -> int:
        return len(self.leaves())


@dataclass(frozen=True)
class Leaf(SumPolynomial):
    symbol: int

    def __post_init__(self):
        if self.symbol < 1:
            raise InputError(f"Polynomial variables are positive symbols, got {self.symbol}")

    def leaves(self) -> tuple[int, ...]:
        return (self.symbol,)

    def shape(self) -> str:
        return "x"

    def relabel(self, mapping: Mapping[int, int]) -> "Leaf":
        return Leaf(mapping.get(self.symbol, self.symbol))

    def __str__(self) -> str:
        return str(self.symbol)


@dataclass(frozen=True)
class Sum(SumPolynomial):
    left: SumPolynomial
    right: SumPolynomial
    _leaves: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        leaves = self.left.leaves() + self.right.leaves()
        if len(set(leaves)) != len(leaves):
            raise InputError(f"Each variable may appear only once: {leaves}")
        object.__setattr__(self, "_leaves", leaves)

    def leaves(self) -> tuple[int, ...]:
        return self._leaves

    def shape(self) -> str:
        return f"({self.left.shape()}+{self.right.shape()})"

    def relabel(self, mapping: Mapping[int, int]) -> "Sum":
        return Sum(self.left.relabel(mapping), self.right.relabel(mapping))

    def __str__(self) -> str:
        return f"({self.left}+{self.right})"


@dataclass(frozen=True)
class PolynomialSet:
    polys: tuple[SumPolynomial, ...] = ()

    def __post_init__(self):
        if len(set(self.polys)) != len(self.polys):
            raise InputError("A polynomial set may not contain duplicates")

    @classmethod
    def of(cls, polys: Iterable[SumPolynomial]) -> "PolynomialSet":
        """Build from `polys`, dropping repeats but keeping first-seen order."""
        return cls(tuple(dict.fromkeys(polys)))

    @property
    def support(self) -> frozenset[int]:
        return frozenset().union(*(f.support for f in self.polys))

    def union(self, other: "PolynomialSet") -> "PolynomialSet":
        return PolynomialSet.of((*self.polys, *other.polys))

    def permuted(self, pi: SignedPermutation) -> "PolynomialSet":
        return PolynomialSet.of(permute_poly(f, pi) for f in self.polys)

    def texts(self) -> list[PolynomialText]:
        return [str(f) for f in self.polys]

    def __iter__(self) -> Iterator[SumPolynomial]:
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def __contains__(self, poly: object) -> bool:
        return poly in self.polys


def _check_distinct(symbols: Sequence[int]):
    if not symbols:
        raise InputError("A sum polynomial needs at least one symbol")
    if len(set(symbols)) != len(symbols):
        raise InputError(f"Symbols must be distinct: {list(symbols)}")


def natural(symbols: Sequence[int]) -> SumPolynomial:
    """The left comb (((t1+t2)+t3)+...)+tm."""
    _check_distinct(symbols)
    poly: SumPolynomial = Leaf(symbols[0])
    for symbol in symbols[1:]:
        poly = Sum(poly, Leaf(symbol))
    return poly


class _Parser:
    """Recursive descent for expr := INT | "(" expr "+" expr ")"."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _expect(self, char: str):
        self._skip()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            raise PolynomialSyntaxError(f"Expected {char!r} in {self.text!r}", self.pos)
        self.pos += 1

    def expr(self) -> SumPolynomial:
        self._skip()
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            self.pos += 1
            left = self.expr()
            self._expect("+")
            right = self.expr()
            self._expect(")")
            return Sum(left, right)
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start : self.pos]
        if not digits or int(digits) == 0:
            raise PolynomialSyntaxError(
                f"Expected a positive symbol index in {self.text!r}", start
            )
        return Leaf(int(digits))

    def parse(self) -> SumPolynomial:
        poly = self.expr()
        self._skip()
        if self.pos != len(self.text):
            raise PolynomialSyntaxError(f"Trailing input in {self.text!r}", self.pos)
        return poly


def parse_polynomial(text: str) -> SumPolynomial:
    return _Parser(text).parse()


def count_trees(size: int) -> int:
    """|T|! times the Catalan number C_{|T|-1}."""
    return factorial(size) * comb(2 * size - 2, size - 1) // size


def _trees(symbols: tuple[int, ...]) -> Iterator[SumPolynomial]:
    if len(symbols) == 1:
        yield Leaf(symbols[0])
        return
    for split in range(1, len(symbols)):
        for left in _trees(symbols[:split]):
            for right in _trees(symbols[split:]):
                yield Sum(left, right)


def enumerate_all(symbols: Sequence[int], cap: int = DEFAULT_POLY_CAP) -> list[SumPolynomial]:
    """Every ordering and parenthesisation of `symbols`, ordering-major."""
    _check_distinct(symbols)
    if len(symbols) > cap:
        raise SearchTooLargeError("sum polynomials over a support", len(symbols), cap)
    return [
        tree
        for ordering in itertools.permutations(symbols)
        for tree in _trees(ordering)
    ]


def evaluate(poly: SumPolynomial, loop: PartialLoop) -> Element:
    """Fold the tree bottom-up through the loop; undefined cells absorb."""
    if isinstance(poly, Leaf):
        if poly.symbol > loop.n:
            raise InputError(f"Symbol {poly.symbol} is not in the loop's universe [{loop.n}]")
        return poly.symbol
    return loop.add(evaluate(poly.left, loop), evaluate(poly.right, loop))


def evaluate_all(polys: Iterable[SumPolynomial], loop: PartialLoop) -> dict[PolynomialText, Element]:
    return {str(poly): evaluate(poly, loop) for poly in polys}


def permute_poly(poly: SumPolynomial, pi: SignedPermutation) -> SumPolynomial:
    """Relabel the leaves by π, keeping the parenthesisation."""
    for symbol in sorted(poly.support):
        image = pi(symbol)
        if image <= 0:
            raise InputError(f"π maps support symbol {symbol} to non-positive {image}")
    return poly.relabel({symbol: pi(symbol) for symbol in poly.support})


def _as_int(value: Element) -> int | None:
    return value if is_defined(value) else None


def is_compatible(loop: PartialLoop, polys: PolynomialSet) -> CompatibilityReport:
    """All members defined, and members of equal support evaluate equal."""
    evaluations = [Evaluation(polynomial=str(f), value=_as_int(evaluate(f, loop))) for f in polys]
    undefined = [e.polynomial for e in evaluations if e.value is None]
    by_support: dict[frozenset[int], list[Evaluation]] = defaultdict(list)
    for f, evaluation in zip(polys, evaluations):
        if evaluation.value is not None:
            by_support[f.support].append(evaluation)
    conflicts = [
        SupportConflict(support=sorted(support), evaluations=group)
        for support, group in by_support.items()
        if len({e.value for e in group}) > 1
    ]
    if undefined or conflicts:
        logger.info(
            f"Incompatible: {len(undefined)} undefined members, {len(conflicts)} conflicting supports"
        )
    return CompatibilityReport(
        compatible=not undefined and not conflicts,
        evaluations=evaluations,
        undefined=undefined,
        conflicts=conflicts,
    )


def aut_p(
    loop: PartialLoop, polys: PolynomialSet, cap: int = DEFAULT_AUT_CAP
) -> list[SignedPermutation]:
    """Automorphisms of `loop` sending the support of `polys` into S."""
    support = polys.support
    return [pi for pi in automorphisms(loop, cap) if pi.positive_on(support)]
