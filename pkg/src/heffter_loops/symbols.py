#
# For licensing see accompanying LICENSE file.
#
"""Symbols, the signed closure S~ = {±s : s in S} ∪ {0} and signed permutations.

Elements of S~ are plain signed integers: ``0``, ``+i`` and ``-i`` for ``i`` in
``[n]``. Undefined loop values are represented by the `UNDEFINED` singleton, which
absorbs negation and every loop operation it takes part in.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Union

from heffter_loops.exceptions import InputError
from heffter_loops.residues import require_odd_prime


class Undefined:
    """The value of a sum whose Cayley table cell is empty."""

    _instance: Union["Undefined", None] = None

    def __new__(cls) -> "Undefined":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __neg__(self) -> "Undefined":
        return self

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __str__(self) -> str:
        return "."

    def __reduce__(self):
        return (Undefined, ())


UNDEFINED = Undefined()

Element = int | Undefined


def is_defined(e: Element) -> bool:
    return not isinstance(e, Undefined)


def negate(e: Element) -> Element:
    return -e


def canonical_order(n: int) -> list[int]:
    """Table order 0, 1, ..., n, -n, ..., -1."""
    return [0, *range(1, n + 1), *range(-n, 0)]


def element_position(e: int, n: int) -> int:
    """Position of `e` in the canonical order, which coincides with e mod 2n+1."""
    if abs(e) > n:
        raise InputError(f"Element {e} is outside the signed closure of [{n}]")
    return e % (2 * n + 1)


def element_at(position: int, n: int) -> int:
    return position if position <= n else position - (2 * n + 1)


@dataclass(frozen=True)
class SymbolSet:
    """An ordered symbol universe; symbol ``names[i-1]`` has canonical index ``i``."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise InputError("A symbol set needs at least one symbol")
        if "0" in self.names:
            raise InputError("The identifier '0' is reserved for the loop identity")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"Symbol names must be distinct: {self.names}")

    @classmethod
    def of_size(cls, n: int) -> "SymbolSet":
        return cls(tuple(str(i) for i in range(1, n + 1)))

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise InputError(f"Unknown symbol {name!r}") from None

    def name(self, e: int) -> str:
        if e == 0:
            return "0"
        label = self.names[abs(e) - 1]
        return label if e > 0 else f"-{label}"

    def elements(self) -> list[int]:
        return canonical_order(self.size)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class SignedPermutation:
    """A permutation of S~ with π(0) = 0 and π(-x) = -π(x).

    It is stored as the signed images of 1..n.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(abs(v) for v in self.images) != list(range(1, n + 1)):
            raise InputError(
                f"Images {self.images} are not a signed rearrangement of [{n}]"
            )

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[int, int]) -> "SignedPermutation":
        """Build from images of (some) positives; unmapped symbols are fixed."""
        return cls(tuple(mapping.get(i, i) for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, e: Element) -> Element:
        if isinstance(e, Undefined) or e == 0:
            return e
        if abs(e) > self.n:
            raise InputError(f"Element {e} is outside the domain of {self}")
        image = self.images[abs(e) - 1]
        return image if e > 0 else -image

    def inverse(self) -> "SignedPermutation":
        inv = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            inv[abs(image) - 1] = i if image > 0 else -i
        return SignedPermutation(tuple(inv))

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """Return ``self ∘ other``."""
        if other.n != self.n:
            raise InputError("Cannot compose permutations of different degrees")
        return SignedPermutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def positive_on(self, symbols: Iterable[int]) -> bool:
        return all(self(s) > 0 for s in symbols)


def apply_signed_perm(pi: SignedPermutation, e: Element) -> Element:
    return pi(e)


def affine_perm(p: int, a: int, b: int) -> SignedPermutation:
    """The map i -> (a(i-1) + b mod p) + 1 on [p], extended to [p]~."""
    require_odd_prime(p)
    if a % p == 0:
        raise InputError(f"a={a} is not invertible modulo {p}")
    return SignedPermutation(tuple((a * (i - 1) + b) % p + 1 for i in range(1, p + 1)))


def block_affine_perm(p: int, k: int, alpha: Sequence[int]) -> SignedPermutation:
    """Apply an affine map independently inside each of the k consecutive p-blocks.

    ``alpha = (a_1, b_1, ..., a_k, b_k)`` with the pair (a_l, b_l) acting on the
    block of symbols (l-1)p+1, ..., lp.
    """
    require_odd_prime(p)
    if k < 1:
        raise InputError(f"Block count must be positive, got {k}")
    if len(alpha) != 2 * k:
        raise InputError(f"Expected {2 * k} affine coefficients, got {len(alpha)}")
    images = []
    for block in range(k):
        a, b = alpha[2 * block], alpha[2 * block + 1]
        if a % p == 0:
            raise InputError(f"a={a} of block {block + 1} is not invertible modulo {p}")
        images.extend(block * p + (a * (i - 1) + b) % p + 1 for i in range(1, p + 1))
    return SignedPermutation(tuple(images))
