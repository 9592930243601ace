#
# For licensing see accompanying LICENSE file.
#
import itertools

import pytest

from heffter_loops.exceptions import InputError
from heffter_loops.symbols import (
    UNDEFINED,
    SignedPermutation,
    SymbolSet,
    affine_perm,
    apply_signed_perm,
    block_affine_perm,
    canonical_order,
    element_at,
    element_position,
    negate,
)


def test_canonical_order():
    assert canonical_order(3) == [0, 1, 2, 3, -3, -2, -1]


@pytest.mark.parametrize("n", [1, 4, 9])
def test_element_position_matches_canonical_order(n: int):
    for position, e in enumerate(canonical_order(n)):
        assert element_position(e, n) == position
        assert element_at(position, n) == e


def test_element_position_out_of_range():
    with pytest.raises(InputError):
        element_position(4, 3)


@pytest.mark.parametrize("e, expected", [(3, -3), (0, 0), (-7, 7)])
def test_negate(e: int, expected: int):
    assert negate(e) == expected
    assert negate(negate(e)) == e


def test_negate_undefined():
    assert negate(UNDEFINED) is UNDEFINED


def test_symbol_set():
    symbols = SymbolSet(("a", "b", "c"))
    assert symbols.index("b") == 2
    assert symbols.name(-3) == "-c"
    assert symbols.name(0) == "0"
    assert symbols.elements() == canonical_order(3)
    with pytest.raises(InputError):
        SymbolSet(("a", "0"))
    with pytest.raises(InputError):
        SymbolSet(("a", "a"))


def test_signed_permutation_is_sign_respecting():
    pi = SignedPermutation((2, -1, 3))
    for x in canonical_order(3):
        assert pi(-x) == -pi(x)
    assert pi(0) == 0
    assert apply_signed_perm(pi, -1) == -2
    assert pi(UNDEFINED) is UNDEFINED


def test_signed_permutation_from_mapping():
    pi = SignedPermutation.from_mapping(4, {1: 4, 4: 1})
    assert pi(-1) == -4
    assert pi(2) == 2


def test_signed_permutation_inverse_and_compose():
    pi = SignedPermutation((2, -1, 3))
    assert pi.inverse().images == (-2, 1, 3)
    assert pi.compose(pi.inverse()).is_identity()
    assert pi.inverse().compose(pi).is_identity()


@pytest.mark.parametrize("images", [(1, 1), (1, 3), (0, 1)])
def test_signed_permutation_rejects_non_bijections(images: tuple[int, ...]):
    with pytest.raises(InputError):
        SignedPermutation(images)


def test_affine_perm_translation():
    # leaves of the sum (((((4+5)+6)+7)+1)+2)+3
    assert affine_perm(7, 1, 3).images == (4, 5, 6, 7, 1, 2, 3)


def test_affine_perm_identity():
    assert affine_perm(7, 1, 0).is_identity()


def test_affine_perm_scaling():
    pi = affine_perm(7, 2, 4)
    assert pi.images == (5, 7, 2, 4, 6, 1, 3)
    assert pi(6) == 1


def test_affine_perm_rejects_zero_slope():
    with pytest.raises(InputError):
        affine_perm(7, 0, 3)


def test_affine_perm_requires_odd_prime():
    with pytest.raises(InputError):
        affine_perm(9, 2, 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_affine_perms_compose_to_affine_perms(p: int):
    for a, b, c, d in itertools.product(range(1, p), range(p), range(1, p), range(p)):
        composite = affine_perm(p, a, b).compose(affine_perm(p, c, d))
        assert composite == affine_perm(p, a * c % p, (a * d + b) % p)


def test_block_affine_perm_identity():
    assert block_affine_perm(3, 3, (1, 0, 1, 0, 1, 0)).is_identity()


def test_block_affine_perm_acts_per_block():
    pi = block_affine_perm(3, 3, (1, 0, 2, 2, 2, 1))
    assert [pi(s) for s in (1, 2, 3)] == [1, 2, 3]
    assert [pi(s) for s in (4, 5, 6)] == [6, 5, 4]
    assert [pi(s) for s in (7, 8, 9)] == [8, 7, 9]


@pytest.mark.parametrize("p, k", [(3, 4), (5, 3)])
def test_block_affine_perm_preserves_blocks(p: int, k: int):
    alpha = [v for ell in range(k) for v in (ell % (p - 1) + 1, ell)]
    pi = block_affine_perm(p, k, alpha)
    for ell in range(k):
        block = set(range(ell * p + 1, (ell + 1) * p + 1))
        assert {pi(s) for s in block} == block


def test_block_affine_perm_errors():
    with pytest.raises(InputError):
        block_affine_perm(3, 2, (1, 0, 0, 1))
    with pytest.raises(InputError):
        block_affine_perm(3, 2, (1, 0))
