#
# For licensing see accompanying LICENSE file.
#
"""Modular arithmetic helpers shared by the symbol families and the constructions."""

from heffter_loops.exceptions import InputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_odd_prime(p: int):
    if p == 2 or not is_prime(p):
        raise InputError(f"Expected an odd prime, got {p}")


def multiplicative_order(r: int, p: int) -> int:
    """Order of `r` in the multiplicative group of Z_p (`p` prime)."""
    if r % p == 0:
        raise InputError(f"{r} is not a unit modulo {p}")
    value, order = r % p, 1
    while value != 1:
        value = (value * r) % p
        order += 1
    return order


def is_primitive_root(r: int, p: int) -> bool:
    return r % p != 0 and multiplicative_order(r, p) == p - 1


def primitive_roots(p: int) -> list[int]:
    """All primitive roots of `p` in [1, p), found by trial order computation."""
    require_odd_prime(p)
    return [r for r in range(1, p) if is_primitive_root(r, p)]


def least_primitive_root(p: int) -> int:
    return primitive_roots(p)[0]


def inverse_mod(a: int, p: int) -> int:
    if a % p == 0:
        raise InputError(f"{a} has no inverse modulo {p}")
    return pow(a, -1, p)
