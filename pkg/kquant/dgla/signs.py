"""Koszul signs, shuffles and the décalage sign.

Permutations are 0-based tuples; ``sigma[k]`` is the position in the original list of
the element that ends up at position ``k``.
"""

from __future__ import annotations

from collections.abc import Sequence
from itertools import combinations

from kquant.exceptions import InvalidPermutationError


def check_permutation(sigma: Sequence[int], size: int | None = None) -> tuple[int, ...]:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(len(sigma))):
        msg = f"{sigma} is not a permutation of 0..{len(sigma) - 1}"
        raise InvalidPermutationError(msg)
    if size is not None and len(sigma) != size:
        msg = f"permutation of length {len(sigma)} does not match {size} elements"
        raise InvalidPermutationError(msg)
    return sigma


def permute(items: Sequence, sigma: Sequence[int]) -> list:
    sigma = check_permutation(sigma, len(items))
    return [items[k] for k in sigma]


def compose(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """The permutation of permuting by sigma first and then by tau."""
    return tuple(sigma[k] for k in tau)


def inversions(sigma: Sequence[int]) -> list[tuple[int, int]]:
    return [(sigma[a], sigma[b]) for a, b in combinations(range(len(sigma)), 2) if sigma[a] > sigma[b]]


def permutation_sign(sigma: Sequence[int]) -> int:
    sigma = check_permutation(sigma)
    return -1 if len(inversions(sigma)) % 2 else 1


def koszul_sign_sym(degrees: Sequence[int], sigma: Sequence[int]) -> int:
    """epsilon: (-1)^(ab) for every pair of elements of degrees a, b whose order is swapped."""
    sigma = check_permutation(sigma, len(degrees))
    exponent = sum(degrees[a] * degrees[b] for a, b in inversions(sigma))
    return -1 if exponent % 2 else 1


def koszul_sign_ext(degrees: Sequence[int], sigma: Sequence[int]) -> int:
    """chi: epsilon times the sign of the permutation."""
    return permutation_sign(sigma) * koszul_sign_sym(degrees, sigma)


def decalage_sign(degrees: Sequence[int]) -> int:
    n = len(degrees)
    exponent = sum((n - k) * (degree - 1) for k, degree in enumerate(degrees, start=1))
    return -1 if exponent % 2 else 1


def shuffles(i: int, n: int) -> list[tuple[int, ...]]:
    """All (i, n-i)-shuffles: the first i and the last n-i entries are increasing."""
    if not 0 <= i <= n:
        msg = f"shuffle split {i} outside 0..{n}"
        raise InvalidPermutationError(msg)
    result = []
    for head in combinations(range(n), i):
        tail = tuple(k for k in range(n) if k not in head)
        result.append(head + tail)
    return result
