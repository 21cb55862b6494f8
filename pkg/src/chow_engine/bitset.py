"""Subsets of a ground set ``{0, ..., n-1}`` encoded as Python ints."""

from __future__ import annotations

from typing import Iterable, Iterator

MAX_ELEMENTS = 64


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 0:
            raise ValueError(f"negative element index {e}")
        mask |= 1 << e
    return mask


def elements(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def size(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    """Index of the smallest element; ``mask`` must be nonzero."""
    if not mask:
        raise ValueError("empty set has no lowest element")
    return (mask & -mask).bit_length() - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def compress(mask: int, support: int) -> int:
    """Re-index ``mask`` (a subset of ``support``) to positions within ``support``."""
    out = 0
    for pos, e in enumerate(iter_bits(support)):
        if mask >> e & 1:
            out |= 1 << pos
    return out


def expand(mask: int, support: int) -> int:
    """Inverse of :func:`compress`."""
    out = 0
    for pos, e in enumerate(iter_bits(support)):
        if mask >> pos & 1:
            out |= 1 << e
    return out


def fmt(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"
