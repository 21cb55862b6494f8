"""Characteristic polynomials of matroids, computed three independent ways."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import bitset
from .matroid import LoopyMatroidError, Matroid, MatroidError, contract_set

WHITNEY_MAX_ELEMENTS = 20


@dataclass(frozen=True)
class CharPoly:
    """Integer polynomial in λ; ``coefficients[i]`` multiplies ``λ**i``."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> CharPoly:
        return cls(tuple(reversed(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x):
        total = 0
        for c in reversed(self.coefficients):
            total = total * x + c
        return total

    def __add__(self, other: CharPoly) -> CharPoly:
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return CharPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> CharPoly:
        return CharPoly(tuple(-c for c in self.coefficients))

    def __sub__(self, other: CharPoly) -> CharPoly:
        return self + (-other)

    def __mul__(self, other: CharPoly) -> CharPoly:
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return CharPoly(tuple(out))

    def divide_by_lambda_minus_one(self) -> CharPoly:
        """Exact synthetic division; raises if ``λ - 1`` does not divide."""
        if self.is_zero():
            return ZERO
        desc = list(reversed(self.coefficients))
        quotient = []
        carry = 0
        for c in desc[:-1]:
            carry = carry + c
            quotient.append(carry)
        if carry + desc[-1] != 0:
            raise ArithmeticError(f"λ - 1 does not divide {self}")
        return CharPoly.from_descending(quotient)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                var = "λ" if power == 1 else f"λ^{power}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


ZERO = CharPoly(())
ONE = CharPoly((1,))
LAMBDA_MINUS_ONE = CharPoly((-1, 1))


def char_poly_whitney(M: Matroid) -> CharPoly:
    """``Σ_{S ⊆ E} (-1)^{|S|} λ^{rk(E) - rk(S)}`` by direct enumeration."""
    if M.n > WHITNEY_MAX_ELEMENTS:
        raise MatroidError(f"Whitney sum over 2^{M.n} subsets refused (limit {WHITNEY_MAX_ELEMENTS} elements)")
    coeffs = [0] * (M.rk + 1)
    for S in range(1 << M.n):
        coeffs[M.rk - M.rank(S)] += -1 if S.bit_count() & 1 else 1
    return CharPoly(tuple(coeffs))


def char_poly_mobius(M: Matroid) -> CharPoly:
    """``Σ_{F ∈ L} μ(∅, F) λ^{rk(E) - rk(F)}``; zero if ``M`` has a loop."""
    if not M.is_loopless:
        return ZERO
    return interval_char_poly(M, 0, M.full)


def interval_char_poly(M: Matroid, F: int, G: int) -> CharPoly:
    """Characteristic polynomial of ``M[F, G]`` read off the lattice interval."""
    key = ("interval_chi", F, G)
    cached = M._cache.get(key)
    if cached is None:
        top = M.flat_rank(G)
        coeffs = [0] * (top - M.flat_rank(F) + 1)
        for H, value in M.mobius_row(F).items():
            if bitset.is_subset(H, G):
                coeffs[top - M.flat_rank(H)] += value
        cached = CharPoly(tuple(coeffs))
        M._cache[key] = cached
    return cached


def _signature(M: Matroid) -> tuple:
    return (M.n, M.flats)


def char_poly_deletion_contraction(M: Matroid, memo: dict | None = None) -> CharPoly:
    """Recursion on the last element using the loop, coloop and deletion–contraction rules."""
    memo = {} if memo is None else memo
    return _dc(M, memo)


def _dc(M: Matroid, memo: dict) -> CharPoly:
    key = _signature(M)
    if key in memo:
        return memo[key]
    if not M.is_loopless:
        result = ZERO
    elif M.n == 1:
        result = LAMBDA_MINUS_ONE
    else:
        e = M.n - 1
        e_mask = 1 << e
        deleted = M.delete(e_mask)
        if M.coloops() & e_mask:
            result = LAMBDA_MINUS_ONE * _dc(deleted, memo)
        else:
            # a parallel element turns into a loop of M/e, whose polynomial vanishes
            contracted = ZERO if not M.is_flat(e_mask) else _dc(M.contract(e_mask), memo)
            result = _dc(deleted, memo) - contracted
    memo[key] = result
    return result


CHAR_POLY_METHODS: dict[str, Callable[[Matroid], CharPoly]] = {
    "whitney": char_poly_whitney,
    "deletion-contraction": char_poly_deletion_contraction,
    "mobius": char_poly_mobius,
}


def char_poly(M: Matroid, method: str = "whitney") -> CharPoly:
    key = ("chi", method)
    cached = M._cache.get(key)
    if cached is None:
        try:
            fn = CHAR_POLY_METHODS[method]
        except KeyError:
            raise ValueError(f"unknown method {method!r}; choose from {sorted(CHAR_POLY_METHODS)}") from None
        cached = fn(M)
        M._cache[key] = cached
    return cached


def char_poly_all(M: Matroid) -> CharPoly:
    """Run all three methods and insist they agree."""
    polys = {name: char_poly(M, name) for name in CHAR_POLY_METHODS}
    first = polys["whitney"]
    for name, p in polys.items():
        if p != first:
            raise AssertionError(f"characteristic polynomial mismatch: whitney={first}, {name}={p}")
    return first


def reduced_char_poly(M: Matroid, method: str = "whitney") -> CharPoly:
    if not M.is_loopless:
        raise LoopyMatroidError("reduced characteristic polynomial needs a loopless matroid")
    return char_poly(M, method).divide_by_lambda_minus_one()


def mu_vector(M: Matroid, method: str = "whitney") -> tuple[int, ...]:
    """Unsigned coefficients ``μ^0, ..., μ^r`` of the reduced characteristic polynomial."""
    reduced = reduced_char_poly(M, method)
    r = M.r
    return tuple((-1) ** a * reduced.coefficients[r - a] for a in range(r + 1))


def mu(M: Matroid, a: int, method: str = "whitney") -> int:
    if not 0 <= a <= M.r:
        raise ValueError(f"μ^a needs 0 <= a <= {M.r}, got {a}")
    return mu_vector(M, method)[a]


def interval_mu(M: Matroid, F: int, G: int, a: int) -> int:
    """``μ^a(M[F, G])`` straight from the Möbius function on ``[F, G]``."""
    reduced = interval_char_poly(M, F, G).divide_by_lambda_minus_one()
    r = M.flat_rank(G) - M.flat_rank(F) - 1
    if not 0 <= a <= r:
        return 0
    return (-1) ** a * reduced.coefficients[r - a]


def contract_element_char_poly(M: Matroid, e: int, method: str = "whitney") -> CharPoly:
    """``χ_{M/e}`` for any element, loops allowed; used by recursion checks."""
    return char_poly(contract_set(M, 1 << e), method)
