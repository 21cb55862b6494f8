"""Psi classes and closed-form degrees in matroid Chow rings.

Divisors ``D_F`` are indexed by proper flats; ``D_E`` is allowed as a formal
generator and is rewritten as ``-ψ_∞`` wherever degrees are taken.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from . import bitset
from .charpoly import interval_mu, mu_vector
from .matroid import LoopyMatroidError, Matroid, MatroidError


class DegreeMismatchWarning(UserWarning):
    """A degree was requested for a class outside the top graded piece."""


def require_loopless(M: Matroid) -> None:
    if not M.is_loopless:
        raise LoopyMatroidError("Chow ring operations need a loopless matroid")


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorCombination:
    """``Σ c_F D_F`` with zero coefficients dropped; ``terms`` sorted by flat bitset."""

    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> DivisorCombination:
        return cls(tuple(sorted((F, c) for F, c in coeffs.items() if c)))

    @classmethod
    def generator(cls, F: int) -> DivisorCombination:
        return cls(((F, 1),))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def coefficient(self, F: int) -> int:
        return self.as_dict().get(F, 0)

    def __add__(self, other: DivisorCombination) -> DivisorCombination:
        out = self.as_dict()
        for F, c in other.terms:
            out[F] = out.get(F, 0) + c
        return DivisorCombination.from_dict(out)

    def __neg__(self) -> DivisorCombination:
        return DivisorCombination(tuple((F, -c) for F, c in self.terms))

    def __sub__(self, other: DivisorCombination) -> DivisorCombination:
        return self + (-other)

    def __rmul__(self, scalar: int) -> DivisorCombination:
        return DivisorCombination.from_dict({F: scalar * c for F, c in self.terms})

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*D{bitset.fmt(F)}" for F, c in self.terms).replace("+ -", "- ")


@dataclass(frozen=True)
class DivisorMonomial:
    """``Π D_F^{d_F}``; factors sorted by flat bitset, exponents positive."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for _, d in self.factors:
            if d < 1:
                raise ValueError("monomial exponents must be positive")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> DivisorMonomial:
        acc: dict[int, int] = {}
        for F, d in pairs:
            acc[F] = acc.get(F, 0) + d
        return cls(tuple(sorted((F, d) for F, d in acc.items() if d)))

    @classmethod
    def of(cls, *flats: int) -> DivisorMonomial:
        return cls.from_pairs((F, 1) for F in flats)

    @property
    def degree(self) -> int:
        return sum(d for _, d in self.factors)

    def exponent(self, F: int) -> int:
        return dict(self.factors).get(F, 0)

    def __mul__(self, other: DivisorMonomial) -> DivisorMonomial:
        return DivisorMonomial.from_pairs(self.factors + other.factors)

    def text(self, M: Matroid | None = None) -> str:
        if not self.factors:
            return "1"
        parts = []
        for F, d in sorted(self.factors, key=lambda fd: (fd[0].bit_count(), fd[0])):
            name = "E" if M is not None and F == M.full else ",".join(map(str, bitset.elements(F)))
            parts.append(f"D{{{name}}}" + (f"^{d}" if d > 1 else ""))
        return " * ".join(parts)


@dataclass(frozen=True)
class FlagPsiTerm:
    """``coefficient · D_F1⋯D_Fk · Π (ψ^+_{F_i})^{a_i^+} (ψ^-_{F_{i+1}})^{a_{i+1}^-}``.

    ``flag`` holds only ``F_1 ⊊ ... ⊊ F_k``; ``F_0 = ∅`` and ``F_{k+1} = E`` are
    implicit.  ``plus[i]`` is ``a_i^+`` for ``i = 0..k`` and ``minus[i]`` is
    ``a_{i+1}^-``.
    """

    flag: tuple[int, ...]
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    coefficient: int = 1

    def __post_init__(self):
        k = len(self.flag)
        if len(self.plus) != k + 1 or len(self.minus) != k + 1:
            raise ValueError("a flag of length k needs k+1 plus and k+1 minus exponents")
        if any(a < 0 for a in self.plus + self.minus):
            raise ValueError("psi exponents must be nonnegative")

    @property
    def psi_degree(self) -> int:
        return sum(self.plus) + sum(self.minus)


@dataclass(frozen=True)
class PsiExpansion:
    terms: tuple[FlagPsiTerm, ...] = ()

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


# ---------------------------------------------------------------------------
# psi classes
# ---------------------------------------------------------------------------

def _check_element(M: Matroid, e: int | None) -> int:
    if e is None:
        return 0
    if not 0 <= e < M.n:
        raise MatroidError(f"element {e} is not in the ground set")
    return e


def _check_flat(M: Matroid, F: int) -> None:
    if not M.is_flat(F):
        raise MatroidError(f"{bitset.fmt(F)} is not a flat")


def psi_minus(M: Matroid, F: int, e: int | None = None) -> DivisorCombination:
    """``ψ_F^- = Σ_{e∈G} D_G - Σ_{G⊇F} D_G`` over proper flats ``G``."""
    require_loopless(M)
    _check_flat(M, F)
    e = _check_element(M, e)
    coeffs: dict[int, int] = {}
    for G in M.proper_flats:
        c = (G >> e & 1) - bitset.is_subset(F, G)
        if c:
            coeffs[G] = c
    return DivisorCombination.from_dict(coeffs)


def psi_plus(M: Matroid, F: int, e: int | None = None) -> DivisorCombination:
    """``ψ_F^+ = Σ_{e∉G} D_G - Σ_{G⊆F} D_G`` over proper flats ``G``."""
    require_loopless(M)
    _check_flat(M, F)
    e = _check_element(M, e)
    coeffs: dict[int, int] = {}
    for G in M.proper_flats:
        c = (not G >> e & 1) - bitset.is_subset(G, F)
        if c:
            coeffs[G] = c
    return DivisorCombination.from_dict(coeffs)


def psi_zero(M: Matroid, e: int | None = None) -> DivisorCombination:
    return psi_plus(M, 0, e)


def psi_infinity(M: Matroid, e: int | None = None) -> DivisorCombination:
    return psi_minus(M, M.full, e)


def j_generator(M: Matroid, e: int, f: int) -> DivisorCombination:
    """``Σ_{e∈G} D_G - Σ_{f∈G} D_G``, a linear generator of the ideal ``J``."""
    return DivisorCombination.from_dict(
        {G: (G >> e & 1) - (G >> f & 1) for G in M.proper_flats}
    )


# ---------------------------------------------------------------------------
# degrees
# ---------------------------------------------------------------------------

def deg_psi_powers(M: Matroid, a: int, b: int) -> int:
    """``deg(ψ_0^a ψ_∞^b)``: ``μ^a(M)`` when ``a + b = r``, else zero."""
    require_loopless(M)
    if a < 0 or b < 0:
        raise ValueError("psi exponents must be nonnegative")
    if a + b != M.r:
        return 0
    return mu_vector(M)[a]


def _validate_flag(M: Matroid, flag: Sequence[int]) -> None:
    prev = 0
    for F in flag:
        if not M.is_flat(F) or F in (0, M.full):
            raise MatroidError(f"{bitset.fmt(F)} is not a proper flat")
        if F == prev or not bitset.is_subset(prev, F):
            raise MatroidError("flag must be strictly increasing")
        prev = F


def deg_flag_mixed(M: Matroid, term: FlagPsiTerm) -> int:
    """Degree of a flag times psi classes, factored over the interval minors."""
    require_loopless(M)
    _validate_flag(M, term.flag)
    if term.psi_degree != M.r - len(term.flag):
        return 0
    chain = (0,) + term.flag + (M.full,)
    value = term.coefficient
    for i in range(len(chain) - 1):
        value *= deg_psi_powers(M.interval(chain[i], chain[i + 1]), term.plus[i], term.minus[i])
        if value == 0:
            return 0
    return value


def _split_monomial(M: Matroid, m: DivisorMonomial) -> tuple[list[tuple[int, int]], int]:
    """Proper-flat factors sorted along the would-be flag, and the ``D_E`` exponent."""
    d_E = 0
    proper = []
    for F, d in m.factors:
        if F == M.full:
            d_E = d
        elif M.is_flat(F) and F != 0:
            proper.append((F, d))
        else:
            raise MatroidError(f"{bitset.fmt(F)} is not a proper flat or E")
    proper.sort(key=lambda fd: (M.flat_rank(fd[0]), fd[0]))
    return proper, d_E


def expand_monomial(M: Matroid, m: DivisorMonomial) -> PsiExpansion:
    """Rewrite ``Π D_{F_i}^{d_i} · D_E^{d_E}`` as a flag times psi monomials.

    Uses ``D_F^d = D_F (-ψ_F^- - ψ_F^+)^{d-1}`` and ``D_E = -ψ_∞``.  Returns the
    empty expansion when two of the flats are incomparable.
    """
    require_loopless(M)
    proper, d_E = _split_monomial(M, m)
    flag = tuple(F for F, _ in proper)
    if not M.is_chain(flag):
        return PsiExpansion()
    sign = (-1) ** (sum(d - 1 for _, d in proper) + d_E)
    terms = []
    for splits in itertools.product(*(range(d) for _, d in proper)):
        # splits[i] = a_{i+1}^+; the rest of d_{i+1} - 1 goes to a_{i+1}^-
        coefficient = sign
        for (_, d), a_plus in zip(proper, splits):
            coefficient *= comb(d - 1, a_plus)
        plus = (0,) + tuple(splits)
        minus = tuple(d - 1 - a for (_, d), a in zip(proper, splits)) + (d_E,)
        terms.append(FlagPsiTerm(flag, plus, minus, coefficient))
    return PsiExpansion(tuple(terms))


def deg_expanded(M: Matroid, m: DivisorMonomial) -> int:
    """Degree via :func:`expand_monomial` and :func:`deg_flag_mixed`."""
    if m.degree != M.r:
        return 0
    return sum(deg_flag_mixed(M, t) for t in expand_monomial(M, m))


def deg_monomial(M: Matroid, m: DivisorMonomial) -> int:
    """Closed-form degree of ``D_{F_1}^{d_1} ⋯ D_{F_k}^{d_k} D_E^{d_E}``.

    Off the top degree this returns 0 and emits :class:`DegreeMismatchWarning`.
    """
    require_loopless(M)
    proper, d_E = _split_monomial(M, m)
    if m.degree != M.r:
        warnings.warn(
            f"monomial has degree {m.degree} but the top degree is {M.r}; returning 0",
            DegreeMismatchWarning, stacklevel=2,
        )
        return 0
    flats = [F for F, _ in proper]
    if not M.is_chain(flats):
        return 0
    r, k = M.r, len(proper)
    value = (-1) ** (r - k)
    above = M.full
    tail = d_E
    for F, d in reversed(proper):
        a_plus = r - M.flat_rank(F) - tail
        if not 0 <= a_plus <= d - 1:
            return 0
        value *= comb(d - 1, a_plus) * interval_mu(M, F, above, a_plus)
        if value == 0:
            return 0
        tail += d
        above = F
    return value


def deg_psi_minus_product(M: Matroid, flats: Sequence[int]) -> int:
    """``deg(ψ^-_{F_1} ⋯ ψ^-_{F_r})`` by the union-rank criterion."""
    require_loopless(M)
    if len(flats) != M.r:
        raise ValueError(f"need exactly r = {M.r} flats, got {len(flats)}")
    for F in flats:
        if F == 0 or not M.is_flat(F):
            raise MatroidError(f"{bitset.fmt(F)} is not a nonempty flat")
    for size in range(1, len(flats) + 1):
        for subset in itertools.combinations(flats, size):
            union = 0
            for F in subset:
                union |= F
            if M.rank(union) <= size:
                return 0
    return 1


# ---------------------------------------------------------------------------
# pullback along restriction
# ---------------------------------------------------------------------------

def rho(M: Matroid, S: int, c: DivisorCombination) -> DivisorCombination:
    """Image of ``c ∈ A^1(M|_S)`` under ``ρ_S : A^*(M|_S) → A^*(M)``.

    ``c`` is written in the element numbering of ``M.restrict(S)``.
    ``D_G ↦ Σ D_{G'}`` over proper flats ``G'`` of ``M`` with ``G ⊆ G' ⊆ G ∪ S^c``.
    """
    if S == 0:
        raise MatroidError("ρ_S needs a nonempty S")
    if not bitset.is_subset(S, M.full):
        raise MatroidError("S must be a subset of the ground set")
    outside = M.full & ~S
    out: dict[int, int] = {}
    for G_small, coef in c.terms:
        G = bitset.expand(G_small, S)
        for H in M.proper_flats:
            if bitset.is_subset(G, H) and bitset.is_subset(H, G | outside):
                out[H] = out.get(H, 0) + coef
    return DivisorCombination.from_dict(out)
