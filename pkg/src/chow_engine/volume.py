"""Volume polynomials of matroids and volumes of generalized permutahedra."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Mapping

from . import bitset
from .matroid import Matroid, MatroidError
from .psi import DivisorCombination, DivisorMonomial, deg_monomial, psi_minus, require_loopless

SUBMODULAR_MAX_N = 12
POSTNIKOV_MAX_N = 8
DEFAULT_TERM_CAP = 2_000_000


class NotSubmodularWarning(UserWarning):
    """The support vector is not submodular, so no polytope sits behind the number."""


def _subsets(n: int):
    return range(1 << n)


def is_submodular(n: int, x: Mapping[int, int], method: str = "pairs") -> tuple[bool, tuple[int, int] | None]:
    """Check ``x_A + x_B >= x_{A∩B} + x_{A∪B}`` with ``x_∅ = x_[n] = 0``.

    ``method="pairs"`` tries every pair of subsets; ``method="local"`` only the
    squares ``(S+i, S+j)``, which is equivalent and much cheaper.
    Returns ``(True, None)`` or ``(False, (A, B))``.
    """
    if n > SUBMODULAR_MAX_N:
        raise ValueError(f"submodularity check refused for n = {n} > {SUBMODULAR_MAX_N}")
    full = (1 << n) - 1

    def val(S: int):
        return 0 if S in (0, full) else x.get(S, 0)

    if method == "pairs":
        for A in _subsets(n):
            for B in range(A + 1, 1 << n):
                if val(A) + val(B) < val(A & B) + val(A | B):
                    return False, (A, B)
        return True, None
    if method == "local":
        for S in _subsets(n):
            outside = [i for i in range(n) if not S >> i & 1]
            for i, j in itertools.combinations(outside, 2):
                A, B = S | 1 << i, S | 1 << j
                if val(A) + val(B) < val(S) + val(A | B):
                    return False, (A, B)
        return True, None
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class VolumeTerm:
    flag: tuple[int, ...]
    exps: tuple[int, ...]
    coef: int


@dataclass(frozen=True)
class VolumePolynomial:
    """``Σ coef · Π x_{F_i}^{d_i}``, to be divided by ``denominator_factorial!``.

    ``denominator_factorial`` is ``r`` for the Boolean matroid (the polytope
    normalization) and 0 otherwise, in which case the raw degree is reported.
    """

    rank: int
    terms: tuple[VolumeTerm, ...]
    denominator_factorial: int

    def __call__(self, x: Mapping[int, int]) -> Fraction:
        total = 0
        for t in self.terms:
            value = t.coef
            for F, d in zip(t.flag, t.exps):
                value *= x.get(F, 0) ** d
                if not value:
                    break
            total += value
        return Fraction(total, factorial(self.denominator_factorial))

    def to_json(self) -> list[dict]:
        return [
            {
                "flag": [bitset.elements(F) for F in t.flag],
                "exps": list(t.exps),
                "coef": str(t.coef),
                "denominator_factorial": self.denominator_factorial,
            }
            for t in self.terms
        ]


def _is_boolean(M: Matroid) -> bool:
    return len(M.flats) == 1 << M.n


def _compositions(total: int, parts: int):
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def _multinomial(parts) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def volume_polynomial(M: Matroid, cap: int = DEFAULT_TERM_CAP) -> VolumePolynomial:
    """Expand ``deg((Σ x_F D_F)^r)`` over flags and compositions of ``r``."""
    require_loopless(M)
    cached = M._cache.get("volume_polynomial")
    if cached is not None:
        return cached
    r = M.r
    terms = []
    seen = 0
    for flag in M.flags(max_length=r):
        for exps in _compositions(r, len(flag)):
            seen += 1
            if seen > cap:
                raise RuntimeError(f"volume polynomial has more than {cap} flag compositions")
            deg = deg_monomial(M, DivisorMonomial.from_pairs(zip(flag, exps)))
            if deg:
                terms.append(VolumeTerm(flag, exps, _multinomial(exps) * deg))
    poly = VolumePolynomial(r, tuple(terms), r if _is_boolean(M) else 0)
    M._cache["volume_polynomial"] = poly
    return poly


def eval_volume(M: Matroid, x: Mapping[int, int | Fraction]) -> Fraction:
    """Volume at the support vector ``x`` (keys are proper flats).

    Rational entries are handled by scaling to integers and using homogeneity.
    """
    for F in x:
        if F in (0, M.full):
            continue
        if not M.is_flat(F):
            raise MatroidError(f"{bitset.fmt(F)} is not a flat")
    if _is_boolean(M) and M.n <= SUBMODULAR_MAX_N:
        ok, witness = is_submodular(M.n, x, method="local")
        if not ok:
            A, B = witness
            warnings.warn(
                f"x is not submodular at ({bitset.fmt(A)}, {bitset.fmt(B)}); "
                "the value is algebraic only", NotSubmodularWarning, stacklevel=2,
            )
    values = {F: Fraction(v) for F, v in x.items() if F not in (0, M.full)}
    scale = lcm(*(v.denominator for v in values.values())) if values else 1
    integral = {F: int(v * scale) for F, v in values.items()}
    return volume_polynomial(M)(integral) / Fraction(scale) ** M.r


def _check_weights(n: int, y: Mapping[int, int | Fraction]) -> None:
    full = (1 << n) - 1
    for G, v in y.items():
        if G == 0 or not bitset.is_subset(G, full):
            raise ValueError(f"weight key {bitset.fmt(G)} is not a nonempty subset of [{n}]")
        if v < 0:
            raise ValueError(f"negative weight {v} on {bitset.fmt(G)}")


def minkowski_to_support(n: int, y: Mapping[int, int | Fraction]) -> dict[int, int | Fraction]:
    """``x_F = -z_F`` if ``0 ∉ F`` else ``z_[n] - z_F``, where ``z_F = Σ_{G⊆F} y_G``."""
    _check_weights(n, y)
    full = (1 << n) - 1

    def z(F: int):
        return sum((v for G, v in y.items() if bitset.is_subset(G, F)), 0)

    z_full = z(full)
    x = {}
    for F in range(1, full):
        value = z_full - z(F) if F & 1 else -z(F)
        if value:
            x[F] = value
    if n <= SUBMODULAR_MAX_N:
        assert is_submodular(n, x, method="local")[0], "change of variables produced a non-submodular x"
    return x


def support_divisor(M: Matroid, x: Mapping[int, int]) -> DivisorCombination:
    return DivisorCombination.from_dict({F: v for F, v in x.items() if F not in (0, M.full)})


def weights_divisor(M: Matroid, y: Mapping[int, int]) -> DivisorCombination:
    """``Σ y_G ψ_G^-`` with the least element as the psi representative."""
    total = DivisorCombination()
    for G, v in y.items():
        total = total + v * psi_minus(M, G, 0)
    return total


def postnikov_volume(n: int, y: Mapping[int, int | Fraction]) -> Fraction:
    """Volume of ``Σ y_G Δ_G`` by counting dragon-marriage tuples.

    Sums ``y_{G_1}⋯y_{G_{n-1}}`` over ordered tuples of support sets in which
    every subcollection of ``k`` members covers more than ``k`` elements,
    then divides by ``(n-1)!``.  Tuples are grouped by multiset.
    """
    if n > POSTNIKOV_MAX_N:
        raise ValueError(f"Postnikov enumeration refused for n = {n} > {POSTNIKOV_MAX_N}")
    if n < 1:
        raise ValueError("n must be positive")
    _check_weights(n, y)
    support = sorted(G for G, v in y.items() if v)
    slots = n - 1
    total = Fraction(0)
    for multiset in itertools.combinations_with_replacement(range(len(support)), slots):
        counts: dict[int, int] = {}
        for i in multiset:
            counts[i] = counts.get(i, 0) + 1
        if not _valid(support, counts):
            continue
        weight = Fraction(_multinomial(counts.values()))
        for i, c in counts.items():
            weight *= Fraction(y[support[i]]) ** c
        total += weight
    return total / factorial(slots)


def _valid(support: list[int], counts: dict[int, int]) -> bool:
    keys = list(counts)
    for size in range(1, len(keys) + 1):
        for chosen in itertools.combinations(keys, size):
            union = 0
            for i in chosen:
                union |= support[i]
            if union.bit_count() <= sum(counts[i] for i in chosen):
                return False
    return True
