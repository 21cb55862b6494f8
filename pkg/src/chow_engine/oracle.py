"""Brute-force model of ``A^*(M)`` by exact linear algebra modulo ``I + J``.

A polynomial in the divisors is a dict ``{monomial: coefficient}`` where a
monomial is a tuple of ``(flat, exponent)`` pairs sorted along its flag.  The
ideal ``I`` is monomial, so each graded piece is coordinatised by the *chain*
monomials (supports that form a flag) and only ``J``-multiples need
elimination.  Nothing here calls into :mod:`chow_engine.psi`'s degree code.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from . import bitset
from .matroid import Matroid, MatroidError
from .psi import (DivisorCombination, DivisorMonomial, deg_monomial,
                  require_loopless)

DEFAULT_MONOMIAL_CAP = 200_000

Monomial = tuple[tuple[int, int], ...]
Polynomial = dict[Monomial, int]


class GuardExceeded(RuntimeError):
    """A desk-scale resource guard refused the computation."""

    def __init__(self, message: str, size: int, cap: int):
        super().__init__(message)
        self.size = size
        self.cap = cap


class IntegralityError(ArithmeticError):
    """A coordinate that must be an integer came out fractional."""


# ---------------------------------------------------------------------------
# polynomial helpers
# ---------------------------------------------------------------------------

def _order(M: Matroid, F: int) -> tuple[int, int]:
    return (M.flat_rank(F), F)


def canonical(M: Matroid, pairs: Iterable[tuple[int, int]]) -> Monomial | None:
    """Merge exponents and sort along the flag; ``None`` if the support is not a chain."""
    acc: dict[int, int] = {}
    for F, d in pairs:
        acc[F] = acc.get(F, 0) + d
    flats = sorted(acc, key=lambda F: _order(M, F))
    for a, b in zip(flats, flats[1:]):
        if not bitset.is_subset(a, b):
            return None
    return tuple((F, acc[F]) for F in flats)


def poly_add(target: Polynomial, other: Mapping[Monomial, int], scale: int = 1) -> None:
    for m, c in other.items():
        v = target.get(m, 0) + scale * c
        if v:
            target[m] = v
        else:
            target.pop(m, None)


def poly_mul(M: Matroid, p: Mapping[Monomial, int], q: Mapping[Monomial, int]) -> Polynomial:
    """Product modulo ``I`` (non-chain monomials are dropped)."""
    out: Polynomial = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = canonical(M, m1 + m2)
            if m is not None:
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return out


def linear_form(M: Matroid, c: DivisorCombination) -> Polynomial:
    """A degree-one class; a ``D_E`` term is replaced by ``-Σ_{0∈F} D_F``."""
    out: Polynomial = {}
    for F, coef in c.terms:
        if F == M.full:
            for G in M.proper_flats:
                if G & 1:
                    poly_add(out, {((G, 1),): -coef})
        else:
            _require_proper(M, F)
            poly_add(out, {((F, 1),): coef})
    return out


def _require_proper(M: Matroid, F: int) -> None:
    if F in (0, M.full) or not M.is_flat(F):
        raise MatroidError(f"{bitset.fmt(F)} is not a proper flat")


def monomial_poly(M: Matroid, m: DivisorMonomial) -> Polynomial:
    """``m`` as a polynomial in proper-flat divisors, reduced modulo ``I``."""
    result: Polynomial = {(): 1}
    proper = []
    for F, d in m.factors:
        if F == M.full:
            top = linear_form(M, DivisorCombination.generator(F))
            for _ in range(d):
                result = poly_mul(M, result, top)
        else:
            _require_proper(M, F)
            proper.append((F, d))
    base = canonical(M, proper)
    if base is None:
        return {}
    return poly_mul(M, result, {base: 1})


def power(M: Matroid, p: Polynomial, k: int) -> Polynomial:
    out: Polynomial = {(): 1}
    for _ in range(k):
        out = poly_mul(M, out, p)
    return out


def product(M: Matroid, factors: Sequence[DivisorCombination]) -> Polynomial:
    out: Polynomial = {(): 1}
    for c in factors:
        out = poly_mul(M, out, linear_form(M, c))
    return out


# ---------------------------------------------------------------------------
# chain monomials
# ---------------------------------------------------------------------------

def _chains_by_length(M: Matroid) -> list[int]:
    """``counts[j]`` = number of chains of ``j`` proper flats."""
    ending = {F: 1 for F in M.proper_flats}
    counts = [1, len(ending)]
    for _ in range(2, M.r + 1):
        nxt = {F: 0 for F in M.proper_flats}
        for F, c in ending.items():
            if c:
                for G in M.above(F):
                    nxt[G] += c
        ending = nxt
        counts.append(sum(ending.values()))
    return counts


def count_chain_monomials(M: Matroid, k: int) -> int:
    if k == 0:
        return 1
    counts = _chains_by_length(M)
    return sum(counts[j] * comb(k - 1, j - 1) for j in range(1, min(k, len(counts) - 1) + 1))


def _compositions(total: int, parts: int):
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def chain_monomials(M: Matroid, k: int) -> list[Monomial]:
    if k == 0:
        return [()]
    out = []
    for flag in M.flags(max_length=k):
        for exps in _compositions(k, len(flag)):
            out.append(tuple(zip(flag, exps)))
    out.sort(key=lambda m: [(_order(M, F), d) for F, d in m])
    return out


def reference_flag(M: Matroid) -> tuple[int, ...]:
    """The complete flag built greedily from the first cover in canonical order."""
    chain = []
    F = M.bottom
    while True:
        nxt = [G for G in M.covers[F] if G != M.full]
        if not nxt:
            break
        F = nxt[0]
        chain.append(F)
    return tuple(chain)


# ---------------------------------------------------------------------------
# graded pieces
# ---------------------------------------------------------------------------

@dataclass
class GradedPiece:
    """The degree-``k`` slice of ``Z[X_F] / (I + J)`` in row-echelon form.

    Columns are the chain monomials.  Each stored relation row is keyed by its
    lowest column (its pivot) and normalised there to 1, so reducing a vector
    against the rows leaves a combination of free columns only.
    """

    degree: int
    monomials: list[Monomial]
    index: dict[Monomial, int]
    pivots: dict[int, dict[int, Fraction]] = field(default_factory=dict)
    relation_count: int = 0

    @property
    def free_columns(self) -> list[int]:
        return [c for c in range(len(self.monomials)) if c not in self.pivots]

    @property
    def rank(self) -> int:
        """Rank of the quotient ``A^k``."""
        return len(self.monomials) - len(self.pivots)

    def vector(self, p: Mapping[Monomial, int]) -> dict[int, Fraction]:
        vec: dict[int, Fraction] = {}
        for m, c in p.items():
            if c:
                try:
                    col = self.index[m]
                except KeyError:
                    raise ValueError(f"monomial {m} does not live in degree {self.degree}") from None
                vec[col] = vec.get(col, 0) + Fraction(c)
        return {k: v for k, v in vec.items() if v}

    def reduce(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        vec = dict(vec)
        heap = list(vec)
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)
            coef = vec.get(col)
            if not coef or col not in self.pivots:
                continue
            for c2, v in self.pivots[col].items():
                nv = vec.get(c2, 0) - coef * v
                if nv:
                    if c2 not in vec:
                        heapq.heappush(heap, c2)
                    vec[c2] = nv
                else:
                    vec.pop(c2, None)
        return vec

    def add_relation(self, vec: Mapping[int, Fraction]) -> None:
        self.relation_count += 1
        row = self.reduce(vec)
        if not row:
            return
        pivot = min(row)
        scale = row[pivot]
        self.pivots[pivot] = {c: v / scale for c, v in row.items()}

    def normal_form(self, p: Mapping[Monomial, int]) -> dict[int, Fraction]:
        return self.reduce(self.vector(p))

    def is_zero(self, p: Mapping[Monomial, int]) -> bool:
        return not self.normal_form(p)


def build_graded(M: Matroid, k: int, cap: int = DEFAULT_MONOMIAL_CAP) -> GradedPiece:
    """Degree-``k`` piece of the Chow ring (cached on ``M``).

    Raises :class:`GuardExceeded` if the chain-monomial count exceeds ``cap``.
    """
    require_loopless(M)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    cached = M._cache.get(("graded", k))
    if cached is not None:
        return cached
    size = count_chain_monomials(M, k)
    if size > cap:
        raise GuardExceeded(
            f"degree-{k} piece has {size} chain monomials (cap {cap})", size, cap
        )
    monomials = chain_monomials(M, k)
    if k == M.r:
        # the reference flag goes last so it survives elimination as the free column
        ref = tuple((F, 1) for F in reference_flag(M))
        monomials.remove(ref)
        monomials.append(ref)
    piece = GradedPiece(k, monomials, {m: i for i, m in enumerate(monomials)})
    if k >= 1:
        e0 = 0
        forms = [linear_form(M, _j_form(M, e0, f)) for f in range(1, M.n)]
        for base in chain_monomials(M, k - 1):
            for form in forms:
                rel = poly_mul(M, {base: 1}, form)
                if rel:
                    piece.add_relation(piece.vector(rel))
    if k == M.r and piece.rank != 1:
        raise AssertionError(f"top-degree piece has rank {piece.rank}, expected 1")
    if k > M.r and piece.rank != 0:
        raise AssertionError(f"degree {k} > r piece has rank {piece.rank}, expected 0")
    M._cache[("graded", k)] = piece
    return piece


def _j_form(M: Matroid, e: int, f: int) -> DivisorCombination:
    return DivisorCombination.from_dict({G: (G >> e & 1) - (G >> f & 1) for G in M.proper_flats})


# ---------------------------------------------------------------------------
# degrees
# ---------------------------------------------------------------------------

def _as_poly(M: Matroid, element) -> Polynomial:
    if isinstance(element, DivisorMonomial):
        return monomial_poly(M, element)
    if isinstance(element, DivisorCombination):
        return linear_form(M, element)
    return dict(element)


def _poly_degree(p: Mapping[Monomial, int]) -> int | None:
    degrees = {sum(d for _, d in m) for m in p}
    if len(degrees) > 1:
        raise ValueError("polynomial is not homogeneous")
    return degrees.pop() if degrees else None


def oracle_degree(M: Matroid, element, method: str = "linear",
                  cap: int = DEFAULT_MONOMIAL_CAP) -> int:
    """Degree of a top-degree class by reduction modulo ``I + J``.

    ``element`` is a :class:`DivisorMonomial` or a polynomial dict.
    ``method="linear"`` eliminates over the whole degree-``r`` slice;
    ``method="rewrite"`` applies individual relations until only complete
    flags remain and needs no guard.
    """
    require_loopless(M)
    if isinstance(element, DivisorMonomial) and element.degree != M.r:
        raise ValueError(f"oracle degree needs degree r = {M.r}, got {element.degree}")
    p = _as_poly(M, element)
    deg = _poly_degree(p)
    if deg is None:
        return 0
    if deg != M.r:
        raise ValueError(f"oracle degree needs degree r = {M.r}, got {deg}")
    if method == "linear":
        piece = build_graded(M, M.r, cap)
        nf = piece.normal_form(p)
        ref_col = len(piece.monomials) - 1
        if set(nf) - {ref_col}:
            raise AssertionError("normal form left a non-reference column")
        value = nf.get(ref_col, Fraction(0))
        if value.denominator != 1:
            raise IntegralityError(f"degree {value} is not an integer")
        return int(value)
    if method == "rewrite":
        memo: dict[Monomial, int] = {}
        return sum(c * _rewrite_degree(M, m, memo) for m, c in p.items())
    raise ValueError(f"unknown oracle method {method!r}")


def _rewrite_degree(M: Matroid, m: Monomial, memo: dict[Monomial, int]) -> int:
    """Rewrite a chain monomial by one ``J``-relation at a time.

    For a repeated flat ``F`` with neighbours ``F_prev ⊊ F ⊊ F_next`` in the
    support, pick ``e ∈ F \\ F_prev`` and ``f ∈ F_next \\ F``; then
    ``X_F · m' ≡ m'·L_f - m'·Σ_{e∈G≠F} X_G`` where ``L_x = Σ_{x∈G} X_G``.
    Every surviving term has one more distinct flat, so the recursion stops at
    complete flags, each of degree one.
    """
    if m in memo:
        return memo[m]
    flats = [F for F, _ in m]
    repeated = [i for i, (_, d) in enumerate(m) if d > 1]
    if not repeated:
        if len(flats) != M.r:
            raise AssertionError("squarefree top-degree chain must be a complete flag")
        memo[m] = 1
        return 1
    i = repeated[-1]
    F, d = m[i]
    prev = flats[i - 1] if i > 0 else 0
    nxt = flats[i + 1] if i + 1 < len(flats) else M.full
    e = bitset.lowest(F & ~prev)
    f = bitset.lowest(nxt & ~F)
    rest = m[:i] + ((F, d - 1),) + m[i + 1:]
    expansion: Polynomial = {}
    for G in M.proper_flats:
        c = (G >> f & 1) - ((G >> e & 1) if G != F else 0)
        if c:
            new = canonical(M, rest + ((G, 1),))
            if new is not None:
                poly_add(expansion, {new: c})
    value = sum(c * _rewrite_degree(M, mono, memo) for mono, c in expansion.items())
    memo[m] = value
    return value


# ---------------------------------------------------------------------------
# Feichtner–Yuzvinsky basis and Poincaré duality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FYBasisElement:
    """``D_{F_1}^{d_1} ⋯ D_{F_ℓ}^{d_ℓ}`` with ``F_ℓ = E`` and ``d_ℓ >= 0``."""

    flag: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def monomial(self) -> DivisorMonomial:
        return DivisorMonomial.from_pairs((F, d) for F, d in zip(self.flag, self.exponents) if d)

    def hat(self, M: Matroid) -> FYBasisElement:
        """The complementary element of degree ``r - k`` on the same flag."""
        ranks = [0] + [M.flat_rank(F) for F in self.flag]
        ell = len(self.flag)
        hats = []
        for i in range(1, ell + 1):
            if i < ell:
                hats.append(ranks[i] - ranks[i - 1] - self.exponents[i - 1])
            else:
                hats.append(M.r - ranks[i - 1] - self.exponents[i - 1])
        return FYBasisElement(self.flag, tuple(hats))

    def delta(self, M: Matroid) -> tuple[int, ...]:
        """``(d̂_ℓ, rk F_{ℓ-1}, d̂_{ℓ-1}, ..., rk F_1, d̂_1)``."""
        hats = self.hat(M).exponents
        ell = len(self.flag)
        out = [hats[ell - 1]]
        for i in range(ell - 1, 0, -1):
            out += [M.flat_rank(self.flag[i - 1]), hats[i - 1]]
        return tuple(out)

    def text(self, M: Matroid) -> str:
        return self.monomial().text(M)


def fy_basis(M: Matroid, k: int) -> list[FYBasisElement]:
    """FY monomials of degree ``k`` in δ-refined order."""
    require_loopless(M)
    if not 0 <= k <= M.r:
        raise ValueError(f"degree must lie in 0..{M.r}")
    out: list[FYBasisElement] = []

    def extend(flag: tuple[int, ...], exps: tuple[int, ...], below: int, used: int):
        # close the flag with E
        last = k - used
        if 0 <= last < M.rk - M.flat_rank(below):
            out.append(FYBasisElement(flag + (M.full,), exps + (last,)))
        for G in M.above(below) if below else M.proper_flats:
            gap = M.flat_rank(G) - M.flat_rank(below)
            for d in range(1, min(gap - 1, k - used) + 1):
                extend(flag + (G,), exps + (d,), G, used + d)

    extend((), (), 0, 0)
    width = max((len(b.delta(M)) for b in out), default=0)

    def key(b: FYBasisElement):
        delta = b.delta(M)
        return (delta + (0,) * (width - len(delta)), b.flag, b.exponents)

    out.sort(key=key)
    return out


def delta_less(M: Matroid, a: FYBasisElement, b: FYBasisElement) -> bool:
    da, db = a.delta(M), b.delta(M)
    width = max(len(da), len(db))
    return da + (0,) * (width - len(da)) < db + (0,) * (width - len(db))


def reduce_to_fy(M: Matroid, element, k: int, cap: int = DEFAULT_MONOMIAL_CAP) -> list[int]:
    """Integer coordinates of a degree-``k`` class over ``fy_basis(M, k)``."""
    piece = build_graded(M, k, cap)
    basis = fy_basis(M, k)
    free = piece.free_columns
    if len(basis) != len(free):
        raise AssertionError(f"FY basis has {len(basis)} elements but A^{k} has rank {len(free)}")
    p = _as_poly(M, element)
    target = piece.normal_form(p)
    rows = [piece.normal_form(monomial_poly(M, b.monomial())) for b in basis]
    # solve Σ c_i rows[i] = target over the free columns
    matrix = [[row.get(col, Fraction(0)) for col in free] for row in rows]
    rhs = [target.get(col, Fraction(0)) for col in free]
    coords = solve_left(matrix, rhs)
    out = []
    for c in coords:
        if c.denominator != 1:
            raise IntegralityError(f"non-integral FY coordinate {c}")
        out.append(int(c))
    return out


def solve_left(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``x · matrix = rhs`` for square invertible ``matrix``."""
    n = len(matrix)
    # transpose to A x = b
    a = [[Fraction(matrix[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise ArithmeticError("FY basis images are linearly dependent")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass
class PairingCertificate:
    k: int
    rows: list[FYBasisElement]
    columns: list[FYBasisElement]
    matrix: list[list[int]]
    det: int
    triangular: bool
    diag: list[int]
    expected_diag: list[int]
    oracle_checked: int = 0
    oracle_mismatches: list[tuple[int, int]] = field(default_factory=list)
    oracle_skipped: str | None = None

    @property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    @property
    def anomaly(self) -> bool:
        return self.unimodular and not self.triangular

    def to_json(self, M: Matroid) -> dict:
        return {
            "k": self.k,
            "rows": [b.text(M) for b in self.rows],
            "matrix": self.matrix,
            "det": self.det,
            "triangular": self.triangular,
            "diag": self.diag,
        }


def pairing_matrix(M: Matroid, k: int, oracle_fraction: float = 0.1, seed: int = 0,
                   cap: int = DEFAULT_MONOMIAL_CAP) -> PairingCertificate:
    """Poincaré pairing ``A^k × A^{r-k} → Z`` on FY bases (rows ``B``, columns ``B̂``)."""
    rows = fy_basis(M, k)
    columns = [b.hat(M) for b in rows]
    products = [[(b.monomial() * c.monomial()) for c in columns] for b in rows]
    matrix = [[deg_monomial(M, m) for m in line] for line in products]
    n = len(rows)
    triangular = all(matrix[i][j] == 0 for i in range(n) for j in range(i + 1, n))
    diag = [matrix[i][i] for i in range(n)]
    expected = [(-1) ** (M.r - len(b.flag) + 1) for b in rows]
    cert = PairingCertificate(k, rows, columns, matrix, determinant(matrix), triangular, diag, expected)
    if oracle_fraction > 0 and n:
        rng = random.Random(seed)
        cells = [(i, j) for i in range(n) for j in range(n)]
        count = max(1, round(oracle_fraction * len(cells)))
        sample = sorted(rng.sample(cells, min(count, len(cells))))
        try:
            for i, j in sample:
                if oracle_degree(M, products[i][j], cap=cap) != matrix[i][j]:
                    cert.oracle_mismatches.append((i, j))
            cert.oracle_checked = len(sample)
        except GuardExceeded as exc:
            cert.oracle_skipped = str(exc)
    return cert


def verify_poincare(M: Matroid, k: int, **kwargs) -> tuple[bool, PairingCertificate]:
    cert = pairing_matrix(M, k, **kwargs)
    return cert.unimodular and not cert.oracle_mismatches, cert


def random_top_monomials(M: Matroid, count: int, seed: int) -> list[DivisorMonomial]:
    """Seeded sample of degree-``r`` monomials; half are supported on flags."""
    rng = random.Random(seed)
    gens = list(M.proper_flats) + [M.full]
    flags = list(M.flags())
    out = []
    for i in range(count):
        if i % 2 == 0 and flags:
            flag = rng.choice(flags)
            cut = sorted(rng.sample(range(1, M.r), len(flag) - 1))
            bounds = [0] + cut + [M.r]
            exps = [b - a for a, b in zip(bounds, bounds[1:])]
            pairs = list(zip(flag, exps))
            if rng.random() < 0.3 and exps[-1] > 1:
                pairs[-1] = (pairs[-1][0], exps[-1] - 1)
                pairs.append((M.full, 1))
            out.append(DivisorMonomial.from_pairs(pairs))
        else:
            out.append(DivisorMonomial.from_pairs((rng.choice(gens), 1) for _ in range(M.r)))
    return out


def all_top_monomials(M: Matroid, include_top: bool = True) -> list[DivisorMonomial]:
    gens = list(M.proper_flats) + ([M.full] if include_top else [])
    return [DivisorMonomial.from_pairs((F, 1) for F in combo)
            for combo in itertools.combinations_with_replacement(gens, M.r)]


def count_top_monomials(M: Matroid, include_top: bool = True) -> int:
    g = len(M.proper_flats) + (1 if include_top else 0)
    return comb(g + M.r - 1, M.r)
