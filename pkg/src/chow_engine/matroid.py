"""Matroids stored as their lattice of flats.

Elements are 0-based indices and every subset is a bitset (see
:mod:`chow_engine.bitset`).  All constructors funnel through
:func:`from_flats`, so every matroid in circulation has passed the two
lattice-of-flats axioms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import bitset
from .bitset import MAX_ELEMENTS, is_subset


class MatroidError(ValueError):
    """Invalid matroid input."""


class AxiomViolation(MatroidError):
    def __init__(self, axiom: int, witness: tuple, message: str):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class MissingTop(MatroidError):
    pass


class LoopyMatroidError(MatroidError):
    """Raised by operations that only make sense for loopless matroids."""


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise MatroidError("ground set size must be nonnegative")
        if self.size > MAX_ELEMENTS:
            raise MatroidError(
                f"ground set has {self.size} elements; bitset encoding supports at most {MAX_ELEMENTS}"
            )
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise MatroidError("need exactly one label per element")
            if len(set(self.labels)) != self.size:
                raise MatroidError("element labels must be distinct")

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels is not None else str(e)


class Matroid:
    """A matroid ``(E, L)`` with its flats in canonical (rank, bitset) order.

    Treat instances as immutable.  Derived data (interval minors, Möbius rows,
    characteristic polynomials) is memoized on the instance.
    """

    def __init__(self, ground: GroundSet, flats: Sequence[int], ranks: dict[int, int],
                 covers: dict[int, tuple[int, ...]]):
        self.ground = ground
        self.n = ground.size
        self.full = (1 << self.n) - 1
        self.flats: tuple[int, ...] = tuple(flats)
        self._rank = ranks
        self.covers = covers
        self.rk = ranks[self.full]
        self._flat_set = frozenset(self.flats)
        self._cache: dict = {}

    # -- basic queries -------------------------------------------------
    @property
    def r(self) -> int:
        """Top degree of the Chow ring, ``rk(E) - 1``."""
        return self.rk - 1

    @property
    def bottom(self) -> int:
        return self.flats[0]

    @property
    def is_loopless(self) -> bool:
        return self.bottom == 0

    @property
    def proper_flats(self) -> tuple[int, ...]:
        """``L* = L \\ {∅, E}``."""
        return tuple(F for F in self.flats if F != self.bottom and F != self.full)

    def is_flat(self, S: int) -> bool:
        return S in self._flat_set

    def flat_rank(self, F: int) -> int:
        return self._rank[F]

    def closure(self, S: int) -> int:
        if not is_subset(S, self.full):
            raise MatroidError(f"{bitset.fmt(S)} is not a subset of the ground set")
        # the first flat in canonical order containing S has minimal rank, hence is cl(S)
        for F in self.flats:
            if S & ~F == 0:
                return F
        raise AssertionError("E is always a flat")

    def rank(self, S: int) -> int:
        return self._rank[self.closure(S)]

    def label(self, e: int) -> str:
        return self.ground.label(e)

    def flats_of_rank(self, k: int) -> list[int]:
        return [F for F in self.flats if self._rank[F] == k]

    def interval_flats(self, F: int, G: int) -> list[int]:
        return [H for H in self.flats if is_subset(F, H) and is_subset(H, G)]

    def loops(self) -> int:
        return self.bottom

    def coloops(self) -> int:
        return bitset.mask_of(e for e in range(self.n) if self.is_flat(self.full & ~(1 << e)))

    def is_simple(self) -> bool:
        return self.is_loopless and all(F.bit_count() == 1 for F in self.flats_of_rank(1))

    # -- minors ----------------------------------------------------------
    def _relabel(self, support: int) -> GroundSet:
        labels = tuple(self.label(e) for e in bitset.iter_bits(support))
        if self.ground.labels is None and labels == tuple(str(i) for i in range(len(labels))):
            labels = None
        return GroundSet(len(labels) if labels is not None else support.bit_count(), labels)

    def restrict(self, S: int) -> Matroid:
        """``M|_S`` with flats ``{F ∩ S}``, elements renumbered in increasing order."""
        if not is_subset(S, self.full):
            raise MatroidError("restriction set is not a subset of the ground set")
        if S == 0:
            raise MatroidError("cannot restrict to the empty set")
        flats = {bitset.compress(F & S, S) for F in self.flats}
        return from_flats(self._relabel(S), flats)

    def delete(self, S: int) -> Matroid:
        return self.restrict(self.full & ~S)

    def contract(self, F: int) -> Matroid:
        """``M/F`` for a flat ``F`` (contraction by non-flats is unsupported)."""
        if not self.is_flat(F):
            raise MatroidError(f"can only contract by a flat; {bitset.fmt(F)} is not closed")
        return self.interval(F, self.full)

    def interval(self, F: int, G: int) -> Matroid:
        """``M[F, G] = (M|_G)/F``; its flats are ``H \\ F`` for ``F ⊆ H ⊆ G``."""
        key = ("interval", F, G)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if not (self.is_flat(F) and self.is_flat(G)):
            raise MatroidError("interval endpoints must be flats")
        if not is_subset(F, G):
            raise MatroidError(f"{bitset.fmt(F)} is not contained in {bitset.fmt(G)}")
        if F == G:
            raise MatroidError("interval minor of an empty interval has no ground set")
        support = G & ~F
        flats = {bitset.compress(H & ~F, support) for H in self.interval_flats(F, G)}
        minor = from_flats(self._relabel(support), flats)
        self._cache[key] = minor
        return minor

    def simplify(self) -> Matroid:
        """Keep the least element of every rank-one flat."""
        if not self.is_loopless:
            raise LoopyMatroidError("simplification requires a loopless matroid")
        keep = bitset.mask_of(bitset.lowest(F) for F in self.flats_of_rank(1))
        return self.restrict(keep)

    # -- chains -----------------------------------------------------------
    def above(self, F: int) -> tuple[int, ...]:
        """Proper flats strictly containing ``F``, canonical order."""
        key = ("above", F)
        out = self._cache.get(key)
        if out is None:
            out = tuple(G for G in self.proper_flats if G != F and is_subset(F, G))
            self._cache[key] = out
        return out

    def flags(self, max_length: int | None = None) -> Iterator[tuple[int, ...]]:
        """All nonempty chains ``F_1 ⊊ ... ⊊ F_k`` of proper flats."""
        limit = self.r if max_length is None else max_length

        def grow(chain):
            yield chain
            if len(chain) < limit:
                for G in self.above(chain[-1]):
                    yield from grow(chain + (G,))

        if limit >= 1:
            for F in self.proper_flats:
                yield from grow((F,))

    def complete_flags(self) -> Iterator[tuple[int, ...]]:
        return (c for c in self.flags() if len(c) == self.r)

    def is_chain(self, sets: Iterable[int]) -> bool:
        ordered = sorted(sets, key=lambda F: (F.bit_count(), F))
        return all(a != b and is_subset(a, b) for a, b in zip(ordered, ordered[1:]))

    # -- Möbius function ------------------------------------------------
    def mobius_row(self, F: int) -> dict[int, int]:
        """``H -> μ(F, H)`` for every flat ``H ⊇ F``."""
        key = ("mobius", F)
        row = self._cache.get(key)
        if row is None:
            if not self.is_flat(F):
                raise MatroidError(f"{bitset.fmt(F)} is not a flat")
            row = {}
            for H in self.flats:  # canonical order lists every subflat before H
                if not is_subset(F, H):
                    continue
                row[H] = 1 if H == F else -sum(v for K, v in row.items() if is_subset(K, H))
            self._cache[key] = row
        return row

    def mobius(self, F: int, G: int) -> int:
        if not (self.is_flat(F) and self.is_flat(G)):
            raise MatroidError("Möbius function is defined on flats")
        if not is_subset(F, G):
            raise MatroidError(f"{bitset.fmt(F)} is not contained in {bitset.fmt(G)}")
        return self.mobius_row(F)[G]

    # -- dunder ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.n == other.n and self.flats == other.flats

    def __hash__(self):
        return hash((self.n, self.flats))

    def __repr__(self):
        return f"Matroid(n={self.n}, rank={self.rk}, flats={len(self.flats)})"


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def _as_ground(n: int | GroundSet | Sequence[str]) -> GroundSet:
    if isinstance(n, GroundSet):
        return n
    if isinstance(n, int):
        return GroundSet(n)
    labels = tuple(str(x) for x in n)
    return GroundSet(len(labels), labels)


def _as_mask(S, n: int) -> int:
    if isinstance(S, int):
        mask = S
    else:
        items = list(S)
        for e in items:
            if not isinstance(e, int) or not 0 <= e < n:
                raise MatroidError(f"element {e!r} is outside the ground set of size {n}")
        mask = bitset.mask_of(items)
    if mask < 0 or mask >> n:
        raise MatroidError(f"subset {bitset.fmt(mask)} is outside the ground set of size {n}")
    return mask


def _minimal_above(F: int, flats_by_size: Sequence[int]) -> list[int]:
    minimal: list[int] = []
    for G in flats_by_size:
        if G != F and is_subset(F, G) and not any(is_subset(C, G) for C in minimal):
            minimal.append(G)
    return minimal


def from_flats(n: int | GroundSet | Sequence[str], flats: Iterable) -> Matroid:
    """Validate a candidate lattice of flats and build the matroid.

    ``flats`` may hold bitsets or iterables of element indices.  Raises
    :class:`MissingTop` if ``E`` is absent and :class:`AxiomViolation`
    (carrying ``axiom`` and ``witness``) if either axiom fails.
    """
    ground = _as_ground(n)
    if ground.size < 1:
        raise MatroidError("ground set must be nonempty")
    full = (1 << ground.size) - 1
    masks = sorted({_as_mask(S, ground.size) for S in flats}, key=lambda F: (F.bit_count(), F))
    if full not in masks:
        raise MissingTop("the full ground set must be a flat")
    present = set(masks)

    for a, b in itertools.combinations(masks, 2):
        if a & b not in present:
            raise AxiomViolation(
                1, (a, b),
                f"axiom (1) fails: {bitset.fmt(a)} ∩ {bitset.fmt(b)} = {bitset.fmt(a & b)} is not a flat",
            )

    covers: dict[int, tuple[int, ...]] = {}
    for F in masks:
        minimal = _minimal_above(F, masks)
        for e in bitset.iter_bits(full & ~F):
            owners = [G for G in minimal if G >> e & 1]
            if len(owners) != 1:
                raise AxiomViolation(
                    2, (F, e),
                    f"axiom (2) fails: element {e} lies in {len(owners)} minimal flats above {bitset.fmt(F)}",
                )
        covers[F] = tuple(minimal)

    ranks = {masks[0]: 0}
    for F in masks:  # sizes increase, so every F is ranked before its covers
        for G in covers[F]:
            ranks[G] = max(ranks.get(G, 0), ranks[F] + 1)
    if len(ranks) != len(masks):
        raise MatroidError("lattice has more than one minimal flat")

    ordered = sorted(masks, key=lambda F: (ranks[F], F))
    return Matroid(ground, ordered, ranks, {F: tuple(sorted(covers[F], key=lambda G: G)) for F in ordered})


def _flats_by_closure(n: int, closure) -> set[int]:
    start = closure(0)
    seen = {start}
    stack = [start]
    full = (1 << n) - 1
    while stack:
        F = stack.pop()
        for e in bitset.iter_bits(full & ~F):
            G = closure(F | 1 << e)
            if G not in seen:
                seen.add(G)
                stack.append(G)
    return seen


def from_uniform(rank: int, n: int, labels: Sequence[str] | None = None) -> Matroid:
    """``U_{rank,n}``: every set of size below ``rank`` is a flat."""
    if n < 1:
        raise MatroidError("uniform matroid needs n >= 1")
    if not 0 <= rank <= n:
        raise MatroidError(f"need 0 <= rank <= n, got rank={rank}, n={n}")
    full = (1 << n) - 1
    flats = {full}
    for size in range(rank):
        flats.update(bitset.mask_of(c) for c in itertools.combinations(range(n), size))
    return from_flats(GroundSet(n, tuple(labels)) if labels else n, flats)


def from_boolean(n: int) -> Matroid:
    if n < 1:
        raise MatroidError("Boolean matroid needs n >= 1")
    return from_uniform(n, n)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


BRUTE_FORCE_EDGES = 6


def _graph_closure(n_vertices: int, edges: Sequence[tuple[int, int]]):
    def closure(S: int) -> int:
        uf = _UnionFind(n_vertices)
        for i in bitset.iter_bits(S):
            uf.union(*edges[i])
        return bitset.mask_of(i for i, (u, v) in enumerate(edges) if uf.find(u) == uf.find(v))

    return closure


def graph_flats_brute_force(n_vertices: int, edges: Sequence[tuple[int, int]]) -> set[int]:
    """Closed edge sets by testing all ``2^m`` subsets."""
    closure = _graph_closure(n_vertices, edges)
    return {S for S in range(1 << len(edges)) if closure(S) == S}


def from_graph(n_vertices: int, edges: Sequence[Sequence[int]]) -> Matroid:
    """Graphic matroid on the edge list; self-loops become matroid loops."""
    edges = [tuple(e) for e in edges]
    if not edges:
        raise MatroidError("graph needs at least one edge")
    for e in edges:
        if len(e) != 2 or not all(isinstance(v, int) and 0 <= v < n_vertices for v in e):
            raise MatroidError(f"edge {e!r} has a vertex outside 0..{n_vertices - 1}")
    if len(edges) > MAX_ELEMENTS:
        raise MatroidError(f"at most {MAX_ELEMENTS} edges are supported")
    if len(edges) <= BRUTE_FORCE_EDGES:
        flats = graph_flats_brute_force(n_vertices, edges)
    else:
        flats = _flats_by_closure(len(edges), _graph_closure(n_vertices, edges))
    return from_flats(len(edges), flats)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def matrix_rank(columns: Sequence[Sequence[int]], modulus: int | str) -> int:
    """Rank of a set of column vectors over GF(p) or the rationals."""
    rows = [list(c) for c in columns]
    if not rows:
        return 0
    if modulus == "rational":
        rows = [[Fraction(x) for x in r] for r in rows]
        inv = lambda x: 1 / x  # noqa: E731
        norm = lambda x: x  # noqa: E731
    else:
        p = modulus
        rows = [[x % p for x in r] for r in rows]
        inv = lambda x: pow(x, -1, p)  # noqa: E731
        norm = lambda x: x % p  # noqa: E731
    rank = 0
    width = len(rows[0])
    for c in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        scale = inv(rows[rank][c])
        rows[rank] = [norm(x * scale) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [norm(a - f * b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def from_matrix(rows: int, cols: int, entries: Sequence, modulus: int | str = "rational") -> Matroid:
    """Vector matroid of the columns of a ``rows × cols`` matrix.

    ``entries`` is row-major, either flat or nested.  ``modulus`` is a prime
    or the string ``"rational"``.
    """
    if modulus != "rational" and not (isinstance(modulus, int) and _is_prime(modulus)):
        raise MatroidError(f"modulus must be a prime or 'rational', got {modulus!r}")
    flat = [x for row in entries for x in row] if entries and isinstance(entries[0], (list, tuple)) else list(entries)
    if len(flat) != rows * cols:
        raise MatroidError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(flat)}")
    if cols < 1:
        raise MatroidError("matrix needs at least one column")
    if modulus == "rational":
        flat = [Fraction(x) for x in flat]
    columns = [[flat[i * cols + j] for i in range(rows)] for j in range(cols)]

    def closure(S: int) -> int:
        base = [columns[j] for j in bitset.iter_bits(S)]
        rk = matrix_rank(base, modulus)
        return bitset.mask_of(j for j in range(cols) if S >> j & 1 or matrix_rank(base + [columns[j]], modulus) == rk)

    return from_flats(cols, _flats_by_closure(cols, closure))


def contract_set(M: Matroid, S: int) -> Matroid:
    """``M/S`` for an arbitrary subset; elements of ``cl(S) \\ S`` become loops.

    Only the characteristic-polynomial recursions need this; Chow-ring code
    contracts by flats via :meth:`Matroid.contract`.
    """
    support = M.full & ~S
    flats = {bitset.compress(F & ~S, support) for F in M.flats if is_subset(S, F)}
    return from_flats(M._relabel(support), flats)
