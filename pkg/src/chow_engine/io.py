"""JSON interchange formats and the monomial text grammar."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import bitset
from .matroid import Matroid, MatroidError, from_flats, from_graph, from_matrix
from .psi import DivisorMonomial


class ParseError(ValueError):
    """Malformed user input; the message names the offending piece."""


def _read(source: str | Path | dict) -> Any:
    if isinstance(source, dict):
        return source
    try:
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc})") from None


def _require(data: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise ParseError(f"missing key(s): {', '.join(missing)}")


# ---------------------------------------------------------------------------
# matroids
# ---------------------------------------------------------------------------

def matroid_to_json(M: Matroid) -> dict:
    ground: int | list[str] = list(M.ground.labels) if M.ground.labels else M.n
    return {"ground_set": ground, "flats": [bitset.elements(F) for F in M.flats]}


def matroid_from_json(source: str | Path | dict) -> Matroid:
    data = _read(source)
    _require(data, "ground_set", "flats")
    return from_flats(data["ground_set"], data["flats"])


def graph_from_json(source: str | Path | dict) -> Matroid:
    data = _read(source)
    _require(data, "n_vertices", "edges")
    return from_graph(data["n_vertices"], [tuple(e) for e in data["edges"]])


def matrix_from_json(source: str | Path | dict) -> Matroid:
    data = _read(source)
    _require(data, "rows", "cols", "entries")
    return from_matrix(data["rows"], data["cols"], data["entries"], data.get("modulus", "rational"))


# ---------------------------------------------------------------------------
# support and weight vectors
# ---------------------------------------------------------------------------

def parse_key(key: str, n: int) -> int:
    """``"0,2"`` -> bitset; the empty string is the empty set."""
    key = key.strip()
    if not key:
        return 0
    try:
        items = [int(tok) for tok in key.split(",")]
    except ValueError:
        raise ParseError(f"bad subset key {key!r}") from None
    for i in items:
        if not 0 <= i < n:
            raise ParseError(f"element {i} in key {key!r} is outside 0..{n - 1}")
    return bitset.mask_of(items)


def _number(value, where: str):
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a number")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            pass
    raise ParseError(f"{where}: expected an integer or rational string, got {value!r}")


def vector_from_json(source: str | Path | dict, field: str) -> tuple[int, dict[int, int | Fraction]]:
    """Read ``{"n": 3, field: {"0,1": 2, ...}}``."""
    data = _read(source)
    _require(data, "n", field)
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("n must be a positive integer")
    out = {}
    for key, value in data[field].items():
        mask = parse_key(key, n)
        out[mask] = out.get(mask, 0) + _number(value, f"{field}[{key!r}]")
    return n, out


def vector_to_json(n: int, field: str, values: dict[int, int | Fraction]) -> dict:
    def enc(v):
        v = Fraction(v)
        return int(v) if v.denominator == 1 else str(v)

    return {"n": n, field: {",".join(map(str, bitset.elements(S))): enc(v)
                            for S, v in sorted(values.items())}}


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

_SET = r"\{\s*(?P<body>[^{}]*)\}"
_D_FACTOR = re.compile(r"^D" + _SET + r"(\s*\^\s*(?P<exp>\d+))?$")
_PSI_FACTOR = re.compile(r"^psi-" + _SET + r"(\s*\^\s*(?P<exp>\d+))?$")


def parse_set(text: str, M: Matroid) -> int:
    """``"{0,1}"``, ``"0,1"``, ``"{E}"`` or ``"E"`` -> bitset (not checked for flatness)."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1].strip()
    if body == "E":
        return M.full
    if not body:
        return 0
    try:
        items = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise ParseError(f"cannot read set {text!r}") from None
    for i in items:
        if not 0 <= i < M.n:
            raise ParseError(f"set {text!r} mentions element {i} outside 0..{M.n - 1}")
    return bitset.mask_of(items)


def _factors(text: str, pattern: re.Pattern, what: str):
    pieces = [p.strip() for p in text.split("*")]
    if not text.strip() or any(not p for p in pieces):
        raise ParseError(f"empty factor in {what} {text!r}")
    for piece in pieces:
        match = pattern.match(piece)
        if match is None:
            raise ParseError(f"cannot parse factor {piece!r} in {what} {text!r}")
        exp = int(match.group("exp") or 1)
        if exp < 1:
            raise ParseError(f"exponent of {piece!r} must be positive")
        yield "{" + match.group("body") + "}", exp


def parse_monomial(text: str, M: Matroid) -> DivisorMonomial:
    """Parse ``D{0,1}^3 * D{E}``; every set must be a nonempty flat."""
    pairs = []
    for set_text, exp in _factors(text, _D_FACTOR, "monomial"):
        F = parse_set(set_text, M)
        if F == 0 or not M.is_flat(F):
            raise ParseError(f"{set_text} is not a nonempty flat of the matroid")
        pairs.append((F, exp))
    return DivisorMonomial.from_pairs(pairs)


def parse_psi_product(text: str, M: Matroid) -> list[int]:
    """Parse ``psi-{0} * psi-{E}^2`` into a list of flats with repetition."""
    flats = []
    for set_text, exp in _factors(text, _PSI_FACTOR, "psi product"):
        flats.extend([parse_flat(set_text, M)] * exp)
    return flats


def parse_flat(text: str, M: Matroid) -> int:
    F = parse_set(text, M)
    if F == 0 or not M.is_flat(F):
        raise ParseError(f"{text} is not a nonempty flat of the matroid")
    return F


def set_text(M: Matroid, F: int) -> str:
    return "{E}" if F == M.full else bitset.fmt(F)


__all__ = [
    "ParseError", "MatroidError", "matroid_to_json", "matroid_from_json", "graph_from_json",
    "matrix_from_json", "parse_key", "vector_from_json", "vector_to_json", "parse_set",
    "parse_monomial", "parse_psi_product", "parse_flat", "set_text",
]
