"""Named matroids used by the CLI and the test suite."""

from __future__ import annotations

import json
import re
from importlib import resources

from .matroid import Matroid, MatroidError, from_boolean, from_uniform

FAMILY_MAX_N = 8

_FILES = {
    "k4": ("graph", "k4.json"),
    "k5_minus_edge": ("graph", "k5_minus_edge.json"),
    "fano": ("matrix", "fano.json"),
    "non_fano": ("matrix", "non_fano.json"),
}

# the standard test catalog
CATALOG = (
    "boolean_1", "boolean_2", "boolean_3", "boolean_4",
    "uniform_1_3", "uniform_2_3", "uniform_2_4", "uniform_3_4", "uniform_2_5", "uniform_3_5",
    "uniform_4_5", "k4", "k5_minus_edge", "fano", "non_fano",
)


def data_file(name: str) -> dict:
    return json.loads(resources.files("chow_engine").joinpath("data", name).read_text(encoding="utf-8"))


def builtin(name: str) -> Matroid:
    """``boolean_<n>``, ``uniform_<r>_<n>`` (``n <= 8``) or a shipped file name."""
    from . import io

    if name in _FILES:
        kind, filename = _FILES[name]
        data = data_file(filename)
        return io.graph_from_json(data) if kind == "graph" else io.matrix_from_json(data)
    match = re.fullmatch(r"boolean_(\d+)", name)
    if match:
        n = int(match.group(1))
        _check_size(n)
        return from_boolean(n)
    match = re.fullmatch(r"uniform_(\d+)_(\d+)", name)
    if match:
        r, n = int(match.group(1)), int(match.group(2))
        _check_size(n)
        return from_uniform(r, n)
    raise MatroidError(f"unknown builtin {name!r}; try {', '.join(names())}")


def _check_size(n: int) -> None:
    if n > FAMILY_MAX_N:
        raise MatroidError(f"builtin families stop at n = {FAMILY_MAX_N}")


def names() -> list[str]:
    return ["boolean_<n>", "uniform_<r>_<n>", *_FILES]


def catalog(max_r: int | None = None) -> dict[str, Matroid]:
    """The standard test catalog, optionally restricted to ``r <= max_r``."""
    out = {}
    for name in CATALOG:
        M = builtin(name)
        if max_r is None or M.r <= max_r:
            out[name] = M
    return out
