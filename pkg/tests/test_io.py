import json

import pytest
from hypothesis import given

from chow_engine import bitset, io
from chow_engine.matroid import AxiomViolation, from_boolean, from_uniform
from chow_engine.psi import DivisorMonomial

from conftest import CATALOG, matrix_matroids


def m(*items):
    return bitset.mask_of(items)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_matroid_roundtrip(name):
    M = CATALOG[name]
    data = json.loads(json.dumps(io.matroid_to_json(M)))
    assert io.matroid_from_json(data) == M
    assert data["flats"][0] == [] or not M.is_loopless


@given(matrix_matroids())
def test_roundtrip_random(M):
    assert io.matroid_from_json(io.matroid_to_json(M)) == M


def test_labels_survive():
    M = from_uniform(2, 3, labels=["a", "b", "c"])
    data = io.matroid_to_json(M)
    assert data["ground_set"] == ["a", "b", "c"]
    assert io.matroid_from_json(data).ground.labels == ("a", "b", "c")


def test_axiom_error_from_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"ground_set": 3, "flats": [[], [0], [1], [0, 1, 2]]}))
    with pytest.raises(AxiomViolation):
        io.matroid_from_json(path)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    with pytest.raises(io.ParseError):
        io.matroid_from_json(path)


def test_missing_key():
    with pytest.raises(io.ParseError, match="flats"):
        io.matroid_from_json({"ground_set": 2})


class TestMonomialGrammar:
    def test_worked_example(self):
        M = from_boolean(7)
        mono = io.parse_monomial("D{0,1}^3 * D{0,1,2,3,4}^2 * D{0,1,2,3,4,5}", M)
        assert mono == DivisorMonomial.from_pairs([(m(0, 1), 3), (m(0, 1, 2, 3, 4), 2), (m(0, 1, 2, 3, 4, 5), 1)])

    def test_top(self):
        M = from_boolean(3)
        assert io.parse_monomial("D{E}^2", M) == DivisorMonomial(((M.full, 2),))

    def test_roundtrip_text(self):
        M = from_boolean(4)
        mono = DivisorMonomial.from_pairs([(m(0), 2), (M.full, 1)])
        assert io.parse_monomial(mono.text(M), M) == mono

    def test_unknown_flat_is_named(self):
        with pytest.raises(io.ParseError, match=r"\{0,1\}"):
            io.parse_monomial("D{0,1}", from_uniform(2, 3))

    def test_out_of_range(self):
        with pytest.raises(io.ParseError, match="element 9"):
            io.parse_monomial("D{9}", from_boolean(3))

    @pytest.mark.parametrize("text", ["", "D{0} *", "X{0}", "D{0}^0", "D{a}"])
    def test_malformed(self, text):
        with pytest.raises(io.ParseError):
            io.parse_monomial(text, from_boolean(3))

    def test_psi_product(self):
        M = from_uniform(3, 4)
        assert io.parse_psi_product("psi-{1} * psi-{E}^2", M) == [m(1), M.full, M.full]


class TestVectors:
    def test_read_x(self, tmp_path):
        path = tmp_path / "x.json"
        path.write_text(json.dumps({"n": 3, "x": {"0": 1, "0,1": 2, "1": "1/2"}}))
        n, x = io.vector_from_json(path, "x")
        assert n == 3 and x == {m(0): 1, m(0, 1): 2, m(1): io.Fraction(1, 2)}

    def test_bad_key(self):
        with pytest.raises(io.ParseError):
            io.vector_from_json({"n": 2, "y": {"5": 1}}, "y")

    def test_roundtrip(self):
        values = {m(0): 1, m(1, 2): io.Fraction(3, 2)}
        data = io.vector_to_json(3, "y", values)
        assert io.vector_from_json(data, "y") == (3, values)
