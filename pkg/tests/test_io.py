import json

from hypothesis import given, strategies as st
import pytest

from surfdyn.errors import DataConsistencyError
from surfdyn.io import (Catalog, dec_int, dumps, enc_int, lattice_from_dict, lattice_to_dict,
                        map_from_dict, map_to_dict, roundtrip)
from surfdyn.lattice import projective_plane


def test_every_catalog_file_round_trips(catalog):
    files = catalog.files()
    assert len(files) >= 15
    for path in files:
        assert roundtrip(path), path


@given(st.integers(-2**200, 2**200))
def test_integer_encoding_is_exact(x):
    e = enc_int(x)
    assert isinstance(e, str) == (abs(x) >= 2**63)
    assert dec_int(json.loads(json.dumps(e))) == x


def test_dec_int_rejects_non_integers():
    for bad in (True, 1.5, "12a", None):
        with pytest.raises(DataConsistencyError):
            dec_int(bad)


def test_big_entries_round_trip_bit_exactly():
    k = 3**50
    L = lattice_from_dict({"intersection": [[0, str(k)], [str(k), 0]], "canonical": [0, 0]})
    assert L.intersection == ((0, k), (k, 0))
    d = lattice_to_dict(L)
    assert d["intersection"][0][1] == str(k)
    assert lattice_from_dict(json.loads(json.dumps(d))) == L


def test_lattice_dict_round_trip():
    L = projective_plane()
    assert lattice_from_dict(lattice_to_dict(L)) == L
    with pytest.raises(DataConsistencyError):
        lattice_from_dict({"rank": 2, "intersection": [[1]], "canonical": [-3]})


def test_map_dict_round_trip(catalog):
    e = catalog["fibration-j1"]
    M = e.pullback()
    assert map_from_dict(json.loads(json.dumps(map_to_dict(M, "x"))), e.lattice()) == M


def test_catalog_lookup(catalog):
    assert {e.name for e in catalog.of_kind("family")} >= {"curve-constant", "curve-doubling"}
    with pytest.raises(KeyError, match="no catalog entry"):
        catalog["missing"]
    M, Mi = catalog["tau-phi"].coordinate()
    assert M.name == "tau-phi" and Mi.name == "tau-phi-inverse"


def test_dumps_keeps_matrices_inline():
    text = dumps({"P": [[1, 2], [3, 4]], "v": [1, 2], "d": {"a": 1}})
    assert '"P": [[1, 2], [3, 4]]' in text and '"v": [1, 2]' in text
    assert json.loads(text) == {"P": [[1, 2], [3, 4]], "v": [1, 2], "d": {"a": 1}}


def test_fixture_catalogs_load(data_dir):
    for name in ("corrupt-exceptional", "parity", "corrupt-inverse"):
        assert len(list(Catalog(data_dir / name))) == 1
