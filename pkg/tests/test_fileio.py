import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qldpc_gadgets.fileio import (
    CodeBundle, FormatError, code_from_dict, code_to_dict, dumps_alist, export_parity_checks,
    format_parity_checks, gadget_from_dict, gadget_to_dict, import_parity_checks, loads_alist,
    split_stacked, stacked,
)
from qldpc_gadgets.css import CssCode
from qldpc_gadgets.gadget import build_gadget
from qldpc_gadgets.gb import SEED_NAMES, SUPPORTED_R, catalog_code
from qldpc_gadgets.gf2 import BitMatrix

from .strategies import css_codes


def toy():
    return CssCode(BitMatrix([], 3), BitMatrix.from_supports([[0, 1, 2]], 3))


def test_toy_alist_by_hand():
    assert dumps_alist(stacked(toy())).splitlines() == [
        "3 1", "1 3", "1 1 1", "3", "1", "1", "1", "1 2 3",
    ]


def test_alist_padding():
    m = BitMatrix.from_supports([[0, 1], [1]], 2)
    text = dumps_alist(m)
    assert text.splitlines() == ["2 2", "2 2", "1 2", "2 1", "1 0", "1 2", "1 2", "2 0"]
    assert loads_alist(text) == m


@given(css_codes(min_k=0))
def test_json_round_trip(code):
    back = code_from_dict(json.loads(format_parity_checks(code, "json")))
    assert back.h_x == code.h_x and back.h_z == code.h_z


@given(css_codes(min_k=0))
def test_alist_round_trip(code):
    m = loads_alist(format_parity_checks(code, "alist"))
    back = split_stacked(m, code.h_x.nrows)
    assert back.h_x == code.h_x and back.h_z == code.h_z


@given(st.integers(1, 12).flatmap(
    lambda n: st.lists(st.integers(0, (1 << n) - 1), max_size=10).map(lambda rows: BitMatrix(rows, n))))
def test_alist_round_trip_on_raw_matrices(m):
    assert loads_alist(dumps_alist(m)) == m


@pytest.mark.parametrize("r", SUPPORTED_R)
@pytest.mark.parametrize("fmt", ["json", "alist"])
def test_catalogue_file_round_trip(tmp_path, r, fmt):
    code = catalog_code(r).code
    path = tmp_path / f"code.{fmt}"
    export_parity_checks(code, path, fmt)
    back = import_parity_checks(path, fmt, m_x=code.h_x.nrows)
    assert back.h_x == code.h_x and back.h_z == code.h_z
    if fmt == "alist":
        assert import_parity_checks(path, fmt) == stacked(code)


def test_r5_alist_header():
    lines = format_parity_checks(catalog_code(5).code, "alist").splitlines()
    assert lines[0] == "62 62"
    assert lines[1] == "6 6"


@pytest.mark.parametrize("text, line", [
    ("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 x\n", 8),
    ("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n", 8),
    ("3 1\n1 3\n1 1\n3\n1\n1\n1\n1 2 3\n", 3),
    ("3 1\n1 3\n1 1 1\n3\n1\n1\n2\n1 2 3\n", 7),
    ("3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 4\n", 8),
    ("3\n", 1),
])
def test_malformed_alist_reports_line(text, line):
    with pytest.raises(FormatError) as info:
        loads_alist(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "schema": 1,\n  "n": 3\n  "h_x": []\n}\n')
    with pytest.raises(FormatError) as info:
        import_parity_checks(path)
    assert info.value.line == 4
    for bad in ({"schema": 2, "n": 1, "h_x": [], "h_z": []},
                {"schema": 1, "n": 2, "h_x": [[2]], "h_z": []},
                {"schema": 1, "n": 2, "h_x": [[0, 0]], "h_z": []},
                {"schema": 1, "n": -1, "h_x": [], "h_z": []},
                []):
        with pytest.raises(FormatError):
            code_from_dict(bad)


def test_unknown_format():
    with pytest.raises(ValueError):
        format_parity_checks(toy(), "xml")


def test_json_schema_shape():
    d = code_to_dict(toy())
    assert d == {"schema": 1, "n": 3, "h_x": [], "h_z": [[0, 1, 2]]}


@given(st.sampled_from(SUPPORTED_R[:2]), st.sampled_from(SEED_NAMES))
def test_gadget_round_trip(r, name):
    entry = catalog_code(r)
    g = build_gadget(entry.code, entry.seeds[name])
    assert gadget_from_dict(json.loads(json.dumps(gadget_to_dict(g)))) == g


def test_bundle_round_trip():
    entry = catalog_code(5)
    gadgets = {n: build_gadget(entry.code, entry.seeds[n]) for n in SEED_NAMES}
    b = CodeBundle({"r": 5, "l": entry.l}, entry.code, dict(entry.seeds), gadgets, {"note": [1, 2]})
    text = b.dumps()
    back = CodeBundle.loads(text)
    assert back == b
    assert back.dumps() == text
    with pytest.raises(FormatError):
        CodeBundle.loads('{"schema": 1}')
    with pytest.raises(FormatError):
        CodeBundle.loads("[]")
