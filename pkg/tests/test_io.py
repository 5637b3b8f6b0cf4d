import json

import pytest

from ncp.catalog import catalog, degrees, nar0, narayana, reference_table
from ncp.colored_perm import format_element
from ncp.decompose import sbd, scd_from_sbd
from ncp.io import (
    SchemaError, export_decomposition, export_dot, export_poset, import_decomposition,
    import_poset, import_poset_file, poset_to_json, to_dot, verify_reference_table,
)
from ncp.poset import boolean_lattice, verify_decomposition
from ncp.reflection_order import standard_lattice
from helpers import GRID


def test_catalog_examples():
    inv = catalog("gddn", 5, 3)
    assert inv.degrees == (3, 5, 10) and inv.h == 10 and inv.catalan == 26
    assert catalog("gddn", 2, 3).catalan == 14
    assert catalog("g11n", 1, 4).catalan == 14
    assert degrees("g11n", 1, 5) == (2, 3, 4, 5)
    with pytest.raises(ValueError):
        catalog("bogus", 2, 3)
    with pytest.raises(ValueError):
        catalog("g11n", 3, 3)


@pytest.mark.parametrize("d,n", GRID)
def test_catalog_matches_lattices(d, n):
    assert catalog("gddn", d, n).catalan == len(standard_lattice(d, n))


def test_narayana():
    assert narayana(4, 2) == 6
    assert all(narayana(n, 1) == 1 for n in range(1, 8))
    assert sum(narayana(4, k) for k in range(1, 5)) == 14
    assert nar0(4, 1) == 6 and nar0(4, 7) == 0
    with pytest.raises(ValueError):
        narayana(4, 0)


def test_reference_table_rows():
    t = reference_table()
    assert t["G23"] == {"rank_vector": [1, 15, 15, 1], "gamma_vector": [1, 12]}
    assert t["G28"] == {"rank_vector": [1, 24, 55, 24, 1], "gamma_vector": [1, 20, 9]}


def test_round_trip_is_identical(tmp_path):
    L = standard_lattice(2, 3)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    meta = {"family": "gddn", "d": 2, "n": 3, "coxeter": format_element(L.gamma)}
    export_poset(L.poset, a, meta)
    pf = import_poset_file(a)
    assert pf.meta == meta
    export_poset(pf.poset, b, pf.meta)
    assert a.read_text() == b.read_text()
    assert pf.poset.covers() == L.poset.covers() and pf.poset.rank == L.poset.rank


def test_fixture_file(data_dir):
    P = import_poset(data_dir / "poset12.json")
    assert P.m == 12 and P.rank_vector() == (1, 3, 4, 3, 1)


def _write(tmp_path, data, name="bad.json"):
    path = tmp_path / name
    lines = ["{", f'  "format": {json.dumps(data["format"])},', '  "meta": {},', '  "elements": [']
    lines.append(",\n".join("    " + json.dumps(e) for e in data["elements"]))
    lines.append("  ],")
    lines.append('  "covers": [')
    lines.append(",\n".join("    " + json.dumps(c) for c in data["covers"]))
    lines.append("  ]")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n")
    return path


def test_rank_jump_is_reported_with_line(tmp_path):
    data = poset_to_json(boolean_lattice(2))
    data["elements"][3]["rank"] = 3
    path = _write(tmp_path, data)
    with pytest.raises(SchemaError) as err:
        import_poset(path)
    msg = str(err.value)
    assert "rank" in msg and f"{path}:" in msg
    line = int(msg.split(":")[1])
    assert "[1, 3]" in path.read_text().splitlines()[line - 1]


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d.update(format="other"), "format"),
    (lambda d: d["covers"].append([0, 1]), "duplicate"),
    (lambda d: d["covers"].append([0, 9]), "unknown"),
    (lambda d: d["elements"][1].update(id=0), "dense"),
])
def test_schema_errors(tmp_path, mutate, needle):
    data = poset_to_json(boolean_lattice(2))
    mutate(data)
    with pytest.raises(SchemaError, match=needle):
        import_poset(_write(tmp_path, data))


def test_invalid_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{\n  \"format\": \n")
    with pytest.raises(SchemaError, match="invalid JSON"):
        import_poset(path)


def test_dot_is_deterministic(tmp_path):
    P = standard_lattice(3, 3).poset
    export_dot(P, tmp_path / "a.dot")
    export_dot(P, tmp_path / "b.dot")
    text = (tmp_path / "a.dot").read_text()
    assert text == (tmp_path / "b.dot").read_text() == to_dot(P)
    assert text.count("rank=same") == 4
    assert sum(1 for line in text.splitlines() if "[label=" in line) == P.m


def test_decomposition_round_trip(tmp_path):
    L = standard_lattice(4, 4)
    P = L.poset
    for D, modes in [(sbd(L), ("boolean", "symmetric")),
                     (scd_from_sbd(P, sbd(L)), ("chain", "symmetric"))]:
        path = tmp_path / "d.json"
        export_decomposition(D, path)
        back = import_decomposition(path)
        assert back == D
        for mode in modes:
            assert verify_decomposition(P, back, mode)


def test_reference_table_check(data_dir, tmp_path):
    rep = verify_reference_table(data_dir / "g23_synthetic.json")
    assert rep.matches and rep.rank_vector == (1, 15, 15, 1) and rep.gamma_vector == (1, 12)
    rep = verify_reference_table(data_dir / "g23_synthetic.json", group="G28")
    assert not rep.matches and len(rep.mismatches) == 2
    L = standard_lattice(5, 3)
    path = tmp_path / "g553.json"
    export_poset(L.poset, path, {"family": "gddn", "d": 5, "n": 3})
    data = json.loads(path.read_text())
    data["expected"] = {"rank_vector": [1, 12, 12, 1], "gamma_vector": [1, 9]}
    path.write_text(json.dumps(data))
    assert verify_reference_table(path).matches
    with pytest.raises(SchemaError):
        verify_reference_table(data_dir / "poset12.json")
