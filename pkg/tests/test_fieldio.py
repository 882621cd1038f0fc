import json

import numpy as np
import pytest

from causal2d.errors import FieldFormatError, ParseError
from causal2d.fieldio import (
    field_from_dict,
    field_to_dict,
    load_field,
    load_map,
    plane_map_from_dict,
    sample_expression,
    save_field,
    testfn_from_dict,
    write_json_atomic,
)
from causal2d.geometry import Grid2D, Rect, SampledField2D
from causal2d.pairing import pair


def demo_field(n=16):
    grid = Grid2D(Rect(-1, 1, -1, 1), n, n)
    return SampledField2D.from_function(grid, lambda U, V: U**2 + np.sin(V))


def test_field_json_roundtrip(tmp_path):
    f = demo_field()
    p = tmp_path / "field.json"
    save_field(f, p)
    g = load_field(p)
    assert g.grid == f.grid
    np.testing.assert_array_equal(g.values, f.values)


def test_field_csv_roundtrip(tmp_path):
    f = demo_field()
    p = tmp_path / "field.csv"
    save_field(f, p)
    g = load_field(p)
    assert g.grid.rect == f.grid.rect
    np.testing.assert_allclose(g.values, f.values, rtol=0, atol=1e-15)


def test_field_dict_row_major_layout():
    f = demo_field(4)
    d = field_to_dict(f)
    # index i*nv + j holds the value at (u_i, v_j)
    assert d["values"][1 * 4 + 2] == f.values[1, 2]
    g = field_from_dict(d)
    np.testing.assert_array_equal(g.values, f.values)


def test_field_bad_inputs(tmp_path):
    with pytest.raises(FieldFormatError):
        load_field(tmp_path / "missing.json")
    p = tmp_path / "bad.json"
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(FieldFormatError):
        load_field(p)
    with pytest.raises(FieldFormatError):
        field_from_dict({"rect": [0, 1, 0, 1], "nu": 3, "nv": 3, "values": [1, 2]})
    csv = tmp_path / "bad.csv"
    csv.write_text("1,2\n3,4\n", encoding="utf-8")
    with pytest.raises(FieldFormatError):
        load_field(csv)


def test_sample_expression_matches_direct_sampling():
    f = sample_expression("u^2+sin(v)", Rect(-1, 1, -1, 1), 32)
    U, V = f.grid.meshgrid()
    np.testing.assert_allclose(f.values, U**2 + np.sin(V), atol=1e-15)


def test_sample_expression_domain_fault():
    from causal2d.errors import EvalError

    # odd resolution puts a node exactly on the pole
    with pytest.raises(EvalError):
        sample_expression("1/u", Rect(-1, 1, -1, 1), 17)


def test_testfn_specs():
    f = demo_field(64)
    tensor = testfn_from_dict(
        {"kind": "tensor", "u": {"center": 0.0, "radius": 0.4},
         "v": {"center": 0.1, "radius": 0.3}}
    )
    assert tensor.integral == pytest.approx(1.0, rel=1e-12)
    same = testfn_from_dict({"kind": "bump", "center": 0.0, "radius": 0.4})
    assert pair(f, same) == pytest.approx(pair(f, same))
    raw = testfn_from_dict({"kind": "bump", "center": 0.0, "radius": 0.4, "amplitude": 2.0})
    assert raw.integral != pytest.approx(1.0)
    with pytest.raises(FieldFormatError):
        testfn_from_dict({"kind": "blob"})
    with pytest.raises(FieldFormatError):
        testfn_from_dict({"kind": "bump", "center": 0.0})


def test_split_map_from_expressions():
    obj = {
        "kind": "split",
        "orientation": "increasing",
        "phi": {"expr": "u^3+u"},
        "psi": {"expr": "2*v+1"},
        "domain": [-1, 1, -1, 1],
    }
    F = plane_map_from_dict(obj)
    assert F.kind == "split-increasing"
    S, T = F.forward(np.array([0.5]), np.array([0.0]))
    assert S[0] == pytest.approx(0.625) and T[0] == pytest.approx(1.0)


def test_split_map_decreasing_with_table():
    xs = np.linspace(-1, 1, 21)
    obj = {
        "kind": "split",
        "orientation": "decreasing",
        "phi": {"expr": "-s"},
        "psi": {"table": [[float(x), float(-x**3 - 0.5 * x)] for x in xs]},
        "domain": [-1, 1, -1, 1],
    }
    F = plane_map_from_dict(obj)
    assert F.kind == "split-decreasing-swapped"
    assert F.roundtrip_error() < 1e-6


def test_split_map_orientation_mismatch():
    obj = {
        "kind": "split",
        "orientation": "decreasing",
        "phi": {"expr": "s"},
        "psi": {"expr": "s"},
        "domain": [-1, 1, -1, 1],
    }
    with pytest.raises(FieldFormatError):
        plane_map_from_dict(obj)


def test_split_map_syntax_error_propagates():
    obj = {
        "kind": "split",
        "orientation": "increasing",
        "phi": {"expr": "u+"},
        "psi": {"expr": "v"},
        "domain": [-1, 1, -1, 1],
    }
    with pytest.raises(ParseError):
        plane_map_from_dict(obj)


def test_general_map_with_inverse():
    obj = {
        "kind": "general",
        "sigma": {"expr": "u+v"},
        "tau": {"expr": "v"},
        "inverse": {"u": {"expr": "u-v"}, "v": {"expr": "v"}},
        "domain": [-1, 1, -1, 1],
        "codomain": [-0.6, 0.6, -0.4, 0.4],
    }
    F = plane_map_from_dict(obj)
    assert F.roundtrip_error() < 1e-12
    with pytest.raises(FieldFormatError):
        plane_map_from_dict({**obj, "codomain": None})
    with pytest.raises(FieldFormatError):
        plane_map_from_dict({k: v for k, v in obj.items() if k != "inverse"})


def test_table_must_cover_domain():
    obj = {
        "kind": "split",
        "orientation": "increasing",
        "phi": {"table": [[-0.5, -0.5], [0.5, 0.5]]},
        "psi": {"expr": "v"},
        "domain": [-1, 1, -1, 1],
    }
    with pytest.raises(FieldFormatError):
        plane_map_from_dict(obj)


def test_load_map_file(tmp_path):
    p = tmp_path / "map.json"
    p.write_text(json.dumps({
        "kind": "split", "orientation": "increasing",
        "phi": {"expr": "u"}, "psi": {"expr": "v"},
        "domain": [-1, 1, -1, 1],
    }), encoding="utf-8")
    F = load_map(p)
    assert F.roundtrip_error() < 1e-12


def test_atomic_write_creates_parents(tmp_path):
    target = tmp_path / "deep" / "report.json"
    write_json_atomic({"x": 1}, target)
    assert json.loads(target.read_text(encoding="utf-8")) == {"x": 1}
