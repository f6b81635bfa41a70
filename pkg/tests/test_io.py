import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from steklov import serialization as ser
from steklov.charpoly import TrigPoly, char_poly
from steklov.config import RunConfig, load_config
from steklov.errors import AngleSumError, DomainError, SchemaError
from steklov.numerics import Angle
from steklov.polygon import make_parallelogram, make_rectangle, make_regular, triangle_from_angles

A = Angle.exact

FIXTURES = {
    "square": make_rectangle(F(1, 4)),
    "rect16": make_rectangle(F(1, 6)),
    "rhombus": make_parallelogram(F(1, 4), A(2, 3)),
    "triangle": make_regular(3),
    "pentagon": make_regular(5),
    "scalene_pair": triangle_from_angles(A(1, 3), A(1, 15), A(3, 5)),
    "iso_pair": triangle_from_angles(A(1, 5), A(1, 5), A(3, 5)),
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_polygon_round_trip(name):
    p = FIXTURES[name]
    text = ser.dumps(ser.polygon_to_dict(p))
    q = ser.polygon_from_dict(json.loads(text))
    assert q.lengths == p.lengths and q.angles == p.angles and q.kinds == p.kinds
    P = char_poly(q)
    back = ser.poly_from_dict(json.loads(ser.dumps(ser.poly_to_dict(P))))
    assert back == P


def test_poly_csv_round_trip():
    P = char_poly(make_regular(5))
    assert ser.poly_from_csv(ser.poly_to_csv(P)) == P
    assert ser.poly_to_csv(char_poly(make_rectangle(F(1, 4)))) == "freq,coef\n0,3\n1/2,4\n1,1\n"


def test_square_json_text():
    d = json.loads(ser.dumps(ser.poly_to_dict(char_poly(make_rectangle(F(1, 4))))))
    assert d == {"terms": [{"freq": "1/2", "coef": "4"}, {"freq": "1", "coef": "1"}], "const": "3"}


def test_float_precision():
    x = 0.1 + 0.2
    out = ser.dumps({"x": x})
    assert json.loads(out)["x"] == x
    assert "0.30000000000000004" in out


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip(x):
    assert json.loads(ser.dumps([x]))[0] == x


def test_schema_errors():
    with pytest.raises(SchemaError):
        ser.polygon_from_dict({"n": 3})
    with pytest.raises(SchemaError):
        ser.polygon_from_dict({"n": 3, "edges": [{"len": 1}] * 2, "angles": [{"pi_mult": "1/3"}] * 3})
    with pytest.raises(SchemaError):
        ser.polygon_from_dict({"n": 3, "edges": [{"len": 1, "kind": "wavy"}] * 3, "angles": [{"pi_mult": "1/3"}] * 3})
    with pytest.raises(SchemaError):
        ser.polygon_from_dict({"n": 3, "edges": [{"len": "x"}] * 3, "angles": [{"pi_mult": "1/3"}] * 3})
    with pytest.raises(SchemaError):
        ser.poly_from_dict({"terms": []})
    with pytest.raises(SchemaError):
        ser.poly_from_csv("a,b\n1,2\n")


def test_invariant_errors_pass_through():
    with pytest.raises(AngleSumError):
        ser.polygon_from_dict({"n": 3, "edges": [{"len": 1}] * 3, "angles": [{"pi_mult": "1/2"}] * 3})
    with pytest.raises(DomainError):
        ser.polygon_from_dict({"n": 3, "edges": [{"len": 1}] * 3, "angles": [{"pi_mult": "1"}] * 3})
    with pytest.raises(DomainError):
        ser.polygon_from_dict(
            {"n": 3, "edges": [{"len": 1}] * 3, "angles": [{"pi_mult": "1/3"}] * 3, "perimeter": 2}
        )


def test_radian_angles():
    p = ser.polygon_from_dict({"n": 3, "edges": [{"len": 1}] * 3, "angles": [{"rad": math.pi / 3}] * 3})
    assert not p.angles[0].is_exact


def test_config_defaults_and_validation(tmp_path):
    cfg = RunConfig()
    assert cfg.poly_tol == 1e-12 and cfg.congruence_tol == 1e-9 and cfg.closure_tol == 1e-10
    with pytest.raises(SchemaError):
        RunConfig(poly_tol=0)
    with pytest.raises(SchemaError):
        RunConfig(q_max=2.5)
    with pytest.raises(SchemaError):
        RunConfig(format="xml")
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"q_max": 20, "format": "csv"}))
    cfg = load_config(str(path))
    assert cfg.q_max == 20 and cfg.format == "csv"
    path.write_text(json.dumps({"qmax": 20}))
    with pytest.raises(SchemaError):
        load_config(str(path))


def test_config_env(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"horizon": 12.5}))
    monkeypatch.setenv("STEKLOV_CONFIG", str(path))
    assert load_config().horizon == 12.5
    monkeypatch.delenv("STEKLOV_CONFIG")
    assert load_config() == RunConfig()


def test_mixed_poly_serialization():
    P = TrigPoly.build([(F(1, 5), 105 / 16), (F(1), F(1))], F(-1, 32))
    d = json.loads(ser.dumps(ser.poly_to_dict(P)))
    assert d["terms"][0]["freq"] == "1/5" and d["terms"][0]["coef"] == 6.5625
    assert ser.poly_from_dict(d) == P
