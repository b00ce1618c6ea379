import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from semiclassical.config import load_config, loads_config
from semiclassical.errors import ValidationError
from semiclassical.expr import names_in, parse
from semiclassical.polynomial import Polynomial
from semiclassical.selftest import fixture, fixture_path

FIXTURES = sorted(p.stem for p in fixture_path("qplane").parent.glob("*.json"))


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip(name):
    cfg = fixture(name)
    again = loads_config(cfg.dumps())
    assert again.same_presentation(cfg)
    assert again.dumps() == cfg.dumps()


def test_load_config_errors(tmp_path):
    with pytest.raises(ValidationError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    with pytest.raises(ValidationError):
        load_config(bad)
    with pytest.raises(ValidationError):
        loads_config("[1, 2]")


def doc(**algebra):
    return {"name": "t", "algebra": dict({"kind": "poisson_affine", "generators": ["x", "y"],
                                         "pi": [["0", "1"], ["-1", "0"]]}, **algebra)}


def test_validation_errors():
    cases = [
        doc(kind="nope"),
        doc(generators=["x", "x"]),
        doc(pi=[["0", "1"]]),
        dict(doc(), parameters={"free": ["x"]}),
        dict(doc(), symbols=["x"]),
        {"name": "t", "parameters": {"free": ["q"]}, "symbols": ["q"], "algebra": doc()["algebra"]},
        {"name": "t", "parameters": {"free": ["q"]},
         "algebra": {"kind": "qaffine", "generators": ["x", "y"],
                     "relations": [{"left": "x", "right": "y", "coefficient": "q + 1"}]}},
        {"name": "t", "parameters": {"free": ["q"]},
         "algebra": {"kind": "qaffine", "generators": ["x", "y"],
                     "relations": [{"left": "x", "right": "x", "coefficient": "q"}]}},
        {"name": "t", "parameters": {"free": ["q"]}, "dual": {"r": "1"},
         "algebra": {"kind": "qaffine", "generators": ["x", "y"],
                     "relations": [{"left": "x", "right": "y", "coefficient": "q"}]}},
    ]
    for d in cases:
        with pytest.raises(ValidationError):
            loads_config(json.dumps(d))


def test_unknown_name_in_expression():
    cfg = fixture("ex38")
    with pytest.raises(ValidationError):
        cfg.polynomial("x1 + beta")
    with pytest.raises(ValidationError):
        cfg.polynomial("x1^-1")


def test_polynomial_with_values():
    cfg = fixture("ex38")
    f = cfg.polynomial("alpha*x1 - 1/2", {"alpha": 3})
    assert f == Polynomial(3, {(1, 0, 0): Fraction(3), (0, 0, 0): Fraction(-1, 2)})


def test_decimal_numbers_rejected():
    d = doc(pi=[["0", "0.5"], ["-0.5", "0"]])
    with pytest.raises(ValidationError):
        loads_config(json.dumps(d))


def test_log_linear_matrix():
    assert [list(r) for r in fixture("pplane").log_linear_matrix()] == [[0, 1], [-1, 0]]
    with pytest.raises(ValidationError):
        fixture("ex38").log_linear_matrix()


def test_limit_needs_quantized_algebra():
    with pytest.raises(ValidationError):
        fixture("pplane").limit()
    with pytest.raises(ValidationError):
        fixture("mqp").limit()


# expression parser

@pytest.mark.parametrize("text", ["", "x +", "(x", "x^y", "x ^ 1.5", "x $ y", "*x", "x)"])
def test_parse_errors(text):
    with pytest.raises(ValidationError):
        parse(text)


def test_parse_names_and_precedence():
    assert names_in(parse("(a - b)*c^-2 + 3/4")) == {"a", "b", "c"}
    cfg = fixture("ex38")
    assert cfg.polynomial("x1 - x2*x3^2") == cfg.polynomial("-(x3^2*x2) + x1")
    assert cfg.polynomial("2*x1^2") == cfg.polynomial("x1*x1*2")
    with pytest.raises(ValidationError):
        parse(3)


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(0, 3), st.integers(0, 3)), max_size=4))
def test_printed_polynomials_parse_back(terms):
    cfg = fixture("pplane")
    f = Polynomial(2, {})
    for c, a, b in terms:
        f = f + Polynomial.monomial((a, b), Fraction(c))
    assert cfg.polynomial(f.format(cfg.generators) if f else "0") == f
