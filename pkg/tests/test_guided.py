import copy
import json

import pytest

from semiclassical.config import loads_config
from semiclassical.errors import MathError, ValidationError
from semiclassical.guided import guided_spectra, torus_from_pbw
from semiclassical.selftest import fixture
from semiclassical.spectra import qtorus_center


def variant(name, edit):
    doc = copy.deepcopy(fixture(name).to_document())
    edit(doc)
    return loads_config(json.dumps(doc))


def test_torus_from_pbw():
    p = fixture("sl2").pbw
    T = torus_from_pbw(p, ["X11", "X12", "X21"])
    assert T.names == ("X11", "X12", "X21")
    assert qtorus_center(T) == ((0, 1, -1),)


def test_torus_rejects_tails_and_bad_order():
    p = fixture("sl2").pbw
    with pytest.raises(MathError):
        torus_from_pbw(p, ["X11", "X22"])
    with pytest.raises(ValidationError):
        torus_from_pbw(p, ["X12", "X11"])
    with pytest.raises(ValidationError):
        torus_from_pbw(fixture("ex38").pbw, ["x1", "x2"])


def test_sl2_lines():
    lines = guided_spectra(fixture("sl2")).lines()
    assert lines[0] == "quotient by <X12, X21>: commutative Laurent algebra of rank 1"
    assert lines[1] == "T: X11*X12 = t*X12*X11, X11*X21 = t*X21*X11, X12*X21 = X21*X12; center X12*X21^-1"
    assert lines[-2:] == ["spec vs Poisson spec: ISOMORPHIC", "prim vs Poisson prim: ISOMORPHIC"]


def test_gl2_localization_lines():
    r = guided_spectra(fixture("gl2"))
    assert [loc.name for loc in r.localizations] == ["T1", "T2", "T3"]
    assert r.localizations[0].line() == ("T1 mod <X12>: X11*X21 = za^-1*X21*X11, X11*X22 = X22*X11, "
                                         "X21*X22 = z*X22*X21; simple")
    assert all(loc.simple for loc in r.localizations)


def test_gluing_must_keep_killed_variables():
    def edit(doc):
        doc["guided"]["gluing"][0]["generators"] = ["X11 - lambda", "X12", "X22 - lambda^-1"]
    with pytest.raises(ValidationError):
        guided_spectra(variant("sl2", edit))


def test_gluing_replaces_generators():
    r = guided_spectra(fixture("sl2"))
    texts = [r.quantum.node_text(i) for i in range(len(r.quantum.nodes))]
    assert "<X11 - lambda, X12, X21, X22 - lambda^-1>" in texts
    assert r.quantum.dumps() == r.poisson.dumps().replace('"kind": "poisson"', '"kind": "quantum"')


def test_missing_guided_block():
    with pytest.raises(ValidationError):
        guided_spectra(fixture("ex99"))
    with pytest.raises(ValidationError):
        guided_spectra(variant("sl2", lambda d: d["guided"].update(kill=["X99"])))
    with pytest.raises(ValidationError):
        guided_spectra(variant("sl2", lambda d: d["guided"].update(always=["X22"])))


def test_wrong_kill_set_is_a_math_error():
    # killing only X12 leaves a noncommutative quotient
    with pytest.raises(MathError):
        guided_spectra(variant("sl2", lambda d: d["guided"].update(kill=["X12"])))
