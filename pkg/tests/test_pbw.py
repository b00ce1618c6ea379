import copy
import json
import random

import pytest

from semiclassical.config import loads_config
from semiclassical.core.groups import GroupScalar, ParamGroup
from semiclassical.core.rings import FieldRing, GroupRing
from semiclassical.errors import DegreeBoundExceeded, MathError, NotCommutativeLimit, ValidationError
from semiclassical.pbw import (PBWPresentation, check_confluence, commutative_laurent_rank, dual_specialize,
                               quotient_by_generators, semiclassical_bracket)
from semiclassical.poisson import jacobi_check
from semiclassical.selftest import CONFLUENT_FIXTURES, _random_element, fixture

GROUP_FIXTURES = ("qplane", "oq3", "multiparam", "sl2", "mqp", "gl2", "ex99")


def variant(name, edit):
    doc = copy.deepcopy(fixture(name).to_document())
    edit(doc)
    return loads_config(json.dumps(doc))


def quantum_matrices():
    """O_t(M2): the SL2 fixture without the determinant rule."""
    def edit(doc):
        del doc["algebra"]["rules"]
        doc.pop("guided", None)
    return variant("sl2", edit)


def t_scalar(p, k=1):
    return GroupScalar.from_element(p.ring.group.element((k,)))


# normal forms

def test_quantum_plane_swap():
    p = fixture("qplane").pbw
    assert p.normal_form("x2*x1") == p.element({(1, 1): t_scalar(p, -1)})
    assert str(p.normal_form("x2 x1")) == "q^-1*x1*x2"


def test_quantum_matrix_swap_of_diagonal():
    p = quantum_matrices().pbw
    t = t_scalar(p)
    expected = p.element({(1, 0, 0, 1): 1, (0, 1, 1, 0): -(t - t.inverse())})
    assert p.normal_form("X22*X11") == expected


def test_single_generator_is_standard():
    for name in ("sl2", "gl2", "ex38"):
        p = fixture(name).pbw
        for i, g in enumerate(p.names):
            assert p.normal_form(g) == p.gen(i)


def test_normal_form_idempotent():
    rng = random.Random(1)
    for name in ("sl2", "gl2", "mqp"):
        p = fixture(name).pbw
        for _ in range(20):
            a = _random_element(rng, p, 3)
            b = p.reduce(a)
            assert p.reduce(b) == b


def test_multiply_identity_and_commutator():
    p = quantum_matrices().pbw
    a = p.normal_form("X12*X21*X22")
    assert p.multiply(p.one(), a) == a and p.multiply(a, p.one()) == a
    t = t_scalar(p)
    X11, X22 = p.gen(0), p.gen(3)
    assert X11 * X22 - X22 * X11 == p.element({(0, 1, 1, 0): t - t.inverse()})


def test_sl2_determinant_rule():
    p = fixture("sl2").pbw
    t = t_scalar(p)
    D = p.normal_form("X11*X22") - p.normal_form("X12*X21") * t
    assert D == p.one()


def test_gl2_determinant_is_normal():
    cfg = fixture("gl2")
    p = cfg.pbw
    z, za = (GroupScalar.from_element(p.ring.group.gen(s)) for s in ("z", "za"))
    X = {g: p.gen(cfg.index[g]) for g in ("X11", "X12", "X21", "X22")}
    d = p.gen(cfg.index["d"])
    D = X["X11"] * X["X22"] - X["X12"] * X["X21"] * z
    assert D * d == p.one() and d * D == p.one()
    for name, i, j in (("X11", 1, 1), ("X12", 1, 2), ("X21", 2, 1), ("X22", 2, 2)):
        scale = (z * za) ** (i - j) if i >= j else (z * za).inverse() ** (j - i)
        assert X[name] * D == D * X[name] * scale


def test_associativity_on_fixtures():
    rng = random.Random(2)
    for name in ("sl2", "gl2", "mqp", "oq3", "ex38", "multiparam"):
        p = fixture(name).pbw
        for _ in range(15):
            a, b, c = (_random_element(rng, p) for _ in range(3))
            assert (a * b) * c == a * (b * c)


def test_degree_cap():
    p = PBWPresentation(["x", "y"], FieldRing(), degree_cap=3)
    with pytest.raises(DegreeBoundExceeded):
        p.normal_form("x x y y")


def test_step_counter_stays_bounded():
    p = fixture("gl2").pbw.fresh()
    rng = random.Random(3)
    for _ in range(20):
        a, b = (_random_element(rng, p, 3) for _ in range(2))
        a * b
    assert 0 < p.stats()["steps"] < 100_000


# validation

def test_tail_must_be_lower():
    ring = FieldRing()
    with pytest.raises(ValidationError):
        PBWPresentation(["x", "y"], ring, tails={(0, 1): {(2, 0): 1}})


def test_rule_must_be_oriented():
    ring = FieldRing()
    with pytest.raises(ValidationError):
        PBWPresentation(["x", "y"], ring, rules=[((1, 0), {(0, 2): 1})])


def test_inverted_generators_have_no_tails():
    ring = FieldRing()
    with pytest.raises(ValidationError):
        PBWPresentation(["x", "y"], ring, tails={(0, 1): {(0, 0): 1}}, inverted=[0])


def test_swap_must_be_unit():
    G = ParamGroup(("q",))
    q = GroupScalar.from_element(G.gen("q"))
    with pytest.raises(ValidationError):
        PBWPresentation(["x", "y"], GroupRing(G), swap={(0, 1): q - 1})


# confluence

def test_confluence_ok_on_fixtures():
    assert check_confluence(fixture("qplane").pbw, 3) is None
    for name in CONFLUENT_FIXTURES:
        assert check_confluence(fixture(name).pbw, 4) is None, name


def test_confluence_detects_corrupted_rule():
    # the determinant rule with t replaced by t^2
    def edit(doc):
        doc["algebra"]["rules"] = [{"lhs": "X11*X22", "rhs": "1 + t^2*X12*X21"}]
        doc.pop("guided", None)
    cx = check_confluence(variant("sl2", edit).pbw, 4)
    assert cx is not None and cx.nf1 != cx.nf2
    assert check_confluence(fixture("sl2_corrupt").pbw, 4) is not None


# limits

def test_dual_specialize_requires_group_scalars():
    with pytest.raises(ValidationError):
        dual_specialize(fixture("ex38").pbw, {})
    with pytest.raises(ValidationError):
        dual_specialize(fixture("qplane").pbw, {"nope": 1})


def test_weyl_algebra_has_no_commutative_limit():
    doc = {"name": "weyl", "parameters": {"free": ["q"]},
           "algebra": {"kind": "pbw", "generators": ["x", "y"],
                       "relations": [{"left": "x", "right": "y", "coefficient": "1", "tail": "1"}]},
           "dual": {"q": "1"}}
    with pytest.raises(NotCommutativeLimit):
        loads_config(json.dumps(doc)).limit()


def test_zero_derivatives_give_zero_bracket():
    for name in GROUP_FIXTURES:
        p = fixture(name).pbw
        S = semiclassical_bracket(dual_specialize(p, {g: 0 for g in p.ring.group.free}))
        assert not S.table, name


def test_limits_satisfy_jacobi():
    for name in ("qplane", "oq3", "multiparam", "sl2", "gl2", "ex99", "ex38", "sl2_lie"):
        S = fixture(name).limit()
        assert jacobi_check(S) is None, name
        for (i, j), P in S.table.items():
            assert S.entry(j, i) == -P


def test_quantum_plane_limit():
    S = fixture("qplane").limit()
    assert S.entry(0, 1) == S.variable(0) * S.variable(1)


# quotients

def test_sl2_quotient_is_laurent_rank_one():
    q = quotient_by_generators(fixture("sl2").pbw, ["X12", "X21"])
    assert q.names == ("X11", "X22")
    L = commutative_laurent_rank(q)
    assert L.rank == 1 and L.saturated


def test_gl2_quotient_is_laurent_rank_two():
    L = commutative_laurent_rank(quotient_by_generators(fixture("gl2").pbw, ["X12", "X21"]))
    assert L.rank == 2 and L.saturated


def test_noncommutative_quotient_is_rejected():
    with pytest.raises(MathError):
        commutative_laurent_rank(quotient_by_generators(fixture("sl2").pbw, ["X12"]))


def test_sl2_overlaps_by_hand():
    # X11 X22 X11 = X11 (1 + t^-1 X12 X21) = (1 + t X12 X21) X11, and
    # X12 X21 X11 = t^-2 X11 X12 X21; symmetrically for X22 X11 X22.
    p = fixture("sl2").pbw
    ti = t_scalar(p, -1)
    assert p.normal_form("X11*X22*X11") == p.element({(1, 0, 0, 0): 1, (1, 1, 1, 0): ti})
    assert p.normal_form("X22*X11*X22") == p.element({(0, 0, 0, 1): 1, (0, 1, 1, 1): ti})
    X11, X22 = p.gen(0), p.gen(3)
    assert (X11 * X22) * X11 == X11 * (X22 * X11)
    assert (X22 * X11) * X22 == X22 * (X11 * X22)
