import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import box_solutions, saturation_agrees
from semiclassical.core.field import format_field, inverse, symbols, to_field
from semiclassical.core.groups import DualScalar, GroupScalar, ParamGroup, dual_of
from semiclassical.core.lattice import (determinant, diagonal, hermite_normal_form, in_lattice, is_primitive,
                                        kernel_lattice, matmul, saturate, smith_normal_form)
from semiclassical.errors import ValidationError, ZeroDivisorInverse

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


# Smith normal form

def test_snf_identity():
    I = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert smith_normal_form(I) == (I, I, I)


def test_snf_hand_example():
    _, D, _ = smith_normal_form([[2, 4], [6, 8]])
    assert diagonal(D) == [2, 4]


def test_snf_zero():
    _, D, _ = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert D == ((0, 0, 0), (0, 0, 0))


@given(matrices())
def test_snf_invariants(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, D), V) == tuple(map(tuple, M))
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    d = diagonal(D)
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz  # zeros come last
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


# Hermite form and saturation

def test_hnf_is_canonical():
    assert hermite_normal_form([[2, 4], [1, 1]]) == hermite_normal_form([[1, 1], [0, 2]])
    assert hermite_normal_form([[0, 0]]) == ()


def test_saturate():
    assert saturate([[2, 4, 6]]) == ((1, 2, 3),)
    assert is_primitive([[1, 2, 3]]) and not is_primitive([[2, 4, 6]])


@given(matrices(3, 4))
def test_saturation_contains_lattice(M):
    S = saturate(M)
    H = hermite_normal_form(M, len(M[0]))
    assert all(in_lattice(v, S) for v in H)
    assert is_primitive(S)


# kernels

def test_kernel_example_99_matrix():
    assert kernel_lattice([[0, -1, -2], [1, 0, -1], [2, 1, 0]]) == ((1, -2, 1),)


def test_kernel_identity_is_trivial():
    assert kernel_lattice([[1, 0], [0, 1]]) == ()


def test_kernel_torsion_congruence():
    # m1 + m2 = 0 mod 2 gives an index-2 lattice, which is not saturated
    K = kernel_lattice([[1, 1]], [2])
    assert len(K) == 2 and abs(determinant(K)) == 2
    assert in_lattice((1, 1), K) and not in_lattice((1, 0), K)


def test_kernel_without_rows_is_everything():
    assert kernel_lattice([], ncols=2) == ((1, 0), (0, 1))


def antisymmetric(n, bound=2):
    return st.lists(st.integers(-bound, bound), min_size=n * (n - 1) // 2,
                    max_size=n * (n - 1) // 2).map(lambda vals: _antisym(n, vals))


def _antisym(n, vals):
    M = [[0] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            M[i][j] = next(it)
            M[j][i] = -M[i][j]
    return M


def _kills(M):
    return lambda m: not any(sum(a * b for a, b in zip(row, m)) for row in M)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(antisymmetric))
def test_kernel_matches_box_oracle(M):
    K = kernel_lattice(M)
    assert all(_kills(M)(v) for v in K)
    assert saturation_agrees(K, box_solutions(len(M), _kills(M)))


@given(matrices(3, 4), st.lists(st.sampled_from([0, 2, 3]), min_size=3, max_size=3))
def test_kernel_vectors_solve_system(M, moduli):
    moduli = moduli[:len(M)]
    K = kernel_lattice(M, moduli)
    for v in K:
        for row, l in zip(M, moduli):
            s = sum(a * b for a, b in zip(row, v))
            assert (s % l == 0) if l else s == 0


# coefficient field

def test_field_canonical_form():
    (a,) = symbols(["alpha"])
    assert (a ** 2 - 1) / (a - 1) == a + 1
    assert (1 - a) / (-a - 1) == (a - 1) / (a + 1)
    assert format_field((1 - a) / (1 + a)) == format_field((a - 1) / (-a - 1))


def test_to_field_and_inverse():
    assert to_field(3) == Fraction(3)
    assert to_field("2/4") == Fraction(1, 2)
    with pytest.raises(TypeError):
        to_field(True)
    with pytest.raises(ZeroDivisionError):
        inverse(Fraction(0))


def test_field_axioms_on_random_triples():
    a, b = symbols(["a", "b"])
    atoms = [a, b, a + 1, a - b, 2 * b, a * b, Fraction(3, 2), Fraction(-1)]
    rng = random.Random(0)

    def draw():
        x = rng.choice(atoms)
        for _ in range(rng.randint(0, 2)):
            op, y = rng.randrange(3), rng.choice(atoms)
            x = x + y if op == 0 else x * y if op == 1 else x - y
        return to_field(x)

    for _ in range(1000):
        x, y, z = draw(), draw(), draw()
        assert (x * y) * z == x * (y * z)
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z
        if x != 0:
            assert x * inverse(x) == 1


# parameter group and scalars

def test_param_group_validation():
    with pytest.raises(ValidationError):
        ParamGroup(("q", "q"))
    with pytest.raises(ValidationError):
        ParamGroup(("q",), (("s", 1),))


def test_torsion_exponents_are_reduced():
    G = ParamGroup(("q",), (("s", 3),))
    g = G.element((1,), (5,))
    assert g.torsion_exponents == (2,)
    assert (g * g * g).exponents == (3,) and (g * g * g).torsion_exponents == (0,)
    assert (g * g.inverse()).is_identity()


def test_group_scalar_arithmetic():
    G = ParamGroup(("q",))
    q = GroupScalar.from_element(G.gen("q"))
    x = q - q.inverse()
    assert x * (q + q.inverse()) == q * q - q.inverse() * q.inverse()
    assert q.is_unit() and not x.is_unit()
    assert not (x - x).terms


def test_dual_specialization_of_scalars():
    G = ParamGroup(("q",))
    q = GroupScalar.from_element(G.gen("q"))
    d = dual_of(q, {"q": 1})
    assert (d.value, d.deriv) == (1, 1)
    d = dual_of(q - q.inverse(), {"q": 1})
    assert (d.value, d.deriv) == (0, 2)


def test_dual_specialization_two_parameters():
    (alpha,) = symbols(["alpha"])
    G = ParamGroup(("z", "za"))
    z, za = (GroupScalar.from_element(G.gen(s)) for s in ("z", "za"))
    d = dual_of(z - za, {"z": 1, "za": alpha})
    assert d.value == 0 and d.deriv == 1 - alpha


def test_dual_scalar_laws():
    eps = DualScalar(0, 1)
    sq = eps * eps
    assert (sq.value, sq.deriv) == (0, 0)
    with pytest.raises(ZeroDivisorInverse):
        eps.inverse()


@given(st.fractions(max_denominator=5).filter(bool), st.fractions(max_denominator=5))
def test_dual_inverse(a, b):
    x = DualScalar(a, b)
    y = x * x.inverse()
    assert (y.value, y.deriv) == (1, 0)
    assert (x.inverse().value, x.inverse().deriv) == (1 / a, -b / a ** 2)
