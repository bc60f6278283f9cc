"""Base, algebroid, Hopf and integral structure: frozen values and algebraic laws."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_instance
from dqg import base as bs
from dqg import integrals as ig
from dqg.algebroid import legwise_product
from dqg.base import InvalidInstance
from dqg.builders import example_crossed, example_group_algebra, example_pair
from dqg.exactlin import ONE, gq

coef = st.builds(gq, st.integers(-3, 3), st.integers(-2, 2))


def elements(dim):
    return st.dictionaries(st.integers(0, dim - 1), coef, max_size=dim).map(
        lambda d: {k: v for k, v in d.items() if v})


def on(name):
    inst = fixture_instance(name)
    return inst, elements(inst.dim)


# base ------------------------------------------------------------------------

def test_crossed_cocycle_values(C):
    # D_g(x) = w(x) / w(g x) with w = (1, 4, 1) and g swapping the first two points
    d = C.base.cocycle
    assert [str(v) for v in d.d[1]] == ["1/4", "4", "1"]
    assert [str(v) for v in d.d_half[1]] == ["1/2", "2", "1"]


def test_non_square_ratio_rejected():
    with pytest.raises(InvalidInstance):
        example_crossed(weight=("1", "2", "1"))


@pytest.mark.parametrize("weight", [("0", "1"), ("-1", "1")])
def test_nonpositive_weight_rejected(weight):
    with pytest.raises(InvalidInstance):
        example_pair(weight=weight)


def test_base_checks_pass(C):
    assert bs.cocycle_defect(C.base) is None
    assert bs.cocycle_law_defect(C.base) is None
    assert bs.sqrt_conditions_defect(C.base) is None
    assert bs.quasi_invariance_defect(C.base) is None


def test_bad_group_table_reported():
    g = bs.Group(("e", "a"), ((0, 1), (1, 1)))
    assert g.problems()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([1, 4, 9, 16]), min_size=2, max_size=4), st.integers(1, 5))
def test_square_ratio_weights_always_give_a_crossed_instance(squares, scale):
    # weights whose ratios on a swapped pair are rational squares
    w = [str(s * scale) for s in squares]
    inst = example_crossed(points=tuple(str(i) for i in range(len(w))), weight=w)
    assert inst.valid
    assert bs.cocycle_law_defect(inst.base) is None


# algebra and fiber products ---------------------------------------------------

def test_dimensions():
    assert [fixture_instance(n).dim for n in ("T", "C", "G2", "S3")] == [4, 6, 2, 6]


def test_fiber_product_dimensions():
    # C: only degrees (g, g) occur, and balancing over B leaves one copy of B per group element
    dims = {n: fixture_instance(n).hopf.fiber.dim for n in ("T", "C", "G2", "S3")}
    assert dims == {"T": 8, "C": 6, "G2": 4, "S3": 36}


def test_pair_degenerate_one_point():
    t1 = example_pair(points=("1",))
    assert t1.dim == 1
    assert fixture_instance("T").valid and t1.valid


def test_trivial_group_algebra_is_one_dimensional():
    g1 = example_group_algebra(bs.cyclic_group(1))
    assert g1.dim == 1 and g1.hopf.fiber.dim == 1


@pytest.mark.parametrize("name", ["T", "C", "S3"])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_star_algebra_laws(name, data):
    inst, el = on(name)
    A = inst.algebra
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
    assert A.star(A.mul(a, b)) == A.mul(A.star(b), A.star(a))
    assert A.star(A.star(a)) == a
    assert A.mul(A.unit, a) == a == A.mul(a, A.unit)


@pytest.mark.parametrize("name", ["T", "C", "S3", "Sw"])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_hopf_laws_on_random_elements(name, data):
    inst, el = on(name)
    A, H = inst.algebra, inst.hopf
    a, b = data.draw(el), data.draw(el)
    ab = A.mul(a, b)
    # comultiplication is multiplicative in the fiber product
    assert H.fiber.equal(H.Delta(ab), legwise_product(A, H.Delta(a), H.Delta(b)))
    # antipode is anti-multiplicative and invertible
    assert H.S(ab) == A.mul(H.S(b), H.S(a))
    assert H.S_inv(H.S(a)) == a


@pytest.mark.parametrize("name", ["T", "C", "S3"])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_star_antipode_involutive(name, data):
    inst, el = on(name)
    A, H = inst.algebra, inst.hopf
    a = data.draw(el)
    assert A.star(H.S(A.star(H.S(a)))) == a


# integrals and modular data -----------------------------------------------------

def test_theta_closed_form_on_crossed(C):
    # theta(delta_x g) = w(x) / w(g^-1 x) delta_x g, from the weights alone
    w = C.base.weight
    G = C.base.group
    n = C.base.n
    for i in range(C.dim):
        g, x = divmod(i, n)
        expected = {i: gq(w[x] / w[C.base.action[G.inv(g)][x]])}
        assert C.integrals.theta({i: ONE}) == expected
    assert ig.theta_closed_form_crossed(C.integrals) == C.integrals.theta_table


@pytest.mark.parametrize("name", ["T", "G2", "S3"])
def test_theta_trivial_on_tracial_instances(name):
    inst = fixture_instance(name)
    assert all(inst.integrals.theta({i: ONE}) == {i: ONE} for i in range(inst.dim))


def test_pair_with_three_weights_keeps_theta_trivial():
    # nu is a trace on a commutative algebra
    t3 = example_pair(points=("1", "2", "3"), weight=("1", "2", "3"))
    assert all(t3.integrals.theta({i: ONE}) == {i: ONE} for i in range(t3.dim))
    assert ig.modular_integrals_defect(t3.integrals) is None


@pytest.mark.parametrize("name", ["C", "S3"])
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_theta_is_modular_automorphism(name, data):
    inst, el = on(name)
    A, I = inst.algebra, inst.integrals
    a, b = data.draw(el), data.draw(el)
    assert I.theta(A.mul(a, b)) == A.mul(I.theta(a), I.theta(b))
    assert I.nu(A.mul(a, b)) == I.nu(A.mul(b, I.theta(a)))


@pytest.mark.parametrize("seed", range(3))
def test_constructive_elements_twenty_samples(C, seed):
    assert ig.constructive_defect(C.integrals, samples=20, seed=seed) is None


def test_constructive_elements_by_hand(C):
    rng = random.Random(7)
    A, I = C.algebra, C.integrals
    for _ in range(5):
        c, d = ig.random_element(A, rng), ig.random_element(A, rng)
        a, a2 = ig.constructive_elements(I, c, d)
        for k in range(A.dim):
            z = A.basis(k)
            assert I.nu(A.mul(z, a)) == I.nu(A.mul(a2, z))


def test_sweedler_antipode_square_is_not_identity(Sw):
    H = Sw.hopf
    x = Sw.algebra.labels.index("x")
    assert H.S(H.S({x: ONE})) == {x: gq(-1)}


def test_modular_delta_detects_identity_square(Sw):
    # the relation needs the true S^2; the identity in its place is caught
    I = Sw.integrals
    assert ig.modular_delta_defect(I) is None
    assert ig.modular_delta_defect(I, antipode_square=lambda a: a) is not None
