import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dqg.exactlin import (
    GramSpace, float_psd_oracle, gq, identity, inverse, is_psd_hermitian, matmul, nullspace,
    radical_quotient, rank,
)

small = st.integers(-4, 4)
rationals = st.builds(lambda p, q: gq(p) / gq(q), small, st.integers(1, 5))
gaussians = st.builds(lambda a, b: gq(a.re, b.re), rationals, rationals)


def sym(m):
    return sympy.Matrix([[sympy.Rational(int(x.re.numerator), int(x.re.denominator))
                          + sympy.I * sympy.Rational(int(x.im.numerator), int(x.im.denominator))
                          for x in row] for row in m])


def matrices(rows, cols, elems=gaussians):
    return st.lists(st.lists(elems, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def hermitian_from(m):
    n = len(m)
    return [[m[i][j] if i < j else (m[j][i].conj() if i > j else gq(m[i][i].re)) for j in range(n)]
            for i in range(n)]


# examples ------------------------------------------------------------------

def test_nullspace_of_identity_is_empty():
    assert nullspace(identity(2)) == []


def test_nullspace_of_rank_one_symmetric():
    ns = nullspace([[gq(1), gq(1)], [gq(1), gq(1)]])
    assert len(ns) == 1
    v = ns[0]
    assert v[0] == -v[1] and v[0] != 0


def test_psd_examples():
    assert is_psd_hermitian([[gq(1), gq(0), gq(0)], [gq(0), gq(4), gq(0)], [gq(0), gq(0), gq(1)]])
    assert not is_psd_hermitian([[gq(1), gq(2)], [gq(2), gq(1)]])


def test_psd_rejects_non_hermitian():
    with pytest.raises(ValueError):
        is_psd_hermitian([[gq(1), gq(2)], [gq(3), gq(1)]])


def test_gram_space_rejects_indefinite():
    with pytest.raises(ValueError):
        GramSpace([[gq(1), gq(2)], [gq(2), gq(1)]])


def test_gaussian_arithmetic():
    assert gq(1, 2) * gq(3, -1) == gq(5, 5)
    assert gq(1, 2).conj() == gq(1, -2)
    assert 1 / gq(1, 2) == gq("1/5", "-2/5")
    assert gq("3/6") == gq(1) / 2
    assert gq({"re": "1/2", "im": "-1/3"}) == gq("1/2", "-1/3")


def test_nu_gram_of_crossed_is_psd_by_both_routes(C):
    g = C.integrals.nu_gram
    assert is_psd_hermitian(g)
    assert float_psd_oracle(g)


def test_balanced_form_radical_matches_sympy(C):
    # quotient dimension of the balanced tensor form against an independent exact rank
    space = C.fundamental.P_ba.space
    assert space.quotient_dim == sym(space.gram).rank() == 12
    assert len(space.radical_basis) == 36 - 12


# properties ----------------------------------------------------------------

@given(gaussians, gaussians, gaussians)
def test_field_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).conj() == a.conj() * b.conj()
    if b:
        assert (a / b) * b == a


@settings(max_examples=40, deadline=None)
@given(matrices(3, 4))
def test_nullspace_is_kernel_with_rank_nullity(m):
    ns = nullspace(m)
    for v in ns:
        assert all(sum((m[i][j] * v[j] for j in range(4)), gq(0)) == 0 for i in range(3))
    assert rank(m) + len(ns) == 4
    assert rank(m) == sym(m).rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_psd_agrees_with_float_eigenvalues(m):
    h = hermitian_from(m)
    assert is_psd_hermitian(h) == float_psd_oracle(h)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, 3)))
def test_gram_of_vectors_is_psd_with_exact_rank(rows):
    # G = B B^H is PSD and its quotient has dimension rank(B)
    bh = [[x.conj() for x in col] for col in zip(*rows)]
    g = matmul(rows, bh)
    assert is_psd_hermitian(g)
    q = radical_quotient(g)
    assert q.quotient_dim == rank(rows)
    for v in q.radical_basis:
        assert q.is_null(v)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: matrices(n, n)))
def test_inverse_round_trip(m):
    if rank(m) < len(m):
        with pytest.raises(ZeroDivisionError):
            inverse(m)
        return
    assert matmul(m, inverse(m)) == identity(len(m))
    num = np.array([[complex(float(x.re), float(x.im)) for x in row] for row in inverse(m)])
    ref = np.linalg.inv(np.array([[complex(float(x.re), float(x.im)) for x in row] for row in m]))
    assert np.allclose(num, ref)
