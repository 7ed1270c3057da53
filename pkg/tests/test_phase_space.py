import numpy as np
import pytest
from hypothesis import given, strategies as st

from pwpq.phase_space import (
    DimSpec,
    phase_point_operator,
    phase_point_operators,
    phase_points,
    point_index,
    shift_boost,
    weyl_operator,
)
from pwpq.wigner import operator_from_wigner, wigner_of_operator

from conftest import random_hermitian

TOL = 1e-10


def parity(d):
    p = np.zeros((d, d))
    p[(-np.arange(d)) % d, np.arange(d)] = 1
    return p


def test_shift_boost_d3():
    x, z = shift_boost(3)
    expected_x = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    np.testing.assert_allclose(x, expected_x, atol=TOL)
    w = np.exp(2j * np.pi / 3)
    np.testing.assert_allclose(z, np.diag([1, w, w**2]), atol=TOL)


def test_shift_boost_order_d5():
    x, z = shift_boost(5)
    np.testing.assert_allclose(np.linalg.matrix_power(x, 5), np.eye(5), atol=TOL)
    np.testing.assert_allclose(np.linalg.matrix_power(z, 5), np.eye(5), atol=TOL)
    for m in (x, z):
        np.testing.assert_allclose(m @ m.conj().T, np.eye(5), atol=TOL)


@pytest.mark.parametrize("d", [2, 4, 1, 0, -3])
def test_rejects_bad_dimension(d):
    with pytest.raises(ValueError):
        shift_boost(d)
    with pytest.raises(ValueError):
        DimSpec((d,))


def test_weyl_examples():
    np.testing.assert_allclose(weyl_operator(3, (0, 0)), np.eye(3), atol=TOL)
    np.testing.assert_allclose(weyl_operator(3, (1, 0)), shift_boost(3)[1], atol=TOL)
    t = weyl_operator(3, (1, 1))
    x, z = shift_boost(3)
    tau = np.exp(4j * np.pi / 3)
    np.testing.assert_allclose(t, tau**-1 * z @ x, atol=TOL)
    np.testing.assert_allclose(t @ t.conj().T, np.eye(3), atol=1e-12)


def test_weyl_rejects_bad_point():
    with pytest.raises(ValueError):
        weyl_operator(3, (1, 2, 0))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_point_operators_match_displaced_parity(d):
    # independent construction: A_0 is the parity |j> -> |-j mod d>
    a = phase_point_operators(d)
    for k, (u,) in enumerate(phase_points(d)):
        t = weyl_operator(d, u)
        np.testing.assert_allclose(a[k], t @ parity(d) @ t.conj().T, atol=TOL)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_point_operator_properties(d):
    a = phase_point_operators(d)
    assert a.shape == (d * d, d, d)
    np.testing.assert_allclose(a, a.conj().transpose(0, 2, 1), atol=TOL)
    np.testing.assert_allclose(a.sum(axis=0) / d, np.eye(d), atol=TOL)
    np.testing.assert_allclose(np.einsum("kii->k", a), np.ones(d * d), atol=TOL)
    gram = np.einsum("aij,bji->ab", a, a)
    np.testing.assert_allclose(gram, d * np.eye(d * d), atol=TOL)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_transpose_closure(d):
    a = phase_point_operators(d)
    used = set()
    for k in range(d * d):
        dists = np.abs(a - a[k].T).max(axis=(1, 2))
        match = int(np.argmin(dists))
        assert dists[match] < TOL
        used.add(match)
    assert len(used) == d * d


@pytest.mark.parametrize("dims", [(3,), (5,), (3, 3)])
def test_reconstruction(dims, rng):
    spec = DimSpec(dims)
    h = random_hermitian(spec.total, rng)
    np.testing.assert_allclose(operator_from_wigner(wigner_of_operator(h, spec), spec), h, atol=1e-9)


def test_composite_is_tensor_product():
    a = phase_point_operators(3)
    for u in [(0, 0), (1, 2), (2, 1)]:
        for v in [(0, 1), (2, 2)]:
            expected = np.kron(a[point_index(3, u)], a[point_index(3, v)])
            got = phase_point_operator((3, 3), (u, v))
            np.testing.assert_allclose(got, expected, atol=TOL)
            assert abs(np.trace(got) - 1) < TOL


def test_composite_mixed_dims_order():
    a3, a5 = phase_point_operators(3), phase_point_operators(5)
    a = phase_point_operators((3, 5))
    assert a.shape == (225, 15, 15)
    np.testing.assert_allclose(a[7 * 25 + 11], np.kron(a3[7], a5[11]), atol=TOL)


def test_cached_operators_are_read_only():
    a = phase_point_operators(3)
    assert a is phase_point_operators(DimSpec((3,)))
    with pytest.raises(ValueError):
        a[0, 0, 0] = 1


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_point_index_lexicographic(a1, a2, b1, b2):
    assert point_index((3, 3), ((a1, a2), (b1, b2))) == (a1 * 3 + a2) * 9 + b1 * 3 + b2
    assert phase_points((3, 3))[point_index((3, 3), ((a1, a2), (b1, b2)))] == ((a1, a2), (b1, b2))


def test_point_index_rejects_out_of_range():
    with pytest.raises(ValueError):
        point_index(3, (3, 0))
    with pytest.raises(ValueError):
        point_index((3, 3), (0, 0))
