import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwpq.channels import apply_choi, choi_from_function, depolarizing_choi, identity_choi, unitary_choi
from pwpq.phase_space import phase_point_operators
from pwpq.states import named_state
from pwpq.wigner import (
    Choi,
    NotAStateError,
    NotHermitianError,
    apply_stochastic,
    mana,
    operator_from_wigner,
    wigner_norm,
    wigner_of_map,
    wigner_of_operator,
)

from conftest import apply_kraus, random_density, random_hermitian, random_kraus, random_pure, random_unitary

TOL = 1e-9


def brute_wigner(x, d=3):
    # explicit loop over displaced parity operators, no shared einsum
    out = []
    par = np.zeros((d, d))
    par[(-np.arange(d)) % d, np.arange(d)] = 1
    x_op = np.roll(np.eye(d), 1, axis=0)
    z_op = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    tau = np.exp((d + 1) * np.pi * 1j / d)
    for u1 in range(d):
        for u2 in range(d):
            t = tau ** (-(u1 * u2)) * np.linalg.matrix_power(z_op, u1) @ np.linalg.matrix_power(x_op, u2)
            a = t @ par @ t.conj().T
            out.append(np.trace(a @ x) / d)
    return np.array(out)


def test_basis_state_is_a_probability():
    w = wigner_of_operator(named_state("basis_0"))
    assert np.all(w >= -TOL)
    assert abs(w.sum() - 1) < TOL


def test_maximally_mixed_is_uniform():
    np.testing.assert_allclose(wigner_of_operator(np.eye(3) / 3), np.full(9, 1 / 9), atol=1e-12)


def test_strange_state_values():
    w = wigner_of_operator(named_state("strange"))
    np.testing.assert_allclose(w, brute_wigner(named_state("strange")).real, atol=1e-12)
    assert (w < -TOL).sum() == 1
    assert abs(np.abs(w).sum() - 5 / 3) < TOL


@pytest.mark.parametrize("name", ["strange", "norrell", "tmagic", "hmagic"])
def test_matches_brute_force(name):
    rho = named_state(name)
    np.testing.assert_allclose(wigner_of_operator(rho), brute_wigner(rho).real, atol=1e-12)


def test_hermiticity_decides_realness(rng):
    # realness iff Hermitian, both directions on 100 random operators each
    for _ in range(100):
        h = random_hermitian(3, rng)
        assert wigner_of_operator(h).dtype.kind == "f"
        g = h + 1j * random_hermitian(3, rng)
        with pytest.raises(NotHermitianError, match="complex Wigner vector"):
            wigner_of_operator(g)


def test_non_strict_returns_complex():
    g = np.diag([1, 1j, 0])
    w = wigner_of_operator(g, strict=False)
    assert np.iscomplexobj(w)
    np.testing.assert_allclose(operator_from_wigner(w), g, atol=1e-12)


def test_trace_identity(rng):
    for _ in range(100):
        x, y = random_hermitian(3, rng), random_hermitian(3, rng)
        assert abs(np.trace(x @ y).real - 3 * wigner_of_operator(x) @ wigner_of_operator(y)) < TOL
    x, y = random_hermitian(9, rng), random_hermitian(9, rng)
    lhs = np.trace(x @ y).real
    assert abs(lhs - 9 * wigner_of_operator(x, (3, 3)) @ wigner_of_operator(y, (3, 3))) < TOL


def test_normalization(rng):
    for d in (3, 5):
        for _ in range(20):
            assert abs(wigner_of_operator(random_density(d, rng)).sum() - 1) < TOL


def test_operator_from_wigner_examples():
    np.testing.assert_allclose(operator_from_wigner(np.full(9, 1 / 9)), np.eye(3) / 3, atol=1e-12)
    a = phase_point_operators(3)
    for k in range(9):
        e = np.zeros(9)
        e[k] = 1
        np.testing.assert_allclose(operator_from_wigner(e), a[k], atol=1e-12)
    with pytest.raises(ValueError):
        operator_from_wigner(np.ones(10))


def test_positivity_necessary_direction(rng):
    # PSD X has nonnegative overlap with every pure state
    for _ in range(5):
        x = random_density(3, rng)
        wx = wigner_of_operator(x)
        for _ in range(200):
            assert wx @ wigner_of_operator(random_pure(3, rng)) >= -TOL
    # an indefinite X is caught by its negative eigenvector
    for _ in range(20):
        h = random_hermitian(3, rng)
        vals, vecs = np.linalg.eigh(h)
        if vals[0] >= 0:
            continue
        v = vecs[:, 0]
        assert wigner_of_operator(h) @ wigner_of_operator(np.outer(v, v.conj())) < -TOL


def test_identity_and_depolarizing_maps():
    np.testing.assert_allclose(wigner_of_map(identity_choi(3)), np.eye(9), atol=1e-12)
    np.testing.assert_allclose(wigner_of_map(depolarizing_choi(3)), np.full((9, 9), 1 / 9), atol=1e-12)


def test_wigner_of_map_matches_phase_point_images(rng):
    # independent oracle: W[v, u] = W_{N(A_u)}(v) with N applied through Kraus operators
    kraus = random_kraus(3, 5, rng)
    choi = choi_from_function(lambda x: apply_kraus(kraus, x), 3, 5)
    w = wigner_of_map(choi)
    a = phase_point_operators(3)
    for u in range(9):
        np.testing.assert_allclose(w[:, u], wigner_of_operator(apply_kraus(kraus, a[u]), 5), atol=TOL)


def test_unitary_channel_columns_sum_to_one(rng):
    w = wigner_of_map(unitary_choi(random_unitary(3, rng)))
    np.testing.assert_allclose(w.sum(axis=0), np.ones(9), atol=TOL)


def test_hermitian_preservation_decides_realness(rng):
    # HP maps give real matrices, perturbed non-HP Choi matrices do not
    for _ in range(100):
        kraus = random_kraus(3, 3, rng, n_kraus=2)
        choi = choi_from_function(lambda x: apply_kraus(kraus, x), 3)
        assert wigner_of_map(choi).dtype.kind == "f"
        bad = Choi(choi.matrix + 1j * random_hermitian(9, rng), choi.dims_in, choi.dims_out)
        with pytest.raises(NotHermitianError, match="not Hermitian-preserving"):
            wigner_of_map(bad)


def test_functoriality(rng):
    # W_N W_X = W_{N(X)}
    for _ in range(100):
        kraus = random_kraus(3, 3, rng)
        choi = choi_from_function(lambda x: apply_kraus(kraus, x), 3)
        x = random_hermitian(3, rng)
        lhs = apply_stochastic(wigner_of_map(choi), wigner_of_operator(x))
        np.testing.assert_allclose(lhs, wigner_of_operator(apply_choi(choi, x)), atol=TOL)


def test_apply_stochastic_examples(rng):
    w = wigner_of_operator(random_density(3, rng))
    np.testing.assert_allclose(apply_stochastic(np.eye(9), w), w, atol=1e-15)
    np.testing.assert_allclose(apply_stochastic(np.full((9, 9), 1 / 9), w), np.full(9, 1 / 9), atol=1e-12)
    with pytest.raises(ValueError):
        apply_stochastic(np.eye(9), np.ones(8))


def test_mana_values():
    for k in range(3):
        assert abs(mana(named_state(f"basis_{k}"))) < TOL
    assert abs(mana(np.eye(3) / 3)) < TOL
    m = {name: mana(named_state(name)) for name in ("strange", "norrell", "tmagic", "hmagic")}
    assert abs(m["strange"] - np.log2(5 / 3)) < TOL
    assert abs(m["strange"] - m["norrell"]) < TOL
    assert m["norrell"] - m["tmagic"] > 1e-3
    assert m["tmagic"] - m["hmagic"] > 1e-3
    assert abs(wigner_norm(named_state("strange")) - 5 / 3) < TOL


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_mana_additive(seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(3, rng), random_pure(3, rng)
    joint = mana(np.kron(rho, sigma), (3, 3))
    assert abs(joint - mana(rho) - mana(sigma)) < TOL


def test_mana_rejects_non_states():
    with pytest.raises(NotAStateError):
        mana(np.eye(3))
    with pytest.raises(NotAStateError):
        mana(np.diag([1.5, -0.5, 0]))
    with pytest.raises(ValueError):
        mana(np.eye(4) / 4)
