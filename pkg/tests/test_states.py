"""Initial two-qubit states and their evolution under the dephasing channel."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthospeed.chain import ChainParams, decoherence_matrix
from orthospeed.states import (
    X_MASK,
    BellPhiPlus,
    Custom,
    GenericPure,
    InvalidStateError,
    coefficient_matrix,
    evolve_many,
    evolve_state,
    initial_state,
    validate_density,
)

from conftest import chain_params


def _kron_state(a, b):
    return np.kron(a, b)


def test_pure_family_is_pure():
    for p in (0.0, 0.3, 0.5, 1.0):
        rho = initial_state(GenericPure(p)).matrix
        validate_density(rho)
        assert initial_state(GenericPure(p)).purity == pytest.approx(1.0, abs=1e-14)


def test_pure_family_endpoints():
    # q = 1 (p = 0): the singlet; p = 1: product state |+>|->
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    np.testing.assert_allclose(initial_state(GenericPure(0.0)).matrix,
                               np.outer(singlet, singlet), atol=1e-15)
    plus = np.array([1, 1]) / math.sqrt(2)
    minus = np.array([1, -1]) / math.sqrt(2)
    v = _kron_state(plus, minus)
    np.testing.assert_allclose(initial_state(GenericPure(1.0)).matrix, np.outer(v, v), atol=1e-15)


def test_q_derived_from_p():
    s = GenericPure(0.6)
    assert s.q == pytest.approx(0.8)


@pytest.mark.parametrize("p", [-0.1, 1.1, math.nan])
def test_p_out_of_range(p):
    with pytest.raises(InvalidStateError):
        GenericPure(p)


def test_bell_state():
    rho = initial_state(BellPhiPlus()).matrix
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(rho, expected)


def test_x_part_coefficients():
    p = 0.5
    s = GenericPure(p, x_only=True)
    c = coefficient_matrix(s)
    assert np.all(c[~X_MASK] == 0)
    q = s.q
    assert c[0, 3] == pytest.approx(0.25 * (q - 1))
    assert c[1, 2] == pytest.approx(-0.25 * (1 + q))
    validate_density(c)


@pytest.mark.parametrize(
    "matrix, prop",
    [
        (np.eye(3) / 3, "shape"),
        (np.diag([0.5, 0.5, 0.1, -0.1]), "positive semidefinite"),
        (np.diag([0.5, 0.5, 0.5, 0.0]), "unit trace"),
        (np.full((4, 4), np.nan), "finite"),
    ],
)
def test_validation_names_property(matrix, prop):
    with pytest.raises(InvalidStateError, match=prop):
        Custom(matrix)


def test_non_hermitian_rejected():
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 0.1j
    with pytest.raises(InvalidStateError, match="Hermitian"):
        Custom(m)


def test_custom_is_read_only():
    s = Custom(np.eye(4) / 4)
    with pytest.raises(ValueError):
        s.matrix[0, 0] = 1.0


def test_evolve_is_entrywise():
    p = ChainParams(7, 0.5, 0.2, coupling=0.2)
    S = decoherence_matrix(3.0, p)
    spec = GenericPure(0.4)
    rho = evolve_state(spec, S).matrix
    np.testing.assert_allclose(rho, initial_state(spec).matrix * S.entries)
    stack = evolve_many(spec, S.entries[None])
    np.testing.assert_allclose(stack[0], rho)


@given(chain_params(), st.floats(0, 150), st.floats(0, 1), st.booleans())
def test_channel_preserves_density(params, t, p, x_only):
    S = decoherence_matrix(t, params)
    for spec in (GenericPure(p, x_only=x_only), BellPhiPlus()):
        validate_density(evolve_state(spec, S).matrix, psd_tol=1e-10)


@given(chain_params(), st.floats(0, 150))
def test_bell_purity_identity(params, t):
    S = decoherence_matrix(t, params)
    rho = evolve_state(BellPhiPlus(), S)
    assert rho.purity == pytest.approx((1 + abs(S.s14) ** 2) / 2, abs=1e-12)
