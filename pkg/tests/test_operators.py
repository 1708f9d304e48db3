import numpy as np
import pytest

from nessforge import operators as ops

import oracle


def test_pauli_matrices_frozen():
    np.testing.assert_array_equal(ops.sigma_x, oracle.OX)
    np.testing.assert_array_equal(ops.sigma_y, oracle.OY)
    np.testing.assert_array_equal(ops.sigma_z, oracle.OZ)
    # no 1/2 factor in the ladder operators
    np.testing.assert_array_equal(ops.sigma_plus, oracle.OPLUS)
    np.testing.assert_array_equal(ops.sigma_minus, oracle.OMINUS)


def test_embed_single_site_identity_case():
    np.testing.assert_array_equal(ops.embed_local(ops.sigma_z, [1], 1), oracle.OZ)


def test_embed_site1_of_two_is_diag():
    got = ops.embed_local(ops.sigma_z, [1], 2)
    np.testing.assert_array_equal(got, np.diag([1, 1, -1, -1]).astype(complex))


def test_embed_site2_of_two():
    got = ops.embed_local(ops.sigma_z, [2], 2)
    np.testing.assert_array_equal(got, np.diag([1, -1, 1, -1]).astype(complex))


def test_embed_matches_kron_loop_oracle():
    rng = np.random.default_rng(7)
    for n, site in [(3, 2), (4, 1), (4, 4)]:
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        np.testing.assert_allclose(ops.embed_local(A, [site], n),
                                   oracle.op_at(A, site, n), atol=1e-14)


def test_embed_two_site_order_respects_sites_list():
    rng = np.random.default_rng(8)
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    # kron(A, B) placed on sites [3, 1]: A acts on site 3, B on site 1
    got = ops.embed_local(np.kron(A, B), [3, 1], 3)
    want = oracle.two_at(B, 1, A, 3, 3)
    np.testing.assert_allclose(got, want, atol=1e-14)


def test_disjoint_embeddings_commute():
    a = ops.embed_local(ops.sigma_x, [1], 3)
    b = ops.embed_local(ops.sigma_y, [3], 3)
    assert np.max(np.abs(a @ b - b @ a)) == 0


def test_embed_product_composition():
    # one-site embeddings multiplied = two-site product embedded on [1, 2]
    a = ops.embed_local(ops.sigma_x, [1], 3)
    b = ops.embed_local(ops.sigma_y, [2], 3)
    prod = ops.embed_local(np.kron(ops.sigma_x, ops.sigma_y), [1, 2], 3)
    np.testing.assert_allclose(a @ b, prod, atol=1e-14)


def test_embed_errors():
    with pytest.raises(ValueError):
        ops.embed_local(ops.sigma_z, [1, 1], 2)
    with pytest.raises(ValueError):
        ops.embed_local(ops.sigma_z, [3], 2)
    with pytest.raises(ValueError):
        ops.embed_local(np.eye(4), [1], 2)  # 2 qubits of operator, 1 site given


def test_partial_trace_product_state():
    rng = np.random.default_rng(11)
    rho_a = oracle.random_density(rng, 2)
    rho_b = oracle.random_density(rng, 4)
    rho = np.kron(rho_a, rho_b)
    np.testing.assert_allclose(ops.partial_trace(rho, [1]), rho_a, atol=1e-14)
    np.testing.assert_allclose(ops.partial_trace(rho, [2, 3]), rho_b, atol=1e-14)


def test_partial_trace_maximally_mixed():
    np.testing.assert_allclose(ops.partial_trace(np.eye(4) / 4, [2]),
                               np.eye(2) / 2, atol=1e-15)


def test_partial_trace_keep_all_and_trace_preserved():
    rng = np.random.default_rng(12)
    rho = oracle.random_density(rng, 8)
    np.testing.assert_allclose(ops.partial_trace(rho, [1, 2, 3]), rho, atol=1e-15)
    for keep in ([1], [2], [1, 3]):
        red = ops.partial_trace(rho, keep)
        assert abs(np.trace(red) - 1.0) < 1e-12


def test_partial_trace_middle_site_oracle():
    # reduce a random 3-qubit state to site 2 by explicit index sums
    rng = np.random.default_rng(13)
    rho = oracle.random_density(rng, 8)
    t = rho.reshape(2, 2, 2, 2, 2, 2)
    want = np.einsum("aibajb->ij", t)
    np.testing.assert_allclose(ops.partial_trace(rho, [2]), want, atol=1e-14)


def test_partial_trace_empty_keep_rejected():
    with pytest.raises(ValueError):
        ops.partial_trace(np.eye(4) / 4, [])


def test_expectation_basics():
    rho = np.diag([1.0, 0.0]).astype(complex)
    assert ops.expectation(rho, np.eye(2, dtype=complex)) == pytest.approx(1.0)
    assert ops.expectation(rho, ops.sigma_z) == pytest.approx(1.0)
    assert ops.expectation(np.eye(2, dtype=complex) / 2, ops.sigma_x) == pytest.approx(0.0)


def test_expectation_conjugate_symmetry():
    rng = np.random.default_rng(14)
    rho = oracle.random_density(rng, 4)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    lhs = ops.expectation(rho, A.conj().T)
    rhs = np.conj(ops.expectation(rho, A))
    assert abs(lhs - rhs) < 1e-12


def test_expectation_dim_mismatch():
    with pytest.raises(ValueError):
        ops.expectation(np.eye(2) / 2, np.eye(4))


def test_site_count():
    assert ops.site_count(8) == 3
    with pytest.raises(ValueError):
        ops.site_count(6)


def test_dimension_cap_env_override(monkeypatch):
    monkeypatch.setenv("NESSFORGE_MAX_N", "3")
    assert ops.max_sites() == 3
    with pytest.raises(ValueError):
        ops.check_site_count(4)
    monkeypatch.setenv("NESSFORGE_MAX_N", "12")
    assert ops.check_site_count(12) == 12
    monkeypatch.setenv("NESSFORGE_MAX_N", "junk")
    with pytest.raises(ValueError):
        ops.max_sites()


def test_density_matrix_validation():
    assert ops.is_density_matrix(np.eye(2, dtype=complex) / 2)
    assert not ops.is_density_matrix(np.eye(2, dtype=complex))  # trace 2
    bad = np.array([[0.5, 0.5], [0.4, 0.5]], dtype=complex)  # not Hermitian
    assert not ops.is_density_matrix(bad)
    with pytest.raises(ValueError):
        ops.validate_density_matrix(np.diag([1.5, -0.5]).astype(complex))
