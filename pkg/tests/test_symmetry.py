import numpy as np
import pytest

import nessforge as nf
from nessforge.symmetry import (
    InvarianceReport,
    SymmetryTransform,
    UniquenessNotEstablished,
    conjugate_observable,
    forced_zeros,
    liouvillian_commutes,
    make_transform,
    observable_parity,
    reflection_permutation,
    total_unitary,
    transform_state,
)

import oracle


def _product_state(blochs):
    rho = np.array([[1.0]], dtype=complex)
    for x, y, z in blochs:
        site = 0.5 * (oracle.OI + x * oracle.OX + y * oracle.OY + z * oracle.OZ)
        rho = np.kron(rho, site)
    return rho


def _total_current(n_sites):
    return sum(nf.spin_current_operator(n, n + 1, n_sites)
               for n in range(1, n_sites))


def _total_energy_current(n_sites, delta):
    return sum(nf.energy_current_operator(n, delta, n_sites)
               for n in range(2, n_sites))


def _stot(n_sites, axis):
    return sum(nf.pauli_at(axis, n, n_sites) for n in range(1, n_sites + 1))


ZGRAD3 = {"N": 3, "delta": 1.0, "Gamma": 1.0, "mu": 0.5}


def test_reflection_is_swap_for_two_sites():
    swap = np.array([[1, 0, 0, 0],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1]], dtype=float)
    np.testing.assert_array_equal(reflection_permutation(2), swap)


def test_reflection_reverses_tensor_factors():
    P = reflection_permutation(3)
    np.testing.assert_array_equal(P @ P, np.eye(8))
    abc = np.kron(np.kron(oracle.OX, oracle.OY), oracle.OZ)
    cba = np.kron(np.kron(oracle.OZ, oracle.OY), oracle.OX)
    np.testing.assert_allclose(P @ abc @ P.T, cba, atol=1e-15)


def test_make_transform_tokens():
    Tz = make_transform("omega_z", 2)
    np.testing.assert_array_equal(Tz.unitary, np.diag([1, -1, -1, 1.0]))
    assert not Tz.reflect and Tz.label == "omega_z" and Tz.n_sites == 2

    Tr = make_transform("r", 2)
    assert Tr.reflect
    np.testing.assert_array_equal(Tr.unitary, np.eye(4))
    assert not make_transform("r*r", 2).reflect

    with pytest.raises(ValueError):
        make_transform("omega_q", 2)


def test_named_twisted_transform_composition():
    T = make_transform("omega_x_urot_r", 2)
    assert T.reflect and T.label == "omega_x_urot_r"
    urot_d = np.diag([1.0, -1.0j])
    expected = np.kron(oracle.OX, oracle.OX) @ np.kron(urot_d, urot_d)
    np.testing.assert_allclose(T.unitary, expected, atol=1e-15)
    W = total_unitary(T)
    np.testing.assert_allclose(W @ W.conj().T, np.eye(4), atol=1e-14)


def test_urot_pauli_pullback():
    T = make_transform("urot", 1)
    np.testing.assert_allclose(conjugate_observable(oracle.OX, T), -oracle.OY,
                               atol=1e-15)
    np.testing.assert_allclose(conjugate_observable(oracle.OY, T), oracle.OX,
                               atol=1e-15)
    np.testing.assert_allclose(conjugate_observable(oracle.OZ, T), oracle.OZ,
                               atol=1e-15)


BLOCHS2 = [(0.3, -0.2, 0.4), (0.1, 0.5, -0.3)]


@pytest.mark.parametrize("name,expected", [
    ("omega_z", [(-0.3, 0.2, 0.4), (-0.1, -0.5, -0.3)]),
    ("omega_x", [(0.3, 0.2, -0.4), (0.1, -0.5, 0.3)]),
    ("r", [(0.1, 0.5, -0.3), (0.3, -0.2, 0.4)]),
    ("urot", [(0.2, 0.3, 0.4), (-0.5, 0.1, -0.3)]),
    # reflect, then x -> y', y -> x', z -> -z'
    ("omega_x_urot_r", [(0.5, 0.1, 0.3), (-0.2, 0.3, -0.4)]),
    ("omega_z*r", [(-0.1, -0.5, -0.3), (-0.3, 0.2, 0.4)]),
])
def test_transform_state_bloch_maps(name, expected):
    rho = _product_state(BLOCHS2)
    out = transform_state(rho, make_transform(name, 2))
    np.testing.assert_allclose(nf.magnetization_profile(out),
                               np.array(expected), atol=1e-14)


def test_transform_state_preserves_spectrum():
    rng = np.random.default_rng(13)
    rho = oracle.random_density(rng, 8)
    out = transform_state(rho, make_transform("omega_x_urot_r", 3))
    assert abs(np.trace(out) - 1.0) < 1e-12
    assert np.max(np.abs(out - out.conj().T)) < 1e-12
    np.testing.assert_allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho),
                               atol=1e-12)
    with pytest.raises(ValueError):
        transform_state(np.eye(4, dtype=complex) / 4, make_transform("omega_z", 3))
    with pytest.raises(ValueError):
        conjugate_observable(np.eye(4, dtype=complex), make_transform("omega_z", 3))


def test_invariance_zgrad():
    model = nf.preset_setup("zgrad", ZGRAD3)
    for name in ("omega_z", "omega_x_r"):
        rep = liouvillian_commutes(model, make_transform(name, 3))
        assert rep.invariant and rep.residual < 1e-12
    for name in ("r", "omega_x"):
        rep = liouvillian_commutes(model, make_transform(name, 3))
        assert not rep.invariant and rep.residual > 1.0


def test_invariance_twisted_chain():
    # the in-plane rotation must enter as the adjoint; the symmetry point is
    # alpha_bath = 1, independent of the asymmetry A
    for N, A in [(3, 2.0), (2, 3.0)]:
        model = nf.preset_setup(
            "twist_alpha",
            {"N": N, "delta": 1.0, "Gamma": 0.5, "A": A, "alpha_bath": 1.0})
        rep = liouvillian_commutes(model, make_transform("omega_x_urot_r", N))
        assert rep.invariant and rep.residual < 1e-12
        wrong = liouvillian_commutes(model, make_transform("omega_x*urot*r", N))
        assert not wrong.invariant and wrong.residual > 1.0
    off = nf.preset_setup(
        "twist_alpha",
        {"N": 3, "delta": 1.0, "Gamma": 0.5, "A": 2.0, "alpha_bath": 0.7})
    rep = liouvillian_commutes(off, make_transform("omega_x_urot_r", 3))
    assert not rep.invariant and rep.residual > 0.1


def test_invariance_untwisted_symmetric_endpoint():
    # at A = 1, alpha_bath = 0 the extra symmetry is omega_z*r; omega_x*r is
    # broken because the bath target points along -x on both ends
    model = nf.preset_setup(
        "twist_alpha",
        {"N": 3, "delta": 1.0, "Gamma": 0.5, "A": 1.0, "alpha_bath": 0.0})
    rep = liouvillian_commutes(model, make_transform("omega_z*r", 3))
    assert rep.invariant and rep.residual < 1e-12
    rep_x = liouvillian_commutes(model, make_transform("omega_x_r", 3))
    assert not rep_x.invariant and rep_x.residual == pytest.approx(2.0, abs=1e-9)


def test_invariance_fig1_probe_breaks_omega_z():
    clean = nf.preset_setup("fig1_nu", {"N": 3, "J_Z": -1.3, "nu": 0.0})
    assert liouvillian_commutes(clean, make_transform("omega_z", 3)).invariant
    probed = nf.preset_setup("fig1_nu", {"N": 3, "J_Z": -1.3, "nu": 0.5})
    rep = liouvillian_commutes(probed, make_transform("omega_z", 3))
    assert not rep.invariant and rep.residual > 0.1


def test_observable_parity_catalog():
    Txr = make_transform("omega_x_r", 3)
    assert observable_parity(_total_current(3), Txr) == "even"
    assert observable_parity(_total_energy_current(3, 1.0), Txr) == "odd"
    assert observable_parity(_stot(3, "z"), Txr) == "odd"
    assert observable_parity(nf.pauli_at("z", 2, 3), Txr) == "odd"
    assert observable_parity(nf.pauli_at("z", 1, 3), Txr) == "neither"
    assert observable_parity(nf.pauli_at("x", 2, 3), Txr) == "even"
    Tz = make_transform("omega_z", 3)
    assert observable_parity(nf.pauli_at("x", 2, 3), Tz) == "odd"
    assert observable_parity(_total_current(3), Tz) == "even"
    Tzr = make_transform("omega_z*r", 3)
    assert observable_parity(_total_current(3), Tzr) == "odd"
    assert observable_parity(_total_energy_current(3, 1.0), Tzr) == "odd"


def test_observable_parity_scale_independent():
    T = make_transform("omega_x_r", 3)
    op = _total_energy_current(3, 1.0)
    assert observable_parity(1e6 * op, T) == observable_parity(op, T) == "odd"


def test_forced_zeros_zgrad_catalog():
    model = nf.preset_setup("zgrad", ZGRAD3)
    transforms = [make_transform("omega_z", 3), make_transform("omega_x_r", 3)]
    observables = [
        ("je_tot", _total_energy_current(3, 1.0)),
        ("jz_tot", _total_current(3)),
        ("sz_tot", _stot(3, "z")),
        ("sx:2", nf.pauli_at("x", 2, 3)),
    ]
    catalog = forced_zeros(model, transforms, observables)
    assert catalog == {
        "je_tot": ["omega_x_r"],
        "jz_tot": [],
        "sz_tot": ["omega_x_r"],
        "sx:2": ["omega_z"],
    }
    rho = nf.solve_ness_nullspace(model)
    assert abs(nf.expectation(rho, observables[0][1])) < 1e-10
    assert abs(nf.expectation(rho, observables[2][1])) < 1e-10
    assert abs(nf.expectation(rho, observables[3][1])) < 1e-10
    assert abs(nf.expectation(rho, observables[1][1])) > 1e-3  # allowed to flow


def test_forced_zeros_twisted_point():
    model = nf.preset_setup(
        "twist_alpha",
        {"N": 3, "delta": 1.0, "Gamma": 0.5, "A": 2.0, "alpha_bath": 1.0})
    catalog = forced_zeros(model, [make_transform("omega_x_urot_r", 3)],
                           [("je_tot", _total_energy_current(3, 1.0)),
                            ("jz_tot", _total_current(3))])
    assert catalog == {"je_tot": ["omega_x_urot_r"], "jz_tot": []}
    rho = nf.solve_ness_nullspace(model)
    assert abs(nf.expectation(rho, _total_energy_current(3, 1.0))) < 1e-10
    assert abs(nf.expectation(rho, _total_current(3))) > 0.1


def test_forced_zeros_requires_uniqueness():
    lind = nf.build_lindblad(nf.Dephasing(1, 0.5), 2)
    lind += nf.build_lindblad(nf.Dephasing(2, 0.5), 2)
    model = nf.Model(H=nf.build_xxz_chain(2, 1.0), lindblads=lind, n_sites=2)
    with pytest.raises(UniquenessNotEstablished):
        forced_zeros(model, [make_transform("omega_z", 2)],
                     [("stot", _stot(2, "z"))])


def test_invariant_transform_fixes_the_ness():
    model = nf.preset_setup("zgrad", ZGRAD3)
    rho = nf.solve_ness_nullspace(model)
    for name in ("omega_z", "omega_x_r"):
        out = transform_state(rho, make_transform(name, 3))
        assert np.max(np.abs(out - rho)) < 1e-8
    off = nf.preset_setup(
        "twist_alpha",
        {"N": 3, "delta": 1.0, "Gamma": 0.5, "A": 2.0, "alpha_bath": 0.7})
    rho_off = nf.solve_ness_nullspace(off)
    moved = transform_state(rho_off, make_transform("omega_x_urot_r", 3))
    assert np.max(np.abs(moved - rho_off)) > 1e-3
