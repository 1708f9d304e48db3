"""Unitary (optionally reflection-composed) transforms, Liouvillian invariance
tests, observable parity classification, and forced-zero predictions.

A transform T acts on states as rho -> W rho W' with W = U P_R (P_R = site
reversal when the reflect flag is set).  If the full Lindbladian commutes
with that conjugation and the steady state is unique, then any observable
that is odd under T must average to exactly zero in the steady state.

Note on `omega_x_urot_r`: the in-plane rotation enters as U_rot' (adjoint),
giving the Pauli map x -> y', y -> x', z -> -z'.  With U_rot instead the
dissipator of the twisted boundary model is not invariant; the adjoint
orientation is the one that commutes (checked numerically to round-off).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouvillian import build_superoperator, check_uniqueness
from .model import Model
from .operators import kron_all, sigma_x, sigma_z

DEFAULT_TOL = 1e-10


class UniquenessNotEstablished(RuntimeError):
    """Symmetry -> zero inference needs a certified unique steady state."""


@dataclass(frozen=True)
class SymmetryTransform:
    unitary: np.ndarray
    reflect: bool
    label: str

    @property
    def n_sites(self) -> int:
        return int(round(np.log2(self.unitary.shape[0])))


@dataclass(frozen=True)
class InvarianceReport:
    invariant: bool
    residual: float


def reflection_permutation(n_sites: int) -> np.ndarray:
    """Permutation matrix sending site k to site N+1-k."""
    dim = 2**n_sites
    P = np.zeros((dim, dim))
    for i in range(dim):
        bits = [(i >> (n_sites - 1 - s)) & 1 for s in range(n_sites)]
        j = 0
        for b in reversed(bits):
            j = (j << 1) | b
        P[j, i] = 1.0
    return P


_UROT = np.diag([1.0, 1.0j])


def _token_unitary(token: str, n_sites: int) -> np.ndarray:
    if token == "omega_z":
        return kron_all([sigma_z] * n_sites)
    if token == "omega_x":
        return kron_all([sigma_x] * n_sites)
    if token == "urot":
        return kron_all([_UROT] * n_sites)
    if token == "urot_dag":
        return kron_all([_UROT.conj().T] * n_sites)
    raise ValueError(f"unknown transform token {token!r}")


_NAMED = {
    "omega_x_r": "omega_x*r",
    "omega_x_urot_r": "omega_x*urot_dag*r",  # see module docstring
}


def make_transform(spec: str, n_sites: int) -> SymmetryTransform:
    """Build a transform from a name or a '*'-composition of tokens.

    Tokens: omega_z, omega_x, urot, urot_dag, r.  Named shortcuts:
    omega_x_r, omega_x_urot_r.  Any number of tokens compose left to right;
    each 'r' toggles the reflection flag.
    """
    expr = _NAMED.get(spec, spec)
    unitary = np.eye(2**n_sites, dtype=complex)
    reflect = False
    for token in expr.split("*"):
        token = token.strip()
        if token == "r":
            reflect = not reflect
        else:
            unitary = unitary @ _token_unitary(token, n_sites)
    return SymmetryTransform(unitary=unitary, reflect=reflect, label=spec)


def total_unitary(T: SymmetryTransform) -> np.ndarray:
    if T.reflect:
        return T.unitary @ reflection_permutation(T.n_sites)
    return T.unitary


def transform_state(rho: np.ndarray, T: SymmetryTransform) -> np.ndarray:
    W = total_unitary(T)
    if rho.shape != W.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {W.shape}")
    return W @ rho @ W.conj().T


def conjugate_observable(obs: np.ndarray, T: SymmetryTransform) -> np.ndarray:
    """W' obs W, the pullback matching <obs>_{T(rho)} = <W' obs W>_rho."""
    W = total_unitary(T)
    if obs.shape != W.shape:
        raise ValueError(f"dimension mismatch {obs.shape} vs {W.shape}")
    return W.conj().T @ obs @ W


def liouvillian_commutes(model: Model, T: SymmetryTransform,
                         tol: float = DEFAULT_TOL) -> InvarianceReport:
    """Does the full Lindbladian commute with conjugation by the transform?

    The residual is the max entry of the superoperator commutator, which
    equals the max over all matrix units E of |L[T(E)] - T(L[E])| entries.
    Tested at the superoperator level on purpose: sign flips or permutations
    of the Lindblad operator list are invisible generator-by-generator but
    leave the dissipator unchanged.
    """
    S = build_superoperator(model).super
    W = total_unitary(T)
    T_super = np.kron(W.conj(), W)
    residual = float(np.max(np.abs(S @ T_super - T_super @ S)))
    return InvarianceReport(invariant=residual < tol, residual=residual)


def observable_parity(obs: np.ndarray, T: SymmetryTransform,
                      tol: float = DEFAULT_TOL) -> str:
    """Classify obs under the transform: 'even', 'odd', or 'neither'."""
    conj = conjugate_observable(obs, T)
    scale = max(float(np.max(np.abs(obs))), 1.0)
    if np.max(np.abs(conj - obs)) < tol * scale:
        return "even"
    if np.max(np.abs(conj + obs)) < tol * scale:
        return "odd"
    return "neither"


def forced_zeros(model: Model, transforms, observables,
                 tol: float = DEFAULT_TOL) -> dict:
    """Catalog of observables forced to vanish in the steady state.

    `observables` is a list of (label, operator).  For each observable the
    result lists every supplied transform that (a) commutes with the
    Lindbladian and (b) flips the observable's sign.  A nonempty list is a
    prediction of an exact zero.  Refuses to run without certified
    uniqueness, since the argument needs the steady state to be the only one.
    """
    report = check_uniqueness(model)
    if not report.complete:
        raise UniquenessNotEstablished(
            f"operator algebra incomplete (dim {report.algebra_dim} of "
            f"{report.full_dim}); cannot infer forced zeros"
        )
    invariant = [T for T in transforms
                 if liouvillian_commutes(model, T, tol=tol).invariant]
    catalog = {}
    for label, op in observables:
        catalog[label] = [T.label for T in invariant
                          if observable_parity(op, T, tol=tol) == "odd"]
    return catalog
