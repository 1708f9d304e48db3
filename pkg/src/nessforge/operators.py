"""Pauli algebra and qubit-lattice embedding.

Conventions used everywhere in this package:

* ``sigma_plus = sigma_x + i sigma_y`` and ``sigma_minus = sigma_x - i sigma_y``,
  with no 1/2 prefactor.  This is twice the raising/lowering convention common
  in quantum optics; amplitudes in the driving operators assume it.
* Site 1 is the leftmost (most significant) tensor factor, so for N=2 the
  basis ordering is |up,up>, |up,down>, |down,up>, |down,down>.
* Operators and states are plain complex numpy arrays; density matrices are
  trace-one Hermitian arrays.
"""

from __future__ import annotations

import os
from functools import reduce

import numpy as np

DEFAULT_MAX_SITES = 8

identity2 = np.eye(2, dtype=complex)
sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
sigma_y = np.array([[0, -1j], [1j, 0]], dtype=complex)
sigma_z = np.array([[1, 0], [0, -1]], dtype=complex)
sigma_plus = sigma_x + 1j * sigma_y
sigma_minus = sigma_x - 1j * sigma_y

PAULI = {"x": sigma_x, "y": sigma_y, "z": sigma_z, "+": sigma_plus, "-": sigma_minus}


def max_sites() -> int:
    """Dimension cap, overridable through the NESSFORGE_MAX_N env var."""
    raw = os.environ.get("NESSFORGE_MAX_N")
    if raw is None:
        return DEFAULT_MAX_SITES
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"NESSFORGE_MAX_N must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError("NESSFORGE_MAX_N must be >= 1")
    return n


def check_site_count(n_sites: int) -> int:
    if n_sites < 1:
        raise ValueError(f"need at least one site, got {n_sites}")
    cap = max_sites()
    if n_sites > cap:
        raise ValueError(
            f"N={n_sites} exceeds the dense-storage cap {cap} "
            "(set NESSFORGE_MAX_N to raise it)"
        )
    return n_sites


def site_count(dim: int) -> int:
    """Number of qubits for a 2^N dimensional operator."""
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def kron_all(factors) -> np.ndarray:
    return reduce(np.kron, factors)


def embed_local(local: np.ndarray, sites, n_sites: int) -> np.ndarray:
    """Place `local` on the given sites (1-based) of an n_sites lattice.

    `local` must act on exactly len(sites) qubits and the sites must be
    distinct.  Non-adjacent or descending site lists are handled by moving
    one 2-dim factor at a time.
    """
    sites = list(sites)
    check_site_count(n_sites)
    if len(set(sites)) != len(sites):
        raise ValueError(f"duplicate sites in {sites}")
    for s in sites:
        if not 1 <= s <= n_sites:
            raise ValueError(f"site {s} outside [1, {n_sites}]")
    k = len(sites)
    if local.shape != (2**k, 2**k):
        raise ValueError(
            f"local operator dim {local.shape} does not match {k} site(s)"
        )
    # local (x) I_rest, then permute qubit axes into lattice order
    rest = n_sites - k
    big = np.kron(local, np.eye(2**rest, dtype=complex))
    big = big.reshape((2,) * (2 * n_sites))
    order = sites + [s for s in range(1, n_sites + 1) if s not in sites]
    perm = [0] * n_sites
    for pos, s in enumerate(order):
        perm[s - 1] = pos
    axes = perm + [p + n_sites for p in perm]
    return np.ascontiguousarray(big.transpose(axes).reshape(2**n_sites, 2**n_sites))


def pauli_at(axis: str, site: int, n_sites: int) -> np.ndarray:
    """sigma^axis acting on one site, identity elsewhere."""
    try:
        op = PAULI[axis]
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None
    return embed_local(op, [site], n_sites)


def partial_trace(rho: np.ndarray, keep, n_sites: int | None = None) -> np.ndarray:
    """Trace out every site not in `keep` (1-based, result ordered ascending)."""
    if n_sites is None:
        n_sites = site_count(rho.shape[0])
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must be nonempty")
    for s in keep:
        if not 1 <= s <= n_sites:
            raise ValueError(f"site {s} outside [1, {n_sites}]")
    tensor = rho.reshape((2,) * (2 * n_sites))
    remaining = list(range(1, n_sites + 1))
    for s in [t for t in reversed(remaining) if t not in keep]:
        idx = remaining.index(s)
        m = len(remaining)
        # row axis idx pairs with column axis idx+m; trace removes both
        tensor = np.trace(tensor, axis1=idx, axis2=idx + m)
        remaining.remove(s)
    return tensor.reshape(2 ** len(keep), 2 ** len(keep))


def expectation(rho: np.ndarray, obs: np.ndarray) -> complex:
    """Tr(obs rho)."""
    if rho.shape != obs.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {obs.shape}")
    return complex(np.trace(obs @ rho))


def hermitize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def maximally_mixed(n_sites: int) -> np.ndarray:
    check_site_count(n_sites)
    dim = 2**n_sites
    return np.eye(dim, dtype=complex) / dim


def is_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> bool:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if abs(np.trace(rho) - 1.0) > 1e-12 * max(1, rho.shape[0]):
        return False
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        return False
    return bool(np.min(np.linalg.eigvalsh(hermitize(rho))) >= -tol)


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if not is_density_matrix(rho, tol=tol):
        raise ValueError("not a valid density matrix (trace/Hermiticity/positivity)")
    return rho
