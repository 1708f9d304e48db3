"""Physical quantities: profiles, currents, correlators, structure factors,
and the parity-selection-rule audit.

Current operators come from the lattice continuity equations:

    j_{n,m}  = 2 (sx_n sy_m - sy_n sx_m)                       spin
    JE_n     = -sz_n j_{n-1,n+1}
               + delta (j_{n-1,n} sz_{n+1} + sz_{n-1} j_{n,n+1})   energy

JE_n is defined for interior sites only (2 <= n <= N-1); in a steady state it
is site-independent there, so any interior value is "the" energy current.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .operators import (
    expectation,
    pauli_at,
    partial_trace,
    site_count,
)


def spin_current_operator(n: int, m: int, n_sites: int) -> np.ndarray:
    if n == m:
        raise ValueError("current needs two distinct sites")
    return 2.0 * (
        pauli_at("x", n, n_sites) @ pauli_at("y", m, n_sites)
        - pauli_at("y", n, n_sites) @ pauli_at("x", m, n_sites)
    )


def energy_current_operator(n: int, delta: float, n_sites: int) -> np.ndarray:
    if n_sites < 3:
        raise ValueError("energy current needs at least 3 sites")
    if not 2 <= n <= n_sites - 1:
        raise ValueError(f"energy current site {n} must be interior, [2, {n_sites - 1}]")
    sz = lambda k: pauli_at("z", k, n_sites)
    j = lambda a, b: spin_current_operator(a, b, n_sites)
    return (
        -sz(n) @ j(n - 1, n + 1)
        + delta * (j(n - 1, n) @ sz(n + 1) + sz(n - 1) @ j(n, n + 1))
    )


def jy_operator(n: int, n_sites: int) -> np.ndarray:
    """Bond quantity 2(sz_n sy_{n+1} - sy_n sz_{n+1}); not locally conserved."""
    if not 1 <= n <= n_sites - 1:
        raise ValueError(f"bond {n} outside [1, {n_sites - 1}]")
    return 2.0 * (
        pauli_at("z", n, n_sites) @ pauli_at("y", n + 1, n_sites)
        - pauli_at("y", n, n_sites) @ pauli_at("z", n + 1, n_sites)
    )


def bond_energy_operator(n: int, delta: float, n_sites: int) -> np.ndarray:
    """Local energy density h_{n,n+1} of the open chain."""
    if not 1 <= n <= n_sites - 1:
        raise ValueError(f"bond {n} outside [1, {n_sites - 1}]")
    ops = [
        pauli_at("x", n, n_sites) @ pauli_at("x", n + 1, n_sites),
        pauli_at("y", n, n_sites) @ pauli_at("y", n + 1, n_sites),
        delta * pauli_at("z", n, n_sites) @ pauli_at("z", n + 1, n_sites),
    ]
    return ops[0] + ops[1] + ops[2]


@dataclass(frozen=True)
class CurrentOperators:
    spin: dict  # (n, n+1) -> operator
    energy: dict  # interior n -> operator
    delta: float


def build_current_operators(n_sites: int, delta: float) -> CurrentOperators:
    spin = {(n, n + 1): spin_current_operator(n, n + 1, n_sites)
            for n in range(1, n_sites)}
    energy = {}
    if n_sites >= 3:
        energy = {n: energy_current_operator(n, delta, n_sites)
                  for n in range(2, n_sites)}
    return CurrentOperators(spin=spin, energy=energy, delta=delta)


def spin_current(rho: np.ndarray, n: int, m: int) -> float:
    N = site_count(rho.shape[0])
    return expectation(rho, spin_current_operator(n, m, N)).real


def energy_current(rho: np.ndarray, n: int, delta: float) -> float:
    N = site_count(rho.shape[0])
    return expectation(rho, energy_current_operator(n, delta, N)).real


def magnetization_profile(rho: np.ndarray) -> np.ndarray:
    """(N, 3) array of <sigma_n^x>, <sigma_n^y>, <sigma_n^z>."""
    N = site_count(rho.shape[0])
    out = np.empty((N, 3))
    for i, axis in enumerate("xyz"):
        for n in range(1, N + 1):
            out[n - 1, i] = expectation(rho, pauli_at(axis, n, N)).real
    return out


def total_magnetization(rho: np.ndarray) -> float:
    N = site_count(rho.shape[0])
    return sum(expectation(rho, pauli_at("z", n, N)).real for n in range(1, N + 1))


def correlation(rho: np.ndarray, factors) -> float:
    """<sigma_{m1}^a sigma_{m2}^b ...> for distinct sites, axes in {x,y,z}."""
    N = site_count(rho.shape[0])
    factors = list(factors)
    sites = [s for s, _ in factors]
    if len(set(sites)) != len(sites):
        raise ValueError(f"repeated site in {sites}")
    op = np.eye(rho.shape[0], dtype=complex)
    for s, axis in factors:
        if axis not in ("x", "y", "z"):
            raise ValueError(f"correlation axis must be x/y/z, got {axis!r}")
        op = op @ pauli_at(axis, s, N)
    return expectation(rho, op).real


def structure_factor(rho: np.ndarray, axes, k: float) -> complex:
    """S^{ab}(k) = sum_{n<m} e^{ik(m-n)} <sigma_n^a sigma_m^b>."""
    a, b = axes
    N = site_count(rho.shape[0])
    total = 0.0 + 0.0j
    for n in range(1, N + 1):
        for m in range(n + 1, N + 1):
            total += np.exp(1j * k * (m - n)) * correlation(rho, [(n, a), (m, b)])
    return total


# ---------------------------------------------------------------------------
# parity selection rule

# basis index bit 0 (most significant, site 1) = spin up = parity label +1


def psr_mask(n_sites: int) -> np.ndarray:
    """Boolean mask of entries forced to vanish: popcount(r)+popcount(c) odd."""
    dim = 2**n_sites
    pops = np.array([bin(i).count("1") for i in range(dim)])
    return (pops[:, None] + pops[None, :]) % 2 == 1


@dataclass(frozen=True)
class PsrReport:
    max_violation: float
    violating_indices: list  # ((i_1..i_N), (j_1..j_N)) in +1/-1 labels
    zeros_per_row: np.ndarray
    xstate_pass: dict  # (site_a, site_b) -> bool
    tol: float


def _index_labels(idx: int, n_sites: int):
    # +1 for spin up (bit 0), -1 for spin down (bit 1), site 1 first
    return tuple(1 - 2 * ((idx >> (n_sites - 1 - s)) & 1) for s in range(n_sites))


def is_x_state(mat: np.ndarray, tol: float) -> bool:
    """Only diagonal and antidiagonal entries may be nonzero."""
    d = mat.shape[0]
    allowed = np.eye(d, dtype=bool) | np.fliplr(np.eye(d, dtype=bool))
    return bool(np.max(np.abs(mat[~allowed]), initial=0.0) < tol)


def psr_audit(rho: np.ndarray, tol: float = 1e-9) -> PsrReport:
    """Scan the forced-zero pattern and the X-state shape of 2-site reductions."""
    N = site_count(rho.shape[0])
    mask = psr_mask(N)
    violations = np.abs(rho) * mask
    max_violation = float(np.max(violations))
    rows, cols = np.nonzero(violations > tol)
    violating = [(_index_labels(r, N), _index_labels(c, N)) for r, c in zip(rows, cols)]
    zeros_per_row = np.sum(np.abs(rho) < tol, axis=1)
    xstate = {}
    if N >= 2:
        # reductions sum up to 2^(N-2) entries, widen the cut accordingly
        red_tol = tol * 2 ** max(N - 2, 0)
        for a in range(1, N + 1):
            for b in range(a + 1, N + 1):
                xstate[(a, b)] = is_x_state(partial_trace(rho, [a, b], N), red_tol)
    return PsrReport(
        max_violation=max_violation,
        violating_indices=violating,
        zeros_per_row=zeros_per_row,
        xstate_pass=xstate,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# observable selection strings (the CLI/sweep grammar)
#
#   sx:3  sy:1  sz:4      one-point functions
#   jz:2-3                spin current on a bond
#   je:3                  energy current at an interior site (needs delta)
#   jy:2                  the non-conserved y-bond quantity
#   corr:x1,z4            product correlator
#   sf:xz:k=0.5           structure factor (two columns, :re and :im)
#   psr                   max parity-selection-rule violation
#   stot                  total z magnetization
#   grad:x                boundary gradient <sigma_N^x - sigma_1^x>

_CORR_ITEM = re.compile(r"^([xyz])(\d+)$")


def parse_selection(sel: str, n_sites: int, delta: float | None = None):
    """One selection string -> list of (column_name, rho -> float)."""
    parts = sel.split(":")
    head = parts[0]
    if head in ("sx", "sy", "sz") and len(parts) == 2:
        site = _int(parts[1], sel)
        op = pauli_at(head[1], site, n_sites)
        return [(sel, _expect_fn(op))]
    if head == "jz" and len(parts) == 2:
        m = re.match(r"^(\d+)-(\d+)$", parts[1])
        if not m:
            raise ValueError(f"bad bond in {sel!r}, expected jz:n-m")
        op = spin_current_operator(int(m.group(1)), int(m.group(2)), n_sites)
        return [(sel, _expect_fn(op))]
    if head == "je" and len(parts) == 2:
        if delta is None:
            raise ValueError("je observable needs a chain anisotropy (delta)")
        op = energy_current_operator(_int(parts[1], sel), delta, n_sites)
        return [(sel, _expect_fn(op))]
    if head == "jy" and len(parts) == 2:
        op = jy_operator(_int(parts[1], sel), n_sites)
        return [(sel, _expect_fn(op))]
    if head == "corr" and len(parts) == 2:
        factors = []
        for item in parts[1].split(","):
            m = _CORR_ITEM.match(item)
            if not m:
                raise ValueError(f"bad correlator item {item!r} in {sel!r}")
            factors.append((int(m.group(2)), m.group(1)))
        return [(sel, lambda rho, f=factors: correlation(rho, f))]
    if head == "sf" and len(parts) == 3:
        axes = parts[1]
        if len(axes) != 2 or any(a not in "xyz" for a in axes):
            raise ValueError(f"bad structure-factor axes in {sel!r}")
        m = re.match(r"^k=([-+0-9.eE]+)$", parts[2])
        if not m:
            raise ValueError(f"bad wavenumber in {sel!r}, expected k=<float>")
        k = float(m.group(1))
        return [
            (sel + ":re", lambda rho: structure_factor(rho, axes, k).real),
            (sel + ":im", lambda rho: structure_factor(rho, axes, k).imag),
        ]
    if sel == "psr":
        return [(sel, lambda rho: psr_audit(rho).max_violation)]
    if sel == "stot":
        return [(sel, total_magnetization)]
    if head == "grad" and len(parts) == 2 and parts[1] in ("x", "y", "z"):
        op = pauli_at(parts[1], n_sites, n_sites) - pauli_at(parts[1], 1, n_sites)
        return [(sel, _expect_fn(op))]
    raise ValueError(f"unknown observable selection {sel!r}")


def parse_selections(selections, n_sites: int, delta: float | None = None):
    cols = []
    for sel in selections:
        cols.extend(parse_selection(sel, n_sites, delta))
    return cols


def _expect_fn(op):
    return lambda rho: expectation(rho, op).real


def _int(text, sel):
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"bad site number in {sel!r}") from None


def default_selections(n_sites: int, delta: float | None = None):
    """A reasonable summary set: full profile, currents, stot, psr."""
    sels = [f"s{a}:{n}" for n in range(1, n_sites + 1) for a in "xyz"]
    sels += [f"jz:{n}-{n + 1}" for n in range(1, n_sites)]
    if delta is not None and n_sites >= 3:
        sels += [f"je:{n}" for n in range(2, n_sites)]
    sels += ["stot", "psr"]
    return sels
