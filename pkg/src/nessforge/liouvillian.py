"""Lindbladian assembly, steady-state extraction, and uniqueness certification.

Vectorization is column-stacking throughout: vec(A X B) = (B^T kron A) vec(X),
i.e. numpy ``flatten(order="F")`` / ``reshape(order="F")``.  The Liouvillian
record carries this tag so downstream kernel math can assert it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .model import Model
from .operators import hermitize, maximally_mixed

# superoperator matvec is used for time stepping when 4^N fits comfortably
_MATVEC_DIM_LIMIT = 1024

# kernel membership: singular values below this times sigma_max
_KERNEL_RTOL = 1e-10

VEC_CONVENTION = "column"


class DegenerateSteadyStateError(RuntimeError):
    """Kernel dimension > 1: the steady state is not unique, refuse to pick."""


@dataclass(frozen=True)
class SolveOptions:
    method: str = "nullspace"  # or "evolve"
    tol: float = 1e-10  # stationarity residual, max |d rho/dt| entry
    dt: float | None = None  # None = auto from the stability scale
    t_max: float = 500.0
    hermitize_every: int = 100

    def __post_init__(self):
        if self.method not in ("nullspace", "evolve"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be > 0")


@dataclass(frozen=True)
class SolveInfo:
    method: str
    residual: float
    converged: bool
    kernel_dim: int | None = None
    steps: int | None = None
    t_final: float | None = None


@dataclass
class Liouvillian:
    model: Model
    super: np.ndarray
    vec_convention: str = VEC_CONVENTION


def apply_lindbladian(model: Model, rho: np.ndarray) -> np.ndarray:
    """d rho/dt = i[rho, H] - 1/2 sum {rho, L'L} + sum L rho L'."""
    H = model.H
    if rho.shape != H.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {H.shape}")
    out = 1j * (rho @ H - H @ rho)
    for L in model.lindblads:
        Ld = L.conj().T
        LdL = Ld @ L
        out += L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL)
    return out


def build_superoperator(model: Model) -> Liouvillian:
    d = model.dim
    eye = np.eye(d)
    S = 1j * (np.kron(model.H.T, eye) - np.kron(eye, model.H))
    for L in model.lindblads:
        LdL = L.conj().T @ L
        S += np.kron(L.conj(), L)
        S -= 0.5 * (np.kron(eye, LdL) + np.kron(LdL.T, eye))
    return Liouvillian(model=model, super=S)


def stability_scale(model: Model) -> float:
    """Crude bound on the Liouvillian spectral radius, sets the auto step."""
    s = 2.0 * np.linalg.norm(model.H, 2)
    for L in model.lindblads:
        s += 2.0 * np.linalg.norm(L, 2) ** 2
    return max(s, 1e-12)


def solve_ness_nullspace(model: Model, opts: SolveOptions | None = None,
                         return_info: bool = False):
    """Steady state from the kernel of the vectorized Lindbladian.

    Raises DegenerateSteadyStateError when more than one singular value sits
    below the kernel threshold; the choice of state would be arbitrary then.
    """
    opts = opts or SolveOptions()
    liou = build_superoperator(model)
    _, svals, Vh = np.linalg.svd(liou.super)
    cut = _KERNEL_RTOL * svals[0] if svals[0] > 0 else _KERNEL_RTOL
    kernel_dim = int(np.sum(svals < cut))
    if kernel_dim == 0:
        raise RuntimeError(
            f"no kernel vector found (smallest singular value {svals[-1]:.3e})"
        )
    if kernel_dim > 1:
        raise DegenerateSteadyStateError(
            f"steady state is not unique: kernel dimension {kernel_dim}"
        )
    d = model.dim
    rho = Vh[-1].conj().reshape((d, d), order="F")
    rho = hermitize(rho)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise DegenerateSteadyStateError("kernel vector is traceless, cannot normalize")
    rho /= tr
    residual = float(np.max(np.abs(apply_lindbladian(model, rho))))
    if residual > opts.tol:
        warnings.warn(f"nullspace residual {residual:.2e} above tol {opts.tol:.2e}")
    if return_info:
        return rho, SolveInfo(
            method="nullspace",
            residual=residual,
            converged=residual <= opts.tol,
            kernel_dim=kernel_dim,
        )
    return rho


def _rhs_function(model: Model):
    """Pick a d rho/dt evaluator: dense superop matvec when small, else batched."""
    d = model.dim
    if d * d <= _MATVEC_DIM_LIMIT:
        S = build_superoperator(model).super

        def rhs(rho):
            return (S @ rho.flatten(order="F")).reshape((d, d), order="F")

        return rhs
    H = model.H
    if model.lindblads:
        Lstack = np.stack(model.lindblads)
        Ldag = Lstack.conj().transpose(0, 2, 1)
        K = np.einsum("mij,mjk->ik", Ldag, Lstack)
    else:
        Lstack = Ldag = None
        K = np.zeros_like(H)

    def rhs(rho):
        out = 1j * (rho @ H - H @ rho)
        if Lstack is not None:
            out += np.einsum("mij,jk,mkl->il", Lstack, rho, Ldag)
        out -= 0.5 * (K @ rho + rho @ K)
        return out

    return rhs


def evolve_state(model: Model, rho0: np.ndarray, t_final: float,
                 dt: float | None = None, hermitize_every: int = 100,
                 callback=None) -> np.ndarray:
    """Integrate the master equation for exactly t_final with fixed-step RK4.

    The step is shrunk so an integer number of steps lands on t_final.
    `callback(step, t, rho)` fires after every step when given.
    """
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    if dt is None:
        dt = 1.0 / stability_scale(model)
    n_steps = max(1, int(np.ceil(t_final / dt - 1e-12)))
    dt = t_final / n_steps
    rhs = _rhs_function(model)
    rho = np.array(rho0, dtype=complex)
    for step in range(1, n_steps + 1):
        rho = _rk4_step(rhs, rho, dt)
        if hermitize_every and step % hermitize_every == 0:
            rho = hermitize(rho)
            rho /= np.trace(rho).real
        if callback is not None:
            callback(step, step * dt, rho)
    return rho


def _rk4_step(rhs, rho, dt):
    k1 = rhs(rho)
    k2 = rhs(rho + 0.5 * dt * k1)
    k3 = rhs(rho + 0.5 * dt * k2)
    k4 = rhs(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def solve_ness_evolution(model: Model, rho0: np.ndarray | None = None,
                         opts: SolveOptions | None = None,
                         return_info: bool = False):
    """Relax an initial state until the stationarity residual drops below tol.

    Runs fixed-step RK4 up to opts.t_max; if the residual never reaches
    opts.tol the best state is returned with converged=False (and a warning).
    """
    opts = opts or SolveOptions(method="evolve")
    rho = np.array(rho0 if rho0 is not None else maximally_mixed(model.n_sites),
                   dtype=complex)
    dt = opts.dt if opts.dt is not None else 1.0 / stability_scale(model)
    rhs = _rhs_function(model)
    t = 0.0
    step = 0
    residual = float(np.max(np.abs(rhs(rho))))
    converged = residual < opts.tol
    while not converged and t < opts.t_max:
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        step += 1
        if opts.hermitize_every and step % opts.hermitize_every == 0:
            rho = hermitize(rho)
            rho /= np.trace(rho).real
        residual = float(np.max(np.abs(k1)))
        converged = residual < opts.tol
    rho = hermitize(rho)
    rho /= np.trace(rho).real
    # residual of the returned (cleaned) state
    residual = float(np.max(np.abs(rhs(rho))))
    converged = residual < opts.tol
    if not converged:
        warnings.warn(
            f"evolution hit t_max={opts.t_max} with residual {residual:.2e}"
        )
    if return_info:
        return rho, SolveInfo(
            method="evolve",
            residual=residual,
            converged=converged,
            steps=int(step),
            t_final=float(t),
        )
    return rho


def solve_ness(model: Model, opts: SolveOptions | None = None,
               return_info: bool = False):
    """Dispatch on opts.method."""
    opts = opts or SolveOptions()
    if opts.method == "nullspace":
        return solve_ness_nullspace(model, opts, return_info=return_info)
    return solve_ness_evolution(model, opts=opts, return_info=return_info)


@dataclass(frozen=True)
class UniquenessReport:
    complete: bool
    algebra_dim: int
    full_dim: int


def check_uniqueness(model: Model, tol: float = 1e-9) -> UniquenessReport:
    """Close span{I, H, L_m, L_m'} under products; complete means dim = 4^N.

    Completeness of this algebra is a sufficient condition for a unique
    steady state.  Basis vectors live in the trace inner product; generators
    are Frobenius-normalized so candidates stay O(1) and the rank cut can be
    absolute.
    """
    d = model.dim
    gens = [model.H] + list(model.lindblads) + [L.conj().T for L in model.lindblads]
    gens = [g / np.linalg.norm(g) for g in gens if np.linalg.norm(g) > 0]
    basis = np.zeros((0, d * d), dtype=complex)

    def absorb(vecs):
        nonlocal basis
        if basis.shape[0]:
            vecs = vecs - (vecs @ basis.conj().T) @ basis
            vecs = vecs - (vecs @ basis.conj().T) @ basis  # second pass, round-off
        _, svals, rows = np.linalg.svd(vecs, full_matrices=False)
        if svals.size == 0 or svals[0] == 0:
            return 0
        new = rows[svals > tol]
        if new.shape[0]:
            basis = np.vstack([basis, new])
        return new.shape[0]

    eye = np.eye(d, dtype=complex)
    absorb(eye.flatten(order="F")[None, :] / np.sqrt(d))
    if gens:
        absorb(np.stack([g.flatten(order="F") for g in gens]))
    grew = True
    while grew and basis.shape[0] < d * d:
        grew = False
        k = basis.shape[0]
        mats = basis.reshape(k, d, d).transpose(0, 2, 1)  # undo order="F" rows
        for g in gens:
            prod = np.einsum("ab,kbc->kac", g, mats)
            flat = prod.transpose(0, 2, 1).reshape(k, d * d)
            if absorb(flat):
                grew = True
    dim = int(basis.shape[0])
    return UniquenessReport(complete=dim == d * d, algebra_dim=dim, full_dim=d * d)


def default_options(method: str = "nullspace", **overrides) -> SolveOptions:
    return replace(SolveOptions(method=method), **overrides)
