"""Hamiltonians, Lindblad operator families, and named experimental setups.

A Model bundles a Hermitian H with a list of (already embedded) Lindblad
operators.  Everything here is a pure constructor; the JSON config schema
accepted by ``build_model`` is the same one the CLI consumes.
"""

from __future__ import annotations

import copy
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .operators import (
    check_site_count,
    embed_local,
    pauli_at,
    sigma_minus,
    sigma_plus,
    sigma_x,
    sigma_y,
    sigma_z,
)


@dataclass(frozen=True)
class CouplingGraph:
    """Two-body couplings (k, m, J_X, J_Y, J_Z) plus on-site z fields."""

    n_sites: int
    edges: list  # entries (k, m, jx, jy, jz), 1-based sites
    fields: list | None = None  # h_k per site, defaults to zeros

    def __post_init__(self):
        check_site_count(self.n_sites)
        for e in self.edges:
            k, m = int(e[0]), int(e[1])
            if k == m:
                raise ValueError(f"self-coupling on site {k}")
            for s in (k, m):
                if not 1 <= s <= self.n_sites:
                    raise ValueError(f"edge site {s} outside [1, {self.n_sites}]")
        if self.fields is not None and len(self.fields) != self.n_sites:
            raise ValueError("fields must list one h_k per site")
        if not _connected(self.n_sites, self.edges):
            warnings.warn("coupling graph is disconnected", stacklevel=2)


def _connected(n_sites, edges):
    if n_sites == 1:
        return True
    adj = {s: set() for s in range(1, n_sites + 1)}
    for e in edges:
        adj[int(e[0])].add(int(e[1]))
        adj[int(e[1])].add(int(e[0]))
    seen = {1}
    stack = [1]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == n_sites


@dataclass(frozen=True)
class TargetZ:
    """Pump site toward <sigma^z> = (alpha^2-beta^2)/(alpha^2+beta^2)."""

    site: int
    alpha: float
    beta: float


@dataclass(frozen=True)
class TargetX:
    site: int
    alpha: float
    beta: float


@dataclass(frozen=True)
class TargetY:
    site: int
    u: float
    v: float


@dataclass(frozen=True)
class Dephasing:
    site: int
    gamma: float


@dataclass(frozen=True)
class IncoherentHop:
    """One-way incoherent flip transport from site q to site p."""

    p: int
    q: int
    gamma: float


@dataclass(frozen=True, eq=False)
class Raw:
    matrix: np.ndarray  # full 2^N operator, used verbatim


LindbladSpec = Union[TargetZ, TargetX, TargetY, Dephasing, IncoherentHop, Raw]

_TARGET_AXIS = {TargetZ: "z", TargetX: "x", TargetY: "y"}


@dataclass
class Model:
    """A Hamiltonian plus embedded Lindblad operators on n_sites qubits."""

    H: np.ndarray
    lindblads: list
    n_sites: int
    delta: float | None = None
    meta: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        dim = 2**self.n_sites
        if self.H.shape != (dim, dim):
            raise ValueError(f"H dim {self.H.shape} does not match N={self.n_sites}")
        if np.max(np.abs(self.H - self.H.conj().T)) > 1e-12:
            raise ValueError("H must be Hermitian")
        for L in self.lindblads:
            if L.shape != (dim, dim):
                raise ValueError("Lindblad operator dimension mismatch")

    @property
    def dim(self) -> int:
        return 2**self.n_sites


def build_general_hamiltonian(graph: CouplingGraph) -> np.ndarray:
    """H = sum_edges (J_X XX + J_Y YY + J_Z ZZ) + sum_k h_k Z_k."""
    n = graph.n_sites
    dim = 2**n
    H = np.zeros((dim, dim), dtype=complex)
    for k, m, jx, jy, jz in graph.edges:
        k, m = int(k), int(m)
        for coupling, op in ((jx, sigma_x), (jy, sigma_y), (jz, sigma_z)):
            if coupling != 0:
                H += coupling * embed_local(np.kron(op, op), [k, m], n)
    if graph.fields:
        for k, h in enumerate(graph.fields, start=1):
            if h != 0:
                H += h * pauli_at("z", k, n)
    return H


def build_xxz_chain(n_sites: int, delta: float) -> np.ndarray:
    """Open-boundary nearest-neighbor chain: XX + YY + delta ZZ per bond."""
    if n_sites < 2:
        raise ValueError("XXZ chain needs at least 2 sites")
    edges = [(k, k + 1, 1.0, 1.0, delta) for k in range(1, n_sites)]
    return build_general_hamiltonian(CouplingGraph(n_sites, edges))


def build_lindblad(spec: LindbladSpec, n_sites: int) -> list:
    """Embedded operator list for one spec; zero-amplitude entries are dropped."""
    check_site_count(n_sites)
    ops = []
    if isinstance(spec, TargetZ):
        _check_site(spec.site, n_sites)
        _check_rates(spec.alpha, spec.beta)
        if spec.alpha:
            ops.append(spec.alpha * pauli_at("+", spec.site, n_sites))
        if spec.beta:
            ops.append(spec.beta * pauli_at("-", spec.site, n_sites))
    elif isinstance(spec, TargetX):
        _check_site(spec.site, n_sites)
        _check_rates(spec.alpha, spec.beta)
        y = pauli_at("y", spec.site, n_sites)
        z = pauli_at("z", spec.site, n_sites)
        if spec.alpha:
            ops.append(spec.alpha * (y + 1j * z))
        if spec.beta:
            ops.append(spec.beta * (y - 1j * z))
    elif isinstance(spec, TargetY):
        _check_site(spec.site, n_sites)
        _check_rates(spec.u, spec.v)
        z = pauli_at("z", spec.site, n_sites)
        x = pauli_at("x", spec.site, n_sites)
        if spec.u:
            ops.append(spec.u * (z + 1j * x))
        if spec.v:
            ops.append(spec.v * (z - 1j * x))
    elif isinstance(spec, Dephasing):
        _check_site(spec.site, n_sites)
        _check_rates(spec.gamma)
        if spec.gamma:
            ops.append(np.sqrt(spec.gamma) * pauli_at("z", spec.site, n_sites))
    elif isinstance(spec, IncoherentHop):
        _check_site(spec.p, n_sites)
        _check_site(spec.q, n_sites)
        if spec.p == spec.q:
            raise ValueError("hop needs two distinct sites")
        _check_rates(spec.gamma)
        if spec.gamma:
            op = embed_local(np.kron(sigma_plus, sigma_minus), [spec.p, spec.q], n_sites)
            ops.append(np.sqrt(spec.gamma) * op)
    elif isinstance(spec, Raw):
        mat = np.asarray(spec.matrix, dtype=complex)
        if mat.shape != (2**n_sites, 2**n_sites):
            raise ValueError("raw operator dimension mismatch")
        if np.any(mat):
            ops.append(mat)
    else:
        raise ValueError(f"unknown Lindblad spec {spec!r}")
    return ops


def _check_site(site, n_sites):
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} outside [1, {n_sites}]")


def _check_rates(*vals):
    for v in vals:
        if v < 0:
            raise ValueError(f"amplitudes must be >= 0, got {v}")


@dataclass(frozen=True)
class TargetProfile:
    axis: str
    sigma_target: float
    gamma_parallel: float
    gamma_perp: float


def target_profile(spec: LindbladSpec) -> TargetProfile:
    """Closed-form single-site fixed point and relaxation rates.

    gamma_parallel is the decay rate of the targeted component, gamma_perp
    (half of it) applies to the two transverse components.
    """
    if isinstance(spec, (TargetZ, TargetX)):
        a, b = spec.alpha, spec.beta
    elif isinstance(spec, TargetY):
        a, b = spec.u, spec.v
    else:
        raise ValueError(f"{type(spec).__name__} is not a targeting family")
    s = a * a + b * b
    if s == 0:
        raise ValueError("both amplitudes zero, no target defined")
    return TargetProfile(
        axis=_TARGET_AXIS[type(spec)],
        sigma_target=(a * a - b * b) / s,
        gamma_parallel=4.0 * s,
        gamma_perp=2.0 * s,
    )


# ---------------------------------------------------------------------------
# named setups


def preset_setup(name: str, params: dict) -> Model:
    """Assemble one of the named boundary-driving setups.

    zgrad(N, delta, Gamma, mu): opposite z-targets +mu / -mu at the two ends.
    fig1_nu(N, J_Z, nu): one-sided pump/drain plus an x-targeting probe of
        amplitude nu on the last site.
    twist_alpha(N, delta, Gamma, A, alpha_bath): in-plane boundary targets
        twisted between the x and y axes; alpha_bath in [0, 1].
    """
    try:
        builder = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}") from None
    model = builder(**_required(name, params))
    model.config = {"preset": {"name": name, "params": dict(params)}}
    return model


_PRESET_PARAMS = {
    "zgrad": ("N", "delta", "Gamma", "mu"),
    "fig1_nu": ("N", "J_Z", "nu"),
    "twist_alpha": ("N", "delta", "Gamma", "A", "alpha_bath"),
}


def _required(name, params):
    want = _PRESET_PARAMS[name]
    missing = [k for k in want if k not in params]
    if missing:
        raise ValueError(f"preset {name} missing params {missing}")
    extra = [k for k in params if k not in want]
    if extra:
        raise ValueError(f"preset {name} got unexpected params {extra}")
    return {k: params[k] for k in want}


def _zgrad(N, delta, Gamma, mu):
    N = int(N)
    if abs(mu) > 1:
        raise ValueError("mu must lie in [-1, 1]")
    specs = [
        TargetZ(1, np.sqrt(Gamma * (1 + mu)), np.sqrt(Gamma * (1 - mu))),
        TargetZ(N, np.sqrt(Gamma * (1 - mu)), np.sqrt(Gamma * (1 + mu))),
    ]
    return Model(
        H=build_xxz_chain(N, delta),
        lindblads=_build_all(specs, N),
        n_sites=N,
        delta=delta,
        meta={"Gamma": Gamma, "mu": mu, "specs": specs},
    )


def _fig1_nu(N, J_Z, nu):
    N = int(N)
    specs = [
        TargetZ(1, 2.0, 0.0),
        TargetZ(N, 0.0, np.sqrt(2.0)),
        TargetX(N, 0.0, nu),
    ]
    return Model(
        H=build_xxz_chain(N, J_Z),
        lindblads=_build_all(specs, N),
        n_sites=N,
        delta=J_Z,
        meta={"nu": nu, "specs": specs},
    )


def _twist_alpha(N, delta, Gamma, A, alpha_bath):
    N = int(N)
    if alpha_bath < 0:
        raise ValueError("alpha_bath must be >= 0")
    g = np.sqrt(Gamma)
    specs = [
        TargetX(1, 0.0, g * np.sqrt(A)),
        TargetY(1, g * np.sqrt(alpha_bath), 0.0),
        TargetX(N, g, 0.0),
        TargetY(N, 0.0, g * np.sqrt(A * alpha_bath)),
    ]
    return Model(
        H=build_xxz_chain(N, delta),
        lindblads=_build_all(specs, N),
        n_sites=N,
        delta=delta,
        meta={"Gamma": Gamma, "A": A, "alpha_bath": alpha_bath, "specs": specs},
    )


def _build_all(specs, N):
    ops = []
    for s in specs:
        ops.extend(build_lindblad(s, N))
    return ops


_PRESETS = {"zgrad": _zgrad, "fig1_nu": _fig1_nu, "twist_alpha": _twist_alpha}


def twist_targets(A: float, alpha_bath: float) -> dict:
    """Closed-form boundary Bloch vectors the twisted baths drive toward."""
    a = alpha_bath
    return {
        "left": (-2 * A / (2 * A + a), 2 * a / (A + 2 * a) if (A + 2 * a) else 0.0, 0.0),
        "right": (2 / (2 + a * A), -2 * a * A / (1 + 2 * a * A), 0.0),
    }


# ---------------------------------------------------------------------------
# JSON config


def spec_to_dict(spec: LindbladSpec) -> dict:
    if isinstance(spec, TargetZ):
        return {"type": "target_z", "site": spec.site, "alpha": spec.alpha, "beta": spec.beta}
    if isinstance(spec, TargetX):
        return {"type": "target_x", "site": spec.site, "alpha": spec.alpha, "beta": spec.beta}
    if isinstance(spec, TargetY):
        return {"type": "target_y", "site": spec.site, "u": spec.u, "v": spec.v}
    if isinstance(spec, Dephasing):
        return {"type": "dephasing", "site": spec.site, "gamma": spec.gamma}
    if isinstance(spec, IncoherentHop):
        return {"type": "incoherent_hop", "p": spec.p, "q": spec.q, "gamma": spec.gamma}
    if isinstance(spec, Raw):
        m = np.asarray(spec.matrix)
        return {"type": "raw", "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in m]}
    raise ValueError(f"unknown spec {spec!r}")


def spec_from_dict(d: dict) -> LindbladSpec:
    kind = d.get("type")
    if kind == "target_z":
        return TargetZ(int(d["site"]), float(d["alpha"]), float(d["beta"]))
    if kind == "target_x":
        return TargetX(int(d["site"]), float(d["alpha"]), float(d["beta"]))
    if kind == "target_y":
        return TargetY(int(d["site"]), float(d["u"]), float(d["v"]))
    if kind == "dephasing":
        return Dephasing(int(d["site"]), float(d["gamma"]))
    if kind == "incoherent_hop":
        return IncoherentHop(int(d["p"]), int(d["q"]), float(d["gamma"]))
    if kind == "raw":
        mat = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
        return Raw(mat)
    raise ValueError(f"unknown lindblad type {kind!r}")


def build_model(config: dict) -> Model:
    """Build a Model from the canonical JSON-shaped config dict."""
    if "preset" in config:
        p = config["preset"]
        model = preset_setup(p["name"], p.get("params", {}))
        model.config = copy.deepcopy(config)
        return model
    if "N" not in config or "hamiltonian" not in config:
        raise ValueError("config needs either a preset or N + hamiltonian")
    N = int(config["N"])
    ham = config["hamiltonian"]
    delta = None
    if ham["type"] == "xxz":
        delta = float(ham["delta"])
        H = build_xxz_chain(N, delta)
    elif ham["type"] == "graph":
        graph = CouplingGraph(N, [tuple(e) for e in ham["edges"]], ham.get("fields"))
        H = build_general_hamiltonian(graph)
        jz = {float(e[4]) for e in ham["edges"]}
        xy = {(float(e[2]), float(e[3])) for e in ham["edges"]}
        if len(jz) == 1 and xy == {(1.0, 1.0)}:
            delta = jz.pop()  # uniform chainlike couplings define an anisotropy
    else:
        raise ValueError(f"unknown hamiltonian type {ham['type']!r}")
    specs = [spec_from_dict(d) for d in config.get("lindblads", [])]
    return Model(
        H=H,
        lindblads=_build_all(specs, N),
        n_sites=N,
        delta=delta,
        meta={"specs": specs},
        config=copy.deepcopy(config),
    )


def model_to_config(model: Model) -> dict:
    if model.config:
        return copy.deepcopy(model.config)
    specs = model.meta.get("specs")
    if specs is None:
        raise ValueError("model has no serializable description")
    return {
        "N": model.n_sites,
        "hamiltonian": {"type": "xxz", "delta": model.delta},
        "lindblads": [spec_to_dict(s) for s in specs],
    }
