"""Trotter time evolution and noise channels on the plaquette density matrix.

First-order Trotter step U = exp(-i H_E dt) exp(-i H_B dt), applied to kets
magnetic factor first.  The magnetic Hamiltonian at coupling g^2 is
H_B(1)/g^2, so one eigendecomposition of H_B(1) serves every configuration;
the electric factor is diagonal.

Noise is applied edge-locally at the channel (Kraus) level:

- depolarizing: rho -> (1-p) rho + (p/5) tr_e(rho) (x) 1_e
- amplitude damping: K_0 = |0><0| + sqrt(1-gamma) sum_{i>=1} |i><i|,
  K_i = sqrt(gamma) |0><i|, driving the edge toward its |0,0,0> ground state.

Density matrices are plain 625x625 complex arrays; every channel here is
trace preserving and completely positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hamiltonian import electric_hamiltonian, magnetic_hamiltonian
from .lattice import EDGE_DIM, N_EDGES, TOTAL_DIM

__all__ = [
    "TrotterConfig",
    "NoiseSpec",
    "herm_expm",
    "trotter_unitary",
    "trotter_step",
    "trotter_step_state",
    "apply_edge_kraus",
    "depolarizing_channel",
    "amplitude_damping_channel",
    "apply_noise_all_edges",
    "fidelity",
    "hygiene",
]

_NOISE_KINDS = ("depolarizing", "amplitude_damping")


@dataclass(frozen=True)
class TrotterConfig:
    """Evolution parameters: coupling, total time, step count."""

    g2: float = 1.0
    total_time: float = 3.0
    n_steps: int = 30

    def __post_init__(self):
        if self.g2 <= 0:
            raise ValueError("g2 must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")

    @property
    def dt(self) -> float:
        return self.total_time / self.n_steps


@dataclass(frozen=True)
class NoiseSpec:
    """Edge noise model: kind and per-edge per-step rate."""

    kind: str
    rate: float

    def __post_init__(self):
        if self.kind not in _NOISE_KINDS:
            raise ValueError(f"noise kind must be one of {_NOISE_KINDS}")
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("noise rate must lie in [0, 1]")


def herm_expm(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition."""
    h = np.asarray(h)
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise ValueError("herm_expm requires a Hermitian matrix")
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * t * evals)) @ evecs.conj().T


@lru_cache(maxsize=None)
def _magnetic_eigh():
    evals, evecs = np.linalg.eigh(magnetic_hamiltonian(1.0))
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return evals, evecs


@lru_cache(maxsize=None)
def trotter_unitary(g2: float, dt: float) -> np.ndarray:
    """U = exp(-i H_E dt) exp(-i H_B dt) at coupling g2."""
    he_diag = np.diag(electric_hamiltonian(g2)).real
    evals, evecs = _magnetic_eigh()
    u_b = (evecs * np.exp(-1j * dt / g2 * evals)) @ evecs.conj().T
    u = np.exp(-1j * dt * he_diag)[:, None] * u_b
    u.setflags(write=False)
    return u


def trotter_step(rho: np.ndarray, cfg: TrotterConfig) -> np.ndarray:
    """One noiseless Trotter step of the density matrix."""
    u = trotter_unitary(cfg.g2, cfg.dt)
    return u @ rho @ u.conj().T


def trotter_step_state(psi: np.ndarray, cfg: TrotterConfig) -> np.ndarray:
    """One noiseless Trotter step of a pure state (the ideal reference)."""
    return trotter_unitary(cfg.g2, cfg.dt) @ psi


_LETTERS = "abcdefgh"


@lru_cache(maxsize=None)
def _sandwich_script(edge: int) -> str:
    ket = _LETTERS[:4]
    bra = _LETTERS[4:]
    out = (ket[:edge] + "x" + ket[edge + 1 :]) + (bra[:edge] + "y" + bra[edge + 1 :])
    return f"x{ket[edge]},{ket + bra},y{bra[edge]}->{out}"


def apply_edge_kraus(rho: np.ndarray, kraus: list[np.ndarray], edge: int) -> np.ndarray:
    """sum_K (K on edge) rho (K on edge)^dagger without forming 625x625 Kraus."""
    if not 0 <= edge < N_EDGES:
        raise ValueError("edge index out of range")
    r8 = rho.reshape((EDGE_DIM,) * (2 * N_EDGES))
    script = _sandwich_script(edge)
    out = np.zeros_like(r8)
    for k in kraus:
        out += np.einsum(script, k, r8, k.conj())
    return out.reshape(TOTAL_DIM, TOTAL_DIM)


@lru_cache(maxsize=None)
def _depol_scripts(edge: int) -> tuple[str, str]:
    ket = _LETTERS[:4]
    bra = _LETTERS[4:]
    traced = ket.replace(ket[edge], "") + bra.replace(bra[edge], "")
    contract = f"{ket[:edge] + 'x' + ket[edge+1:] + bra[:edge] + 'x' + bra[edge+1:]}->{traced}"
    expand = f"{traced},xy->{ket[:edge] + 'x' + ket[edge+1:] + bra[:edge] + 'y' + bra[edge+1:]}"
    return contract, expand


def depolarizing_channel(rho: np.ndarray, edge: int, p: float) -> np.ndarray:
    """(1-p) rho + (p/5) tr_e(rho) (x) 1_e on the given edge."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("depolarizing probability must lie in [0, 1]")
    if not 0 <= edge < N_EDGES:
        raise ValueError("edge index out of range")
    if p == 0.0:
        return rho.copy()
    r8 = rho.reshape((EDGE_DIM,) * (2 * N_EDGES))
    contract, expand = _depol_scripts(edge)
    marginal = np.einsum(contract, r8)
    mixed = np.einsum(expand, marginal, np.eye(EDGE_DIM) / EDGE_DIM)
    return (1.0 - p) * rho + p * mixed.reshape(TOTAL_DIM, TOTAL_DIM)


@lru_cache(maxsize=None)
def _damping_kraus(gamma: float) -> tuple[np.ndarray, ...]:
    k0 = np.diag([1.0] + [np.sqrt(1.0 - gamma)] * (EDGE_DIM - 1)).astype(complex)
    ks = [k0]
    for i in range(1, EDGE_DIM):
        ki = np.zeros((EDGE_DIM, EDGE_DIM), dtype=complex)
        ki[0, i] = np.sqrt(gamma)
        ks.append(ki)
    return tuple(ks)


def amplitude_damping_channel(rho: np.ndarray, edge: int, gamma: float) -> np.ndarray:
    """Amplitude damping of one edge toward |0,0,0> with rate gamma."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("damping rate must lie in [0, 1]")
    if gamma == 0.0:
        return rho.copy()
    return apply_edge_kraus(rho, list(_damping_kraus(gamma)), edge)


def apply_noise_all_edges(rho: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """Apply the noise channel to edges e0, e1, e2, e3 in order."""
    channel = (
        depolarizing_channel if spec.kind == "depolarizing" else amplitude_damping_channel
    )
    for e in range(N_EDGES):
        rho = channel(rho, e, spec.rate)
    return rho


def fidelity(rho: np.ndarray, psi_ref: np.ndarray) -> float:
    """Overlap <psi|rho|psi> of a density matrix with a pure reference."""
    return float(np.real(psi_ref.conj() @ rho @ psi_ref))


def hygiene(rho: np.ndarray) -> tuple[float, float, float]:
    """(trace deviation from 1, Hermiticity deviation, minimum eigenvalue)."""
    trace_dev = abs(np.trace(rho) - 1.0)
    herm_dev = np.max(np.abs(rho - rho.conj().T))
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)[0])
    return float(trace_dev), float(herm_dev), min_eig
