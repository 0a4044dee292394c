"""Gauge cooling: syndrome extraction and recovery at plaquette vertices.

At each vertex the 625-dim space splits into isotypic components J = 0, 1/2, 1
with multiplicities 125, 100, 100.  The syndrome operators

    T^(J)_{MN} = (1/sqrt(2J+1)) sum_alpha |J,M,alpha><J,N,alpha|

detect which component the state occupies; the recovery Kraus operators

    K_{J,N} = sum_alpha |0,0,sigma(alpha)><J,N,alpha|

pump everything back into the local singlet sector.  The pairing sigma keeps
every spectator quantum number it can:

- J=1 triplets (both vertex edges at j=1/2) map onto the singlet built from
  the same two edges with identical spectator indices;
- J=1/2 states with only the outgoing edge excited keep (n_out, r1, r2) and
  enter the two-edge singlet with m_in := n_out;
- J=1/2 states with only the incoming edge excited keep (m_in, r1, r2) and
  enter the two-edge singlet with n_out := 1 - m_in.

The two J=1/2 branches land on disjoint singlet labels (diagonal vs.
off-diagonal (n_out, m_in) pairs), so sigma is injective across the full
multiplicity and the channel is trace preserving.

Applying the channel uses the narrow factors directly,
rho' = sum_{J,N} S (B^T rho B) S^T, never forming 625x625 Kraus matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .lattice import N_EDGES, build_cg_basis, singlet_projector
from .su2 import _twice

__all__ = [
    "Syndrome",
    "CoolingReport",
    "KrausChannel",
    "syndrome_operator",
    "syndrome_probabilities",
    "recovery_kraus",
    "cool_vertex",
    "cooling_sweep",
    "gi_overlap",
    "iterative_cooling",
]

N_VERTICES = N_EDGES


@dataclass(frozen=True, order=True)
class Syndrome:
    """Measurement outcome (J, M, N) at a vertex, stored as half-integers."""

    j: Fraction
    m: Fraction
    n: Fraction

    def __post_init__(self):
        tj, tm, tn = (_twice(x, s) for x, s in ((self.j, "j"), (self.m, "m"), (self.n, "n")))
        if tj < 0:
            raise ValueError("J must be nonnegative")
        for t, name in ((tm, "M"), (tn, "N")):
            if abs(t) > tj or (t - tj) % 2:
                raise ValueError(f"{name} must lie in {{-J, ..., J}}")

    @classmethod
    def of(cls, j, m, n) -> "Syndrome":
        return cls(Fraction(j), Fraction(m), Fraction(n))


@dataclass
class CoolingReport:
    """Gauge-invariance overlap trajectory of an iterative cooling run."""

    overlaps: list[float] = field(default_factory=list)
    sweeps_used: int = 0
    converged: bool = False

    @property
    def final_deficit(self) -> float:
        return 1.0 - self.overlaps[-1]

    @property
    def deficits(self) -> list[float]:
        return [1.0 - x for x in self.overlaps]


def _vertex_check(v: int):
    if not 0 <= v < N_VERTICES:
        raise ValueError("vertex index out of range")


def syndrome_operator(v: int, j, m, n) -> np.ndarray:
    """T^(J)_{MN}: maps the (J,N) component to (J,M) with weight 1/sqrt(2J+1)."""
    _vertex_check(v)
    syn = Syndrome.of(j, m, n)
    tj = _twice(syn.j, "j")
    basis = build_cg_basis(v)
    if tj not in basis.mu:
        raise ValueError(f"no J={syn.j} component at this vertex")
    cols_m, alphas_m = basis.columns(tj, _twice(syn.m, "m"))
    cols_n, alphas_n = basis.columns(tj, _twice(syn.n, "n"))
    assert alphas_m == alphas_n
    bm = basis.basis[:, cols_m]
    bn = basis.basis[:, cols_n]
    return (bm @ bn.T) / np.sqrt(tj + 1.0)


def syndrome_probabilities(rho: np.ndarray, v: int) -> dict[Syndrome, float]:
    """p(J,M,N) = tr(P_N^J rho)/(2J+1) for every outcome at vertex v."""
    _vertex_check(v)
    basis = build_cg_basis(v)
    probs: dict[Syndrome, float] = {}
    for tj in sorted(basis.mu):
        j = Fraction(tj, 2)
        weights = {}
        for tn in range(-tj, tj + 1, 2):
            cols, _ = basis.columns(tj, tn)
            bn = basis.basis[:, cols]
            weights[tn] = float(np.real(np.einsum("ia,ij,ja->", bn, rho, bn)))
        for tm in range(-tj, tj + 1, 2):
            for tn in range(-tj, tj + 1, 2):
                key = Syndrome(j, Fraction(tm, 2), Fraction(tn, 2))
                probs[key] = weights[tn] / (tj + 1)
    return probs


def _paired_singlet_alpha(alpha: tuple) -> tuple:
    """Singlet alpha that the recovery writes a (J, N, alpha) state into.

    Every index the gauge action never touches survives: the untouched
    edges' (r1, r2) always, and the passive label of an acted edge whenever
    the target block carries it.  A label absent from the source (an acted
    edge sitting at j=0) is filled with the lowest-weight index, and the
    in-edge block whose passive label is lowest weight drops to the all-j=0
    singlet block instead — each Kraus operator must stay injective, and
    only four of the five singlet blocks can host the four J=1/2 source
    blocks.  This assignment fixes the channel's contraction spectrum; the
    convergence tests pin its per-sweep factor.
    """
    sector, n_out, m_in, r1, r2 = alpha
    if sector == "hh" or sector == "00":
        return alpha
    if sector == "h0":
        return ("hh", n_out, 0, r1, r2)
    if sector == "0h":
        if m_in == 0:
            return ("00", -1, -1, r1, r2)
        return ("hh", 0, 1, r1, r2)
    raise ValueError(f"unknown sector {sector!r}")


@lru_cache(maxsize=None)
def _cooler_factors(v: int) -> tuple[tuple[Fraction, Fraction, np.ndarray, np.ndarray], ...]:
    """Per (J,N): the source columns B and their paired singlet columns S."""
    basis = build_cg_basis(v)
    singlet_index = {
        e.alpha: e.column for e in basis.entries if e.twice_J == 0
    }
    factors = []
    for tj in sorted(basis.mu):
        for tn in range(-tj, tj + 1, 2):
            cols, alphas = basis.columns(tj, tn)
            target_cols = [singlet_index[_paired_singlet_alpha(a)] for a in alphas]
            if len(set(target_cols)) != len(target_cols):
                raise AssertionError("spectator pairing is not injective")
            b = basis.basis[:, cols].copy()
            s = basis.basis[:, target_cols].copy()
            b.setflags(write=False)
            s.setflags(write=False)
            factors.append((Fraction(tj, 2), Fraction(tn, 2), b, s))
    return tuple(factors)


@dataclass(frozen=True)
class KrausChannel:
    """The recovery channel at one vertex: labels (J,N) and dense operators."""

    vertex: int
    labels: tuple[tuple[Fraction, Fraction], ...]
    operators: tuple[np.ndarray, ...]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=complex)
        for k in self.operators:
            out += k @ rho @ k.conj().T
        return out


def recovery_kraus(v: int) -> KrausChannel:
    """Dense Kraus operators K_{J,N} = sum_alpha |0,0,sigma(alpha)><J,N,alpha|."""
    _vertex_check(v)
    labels = []
    ops = []
    for j, n, b, s in _cooler_factors(v):
        labels.append((j, n))
        k = s @ b.T
        k.setflags(write=False)
        ops.append(k)
    return KrausChannel(vertex=v, labels=tuple(labels), operators=tuple(ops))


def cool_vertex(rho: np.ndarray, v: int) -> np.ndarray:
    """Apply the recovery channel at vertex v: rho -> sum_K K rho K^dagger."""
    _vertex_check(v)
    out = np.zeros_like(rho, dtype=complex)
    for _, _, b, s in _cooler_factors(v):
        out += s @ (b.T @ rho @ b) @ s.T
    return out


def cooling_sweep(rho: np.ndarray) -> np.ndarray:
    """Cool vertices v0, v1, v2, v3 in sequence."""
    for v in range(N_VERTICES):
        rho = cool_vertex(rho, v)
    return rho


def gi_overlap(rho: np.ndarray) -> float:
    """(1/4) sum_v tr(Pi_0^(v) rho): average vertex singlet-sector weight."""
    total = 0.0
    for v in range(N_VERTICES):
        total += float(np.real(np.einsum("ij,ji->", singlet_projector(v), rho)))
    return total / N_VERTICES


def iterative_cooling(
    rho: np.ndarray, tol: float = 1e-5, max_sweeps: int = 10
) -> tuple[np.ndarray, CoolingReport]:
    """Sweep until the GI overlap exceeds 1 - tol or max_sweeps is reached."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be at least 1")
    overlaps = [gi_overlap(rho)]
    sweeps = 0
    while overlaps[-1] <= 1.0 - tol and sweeps < max_sweeps:
        rho = cooling_sweep(rho)
        sweeps += 1
        overlaps.append(gi_overlap(rho))
    report = CoolingReport(
        overlaps=overlaps,
        sweeps_used=sweeps,
        converged=overlaps[-1] > 1.0 - tol,
    )
    return rho, report
