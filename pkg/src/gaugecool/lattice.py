"""Plaquette geometry and the 5^4-dimensional Wigner-basis Hilbert space.

A single square plaquette with four oriented edges,

    e0: v0 -> v1,  e1: v1 -> v2,  e2: v2 -> v3,  e3: v3 -> v0,

so every vertex has exactly one outgoing and one incoming edge.  Each edge
carries the spin-truncated group Hilbert space spanned by |j, m, n> with
j <= 1/2: five states per edge, enumerated

    0 <-> |0,0,0>,   1..4 <-> |1/2, m, n>,  (m,n) = (-,-), (-,+), (+,-), (+,+).

The full space is the Kronecker product over edges in the order
e0 (x) e1 (x) e2 (x) e3 (dimension 625).

At a vertex, left translations act on the m index of the outgoing edge (in
the conjugate representation) and right translations act on the n index of
the incoming edge, giving gauge generators

    G_a = L_a + R_a,   L_a = -J_a^T on m(e_out),   R_a = J_a on n(e_in),

and the unitary gauge action U(g) = conj(pi_j(g)) on m(e_out) times
pi_j(g) on n(e_in).  Everything here is dense numpy at 625 dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .su2 import spin_matrices, wigner_d

__all__ = [
    "N_EDGES",
    "EDGE_DIM",
    "TOTAL_DIM",
    "EDGE_ENDPOINTS",
    "vertex_edges",
    "edge_dimension",
    "edge_basis",
    "edge_state_index",
    "product_index",
    "vacuum_state",
    "embed_edge_operator",
    "gauge_generator",
    "gauge_casimir",
    "gauge_action",
    "CGEntry",
    "VertexCGBasis",
    "build_cg_basis",
    "singlet_projector",
    "physical_subspace_basis",
    "physical_subspace_dimension",
]

N_EDGES = 4
EDGE_DIM = 5
TOTAL_DIM = EDGE_DIM**N_EDGES

# edge e runs from EDGE_ENDPOINTS[e][0] to EDGE_ENDPOINTS[e][1]
EDGE_ENDPOINTS = ((0, 1), (1, 2), (2, 3), (3, 0))

_AXES = {"x": 0, "y": 1, "z": 2}


def vertex_edges(v: int) -> tuple[int, int]:
    """(outgoing edge, incoming edge) at vertex v."""
    out = next(e for e, (a, _) in enumerate(EDGE_ENDPOINTS) if a == v)
    inc = next(e for e, (_, b) in enumerate(EDGE_ENDPOINTS) if b == v)
    return out, inc


def edge_dimension(twice_j_max: int) -> int:
    """Total edge dimension sum_{j<=j_max} (2j+1)^2 over half-integer steps."""
    if twice_j_max < 0:
        raise ValueError("twice_j_max must be non-negative")
    return sum((tj + 1) ** 2 for tj in range(twice_j_max + 1))


def edge_basis(twice_j_max: int = 1):
    """Edge basis labels (2j, 2m, 2n): j ascending, then m, then n ascending."""
    labels = []
    for tj in range(twice_j_max + 1):
        for tm in range(-tj, tj + 1, 2):
            for tn in range(-tj, tj + 1, 2):
                labels.append((tj, tm, tn))
    return labels


_EDGE_BASIS = edge_basis(1)
_EDGE_INDEX = {lab: i for i, lab in enumerate(_EDGE_BASIS)}


def edge_state_index(twice_j: int, twice_m: int, twice_n: int) -> int:
    """Position of |j,m,n> in the 5-dimensional edge basis."""
    try:
        return _EDGE_INDEX[(twice_j, twice_m, twice_n)]
    except KeyError:
        raise ValueError(f"no edge state (2j,2m,2n)=({twice_j},{twice_m},{twice_n})")


def product_index(i0: int, i1: int, i2: int, i3: int) -> int:
    """Flat index of |i0>|i1>|i2>|i3> in the e0 (x) e1 (x) e2 (x) e3 order."""
    return ((i0 * EDGE_DIM + i1) * EDGE_DIM + i2) * EDGE_DIM + i3


def vacuum_state() -> np.ndarray:
    """All four edges in |0,0,0>."""
    psi = np.zeros(TOTAL_DIM, dtype=complex)
    psi[0] = 1.0
    return psi


def embed_edge_operator(op: np.ndarray, edge: int) -> np.ndarray:
    """Kronecker-embed a 5x5 edge operator, identity on the other edges."""
    op = np.asarray(op)
    if op.shape != (EDGE_DIM, EDGE_DIM):
        raise ValueError(f"edge operator must be {EDGE_DIM}x{EDGE_DIM}")
    if not 0 <= edge < N_EDGES:
        raise ValueError("edge index out of range")
    eye = np.eye(EDGE_DIM)
    mats = [op if e == edge else eye for e in range(N_EDGES)]
    return reduce(np.kron, mats)


def _edge_m_operator(a: np.ndarray, j0_value: float) -> np.ndarray:
    """5x5 edge operator acting as `a` on the m index of the j=1/2 block."""
    out = np.zeros((EDGE_DIM, EDGE_DIM), dtype=complex)
    out[0, 0] = j0_value
    out[1:, 1:] = np.kron(a, np.eye(2))
    return out


def _edge_n_operator(b: np.ndarray, j0_value: float) -> np.ndarray:
    """5x5 edge operator acting as `b` on the n index of the j=1/2 block."""
    out = np.zeros((EDGE_DIM, EDGE_DIM), dtype=complex)
    out[0, 0] = j0_value
    out[1:, 1:] = np.kron(np.eye(2), b)
    return out


@lru_cache(maxsize=None)
def gauge_generator(v: int, axis: str) -> np.ndarray:
    """Hermitian gauge generator G_a at vertex v, axis in {'x','y','z'}."""
    if axis not in _AXES:
        raise ValueError("axis must be 'x', 'y' or 'z'")
    j_half = spin_matrices(1)[_AXES[axis]]
    e_out, e_in = vertex_edges(v)
    left = embed_edge_operator(_edge_m_operator(-j_half.T, 0.0), e_out)
    right = embed_edge_operator(_edge_n_operator(j_half, 0.0), e_in)
    g = left + right
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def gauge_casimir(v: int) -> np.ndarray:
    """Quadratic Casimir sum_a G_a^2 of the gauge action at vertex v."""
    c = sum(
        gauge_generator(v, a) @ gauge_generator(v, a) for a in ("x", "y", "z")
    )
    c.setflags(write=False)
    return c


def gauge_action(v: int, g: np.ndarray) -> np.ndarray:
    """Unitary U(g) of the gauge transformation g applied at vertex v."""
    g = np.asarray(g, dtype=complex)
    e_out, e_in = vertex_edges(v)
    eye = np.eye(EDGE_DIM)
    mats = [eye] * N_EDGES
    mats[e_out] = _edge_m_operator(np.conj(wigner_d(1, g)), 1.0)
    mats[e_in] = _edge_n_operator(wigner_d(1, g), 1.0)
    return reduce(np.kron, mats)


# ---------------------------------------------------------------------------
# Vertex Clebsch-Gordan basis
# ---------------------------------------------------------------------------
#
# The gauge action at a vertex touches only the m index of the outgoing edge
# and the n index of the incoming edge.  Organizing the 625 product states by
# the two acted edge spins gives four sectors:
#
#   (j_out, j_in) = (0,0):    1x1 acted factor, 25 spectator configs, J=0
#   (1/2, 0):                 2-dim acted factor (m_out), 50 configs, J=1/2
#   (0, 1/2):                 2-dim acted factor (n_in),  50 configs, J=1/2
#   (1/2, 1/2):               4-dim acted factor,        100 configs, J=0+1
#
# for multiplicities mu_0 = 125, mu_{1/2} = 100, mu_1 = 100 (125+200+300=625).
# Within each sector the basis is found by simultaneously diagonalizing the
# Casimir and G_z on the small acted factor, fixing the lowest-weight phase
# (largest-magnitude component real positive, lowest index on ties) and
# climbing with the normalized raising operator.  Every resulting vector has
# definite spectator quantum numbers by construction.

_SECTORS = ("00", "h0", "0h", "hh")


def _irrep_chains(gx, gy, gz, tol: float = 1e-8):
    """Decompose a small space into (2J, [chain of M-ascending vectors]).

    Diagonalizes the Casimir, clusters eigenvalues to J(J+1), resolves each
    cluster with G_z, fixes lowest-weight phases, and rebuilds higher M by
    the normalized raising operator.
    """
    dim = gx.shape[0]
    cas = gx @ gx + gy @ gy + gz @ gz
    evals, evecs = np.linalg.eigh(cas)
    chains = []
    used = np.zeros(dim, dtype=bool)
    for tj in range(0, 2 * dim + 1):
        j = tj / 2.0
        cluster = ~used & (np.abs(evals - j * (j + 1)) < tol)
        n_cluster = int(np.sum(cluster))
        if n_cluster == 0:
            continue
        if n_cluster % (tj + 1) != 0:
            raise ArithmeticError(
                f"Casimir cluster of size {n_cluster} does not fill spin-{j} irreps"
            )
        used |= cluster
        sub = evecs[:, cluster]
        gz_sub = sub.conj().T @ gz @ sub
        mvals, mvecs = np.linalg.eigh(gz_sub)
        n_copies = n_cluster // (tj + 1)
        low = sub @ mvecs[:, np.abs(mvals + j) < tol]
        if low.shape[1] != n_copies:
            raise ArithmeticError("lowest-weight count does not match multiplicity")
        gp = gx + 1j * gy
        for k in range(n_copies):
            vec = low[:, k]
            mags = np.abs(vec)
            top = np.nonzero(mags > mags.max() - 1e-9)[0][0]
            vec = vec * (np.conj(vec[top]) / abs(vec[top]))
            chain = [vec]
            for tm in range(-tj, tj, 2):
                m = tm / 2.0
                chain.append(gp @ chain[-1] / np.sqrt(j * (j + 1) - m * (m + 1.0)))
            chains.append((tj, chain))
    if np.sum([len(c) for _, c in chains]) != dim:
        raise ArithmeticError("irreducible chains do not span the space")
    return chains


@lru_cache(maxsize=None)
def _acted_factor_chains(sector: str):
    """Irrep chains of the gauge action restricted to a sector's acted factor."""
    jx, jy, jz = spin_matrices(1)
    if sector == "00":
        zero = np.zeros((1, 1), dtype=complex)
        return _irrep_chains(zero, zero, zero)
    if sector == "h0":
        return _irrep_chains(-jx.T, -jy.T, -jz.T)
    if sector == "0h":
        return _irrep_chains(jx, jy, jz)
    if sector == "hh":
        eye = np.eye(2)
        g = [np.kron(-a.T, eye) + np.kron(eye, a) for a in (jx, jy, jz)]
        return _irrep_chains(*g)
    raise ValueError(f"unknown sector {sector!r}")


@dataclass(frozen=True)
class CGEntry:
    """One vertex basis vector |J, M, alpha>.

    ``alpha`` is (sector, n_out, m_in, rest1, rest2): the acted-edge spins
    and the spectator quantum numbers (indices the gauge action at this
    vertex never touches); -1 marks an index that does not exist because the
    corresponding edge sits at j=0.  ``column`` indexes into the basis matrix.
    """

    twice_J: int
    twice_M: int
    alpha: tuple
    column: int


class VertexCGBasis:
    """Orthonormal basis {|J, M, alpha>} of the 625-dim space at one vertex."""

    def __init__(self, vertex: int, entries: list[CGEntry], basis: np.ndarray):
        self.vertex = vertex
        self.entries = entries
        self.basis = basis  # (625, 625), column k is entries[k]'s vector
        mu: dict[int, int] = {}
        for e in entries:
            if e.twice_M == -e.twice_J:
                mu[e.twice_J] = mu.get(e.twice_J, 0) + 1
        self.mu = mu

    def columns(self, twice_J: int, twice_M: int):
        """(column indices, alphas) of sector (J, M), in fixed alpha order."""
        pairs = [
            (e.column, e.alpha)
            for e in self.entries
            if e.twice_J == twice_J and e.twice_M == twice_M
        ]
        return [c for c, _ in pairs], [a for _, a in pairs]

    def singlet_matrix(self) -> np.ndarray:
        """625 x mu_0 matrix of the J=0 basis vectors, in alpha order."""
        cols, _ = self.columns(0, 0)
        return self.basis[:, cols]

    def vector(self, twice_J: int, twice_M: int, alpha: tuple) -> np.ndarray:
        for e in self.entries:
            if (e.twice_J, e.twice_M, e.alpha) == (twice_J, twice_M, alpha):
                return self.basis[:, e.column]
        raise KeyError((twice_J, twice_M, alpha))


def _sector_spectators(v: int, sector: str):
    """All spectator tuples (n_out, m_in, rest1, rest2) for a sector, sorted."""
    e_out, e_in = vertex_edges(v)
    n_out_opts = [-1] if sector in ("00", "0h") else [0, 1]
    m_in_opts = [-1] if sector in ("00", "h0") else [0, 1]
    out = []
    for n_out in n_out_opts:
        for m_in in m_in_opts:
            for r1 in range(EDGE_DIM):
                for r2 in range(EDGE_DIM):
                    out.append((n_out, m_in, r1, r2))
    return sorted(out)


def _assemble(v: int, sector: str, spect: tuple, factor_vec: np.ndarray) -> np.ndarray:
    """Lift an acted-factor vector with fixed spectators into the 625 space."""
    e_out, e_in = vertex_edges(v)
    rest = sorted(set(range(N_EDGES)) - {e_out, e_in})
    n_out, m_in, r1, r2 = spect
    vec = np.zeros(TOTAL_DIM, dtype=complex)
    if sector == "00":
        acted = [((), factor_vec[0])]
    elif sector == "h0":
        acted = [((a,), factor_vec[a]) for a in range(2)]
    elif sector == "0h":
        acted = [((b,), factor_vec[b]) for b in range(2)]
    else:
        acted = [((a, b), factor_vec[a * 2 + b]) for a in range(2) for b in range(2)]
    for idx_tuple, coeff in acted:
        if coeff == 0.0:
            continue
        states = [0] * N_EDGES
        states[rest[0]], states[rest[1]] = r1, r2
        if sector in ("h0", "hh"):
            m_out = idx_tuple[0]
            states[e_out] = 1 + m_out * 2 + n_out
        else:
            states[e_out] = 0
        if sector in ("0h", "hh"):
            n_in = idx_tuple[-1]
            states[e_in] = 1 + m_in * 2 + n_in
        else:
            states[e_in] = 0
        vec[product_index(*states)] += coeff
    return vec


@lru_cache(maxsize=None)
def build_cg_basis(v: int) -> VertexCGBasis:
    """Simultaneous (Casimir, G_z) eigenbasis at vertex v with raising-chain
    phases and spectator-definite multiplicity labels.

    Columns are grouped J ascending (so the first mu_0 columns span the
    singlet sector), then by alpha in a fixed lexicographic order, then by
    M ascending within each chain.
    """
    if not 0 <= v < 4:
        raise ValueError("vertex index out of range")
    records = []  # (twice_J, sector_rank, spect, chain)
    for rank, sector in enumerate(_SECTORS):
        chains = _acted_factor_chains(sector)
        for spect in _sector_spectators(v, sector):
            for tj, chain in chains:
                records.append((tj, rank, spect, chain))
    records.sort(key=lambda r: (r[0], r[1], r[2]))
    entries: list[CGEntry] = []
    basis = np.zeros((TOTAL_DIM, TOTAL_DIM), dtype=complex)
    col = 0
    for tj, rank, spect, chain in records:
        sector = _SECTORS[rank]
        alpha = (sector, *spect)
        for k, factor_vec in enumerate(chain):
            tm = -tj + 2 * k
            basis[:, col] = _assemble(v, sector, spect, factor_vec)
            entries.append(CGEntry(tj, tm, alpha, col))
            col += 1
    assert col == TOTAL_DIM
    basis.setflags(write=False)
    return VertexCGBasis(v, entries, basis)


@lru_cache(maxsize=None)
def singlet_projector(v: int) -> np.ndarray:
    """Orthogonal projector onto the J=0 (gauge-invariant) sector at v."""
    s = build_cg_basis(v).singlet_matrix()
    p = s @ s.conj().T
    p.setflags(write=False)
    return p


@lru_cache(maxsize=None)
def physical_subspace_basis() -> np.ndarray:
    """Orthonormal basis of the subspace annihilated by all four Casimirs."""
    total = sum(gauge_casimir(v) for v in range(4))
    evals, evecs = np.linalg.eigh(total)
    keep = evals < 1e-8
    return evecs[:, keep]


def physical_subspace_dimension() -> int:
    """Dimension of the common null space of the four vertex Casimirs."""
    return physical_subspace_basis().shape[1]
