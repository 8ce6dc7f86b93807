"""Atomic system types, their state cones, and exact validity tests.

Three atomic kinds are supported:

* classical systems ``C_v``: vectors in R^v holding the weights of the
  first v-1 outcomes plus a normalization coordinate (the last entry);
* quantum systems ``Q_d``: Hermitian d x d operators expanded in an
  orthonormal Hermitian basis, so the Euclidean inner product of
  coefficient vectors equals the Hilbert-Schmidt inner product;
* box systems ``B_{n,k}``: n independent k-outcome measurements, stored
  as n blocks of k-1 outcome weights plus a normalization coordinate.

Composite systems are ordered tuples of atoms; their vector space is the
Kronecker product of the atomic spaces, in atom order.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Union

import numpy as np

from .verdict import ACCEPTED, REJECTED, MembershipVerdict

EPS_HERM = 1e-10
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Classical:
    """Classical system with ``v`` outcomes."""

    v: int

    def __post_init__(self):
        if self.v < 1:
            raise ValueError(f"classical outcome count must be >= 1, got {self.v}")

    @property
    def dim(self) -> int:
        return self.v

    def __str__(self) -> str:
        return f"C{self.v}"


@dataclass(frozen=True)
class Quantum:
    """Quantum system on a ``d``-dimensional Hilbert space."""

    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"Hilbert space dimension must be >= 1, got {self.d}")

    @property
    def dim(self) -> int:
        return self.d * self.d

    def __str__(self) -> str:
        return f"Q{self.d}"


@dataclass(frozen=True)
class Boxworld:
    """Box system with ``n`` measurements of ``k`` outcomes each."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"measurement count must be >= 0, got {self.n}")
        if self.k < 2:
            raise ValueError(f"outcome count must be >= 2, got {self.k}")

    @property
    def dim(self) -> int:
        return self.n * (self.k - 1) + 1

    def __str__(self) -> str:
        return f"B{self.n},{self.k}"


AtomicSystem = Union[Classical, Quantum, Boxworld]


@dataclass(frozen=True)
class SystemType:
    """Ordered list of atomic systems; the empty tuple is the scalar system."""

    atoms: tuple = ()

    def __post_init__(self):
        atoms = tuple(self.atoms)
        for a in atoms:
            if not isinstance(a, (Classical, Quantum, Boxworld)):
                raise TypeError(f"not an atomic system: {a!r}")
        object.__setattr__(self, "atoms", atoms)

    @property
    def dim(self) -> int:
        out = 1
        for a in self.atoms:
            out *= a.dim
        return out

    @property
    def atom_dims(self) -> tuple:
        return tuple(a.dim for a in self.atoms)

    def __mul__(self, other: "SystemType") -> "SystemType":
        return SystemType(self.atoms + other.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return "*".join(str(a) for a in self.atoms) if self.atoms else "scalar"


def system(*atoms: AtomicSystem) -> SystemType:
    """Convenience constructor: ``system(Quantum(2), Boxworld(2, 2))``."""
    return SystemType(tuple(atoms))


def dimension(sys: SystemType) -> int:
    return sys.dim


@dataclass(frozen=True, eq=False)
class GptVector:
    """Real coefficient vector over a system; a state or an effect by context."""

    system: SystemType
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).reshape(-1).copy()
        if c.size != self.system.dim:
            raise ValueError(
                f"coefficient length {c.size} does not match system "
                f"{self.system} of dimension {self.system.dim}"
            )
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def atoms(self) -> tuple:
        return self.system.atoms

    def as_matrix(self) -> np.ndarray:
        """Hermitian matrix of a vector over a single quantum atom."""
        return vector_to_hermitian(self)

    def __repr__(self) -> str:
        return f"GptVector({self.system}, {np.array2string(self.coeffs, precision=6)})"


def pair(e: GptVector, s: GptVector) -> float:
    """Pairing of an effect with a state (plain Euclidean inner product)."""
    if e.system != s.system:
        raise ValueError(f"system mismatch: {e.system} vs {s.system}")
    return float(np.dot(e.coeffs, s.coeffs))


def vectors_close(a: GptVector, b: GptVector, tol: float = 1e-12) -> bool:
    return a.system == b.system and bool(np.max(np.abs(a.coeffs - b.coeffs)) <= tol)


# ---------------------------------------------------------------------------
# Hermitian operator basis and (de)vectorization
# ---------------------------------------------------------------------------


def _hs_normalize(m: np.ndarray) -> np.ndarray:
    return m / np.sqrt(np.real(np.trace(m.conj().T @ m)))


@functools.lru_cache(maxsize=32)
def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal Hermitian basis with shape ``(d^2, d, d)``.

    Element 0 is the normalized identity; the rest are the normalized
    generalized Gell-Mann matrices (symmetric, antisymmetric, diagonal).
    For d=2 this is the Pauli basis scaled by 1/sqrt(2), in I, X, Y, Z order.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    basis = [_hs_normalize(np.eye(d, dtype=complex))]
    for k in range(1, d):
        for j in range(k):
            mat = np.zeros((d, d), dtype=complex)
            mat[j, k] = 1.0
            mat[k, j] = 1.0
            basis.append(_hs_normalize(mat))
            mat = np.zeros((d, d), dtype=complex)
            mat[j, k] = -1.0j
            mat[k, j] = 1.0j
            basis.append(_hs_normalize(mat))
        mat = np.zeros((d, d), dtype=complex)
        mat[np.arange(k), np.arange(k)] = 1.0
        mat[k, k] = -float(k)
        basis.append(_hs_normalize(mat))
    out = np.stack(basis, axis=0)
    out.flags.writeable = False
    return out


def hermitian_to_vector(m: np.ndarray, eps_herm: float = EPS_HERM) -> GptVector:
    """Expand a Hermitian matrix into its coefficient vector.

    The map is linear and invertible, and Euclidean inner products of
    images equal Hilbert-Schmidt inner products of the matrices.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > eps_herm:
        raise ValueError("matrix is not Hermitian within tolerance")
    d = m.shape[0]
    coeffs = np.real(np.einsum("kij,ji->k", hermitian_basis(d), m))
    return GptVector(system(Quantum(d)), coeffs)


def vector_to_hermitian(v: GptVector) -> np.ndarray:
    """Inverse of :func:`hermitian_to_vector`."""
    if len(v.atoms) != 1 or not isinstance(v.atoms[0], Quantum):
        raise ValueError(f"expected a single quantum atom, got {v.system}")
    d = v.atoms[0].d
    return np.einsum("k,kij->ij", v.coeffs, hermitian_basis(d))


# ---------------------------------------------------------------------------
# Unit effects
# ---------------------------------------------------------------------------


def _atomic_unit(atom: AtomicSystem) -> np.ndarray:
    u = np.zeros(atom.dim)
    if isinstance(atom, Quantum):
        u[0] = np.sqrt(atom.d)
    else:
        u[-1] = 1.0
    return u


def unit_effect(sys: SystemType) -> GptVector:
    """The normalization effect: evaluates to 1 on every normalized state.

    For a composite it is the Kronecker product of the atomic unit effects.
    """
    out = np.array([1.0])
    for atom in sys.atoms:
        out = np.kron(out, _atomic_unit(atom))
    return GptVector(sys, out)


# ---------------------------------------------------------------------------
# Atomic cone membership
# ---------------------------------------------------------------------------


def _boxworld_block(atom: Boxworld, i: int) -> slice:
    w = atom.k - 1
    return slice(i * w, (i + 1) * w)


def _require_single_atom(v: GptVector) -> AtomicSystem:
    if len(v.atoms) != 1:
        raise ValueError(f"expected a single-atom system, got {v.system}")
    return v.atoms[0]


def atomic_state_check(v: GptVector, tol: float = DEFAULT_TOL) -> MembershipVerdict:
    """Exact membership test for the positive cone of one atom.

    Quantum: the matrix must be positive semidefinite within ``tol``.
    Classical / box: the stored outcome weights must be nonnegative and
    each block must not exceed the normalization coordinate.
    """
    atom = _require_single_atom(v)
    c = v.coeffs
    if isinstance(atom, Quantum):
        mat = vector_to_hermitian(v)
        vals, vecs = np.linalg.eigh(mat)
        margin = float(vals[0])
        if margin >= -tol:
            return MembershipVerdict(ACCEPTED, margin=margin)
        proj = np.outer(vecs[:, 0], vecs[:, 0].conj())
        return MembershipVerdict(
            REJECTED,
            margin=margin,
            witness=hermitian_to_vector(proj),
            detail=f"eigenvalue {margin:.6g} < 0",
        )
    if isinstance(atom, Classical):
        blocks = [(c[: atom.v - 1], "")]
    else:
        blocks = [
            (c[_boxworld_block(atom, i)], f"measurement {i}: ")
            for i in range(atom.n)
        ]
    last = float(c[-1])
    worst = last
    worst_detail = f"normalization coordinate {last:.6g}"
    for block, label in blocks:
        if block.size:
            j = int(np.argmin(block))
            if block[j] < worst:
                worst = float(block[j])
                worst_detail = f"{label}outcome weight {block[j]:.6g}"
        slack = last - float(np.sum(block))
        if slack < worst:
            worst = slack
            worst_detail = f"{label}weights exceed normalization by {-slack:.6g}"
    if worst >= -tol:
        return MembershipVerdict(ACCEPTED, margin=worst)
    return MembershipVerdict(REJECTED, margin=worst, detail=worst_detail)


def atomic_effect_check(e: GptVector, tol: float = DEFAULT_TOL) -> MembershipVerdict:
    """Validity test for an effect on one atom: 0 <= <e, s> <= 1 on all states.

    Quantum effects are checked through their eigenvalues; classical and
    box effects are evaluated on the finitely many state-space vertices,
    which is exact.
    """
    atom = _require_single_atom(e)
    if isinstance(atom, Quantum):
        mat = vector_to_hermitian(e)
        vals, vecs = np.linalg.eigh(mat)
        margin = float(min(vals[0], 1.0 - vals[-1]))
        if margin >= -tol:
            return MembershipVerdict(ACCEPTED, margin=margin)
        idx = 0 if vals[0] < 1.0 - vals[-1] else -1
        proj = np.outer(vecs[:, idx], vecs[:, idx].conj())
        return MembershipVerdict(
            REJECTED,
            margin=margin,
            witness=hermitian_to_vector(proj),
            detail=f"eigenvalues span [{vals[0]:.6g}, {vals[-1]:.6g}]",
        )
    margin = np.inf
    witness = None
    detail = ""
    for s in state_vertices(atom):
        val = pair(e, s)
        slack = min(val, 1.0 - val)
        if slack < margin:
            margin = slack
            witness = s
            detail = f"evaluates to {val:.6g} on a vertex"
    if margin >= -tol:
        return MembershipVerdict(ACCEPTED, margin=float(margin))
    return MembershipVerdict(REJECTED, margin=float(margin), witness=witness, detail=detail)


# ---------------------------------------------------------------------------
# Vertices and dual-cone rays for the polytopic atoms
# ---------------------------------------------------------------------------


def state_vertices(atom: AtomicSystem) -> list:
    """Extreme points of the normalized state space of a polytopic atom.

    Classical(v) yields the v deterministic distributions; Boxworld(n, k)
    yields the k^n deterministic outcome assignments.  Quantum atoms have a
    continuum of extreme points and are rejected.
    """
    if isinstance(atom, Quantum):
        raise ValueError("quantum atoms have a continuum of extreme states")
    sys = system(atom)
    out = []
    if isinstance(atom, Classical):
        for j in range(atom.v):
            c = np.zeros(atom.v)
            c[-1] = 1.0
            if j < atom.v - 1:
                c[j] = 1.0
            out.append(GptVector(sys, c))
        return out
    for assignment in itertools.product(range(atom.k), repeat=atom.n):
        c = np.zeros(atom.dim)
        c[-1] = 1.0
        for i, j in enumerate(assignment):
            if j < atom.k - 1:
                c[i * (atom.k - 1) + j] = 1.0
        out.append(GptVector(sys, c))
    return out


def effect_cone_rays(atom: AtomicSystem) -> list:
    """Extreme rays of the dual cone of a polytopic atom.

    These are exactly the outcome effects: for each measurement, the
    indicator of each stored outcome, plus "normalization minus the block
    sum" for the last outcome.  Every cone member evaluates nonnegatively
    on each ray, and the rays generate the full dual cone (the state cone
    is a cone over a product of simplices, whose facets are exactly these
    inequalities; verified against facet enumeration in the test suite).
    """
    if isinstance(atom, Quantum):
        raise ValueError("quantum dual-cone rays form a continuum (rank-1 projectors)")
    sys = system(atom)
    out = []
    if isinstance(atom, Classical):
        for j in range(atom.v):
            c = np.zeros(atom.v)
            if j < atom.v - 1:
                c[j] = 1.0
            else:
                c[: atom.v - 1] = -1.0
                c[-1] = 1.0
            out.append(GptVector(sys, c))
        return out
    if atom.n == 0:
        return [GptVector(sys, np.array([1.0]))]
    for i in range(atom.n):
        block = _boxworld_block(atom, i)
        for j in range(atom.k):
            c = np.zeros(atom.dim)
            if j < atom.k - 1:
                c[block.start + j] = 1.0
            else:
                c[block] = -1.0
                c[-1] = 1.0
            out.append(GptVector(sys, c))
    return out


def classical_point(v: int, i: int) -> GptVector:
    """Deterministic state of Classical(v) with outcome ``i``."""
    if not 0 <= i < v:
        raise ValueError(f"outcome {i} out of range for {v} outcomes")
    return state_vertices(Classical(v))[i]


def classical_outcome_effect(v: int, i: int) -> GptVector:
    """Effect reading off the probability of outcome ``i`` of Classical(v)."""
    if not 0 <= i < v:
        raise ValueError(f"outcome {i} out of range for {v} outcomes")
    return effect_cone_rays(Classical(v))[i]


def boxworld_to_classical(v: GptVector) -> GptVector:
    """Identify a Boxworld(1, v) vector with the Classical(v) vector it equals."""
    atom = _require_single_atom(v)
    if not isinstance(atom, Boxworld) or atom.n != 1:
        raise ValueError(f"expected a single-measurement box system, got {v.system}")
    return GptVector(system(Classical(atom.k)), v.coeffs)


def classical_to_boxworld(v: GptVector) -> GptVector:
    """Inverse identification: Classical(v) as Boxworld(1, v)."""
    atom = _require_single_atom(v)
    if not isinstance(atom, Classical) or atom.v < 2:
        raise ValueError(f"expected a classical atom with >= 2 outcomes, got {v.system}")
    return GptVector(system(Boxworld(1, atom.v)), v.coeffs)
