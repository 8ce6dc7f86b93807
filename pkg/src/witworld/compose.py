"""Composition of systems and membership tests for composite cones.

The composite state cone is the max tensor product of the atomic cones: a
vector belongs to it exactly when it pairs nonnegatively with every
product of local effects.  Membership testing therefore reduces to
minimizing a multilinear form over products of dual-cone generators:
finitely many outcome effects for classical and box atoms, rank-1
projectors for quantum atoms.  The same minimization engine also serves
positivity and trace checks in :mod:`witworld.transforms`, which minimize
over products of *state*-side generators instead.

For a pair of qubit factors the projector optimization is handled by a
grid scan over one Bloch sphere (the other sphere has a closed-form
minimum) followed by alternating closed-form descent; this path is exact
for the systems of interest.  Searches over higher-dimensional quantum
factors use seeded random restarts and report only inconclusive
acceptance.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .systems import (
    DEFAULT_TOL,
    Boxworld,
    Classical,
    GptVector,
    Quantum,
    SystemType,
    atomic_effect_check,
    atomic_state_check,
    effect_cone_rays,
    hermitian_basis,
    pair,
    state_vertices,
    system,
    unit_effect,
)
from .verdict import ACCEPTED, INCONCLUSIVE_ACCEPT, REJECTED, MembershipVerdict

_SQRT2 = np.sqrt(2.0)


def _default_seed() -> int:
    try:
        return int(os.environ.get("WITWORLD_SEED", "0"))
    except ValueError:
        return 0


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the heuristic parts of cone-membership searches.

    ``grid`` is the number of polar divisions of the Bloch-sphere scan
    (azimuthal divisions are twice that).  ``restarts`` controls the
    random-restart refinement used for quantum factors beyond a qubit
    pair.  All searches are deterministic given (grid, restarts, seed).
    """

    grid: int = 180
    restarts: int = 500
    seed: int = field(default_factory=_default_seed)
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class ProductEffectRay:
    """A product of local dual-cone generators, one factor per atom."""

    factors: tuple

    def as_vector(self) -> GptVector:
        return tensor_all(self.factors)


def tensor(v1: GptVector, v2: GptVector) -> GptVector:
    """Kronecker product; the composite system concatenates the atom lists."""
    return GptVector(v1.system * v2.system, np.kron(v1.coeffs, v2.coeffs))


def tensor_all(vs: Sequence[GptVector]) -> GptVector:
    out = GptVector(SystemType(), np.array([1.0]))
    for v in vs:
        out = tensor(out, v)
    return out


def scalar_one() -> GptVector:
    """The unit of the tensor product (the scalar system's number 1)."""
    return GptVector(SystemType(), np.array([1.0]))


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def hermitian_tensor_to_vector(m: np.ndarray, dims: Sequence[int]) -> GptVector:
    """Expand a Hermitian matrix on a tensor-product Hilbert space.

    ``dims`` lists the local dimensions; the result lives on the composite
    of the matching quantum atoms, with coefficients against products of
    the local operator bases.
    """
    dims = tuple(dims)
    n = len(dims)
    total = int(np.prod(dims))
    m = np.asarray(m, dtype=complex)
    if m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    if np.max(np.abs(m - m.conj().T)) > 1e-8:
        raise ValueError("matrix is not Hermitian within tolerance")
    if 3 * n > len(_LETTERS):
        raise ValueError("too many factors")
    ks = _LETTERS[:n]
    ps = _LETTERS[n:2 * n]
    qs = _LETTERS[2 * n:3 * n]
    operands = []
    script = []
    for i in range(n):
        operands.append(hermitian_basis(dims[i]))
        script.append(ks[i] + ps[i] + qs[i])
    operands.append(m.reshape(dims + dims))
    script.append(qs + ps)
    coeffs = np.real(np.einsum(",".join(script) + "->" + ks, *operands))
    return GptVector(SystemType(tuple(Quantum(d) for d in dims)), coeffs.ravel())


def vector_to_hermitian_tensor(v: GptVector) -> np.ndarray:
    """Inverse of :func:`hermitian_tensor_to_vector`."""
    if not all(isinstance(a, Quantum) for a in v.atoms):
        raise ValueError(f"expected quantum atoms only, got {v.system}")
    dims = tuple(a.d for a in v.atoms)
    n = len(dims)
    ks = _LETTERS[:n]
    ps = _LETTERS[n:2 * n]
    qs = _LETTERS[2 * n:3 * n]
    operands = [v.coeffs.reshape(tuple(d * d for d in dims))]
    script = [ks]
    for i in range(n):
        operands.append(hermitian_basis(dims[i]))
        script.append(ks[i] + ps[i] + qs[i])
    total = int(np.prod(dims))
    out = np.einsum(",".join(script) + "->" + ps + qs, *operands)
    return out.reshape(total, total)


# ---------------------------------------------------------------------------
# Product-form minimization engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGenerators:
    """Finite generator list for one factor (vertices or dual rays)."""

    vectors: tuple


@dataclass(frozen=True)
class QuantumGenerators:
    """Rank-1 projector generators for one quantum factor."""

    d: int


@dataclass(frozen=True)
class ProductMin:
    value: float
    factors: tuple          # per-factor coefficient arrays, atom order
    conclusive: bool


@functools.lru_cache(maxsize=8)
def _sphere_grid(n_theta: int):
    """Bloch directions and the matching (G, 4) coefficient rows."""
    thetas = (np.arange(n_theta) + 0.5) * (np.pi / n_theta)
    phis = np.arange(2 * n_theta) * (np.pi / n_theta)
    st, ct = np.sin(thetas), np.cos(thetas)
    cp, sp = np.cos(phis), np.sin(phis)
    dirs = np.empty((n_theta * 2 * n_theta + 6, 3))
    dirs[: -6, 0] = np.outer(st, cp).ravel()
    dirs[: -6, 1] = np.outer(st, sp).ravel()
    dirs[: -6, 2] = np.repeat(ct, 2 * n_theta)
    dirs[-6:] = [(0, 0, 1), (0, 0, -1), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
    points = np.empty((dirs.shape[0], 4))
    points[:, 0] = 1.0
    points[:, 1:] = dirs
    points /= _SQRT2
    points = np.ascontiguousarray(points)
    points.flags.writeable = False
    dirs.flags.writeable = False
    return dirs, points


def _qubit_coeffs(n: np.ndarray) -> np.ndarray:
    """Coefficient vector of the projector with Bloch direction ``n``."""
    return np.concatenate(([1.0], n)) / _SQRT2


def _alternate_qubit_pair(C: np.ndarray, n0: np.ndarray, step_tol: float = 1e-6):
    """Alternating closed-form descent of f(n, m) = p(n)^T C p(m)."""
    n = n0
    m = np.array([0.0, 0.0, 1.0])
    for _ in range(300):
        q = C.T @ _qubit_coeffs(n)
        nq = np.linalg.norm(q[1:])
        m_new = -q[1:] / nq if nq > 1e-15 else m
        g = C @ _qubit_coeffs(m_new)
        ng = np.linalg.norm(g[1:])
        n_new = -g[1:] / ng if ng > 1e-15 else n
        step = max(np.linalg.norm(n_new - n), np.linalg.norm(m_new - m))
        n, m = n_new, m_new
        if step < step_tol:
            break
    val = float(_qubit_coeffs(n) @ C @ _qubit_coeffs(m))
    return val, n, m


def _min_qubit_pair(C: np.ndarray, cfg: SearchConfig):
    """Global minimum of p(n)^T C p(m) over two Bloch spheres."""
    dirs, points = _sphere_grid(cfg.grid)
    _, g = _kernels.bloch_margin_scan(np.ascontiguousarray(C.T), points)
    starts = [dirs[g]] + [dirs[i] for i in range(dirs.shape[0] - 6, dirs.shape[0])]
    best_val, best_n, best_m = np.inf, None, None
    for n0 in starts:
        val, n, m = _alternate_qubit_pair(C, n0)
        if val < best_val:
            best_val, best_n, best_m = val, n, m
    return best_val, [_qubit_coeffs(best_n), _qubit_coeffs(best_m)]


def _projector_coeffs(psi: np.ndarray) -> np.ndarray:
    d = psi.shape[0]
    proj = np.outer(psi, psi.conj())
    return np.real(np.einsum("kij,ji->k", hermitian_basis(d), proj))


def _haar_state(rng: np.random.Generator, d: int) -> np.ndarray:
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return psi / np.linalg.norm(psi)


def _alternate_general(red: np.ndarray, qdims: Sequence[int], psis: list):
    """Per-factor eigenvector descent for >2 or higher-dimensional factors."""
    coeff_vecs = [_projector_coeffs(p) for p in psis]
    val = np.inf
    for _ in range(200):
        prev = val
        for i in range(len(qdims)):
            t = red
            # contract highest axes first so remaining axis indices stay valid
            for j in range(len(qdims) - 1, -1, -1):
                if j != i:
                    t = np.tensordot(coeff_vecs[j], t, axes=([0], [j]))
            mat = np.einsum("k,kij->ij", t.ravel(), hermitian_basis(qdims[i]))
            vals, vecs = np.linalg.eigh(mat)
            val = float(vals[0])
            psis[i] = vecs[:, 0]
            coeff_vecs[i] = _projector_coeffs(psis[i])
        if abs(prev - val) < 1e-13:
            break
    full = red
    for j in range(len(qdims) - 1, -1, -1):
        full = np.tensordot(coeff_vecs[j], full, axes=([0], [j]))
    return float(full), coeff_vecs


def _min_quantum_general(red: np.ndarray, qdims: Sequence[int], cfg: SearchConfig,
                         rng: np.random.Generator):
    best_val, best_factors = np.inf, None
    for _ in range(max(cfg.restarts, 1)):
        psis = [_haar_state(rng, d) for d in qdims]
        val, coeff_vecs = _alternate_general(red, qdims, list(psis))
        if val < best_val:
            best_val, best_factors = val, coeff_vecs
    return best_val, best_factors


def _min_over_quantum(red: np.ndarray, qdims: Sequence[int], cfg: SearchConfig,
                      rng: np.random.Generator):
    if not qdims:
        return float(red), []
    if len(qdims) == 1:
        mat = np.einsum("k,kij->ij", red.ravel(), hermitian_basis(qdims[0]))
        vals, vecs = np.linalg.eigh(mat)
        return float(vals[0]), [_projector_coeffs(vecs[:, 0])]
    if len(qdims) == 2 and qdims[0] == 2 and qdims[1] == 2:
        return _min_qubit_pair(red.reshape(4, 4), cfg)
    return _min_quantum_general(red, qdims, cfg, rng)


def minimize_product_form(coeffs: np.ndarray, specs: Sequence, cfg: SearchConfig) -> ProductMin:
    """Minimize ``<g_1 x ... x g_N, w>`` over per-factor generator sets.

    ``specs[i]`` is either :class:`FiniteGenerators` (polytopic factor) or
    :class:`QuantumGenerators` (rank-1 projectors of a quantum factor).
    The result is exact whenever at most one quantum factor is present
    (eigenvalue computation) or exactly two qubit factors are (grid scan
    plus alternating descent); otherwise it is a seeded heuristic and
    ``conclusive`` is False.
    """
    dims = tuple(
        s.vectors[0].coeffs.size if isinstance(s, FiniteGenerators) else s.d * s.d
        for s in specs
    )
    tensor_w = np.asarray(coeffs, dtype=float).reshape(dims)
    finite_axes = [i for i, s in enumerate(specs) if isinstance(s, FiniteGenerators)]
    qdims = [s.d for s in specs if isinstance(s, QuantumGenerators)]
    conclusive = len(qdims) <= 1 or (len(qdims) == 2 and qdims == [2, 2])
    rng = np.random.default_rng(cfg.seed)

    best_val, best_factors = np.inf, None
    ranges = [range(len(specs[i].vectors)) for i in finite_axes]
    for combo in itertools.product(*ranges):
        red = tensor_w
        for ax, gi in sorted(zip(finite_axes, combo), reverse=True):
            red = np.tensordot(specs[ax].vectors[gi].coeffs, red, axes=([0], [ax]))
        val, qfactors = _min_over_quantum(red, qdims, cfg, rng)
        if val < best_val:
            factors: list = [None] * len(specs)
            for ax, gi in zip(finite_axes, combo):
                factors[ax] = specs[ax].vectors[gi].coeffs
            it = iter(qfactors)
            for i, s in enumerate(specs):
                if isinstance(s, QuantumGenerators):
                    factors[i] = next(it)
            best_val, best_factors = val, tuple(factors)
    return ProductMin(best_val, best_factors, conclusive)


def _effect_side_specs(atoms: Sequence) -> list:
    return [
        QuantumGenerators(a.d) if isinstance(a, Quantum)
        else FiniteGenerators(tuple(effect_cone_rays(a)))
        for a in atoms
    ]


def _state_side_specs(atoms: Sequence) -> list:
    return [
        QuantumGenerators(a.d) if isinstance(a, Quantum)
        else FiniteGenerators(tuple(state_vertices(a)))
        for a in atoms
    ]


def _ray_from_factors(atoms: Sequence, factors: Sequence[np.ndarray]) -> ProductEffectRay:
    return ProductEffectRay(
        tuple(GptVector(system(a), f) for a, f in zip(atoms, factors))
    )


# ---------------------------------------------------------------------------
# Composite membership and validity
# ---------------------------------------------------------------------------


def composite_state_check(v: GptVector, cfg: SearchConfig | None = None) -> MembershipVerdict:
    """Max-tensor cone membership: nonnegative against all product effects.

    Polytopic factors are checked exhaustively over their dual rays; a
    qubit pair is scanned and refined; anything larger falls back to a
    seeded random-restart search whose acceptance is inconclusive.
    """
    cfg = cfg or SearchConfig()
    atoms = v.atoms
    if len(atoms) == 0:
        val = float(v.coeffs[0])
        status = ACCEPTED if val >= -cfg.tol else REJECTED
        return MembershipVerdict(status, margin=val)
    if len(atoms) == 1:
        return atomic_state_check(v, cfg.tol)
    res = minimize_product_form(v.coeffs, _effect_side_specs(atoms), cfg)
    if res.value >= -cfg.tol:
        status = ACCEPTED if res.conclusive else INCONCLUSIVE_ACCEPT
        return MembershipVerdict(status, margin=res.value)
    return MembershipVerdict(
        REJECTED,
        margin=res.value,
        witness=_ray_from_factors(atoms, res.factors),
        detail=f"product effect evaluates to {res.value:.6g}",
    )


def steer(v: GptVector, e: GptVector, on: int | Sequence[int] | None = None) -> GptVector:
    """Contract a composite vector with an effect on the chosen factor(s).

    ``on`` lists the atom positions the effect acts on, in increasing
    order; by default the effect acts on the trailing atoms.  Steering
    with the unit effect yields the reduced state of the remaining atoms.
    """
    n, k = len(v.atoms), len(e.atoms)
    if on is None:
        on = tuple(range(n - k, n))
    elif isinstance(on, int):
        on = (on,)
    else:
        on = tuple(on)
    if len(on) != k:
        raise ValueError(f"effect has {k} atoms but {len(on)} positions were given")
    if any(not 0 <= i < n for i in on):
        raise IndexError(f"factor index out of range: {on}")
    if list(on) != sorted(set(on)):
        raise ValueError(f"factor positions must be strictly increasing: {on}")
    for j, i in enumerate(on):
        if v.atoms[i] != e.atoms[j]:
            raise ValueError(
                f"effect atom {e.atoms[j]} does not match factor {i} ({v.atoms[i]})"
            )
    vt = v.coeffs.reshape(v.system.atom_dims or (1,))
    et = e.coeffs.reshape(e.system.atom_dims or (1,))
    if k == 0:
        red = vt * float(e.coeffs[0])
    else:
        red = np.tensordot(vt, et, axes=(list(on), list(range(k))))
    remaining = tuple(a for i, a in enumerate(v.atoms) if i not in on)
    return GptVector(SystemType(remaining), red.ravel())


def reduced_state(v: GptVector, keep: Sequence[int]) -> GptVector:
    """Steer with the unit effect on every atom not in ``keep``."""
    keep = set(keep)
    drop = tuple(i for i in range(len(v.atoms)) if i not in keep)
    u = tensor_all([unit_effect(system(v.atoms[i])) for i in drop])
    return steer(v, u, on=drop)


# ---------------------------------------------------------------------------
# Composite effect validity
# ---------------------------------------------------------------------------


def _mixed_state_coeffs(atom) -> np.ndarray:
    if isinstance(atom, Quantum):
        c = np.zeros(atom.dim)
        c[0] = 1.0 / np.sqrt(atom.d)
        return c
    verts = state_vertices(atom)
    return np.mean([s.coeffs for s in verts], axis=0)


def _rank_one_effect_factors(e: GptVector) -> list | None:
    """Split a product effect into per-atom factors, or None if entangled."""
    dims = e.system.atom_dims
    factors = []
    rest = e.coeffs
    for i in range(len(dims) - 1):
        m = rest.reshape(dims[i], -1)
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        if s[0] < 1e-14 or (s.size > 1 and s[1] > 1e-10 * s[0]):
            return None
        f = u[:, 0] * np.sqrt(s[0])
        rest = vt[0] * np.sqrt(s[0])
        ref = float(f @ _mixed_state_coeffs(e.atoms[i]))
        if abs(ref) < 1e-12:
            return None
        if ref < 0:
            f, rest = -f, -rest
        factors.append(GptVector(system(e.atoms[i]), f))
    factors.append(GptVector(system(e.atoms[-1]), rest))
    return factors


def _validate_certificate(e: GptVector, decomposition, tol: float):
    """Check a separable decomposition; returns (ok, detail)."""
    total = 0.0
    recon = np.zeros_like(e.coeffs)
    for weight, factors in decomposition:
        if len(factors) != len(e.atoms):
            raise ValueError(
                f"decomposition term has {len(factors)} factors for {len(e.atoms)} atoms"
            )
        for f, a in zip(factors, e.atoms):
            if f.system != system(a):
                raise ValueError(f"factor system {f.system} does not match atom {a}")
        if weight < -tol:
            return False, f"negative weight {weight:.6g}"
        for f in factors:
            if not atomic_effect_check(f, tol).accepted:
                return False, "a factor fails the atomic effect test"
        total += max(weight, 0.0)
        recon = recon + max(weight, 0.0) * tensor_all(factors).coeffs
    if total > 1.0 + tol:
        return False, f"weights sum to {total:.6g} > 1"
    err = float(np.max(np.abs(recon - e.coeffs)))
    if err > max(tol, 1e-9 * max(1.0, float(np.max(np.abs(e.coeffs))))):
        return False, f"decomposition reconstructs e only to {err:.3g}"
    return True, f"separable certificate with weight sum {total:.6g}"


def composite_effect_check(
    e: GptVector,
    certified_separable=None,
    tol: float = DEFAULT_TOL,
    cfg: SearchConfig | None = None,
) -> MembershipVerdict:
    """Effect validity on a composite system: 0 <= <e, s> <= 1 on all states.

    A supplied separable decomposition ``[(weight, [factor, ...]), ...]``
    with valid factors and sub-unit weight sum certifies validity exactly.
    Product effects are certified automatically.  Without a certificate
    the test is a heuristic: it samples product states, the registered
    extreme probe states, and the product-state minima of ``e`` and
    ``u - e``; finding a violation rejects conclusively, finding none only
    reports inconclusive acceptance.
    """
    cfg = cfg or SearchConfig(tol=tol)
    atoms = e.atoms
    if len(atoms) == 0:
        val = float(e.coeffs[0])
        ok = -tol <= val <= 1.0 + tol
        return MembershipVerdict(ACCEPTED if ok else REJECTED, margin=min(val, 1.0 - val))
    if len(atoms) == 1:
        return atomic_effect_check(e, tol)

    detail = ""
    if certified_separable is not None:
        ok, detail = _validate_certificate(e, certified_separable, tol)
        if ok:
            return MembershipVerdict(ACCEPTED, margin=0.0, detail=detail)
        detail = f"certificate rejected ({detail}); "
    if float(np.max(np.abs(e.coeffs))) == 0.0:
        return MembershipVerdict(ACCEPTED, margin=0.0, detail="zero effect")
    factors = _rank_one_effect_factors(e)
    if factors is not None:
        ok, _ = _validate_certificate(e, [(1.0, factors)], tol)
        if ok:
            return MembershipVerdict(ACCEPTED, margin=0.0, detail="product-effect certificate")

    # Heuristic path: product-state extrema plus registered probe states.
    specs = _state_side_specs(atoms)
    lo = minimize_product_form(e.coeffs, specs, cfg)
    hi = minimize_product_form(-e.coeffs, specs, cfg)
    margin = min(lo.value, 1.0 + hi.value)
    if lo.value < -tol:
        return MembershipVerdict(
            REJECTED, margin=margin,
            witness=_ray_from_factors(atoms, lo.factors),
            detail=detail + f"evaluates to {lo.value:.6g} on a product state",
        )
    if -hi.value > 1.0 + tol:
        return MembershipVerdict(
            REJECTED, margin=margin,
            witness=_ray_from_factors(atoms, hi.factors),
            detail=detail + f"evaluates to {-hi.value:.6g} on a product state",
        )
    for probe in probe_states(e.system):
        val = pair(e, probe)
        margin = min(margin, val, 1.0 - val)
        if val < -tol or val > 1.0 + tol:
            return MembershipVerdict(
                REJECTED, margin=margin, witness=probe,
                detail=detail + f"evaluates to {val:.6g} on a probe state",
            )
    return MembershipVerdict(
        INCONCLUSIVE_ACCEPT, margin=margin,
        detail=detail + "no violation found (heuristic search)",
    )


# ---------------------------------------------------------------------------
# Registry of non-product extreme states of composite cones
# ---------------------------------------------------------------------------

_PROBE_REGISTRY: dict = {}
_PROBE_COMPLETE: set = set()


def register_probe_states(atoms: tuple, states: Iterable[GptVector], complete: bool = False):
    """Register known non-product extreme states of a composite cone.

    With ``complete=True``, the registered states together with all
    products of vertices are asserted to generate the full cone, which
    upgrades generator-based checks on that system to exact ones.
    """
    _PROBE_REGISTRY[atoms] = tuple(states)
    if complete:
        _PROBE_COMPLETE.add(atoms)


def probe_states(sys: SystemType) -> tuple:
    return _PROBE_REGISTRY.get(sys.atoms, ())


def probes_complete(sys: SystemType) -> bool:
    return sys.atoms in _PROBE_COMPLETE


def product_generators_complete(sys: SystemType) -> bool:
    """Do atomic-generator products (plus probes) generate the whole cone?

    Classical atoms have simplicial cones, so they only grade the composite
    into independent slots: with at most one non-classical atom every
    extreme ray is a product.  Otherwise completeness holds only for
    systems whose probe registry is marked complete.
    """
    non_classical = sum(1 for a in sys.atoms if not isinstance(a, Classical))
    return non_classical <= 1 or probes_complete(sys)


def cone_generators(sys: SystemType) -> list:
    """Products of atomic vertices plus the registered probe states.

    For systems whose probe registry is marked complete this is a full
    generator set of the composite cone.  Quantum atoms are not supported
    (their vertex set is a continuum).
    """
    vertex_lists = [state_vertices(a) for a in sys.atoms]
    out = [tensor_all(vs) for vs in itertools.product(*vertex_lists)]
    out.extend(probe_states(sys))
    return out


def box_pair_state(table: np.ndarray) -> GptVector:
    """Encode a no-signalling table p[a, b, x, y] as a B2,2 * B2,2 vector."""
    p = np.asarray(table, dtype=float)
    if p.shape != (2, 2, 2, 2):
        raise ValueError(f"expected table of shape (2, 2, 2, 2), got {p.shape}")
    totals = p.sum(axis=(0, 1))
    if np.max(np.abs(totals - 1.0)) > 1e-10:
        raise ValueError("table is not normalized for every setting pair")
    margA = p.sum(axis=1)  # a, x, y
    margB = p.sum(axis=0)  # b, x, y
    if (np.max(np.abs(margA - margA[:, :, :1])) > 1e-10
            or np.max(np.abs(margB - margB[:, :1, :])) > 1e-10):
        raise ValueError("table is signalling")
    c = np.empty(9)
    for x in range(2):
        for y in range(2):
            c[3 * x + y] = p[0, 0, x, y]
        c[3 * x + 2] = margA[0, x, 0]
    for y in range(2):
        c[6 + y] = margB[0, 0, y]
    c[8] = 1.0
    return GptVector(system(Boxworld(2, 2), Boxworld(2, 2)), c)


def _pr_family() -> list:
    out = []
    for alpha, beta, gamma in itertools.product(range(2), repeat=3):
        p = np.zeros((2, 2, 2, 2))
        for a, b, x, y in itertools.product(range(2), repeat=4):
            if (a + b) % 2 == (x * y + alpha * x + beta * y + gamma) % 2:
                p[a, b, x, y] = 0.5
        out.append(box_pair_state(p))
    return out


_PR_STATES = tuple(_pr_family())

# The 16 products of local vertices plus these 8 box states are exactly the
# extreme points of the bipartite B2,2 state space, so generator-based
# checks on that system are exact.
register_probe_states((Boxworld(2, 2), Boxworld(2, 2)), _PR_STATES, complete=True)


def pr_state() -> GptVector:
    """The bipartite box state whose correlations are p = 1/2 when the
    outcome parity equals the product of the settings, 0 otherwise."""
    return _PR_STATES[0]


def _two_qubit_probes() -> list:
    # Bell states and their partial transposes: non-product members of the
    # two-qubit composite cone.  Not a complete generator list (the witness
    # cone has a continuum of extreme rays), but they catch the canonical
    # invalid effects, e.g. entangled projectors pair at -1/2 with the
    # partially transposed orthogonal Bell state.
    bells = [
        np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0),
        np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0),
        np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0),
        np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0),
    ]
    out = []
    for amp in bells:
        rho = np.outer(amp, amp)
        out.append(hermitian_tensor_to_vector(rho, (2, 2)))
        pt = rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        out.append(hermitian_tensor_to_vector(pt, (2, 2)))
    return out


register_probe_states((Quantum(2), Quantum(2)), _two_qubit_probes())
