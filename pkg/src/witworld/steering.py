"""Steering assemblages: data model, no-signalling checks, LHS feasibility.

An assemblage collects the subnormalized quantum states of the passive
party, indexed by the black-box parties' outcomes and settings (plus the
passive party's own input in the Bob-with-input scenario, or with that
input wired to the outcome in the instrumental scenario).  Constructors
are provided both for assemblages realized by measuring a shared
composite state and for the specific post-quantum examples built from PR
states, entangled quantum states, and the controlled transpose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .compose import (
    SearchConfig,
    composite_state_check,
    hermitian_tensor_to_vector,
    pr_state,
    steer,
    tensor_all,
)
from .lp import solve_feasibility
from .systems import (
    Boxworld,
    Classical,
    GptVector,
    Quantum,
    SystemType,
    atomic_state_check,
    classical_outcome_effect,
    effect_cone_rays,
    hermitian_to_vector,
    pair,
    system,
    unit_effect,
    vector_to_hermitian,
)
from .transforms import (
    LinearMap,
    apply,
    compose_seq,
    controlled_map,
    identity_map,
    measurement_map,
    parallel,
    partial_apply_classical,
    preparation_map,
    transpose_map,
    trace_condition_check,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
)
from .verdict import ACCEPTED, REJECTED, UNSUPPORTED, MembershipVerdict

BIPARTITE = "bipartite"
MULTIPARTITE = "multipartite"
BOB_WITH_INPUT = "bob-with-input"
INSTRUMENTAL = "instrumental"

_SCENARIOS = (BIPARTITE, MULTIPARTITE, BOB_WITH_INPUT, INSTRUMENTAL)

ELEMENT_PSD_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Indexed family of subnormalized quantum states.

    Element keys by scenario:

    * bipartite / instrumental: ``(a, x)``
    * multipartite: ``(a_tuple, x_tuple)``
    * bob-with-input: ``(a, x, y)``
    """

    scenario: str
    outcomes: tuple
    settings: tuple
    elements: dict
    bob_inputs: int | None = None

    def __post_init__(self):
        if self.scenario not in _SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "settings", tuple(self.settings))
        if self.scenario == BOB_WITH_INPUT and not self.bob_inputs:
            raise ValueError("bob-with-input assemblages need bob_inputs")
        if self.scenario != BOB_WITH_INPUT and self.bob_inputs is not None:
            raise ValueError(f"{self.scenario} assemblages take no bob_inputs")
        expected = set(self._expected_keys())
        got = set(self.elements)
        if got != expected:
            missing = sorted(expected - got)[:3]
            extra = sorted(got - expected)[:3]
            raise ValueError(f"incomplete element index: missing {missing}, extra {extra}")
        sys = None
        for key, el in self.elements.items():
            if len(el.atoms) != 1 or not isinstance(el.atoms[0], Quantum):
                raise ValueError(f"element {key} is not over a single quantum atom")
            sys = sys or el.system
            if el.system != sys:
                raise ValueError("elements live on different systems")
            check = atomic_state_check(el, ELEMENT_PSD_TOL)
            if not check.accepted:
                raise ValueError(f"element {key} is not positive: {check.describe()}")

    def _expected_keys(self):
        if self.scenario == MULTIPARTITE:
            return [
                (a, x)
                for x in itertools.product(*(range(s) for s in self.settings))
                for a in itertools.product(*(range(o) for o in self.outcomes))
            ]
        if self.scenario == BOB_WITH_INPUT:
            return [
                (a, x, y)
                for a in range(self.outcomes[0])
                for x in range(self.settings[0])
                for y in range(self.bob_inputs)
            ]
        return [
            (a, x)
            for a in range(self.outcomes[0])
            for x in range(self.settings[0])
        ]

    @property
    def d(self) -> int:
        el = next(iter(self.elements.values()))
        return el.atoms[0].d

    def element(self, *key) -> GptVector:
        return self.elements[key if len(key) > 1 else key[0]]

    def matrix(self, *key) -> np.ndarray:
        return vector_to_hermitian(self.elements[key if len(key) > 1 else key[0]])

    def as_parties(self):
        """Normalize to per-party tuples: keys (a_tuple, x_tuple)."""
        if self.scenario == MULTIPARTITE:
            return self.outcomes, self.settings, dict(self.elements)
        if self.scenario in (BIPARTITE, INSTRUMENTAL):
            els = {((a,), (x,)): v for (a, x), v in self.elements.items()}
            return (self.outcomes[0],), (self.settings[0],), els
        raise ValueError(f"cannot flatten a {self.scenario} assemblage to parties")


def _stack(asm: Assemblage):
    """Element coefficients as an array of shape (*outcomes, *settings, dim)."""
    outcomes, settings, els = asm.as_parties()
    dim = next(iter(els.values())).coeffs.size
    arr = np.empty(tuple(outcomes) + tuple(settings) + (dim,))
    for (a, x), el in els.items():
        arr[a + x] = el.coeffs
    return arr


# ---------------------------------------------------------------------------
# No-signalling checks
# ---------------------------------------------------------------------------


def _positivity_margin(asm: Assemblage, tol: float):
    worst, which = np.inf, None
    for key, el in asm.elements.items():
        m = atomic_state_check(el, tol).margin
        if m < worst:
            worst, which = m, key
    return worst, which


def ns_check_bipartite(asm: Assemblage, tol: float = 1e-9) -> MembershipVerdict:
    """Positivity, setting-independent totals, and unit normalization."""
    if asm.scenario != BIPARTITE:
        raise ValueError(f"expected a bipartite assemblage, got {asm.scenario}")
    failures = []
    margin, key = _positivity_margin(asm, tol)
    if margin < -tol:
        failures.append(f"element {key} not positive ({margin:.3g})")
    sums = np.stack([
        np.sum([asm.element(a, x).coeffs for a in range(asm.outcomes[0])], axis=0)
        for x in range(asm.settings[0])
    ])
    dev = float(np.max(np.abs(sums - sums[0]))) if sums.shape[0] > 1 else 0.0
    margin = min(margin, -dev)
    if dev > tol:
        failures.append(f"outcome totals depend on the setting (dev {dev:.3g})")
    rho = GptVector(next(iter(asm.elements.values())).system, sums[0])
    norm_err = abs(pair(unit_effect(rho.system), rho) - 1.0)
    margin = min(margin, -norm_err)
    if norm_err > tol:
        failures.append(f"reduced state has trace {1.0 + norm_err:.6g}")
    if failures:
        return MembershipVerdict(REJECTED, margin=margin, detail="; ".join(failures))
    return MembershipVerdict(ACCEPTED, margin=margin)


def ns_check_multipartite(asm: Assemblage, tol: float = 1e-9) -> MembershipVerdict:
    """Positivity, global normalization, and well-defined marginals.

    For every subset of parties, the partial sum over the other parties'
    outcomes must not depend on their settings.
    """
    if asm.scenario != MULTIPARTITE:
        raise ValueError(f"expected a multipartite assemblage, got {asm.scenario}")
    failures = []
    margin, key = _positivity_margin(asm, tol)
    if margin < -tol:
        failures.append(f"element {key} not positive ({margin:.3g})")
    arr = _stack(asm)
    n = len(asm.outcomes)
    for kept in itertools.chain.from_iterable(
        itertools.combinations(range(n), r) for r in range(n)
    ):
        dropped = [i for i in range(n) if i not in kept]
        partial = arr.sum(axis=tuple(dropped))
        dev = 0.0
        setting_axes = tuple(len(kept) + i for i in dropped)
        if setting_axes:
            dev = float(np.max(partial.max(axis=setting_axes) - partial.min(axis=setting_axes)))
        margin = min(margin, -dev)
        if dev > tol:
            failures.append(
                f"marginal over parties {tuple(kept)} depends on dropped settings (dev {dev:.3g})"
            )
    total = arr.sum(axis=tuple(range(n)))
    rho = total[(0,) * n]
    el_sys = next(iter(asm.elements.values())).system
    norm_err = abs(pair(unit_effect(el_sys), GptVector(el_sys, rho)) - 1.0)
    margin = min(margin, -norm_err)
    if norm_err > tol:
        failures.append(f"reduced state has trace {1.0 + norm_err:.6g}")
    if failures:
        return MembershipVerdict(REJECTED, margin=margin, detail="; ".join(failures))
    return MembershipVerdict(ACCEPTED, margin=margin)


def ns_check_bob_with_input(asm: Assemblage, tol: float = 1e-9) -> MembershipVerdict:
    """Positivity, x-independent totals per input, input-independent traces."""
    if asm.scenario != BOB_WITH_INPUT:
        raise ValueError(f"expected a bob-with-input assemblage, got {asm.scenario}")
    failures = []
    margin, key = _positivity_margin(asm, tol)
    if margin < -tol:
        failures.append(f"element {key} not positive ({margin:.3g})")
    n_a, n_x, n_y = asm.outcomes[0], asm.settings[0], asm.bob_inputs
    for y in range(n_y):
        sums = np.stack([
            np.sum([asm.element(a, x, y).coeffs for a in range(n_a)], axis=0)
            for x in range(n_x)
        ])
        dev = float(np.max(np.abs(sums - sums[0]))) if n_x > 1 else 0.0
        margin = min(margin, -dev)
        if dev > tol:
            failures.append(f"totals for input y={y} depend on the setting (dev {dev:.3g})")
    el_sys = next(iter(asm.elements.values())).system
    u = unit_effect(el_sys)
    traces = np.array([
        [[pair(u, asm.element(a, x, y)) for y in range(n_y)] for x in range(n_x)]
        for a in range(n_a)
    ])
    dev = float(np.max(traces.max(axis=2) - traces.min(axis=2)))
    margin = min(margin, -dev)
    if dev > tol:
        failures.append(f"outcome probabilities depend on Bob's input (dev {dev:.3g})")
    norm_err = float(np.max(np.abs(traces.sum(axis=0) - 1.0)))
    margin = min(margin, -norm_err)
    if norm_err > tol:
        failures.append(f"outcome probabilities are not normalized (dev {norm_err:.3g})")
    if failures:
        return MembershipVerdict(REJECTED, margin=margin, detail="; ".join(failures))
    return MembershipVerdict(ACCEPTED, margin=margin)


def ns_check(asm: Assemblage, tol: float = 1e-9) -> MembershipVerdict:
    if asm.scenario == BIPARTITE:
        return ns_check_bipartite(asm, tol)
    if asm.scenario == MULTIPARTITE:
        return ns_check_multipartite(asm, tol)
    if asm.scenario == BOB_WITH_INPUT:
        return ns_check_bob_with_input(asm, tol)
    raise ValueError("instrumental assemblages are validated through their wiring")


def wire_instrumental(bwi: Assemblage, tol: float = 1e-9) -> Assemblage:
    """Feed the black-box outcome back as the passive party's input (y = a)."""
    if bwi.scenario != BOB_WITH_INPUT:
        raise ValueError(f"expected a bob-with-input assemblage, got {bwi.scenario}")
    if bwi.bob_inputs != bwi.outcomes[0]:
        raise ValueError(
            f"wiring needs matching cardinalities, got outcomes {bwi.outcomes[0]} "
            f"and inputs {bwi.bob_inputs}"
        )
    check = ns_check_bob_with_input(bwi, tol)
    if not check.passed:
        raise ValueError(f"assemblage is signalling: {check.detail}")
    els = {
        (a, x): bwi.element(a, x, a)
        for a in range(bwi.outcomes[0])
        for x in range(bwi.settings[0])
    }
    return Assemblage(INSTRUMENTAL, bwi.outcomes, bwi.settings, els)


# ---------------------------------------------------------------------------
# Realizations
# ---------------------------------------------------------------------------


def assemblage_from_realization(
    shared: GptVector,
    measurements: Sequence[LinearMap],
    bob_transform: LinearMap | None = None,
    bob_input: int | None = None,
    cfg: SearchConfig | None = None,
    validate: bool = True,
) -> Assemblage:
    """Measure a shared composite state and collect the steered states.

    ``measurements[i]`` is a controlled measurement (classical setting
    atom first, then the party's share) producing that party's classical
    outcome.  ``bob_transform`` maps the remaining share to a quantum
    system; in the Bob-with-input scenario (``bob_input`` set) it takes
    an extra leading classical input atom.
    """
    cfg = cfg or SearchConfig()
    n = len(measurements)
    if n < 1:
        raise ValueError("need at least one black-box party")
    if len(shared.atoms) < n:
        raise ValueError("shared state has fewer factors than parties")
    settings, outcomes = [], []
    for i, meas in enumerate(measurements):
        atoms = meas.domain.atoms
        if len(atoms) < 2 or not isinstance(atoms[0], Classical):
            raise ValueError(f"measurement {i} is not setting-controlled")
        if atoms[1:] != (shared.atoms[i],):
            raise ValueError(
                f"measurement {i} acts on {SystemType(atoms[1:])}, share is {shared.atoms[i]}"
            )
        cod = meas.codomain.atoms
        if len(cod) != 1 or not isinstance(cod[0], Classical):
            raise ValueError(f"measurement {i} must output a classical outcome")
        if not trace_condition_check(meas, "preserving").accepted:
            raise ValueError(f"measurement {i} is not normalized")
        settings.append(atoms[0].v)
        outcomes.append(cod[0].v)
    bob_sys = SystemType(shared.atoms[n:])
    if bob_transform is None:
        bob_transform = identity_map(bob_sys)
    expected_dom = (
        system(Classical(bob_input)) * bob_sys if bob_input is not None else bob_sys
    )
    if bob_transform.domain != expected_dom:
        raise ValueError(
            f"transform domain {bob_transform.domain} does not match {expected_dom}"
        )
    cod = bob_transform.codomain.atoms
    if len(cod) != 1 or not isinstance(cod[0], Quantum):
        raise ValueError("the passive party must end up with a single quantum system")
    if validate:
        check = composite_state_check(shared, cfg)
        if not check.passed:
            raise ValueError(f"shared state is outside the composite cone: {check.describe()}")

    def steered(x_vec, bob_map):
        alice = [partial_apply_classical(measurements[i], x_vec[i]) for i in range(n)]
        out = apply(parallel(*alice, bob_map), shared)
        result = {}
        for a_vec in itertools.product(*(range(o) for o in outcomes)):
            eff = tensor_all([
                classical_outcome_effect(outcomes[i], a_vec[i]) for i in range(n)
            ])
            result[a_vec] = steer(out, eff, on=tuple(range(n)))
        return result

    if bob_input is not None:
        if n != 1:
            raise ValueError("bob-with-input realizations support one black-box party")
        els = {}
        for x in range(settings[0]):
            for y in range(bob_input):
                branch = steered((x,), partial_apply_classical(bob_transform, y))
                for a_vec, sigma in branch.items():
                    els[(a_vec[0], x, y)] = sigma
        return Assemblage(BOB_WITH_INPUT, tuple(outcomes), tuple(settings), els,
                          bob_inputs=bob_input)
    els = {}
    for x_vec in itertools.product(*(range(s) for s in settings)):
        for a_vec, sigma in steered(x_vec, bob_transform).items():
            els[(a_vec, x_vec)] = sigma
    if n == 1:
        flat = {(a[0], x[0]): v for (a, x), v in els.items()}
        return Assemblage(BIPARTITE, tuple(outcomes), tuple(settings), flat)
    return Assemblage(MULTIPARTITE, tuple(outcomes), tuple(settings), els)


# ---------------------------------------------------------------------------
# LHS feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LhsConfig:
    tol: float = 1e-9
    strategy_cap: int = 10 ** 6


@dataclass(frozen=True)
class LhsModel:
    """Shared-randomness model: response functions with subnormalized states.

    ``strategies[i]`` is a tuple of per-party response functions (each a
    tuple mapping setting to outcome); ``local_states[i]`` is the matching
    subnormalized state, whose trace is the strategy weight.
    """

    strategies: tuple
    weights: tuple
    local_states: tuple

    def element(self, a_vec, x_vec) -> GptVector:
        out = None
        for lam, state in zip(self.strategies, self.local_states):
            if all(f[x] == a for f, a, x in zip(lam, a_vec, x_vec)):
                out = state.coeffs if out is None else out + state.coeffs
        sys = self.local_states[0].system
        return GptVector(sys, out if out is not None else np.zeros(sys.dim))

    def max_error(self, asm: Assemblage) -> float:
        _, _, els = asm.as_parties()
        return max(
            float(np.max(np.abs(self.element(a, x).coeffs - el.coeffs)))
            for (a, x), el in els.items()
        )


@dataclass(frozen=True)
class SteeringInequality:
    """Separating functional: every LHS assemblage scores <= 0, this one more."""

    coefficients: dict
    eigenvector: np.ndarray
    value: float

    def evaluate(self, asm: Assemblage) -> float:
        _, _, els = asm.as_parties()
        k = self.eigenvector
        return float(sum(
            c * np.real(k.conj() @ vector_to_hermitian(els[key]) @ k)
            for key, c in self.coefficients.items()
        ))


def _common_eigenbasis(mats, tol):
    scale = max(1.0, max(float(np.max(np.abs(m))) for m in mats))
    ctol = max(tol, 1e-10) * scale
    for a, b in itertools.combinations(mats, 2):
        if np.max(np.abs(a @ b - b @ a)) > ctol:
            return None
    for seed in (190452, 881237, 55901):
        w = np.random.default_rng(seed).normal(size=len(mats))
        h = sum(wi * m for wi, m in zip(w, mats))
        _, u = np.linalg.eigh(h)
        off = 0.0
        for m in mats:
            r = u.conj().T @ m @ u
            off = max(off, float(np.max(np.abs(r - np.diag(np.diag(r))))))
        if off <= max(tol, 1e-9) * scale:
            return u
    return None


def _party_strategies(outcomes, settings, cap):
    total = 1
    for o, s in zip(outcomes, settings):
        total *= o ** s
        if total > cap:
            raise ValueError(f"deterministic strategy count exceeds the cap of {cap}")
    per_party = [
        list(itertools.product(range(o), repeat=s)) for o, s in zip(outcomes, settings)
    ]
    return list(itertools.product(*per_party))


def lhs_check(asm: Assemblage, solver_cfg: LhsConfig | None = None):
    """Decide whether the assemblage admits a shared-randomness model.

    Supported for assemblages whose elements pairwise commute: in a common
    eigenbasis the problem splits into one linear feasibility problem per
    eigenvector over the deterministic response functions.  Feasibility
    yields an explicit reconstructing :class:`LhsModel`; infeasibility
    yields a :class:`SteeringInequality` certificate.  Non-commuting
    assemblages are reported as unsupported.
    """
    cfg = solver_cfg or LhsConfig()
    if asm.scenario not in (BIPARTITE, MULTIPARTITE):
        raise ValueError(f"LHS test supports bipartite or multipartite, got {asm.scenario}")
    outcomes, settings, els = asm.as_parties()
    keys = sorted(els)
    mats = [vector_to_hermitian(els[k]) for k in keys]
    u = _common_eigenbasis(mats, cfg.tol)
    if u is None:
        return (
            MembershipVerdict(UNSUPPORTED, detail="elements do not commute within tolerance"),
            None,
        )
    d = mats[0].shape[0]
    strategies = _party_strategies(outcomes, settings, cfg.strategy_cap)
    dmat = np.zeros((len(keys), len(strategies)))
    for col, lam in enumerate(strategies):
        for row, (a_vec, x_vec) in enumerate(keys):
            if all(f[x] == a for f, a, x in zip(lam, a_vec, x_vec)):
                dmat[row, col] = 1.0
    tables = np.empty((len(keys), d))
    for row, m in enumerate(mats):
        tables[row] = np.real(np.diag(u.conj().T @ m @ u))

    weights = np.zeros((len(strategies), d))
    for k in range(d):
        res = solve_feasibility(dmat, tables[:, k], tol=cfg.tol)
        if not res.feasible:
            y = res.certificate
            coeffs = {key: float(y[row]) for row, key in enumerate(keys) if abs(y[row]) > 1e-13}
            cert = SteeringInequality(coeffs, u[:, k].copy(), float(y @ tables[:, k]))
            return (
                MembershipVerdict(
                    REJECTED,
                    margin=-cert.value,
                    witness=cert,
                    detail="no shared-randomness model reproduces the eigenvalue table",
                ),
                None,
            )
        weights[:, k] = res.x
    el_sys = next(iter(els.values())).system
    keep = [i for i in range(len(strategies)) if np.sum(weights[i]) > 1e-13]
    local_states, wts, lams = [], [], []
    for i in keep:
        mat = u @ np.diag(weights[i]) @ u.conj().T
        local_states.append(hermitian_to_vector((mat + mat.conj().T) / 2))
        wts.append(float(np.sum(weights[i])))
        lams.append(strategies[i])
    model = LhsModel(tuple(lams), tuple(wts), tuple(local_states))
    err = model.max_error(asm)
    return (
        MembershipVerdict(ACCEPTED, margin=-err, detail=f"model reconstructs within {err:.3g}"),
        model,
    )


# ---------------------------------------------------------------------------
# Constructors for the flagship examples
# ---------------------------------------------------------------------------


PAPER_ASSEMBLAGE_NAMES = ("pr-box", "bwi-star", "bwi-star-star", "instrumental-star", "gleason")


def _controlled_box_measurement() -> LinearMap:
    rays = effect_cone_rays(Boxworld(2, 2))
    branches = [
        measurement_map([rays[2 * x], rays[2 * x + 1]]) for x in range(2)
    ]
    return controlled_map(branches)


def _controlled_pauli_measurement(transposed: bool = True) -> LinearMap:
    branches = []
    for sigma in (PAULI_X, PAULI_Y, PAULI_Z):
        s = sigma.T if transposed else sigma
        effects = [hermitian_to_vector((np.eye(2) + sign * s) / 2) for sign in (1, -1)]
        branches.append(measurement_map(effects))
    return controlled_map(branches)


def _phi_plus_vector() -> GptVector:
    amp = np.zeros(4, dtype=complex)
    amp[0] = amp[3] = 1 / np.sqrt(2)
    return hermitian_tensor_to_vector(np.outer(amp, amp.conj()), (2, 2))


def paper_assemblage(
    name: str,
    witness: GptVector | None = None,
    measurements: Sequence[Sequence[Sequence[GptVector]]] | None = None,
    cfg: SearchConfig | None = None,
) -> Assemblage:
    """Build one of the flagship assemblages by its realization diagram.

    ``pr-box``: two box parties measure a shared PR state alongside a
    maximally mixed qubit.  ``bwi-star``: the passive party's device
    measures its half of a PR state conditioned on an input and prepares
    the basis state given by the result.  ``bwi-star-star``: Pauli
    measurements on a maximally entangled pair with a transpose applied
    conditioned on the input.  ``instrumental-star``: the previous one
    wired.  ``gleason``: quantum measurements on a supplied composite
    state (any entanglement witness), given per-party POVM lists.
    """
    cfg = cfg or SearchConfig()
    if name == "pr-box":
        mixed = hermitian_to_vector(np.eye(2, dtype=complex) / 2)
        shared = tensor_all([pr_state(), mixed])
        meas = _controlled_box_measurement()
        return assemblage_from_realization(shared, [meas, meas], cfg=cfg)
    if name == "bwi-star":
        device = compose_seq(
            preparation_map(
                [hermitian_to_vector(np.diag([1.0, 0.0]).astype(complex)),
                 hermitian_to_vector(np.diag([0.0, 1.0]).astype(complex))]
            ),
            _controlled_box_measurement(),
        )
        return assemblage_from_realization(
            pr_state(), [_controlled_box_measurement()],
            bob_transform=device, bob_input=2, cfg=cfg,
        )
    if name == "bwi-star-star":
        ct = controlled_map([identity_map(system(Quantum(2))), transpose_map(2)])
        return assemblage_from_realization(
            _phi_plus_vector(), [_controlled_pauli_measurement()],
            bob_transform=ct, bob_input=2, cfg=cfg,
        )
    if name == "instrumental-star":
        return wire_instrumental(paper_assemblage("bwi-star-star", cfg=cfg))
    if name == "gleason":
        if witness is None or measurements is None:
            raise ValueError("gleason assemblages need a witness state and measurements")
        if not all(isinstance(a, Quantum) for a in witness.atoms):
            raise ValueError("gleason witness must live on quantum atoms")
        check = composite_state_check(witness, cfg)
        if not check.passed:
            raise ValueError(f"witness fails composite membership: {check.describe()}")
        controlled = []
        for party, povms in enumerate(measurements):
            branches = []
            for povm in povms:
                for e in povm:
                    if len(e.atoms) != 1 or not isinstance(e.atoms[0], Quantum):
                        raise ValueError("gleason measurements must be quantum")
                branches.append(measurement_map(list(povm)))
            controlled.append(controlled_map(branches))
        return assemblage_from_realization(witness, controlled, cfg=cfg)
    raise KeyError(f"unknown assemblage {name!r}; choose from {PAPER_ASSEMBLAGE_NAMES}")
