"""PR box statistics, CHSH, and the one-bit remote state preparation run."""

import itertools

import numpy as np
import pytest

from witworld import (
    Assemblage,
    bloch_state,
    builtin_state,
    best_deterministic_chsh,
    chsh_value,
    composite_state_check,
    haar_random_states,
    lhs_check,
    pair,
    pr_box_kit,
    pr_box_probability,
    rsp_as_assemblage,
    rsp_run,
    singlet_vector,
    system,
    trace_distance,
    unit_effect,
    vector_to_hermitian,
    vector_to_hermitian_tensor,
    Quantum,
)
from witworld.protocols import (
    BUILTIN_STATE_NAMES,
    deterministic_box,
    encoding_unitary,
    orthogonal_state,
)
from witworld.steering import BIPARTITE


def test_pr_kit_invariants():
    kit = pr_box_kit()
    assert tuple(kit.s_pr.coeffs) == (0.5, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 1.0)
    u = unit_effect(kit.s_pr.system)
    assert pair(u, kit.s_pr) == 1.0
    assert composite_state_check(kit.s_pr).accepted


def test_pr_probability_examples():
    kit = pr_box_kit()
    assert pr_box_probability(kit, 0, 0, 0, 0) == pytest.approx(0.5, abs=1e-12)
    assert pr_box_probability(kit, 0, 1, 1, 1) == pytest.approx(0.5, abs=1e-12)
    assert pr_box_probability(kit, 0, 0, 1, 1) == pytest.approx(0.0, abs=1e-12)
    for a, b, x, y in itertools.product(range(2), repeat=4):
        expected = 0.5 if (a ^ b) == x * y else 0.0
        assert pr_box_probability(kit, a, b, x, y) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(ValueError):
        pr_box_probability(kit, 2, 0, 0, 0)


def test_pr_marginals_are_uniform_and_setting_independent():
    kit = pr_box_kit()
    for a, x, y in itertools.product(range(2), repeat=3):
        marg = sum(pr_box_probability(kit, a, b, x, y) for b in range(2))
        assert marg == pytest.approx(0.5, abs=1e-12)


def test_chsh_values():
    kit = pr_box_kit()
    assert chsh_value(lambda a, b, x, y: pr_box_probability(kit, a, b, x, y)) == pytest.approx(4.0, abs=1e-12)
    assert chsh_value(lambda a, b, x, y: 0.25) == pytest.approx(0.0, abs=1e-12)
    assert chsh_value(deterministic_box((0, 0), (0, 0))) == pytest.approx(2.0, abs=1e-12)
    assert best_deterministic_chsh() == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        chsh_value(lambda a, b, x, y: 0.3)


def test_rsp_on_basis_state():
    run = rsp_run([1.0, 0.0])
    assert run.bits_sent == 1
    assert run.trace_distance_to_target() < 1e-12
    assert np.max(np.abs(run.output_matrix() - np.diag([1.0, 0.0]))) < 1e-12


def test_rsp_on_plus_state_branches():
    run = rsp_run(np.array([1.0, 1.0]) / np.sqrt(2))
    assert run.trace_distance_to_target() < 1e-12
    weights = [b.weight for b in run.branches]
    assert np.allclose(weights, [0.5, 0.5], atol=1e-12)
    # branch structure: outcome 0 holds the target, outcome 1 its orthogonal
    plus = np.full((2, 2), 0.25)
    minus = np.array([[0.25, -0.25], [-0.25, 0.25]])
    assert np.max(np.abs(vector_to_hermitian(run.branches[0].pre_correction) - plus * 2 / 2)) < 1e-12
    assert np.max(np.abs(vector_to_hermitian(run.branches[1].pre_correction) - minus)) < 1e-12
    # after correction both branches hold the target at half weight
    for b in run.branches:
        assert np.max(np.abs(vector_to_hermitian(b.post_correction) - plus)) < 1e-12


def test_rsp_random_states():
    for psi in haar_random_states(25, seed=3):
        run = rsp_run(psi)
        assert run.trace_distance_to_target() < 1e-10
        assert np.allclose([b.weight for b in run.branches], [0.5, 0.5], atol=1e-12)


def test_rsp_input_validation():
    with pytest.raises(ValueError):
        rsp_run([1.0, 1.0])
    with pytest.raises(ValueError):
        rsp_run([1.0, 0.0, 0.0])


def test_encoding_unitary_and_orthogonal_state():
    rng = np.random.default_rng(4)
    for psi in haar_random_states(10, seed=5):
        perp = orthogonal_state(psi)
        assert abs(np.vdot(perp, psi)) < 1e-14
        u = encoding_unitary(psi)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12
        assert np.allclose(u @ perp, [1.0, 0.0], atol=1e-12)
        assert np.allclose(u @ psi, [0.0, 1.0], atol=1e-12)


def test_singlet_vector_is_the_singlet():
    m = vector_to_hermitian_tensor(singlet_vector())
    amp = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2)
    assert np.max(np.abs(m - np.outer(amp, amp))) < 1e-14


def test_bloch_state():
    assert np.allclose(bloch_state(0.0, 0.0), [1.0, 0.0])
    v = bloch_state(np.pi / 2, 0.0)
    assert np.allclose(v, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-14)


def test_rsp_assemblage_structure():
    grid = haar_random_states(4, seed=6)
    asm = rsp_as_assemblage(grid)
    assert asm.scenario == "instrumental"
    u = unit_effect(system(Quantum(2)))
    for i, psi in enumerate(grid):
        target = np.outer(psi, psi.conj())
        total = np.zeros((2, 2), dtype=complex)
        for a in range(2):
            el = asm.element(a, i)
            assert pair(u, el) == pytest.approx(0.5, abs=1e-12)
            total += vector_to_hermitian(el)
        assert np.max(np.abs(total - target)) < 1e-10
        # wiring the assemblage reproduces the protocol output
        run = rsp_run(psi)
        assert trace_distance(total, run.output_matrix()) < 1e-12


def test_rsp_assemblage_restriction_smoke():
    # two non-parallel, non-orthogonal targets: elements cannot commute
    psi1 = bloch_state(0.0, 0.0)
    psi2 = bloch_state(np.pi / 3, 0.0)
    asm = rsp_as_assemblage([psi1, psi2])
    els = {(a, x): asm.element(a, x) for a in range(2) for x in range(2)}
    as_bipartite = Assemblage(BIPARTITE, (2,), (2,), els)
    verdict, _ = lhs_check(as_bipartite)
    assert verdict.status == "unsupported"


def test_builtin_states_resolve_and_validate():
    for name in BUILTIN_STATE_NAMES:
        v = builtin_state(name)
        res = composite_state_check(v)
        assert res.passed, name
    with pytest.raises(KeyError):
        builtin_state("nope")
