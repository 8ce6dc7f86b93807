"""JSON round trips and malformed-input rejection."""

import numpy as np
import pytest

from witworld import (
    Boxworld,
    Classical,
    Quantum,
    SearchConfig,
    hermitian_tensor_to_vector,
    lhs_check,
    paper_assemblage,
    pr_state,
    system,
    transpose_map,
)
from witworld.serialize import (
    MalformedInputError,
    assemblage_from_json,
    assemblage_to_json,
    atom_from_str,
    gptvector_from_json,
    gptvector_to_json,
    linear_map_from_json,
    linear_map_to_json,
    load_json_file,
    dump_json,
    search_config_from_json,
    search_config_to_json,
    steering_inequality_to_json,
)


def test_atom_codes():
    assert atom_from_str("Q2") == Quantum(2)
    assert atom_from_str("C3") == Classical(3)
    assert atom_from_str("B2,2") == Boxworld(2, 2)
    with pytest.raises(MalformedInputError):
        atom_from_str("X5")


def test_vector_round_trip_coeffs():
    v = pr_state()
    back = gptvector_from_json(gptvector_to_json(v))
    assert back.system == v.system
    assert np.array_equal(back.coeffs, v.coeffs)


def test_vector_round_trip_matrix_form():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = (a + a.conj().T) / 2
    v = hermitian_tensor_to_vector(m, (2, 2))
    enc = gptvector_to_json(v, matrix_form=True)
    assert "matrix" in enc
    back = gptvector_from_json(enc)
    assert np.max(np.abs(back.coeffs - v.coeffs)) < 1e-12


def test_vector_malformed():
    with pytest.raises(MalformedInputError):
        gptvector_from_json({"coeffs": [1, 2]})
    with pytest.raises(MalformedInputError):
        gptvector_from_json({"system": ["Q2"], "coeffs": [1, 2]})
    with pytest.raises(MalformedInputError):
        gptvector_from_json({"system": ["C2"], "matrix": {"re": [[1, 0], [0, 1]]}})
    with pytest.raises(MalformedInputError):
        gptvector_from_json({"system": ["Q2"]})


def test_linear_map_round_trip():
    t = transpose_map(2)
    back = linear_map_from_json(linear_map_to_json(t))
    assert back.domain == t.domain and back.codomain == t.codomain
    assert np.array_equal(back.matrix, t.matrix)
    with pytest.raises(MalformedInputError):
        linear_map_from_json({"domain": ["Q2"], "matrix": [[1]]})
    with pytest.raises(MalformedInputError):
        linear_map_from_json(
            {"domain": ["Q2"], "codomain": ["Q2"], "matrix": [[1, 0], [0, 1]]}
        )


def test_search_config_round_trip_and_defaults():
    cfg = SearchConfig(grid=90, restarts=10, seed=5, tol=1e-8)
    assert search_config_from_json(search_config_to_json(cfg)) == cfg
    partial = search_config_from_json({"grid": 60})
    assert partial.grid == 60 and partial.restarts == SearchConfig().restarts
    with pytest.raises(MalformedInputError):
        search_config_from_json({"grid": "many"})


@pytest.mark.parametrize("name", ["pr-box", "bwi-star", "bwi-star-star", "instrumental-star"])
def test_assemblage_round_trip(name):
    asm = paper_assemblage(name)
    back = assemblage_from_json(assemblage_to_json(asm))
    assert back.scenario == asm.scenario
    assert back.outcomes == asm.outcomes and back.settings == asm.settings
    for key, el in asm.elements.items():
        assert np.max(np.abs(back.elements[key].coeffs - el.coeffs)) < 1e-12


def test_assemblage_malformed():
    asm = paper_assemblage("pr-box")
    enc = assemblage_to_json(asm)
    broken = dict(enc)
    broken["scenario"] = "weird"
    with pytest.raises(MalformedInputError):
        assemblage_from_json(broken)
    broken = dict(enc)
    broken["elements"] = dict(list(enc["elements"].items())[:3])
    with pytest.raises(MalformedInputError):
        assemblage_from_json(broken)
    with pytest.raises(MalformedInputError):
        assemblage_from_json({"scenario": "bipartite"})


def test_certificate_json_shape():
    verdict, _ = lhs_check(paper_assemblage("pr-box"))
    cert = steering_inequality_to_json(verdict.witness, "multipartite")
    assert cert["type"] == "steering-inequality"
    assert cert["value"] > 0 and cert["lhs_bound"] == 0.0
    assert all("|" in k for k in cert["coefficients"])


def test_file_helpers(tmp_path):
    path = tmp_path / "vec.json"
    dump_json(gptvector_to_json(pr_state()), str(path))
    assert load_json_file(str(path))["system"] == ["B2,2", "B2,2"]
    with pytest.raises(MalformedInputError):
        load_json_file(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInputError):
        load_json_file(str(bad))
