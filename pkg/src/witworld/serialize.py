"""JSON formats for vectors, maps, search configuration, and assemblages.

Atoms are encoded as ``"Q<d>"``, ``"C<v>"``, ``"B<n>,<k>"``.  Vectors are
``{"system": [...], "coeffs": [...]}``; vectors over quantum atoms may
instead carry ``{"matrix": {"re": [[...]], "im": [[...]]}}``.  Linear maps
are ``{"domain": [...], "codomain": [...], "matrix": [[...]]}``.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .compose import SearchConfig, hermitian_tensor_to_vector
from .steering import (
    BIPARTITE,
    BOB_WITH_INPUT,
    INSTRUMENTAL,
    MULTIPARTITE,
    Assemblage,
    SteeringInequality,
)
from .systems import (
    Boxworld,
    Classical,
    GptVector,
    Quantum,
    SystemType,
    vector_to_hermitian,
)
from .transforms import LinearMap


class MalformedInputError(ValueError):
    """Raised when a JSON document does not match the expected format."""


def atom_to_str(atom) -> str:
    return str(atom)


def atom_from_str(s: str):
    m = re.fullmatch(r"Q(\d+)", s)
    if m:
        return Quantum(int(m.group(1)))
    m = re.fullmatch(r"C(\d+)", s)
    if m:
        return Classical(int(m.group(1)))
    m = re.fullmatch(r"B(\d+),(\d+)", s)
    if m:
        return Boxworld(int(m.group(1)), int(m.group(2)))
    raise MalformedInputError(f"cannot parse atom {s!r} (expected Q<d>, C<v>, or B<n>,<k>)")


def system_to_json(sys: SystemType) -> list:
    return [atom_to_str(a) for a in sys.atoms]


def system_from_json(items) -> SystemType:
    if not isinstance(items, (list, tuple)):
        raise MalformedInputError("system must be a list of atom strings")
    return SystemType(tuple(atom_from_str(s) for s in items))


def _matrix_to_json(m: np.ndarray) -> dict:
    return {"re": np.real(m).tolist(), "im": np.imag(m).tolist()}


def _matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise MalformedInputError("matrix must be an object with 're' (and optional 'im')")
    re_part = np.asarray(obj["re"], dtype=float)
    im_part = np.asarray(obj.get("im", np.zeros_like(re_part)), dtype=float)
    if re_part.shape != im_part.shape or re_part.ndim != 2:
        raise MalformedInputError("matrix 're' and 'im' must be equal-shape 2d arrays")
    return re_part + 1j * im_part


def gptvector_to_json(v: GptVector, matrix_form: bool = False) -> dict:
    out = {"system": system_to_json(v.system)}
    if matrix_form and all(isinstance(a, Quantum) for a in v.atoms) and v.atoms:
        from .compose import vector_to_hermitian_tensor

        out["matrix"] = _matrix_to_json(vector_to_hermitian_tensor(v))
    else:
        out["coeffs"] = v.coeffs.tolist()
    return out


def gptvector_from_json(obj) -> GptVector:
    if not isinstance(obj, dict) or "system" not in obj:
        raise MalformedInputError("vector must be an object with 'system'")
    sys = system_from_json(obj["system"])
    if "coeffs" in obj:
        coeffs = np.asarray(obj["coeffs"], dtype=float)
        try:
            return GptVector(sys, coeffs)
        except ValueError as exc:
            raise MalformedInputError(str(exc)) from exc
    if "matrix" in obj:
        if not all(isinstance(a, Quantum) for a in sys.atoms) or not sys.atoms:
            raise MalformedInputError("matrix form is only for quantum systems")
        mat = _matrix_from_json(obj["matrix"])
        dims = tuple(a.d for a in sys.atoms)
        try:
            return hermitian_tensor_to_vector(mat, dims)
        except ValueError as exc:
            raise MalformedInputError(str(exc)) from exc
    raise MalformedInputError("vector needs 'coeffs' or 'matrix'")


def linear_map_to_json(t: LinearMap) -> dict:
    return {
        "domain": system_to_json(t.domain),
        "codomain": system_to_json(t.codomain),
        "matrix": t.matrix.tolist(),
    }


def linear_map_from_json(obj) -> LinearMap:
    if not isinstance(obj, dict) or not {"domain", "codomain", "matrix"} <= set(obj):
        raise MalformedInputError("map must carry 'domain', 'codomain', 'matrix'")
    try:
        return LinearMap(
            system_from_json(obj["domain"]),
            system_from_json(obj["codomain"]),
            np.asarray(obj["matrix"], dtype=float),
        )
    except ValueError as exc:
        raise MalformedInputError(str(exc)) from exc


def search_config_to_json(cfg: SearchConfig) -> dict:
    return {"grid": cfg.grid, "restarts": cfg.restarts, "seed": cfg.seed, "tol": cfg.tol}


def search_config_from_json(obj) -> SearchConfig:
    if not isinstance(obj, dict):
        raise MalformedInputError("search configuration must be an object")
    base = SearchConfig()
    try:
        return SearchConfig(
            grid=int(obj.get("grid", base.grid)),
            restarts=int(obj.get("restarts", base.restarts)),
            seed=int(obj.get("seed", base.seed)),
            tol=float(obj.get("tol", base.tol)),
        )
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad search configuration: {exc}") from exc


# ---------------------------------------------------------------------------
# Assemblages
# ---------------------------------------------------------------------------


def _element_key_to_str(scenario: str, key) -> str:
    if scenario == MULTIPARTITE:
        a, x = key
        return f"a={','.join(map(str, a))}|x={','.join(map(str, x))}"
    if scenario == BOB_WITH_INPUT:
        a, x, y = key
        return f"a={a}|x={x};y={y}"
    a, x = key
    return f"a={a}|x={x}"


def _element_key_from_str(scenario: str, s: str):
    try:
        if scenario == BOB_WITH_INPUT:
            m = re.fullmatch(r"a=(\d+)\|x=(\d+);y=(\d+)", s)
            return int(m.group(1)), int(m.group(2)), int(m.group(3))
        if scenario == MULTIPARTITE:
            m = re.fullmatch(r"a=([\d,]+)\|x=([\d,]+)", s)
            a = tuple(int(t) for t in m.group(1).split(","))
            x = tuple(int(t) for t in m.group(2).split(","))
            return a, x
        m = re.fullmatch(r"a=(\d+)\|x=(\d+)", s)
        return int(m.group(1)), int(m.group(2))
    except AttributeError:
        raise MalformedInputError(f"bad element key {s!r} for scenario {scenario}") from None


def assemblage_to_json(asm: Assemblage) -> dict:
    out = {
        "scenario": asm.scenario,
        "outcomes": list(asm.outcomes),
        "settings": list(asm.settings),
        "d": asm.d,
        "elements": {
            _element_key_to_str(asm.scenario, key): _matrix_to_json(vector_to_hermitian(el))
            for key, el in sorted(asm.elements.items())
        },
    }
    if asm.bob_inputs is not None:
        out["bob_inputs"] = asm.bob_inputs
    return out


def assemblage_from_json(obj) -> Assemblage:
    if not isinstance(obj, dict) or "scenario" not in obj or "elements" not in obj:
        raise MalformedInputError("assemblage must carry 'scenario' and 'elements'")
    scenario = obj["scenario"]
    if scenario not in (BIPARTITE, MULTIPARTITE, BOB_WITH_INPUT, INSTRUMENTAL):
        raise MalformedInputError(f"unknown scenario {scenario!r}")
    try:
        outcomes = tuple(int(v) for v in obj["outcomes"])
        settings = tuple(int(v) for v in obj["settings"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad outcome/setting lists: {exc}") from exc
    elements = {}
    for key_str, val in obj["elements"].items():
        key = _element_key_from_str(scenario, key_str)
        if isinstance(val, dict) and "re" in val:
            mat = _matrix_from_json(val)
            if mat.shape[0] != mat.shape[1]:
                raise MalformedInputError(f"element {key_str} matrix is not square")
            try:
                elements[key] = hermitian_tensor_to_vector(mat, (mat.shape[0],))
            except ValueError as exc:
                raise MalformedInputError(str(exc)) from exc
        elif isinstance(val, dict) and "coeffs" in val:
            elements[key] = gptvector_from_json(val)
        else:
            raise MalformedInputError(f"element {key_str} needs 'matrix' re/im or a vector")
    try:
        return Assemblage(
            scenario, outcomes, settings, elements, bob_inputs=obj.get("bob_inputs")
        )
    except ValueError as exc:
        raise MalformedInputError(str(exc)) from exc


def steering_inequality_to_json(cert: SteeringInequality, scenario: str) -> dict:
    return {
        "type": "steering-inequality",
        "lhs_bound": 0.0,
        "value": cert.value,
        "coefficients": {
            _element_key_to_str(scenario, key): c for key, c in sorted(cert.coefficients.items())
        },
        "eigenvector": {
            "re": np.real(cert.eigenvector).tolist(),
            "im": np.imag(cert.eigenvector).tolist(),
        },
    }


# ---------------------------------------------------------------------------
# File helpers
# ---------------------------------------------------------------------------


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc


def dump_json(obj, path: str | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
