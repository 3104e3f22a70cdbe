"""JSON schemas for configs and reports, and their conversion to parameter objects."""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from .model import NetworkParams, ParameterError
from .sweep import DEFAULT_POINTS_1D, DEFAULT_POINTS_2D, Axis, SweepError, SweepSpec, check_outputs


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending field."""


_number = {"type": "number"}
_numbers = {"type": "array", "items": _number}

SYSTEM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["omega", "G", "gamma", "nbar", "chi", "theta", "Delta", "kappa"],
    "properties": {
        "omega_m_hz": {"type": "number", "exclusiveMinimum": 0},
        "omega": {**_numbers, "minItems": 2},
        "G": {**_numbers, "minItems": 2},
        "gamma": {"type": "array", "minItems": 2,
                  "items": {"type": "number", "exclusiveMinimum": 0}},
        "nbar": {"type": "array", "minItems": 2, "items": {"type": "number", "minimum": 0}},
        "chi": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0}},
        "theta": {**_numbers, "minItems": 1},
        "Delta": _number,
        "kappa": {"type": "number", "exclusiveMinimum": 0},
    },
}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["system"],
    "properties": {
        "system": SYSTEM_SCHEMA,
        "tol": {"type": "number", "minimum": 0},
        "description": {"type": "string"},
    },
}

AXIS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "start", "stop"],
    "properties": {
        "name": {"type": "string"},
        "start": _number,
        "stop": _number,
        "count": {"type": "integer", "minimum": 2},
        "scale": {"enum": ["linear", "log"]},
    },
}

SWEEP_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["system", "axes"],
    "properties": {
        "system": SYSTEM_SCHEMA,
        "axes": {"type": "array", "minItems": 1, "maxItems": 2, "items": AXIS_SCHEMA},
        "outputs": {"type": "array", "items": {"type": "string"}},
        "threads": {"type": "integer", "minimum": 0},
        "description": {"type": "string"},
    },
}

THRESHOLD_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["system", "param", "bracket"],
    "properties": {
        "system": SYSTEM_SCHEMA,
        "param": {"type": "string"},
        "bracket": {**_numbers, "minItems": 2, "maxItems": 2},
        "target": {"type": "string"},
        "rtol": {"type": "number", "exclusiveMinimum": 0},
        "scale": {"enum": ["linear", "log"]},
        "description": {"type": "string"},
    },
}

_complex = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}

STABILITY_REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["stable", "margin", "marginal", "spectrum"],
    "properties": {
        "stable": {"type": "boolean"},
        "margin": _number,
        "marginal": {"type": "boolean"},
        "spectrum": {"type": "array", "items": _complex},
    },
}

ENTANGLEMENT_REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["stable", "stability_margin", "E_N"],
    "properties": {
        "stable": {"type": "boolean"},
        "stability_margin": _number,
        "E_N": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "E_tau": _number,
        "residuals": {**_numbers, "minItems": 3, "maxItems": 3},
        "omega_m_hz": _number,
    },
}

_DECOMPOSITION_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["labels", "coupling_magnitudes", "effective_couplings", "coefficients",
                 "frequencies", "fallback"],
    "properties": {
        "labels": {"type": "array", "items": {"type": "string"}},
        "coupling_magnitudes": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "effective_couplings": {"type": "array", "items": _complex},
        "coefficients": {"type": "array", "items": {"type": "array", "items": _complex}},
        "frequencies": {"oneOf": [{"type": "null"}, _numbers]},
        "fallback": {"type": "boolean"},
    },
}

MODES_REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["N", "decomposition", "dark_mode_present", "dark_mode_count", "verdict", "tol"],
    "properties": {
        "N": {"type": "integer", "minimum": 2},
        "decomposition": _DECOMPOSITION_SCHEMA,
        "numerical": _DECOMPOSITION_SCHEMA,
        "dark_mode_present": {"type": "boolean"},
        "dark_mode_count": {"type": "integer", "minimum": 0},
        "verdict": {"enum": ["DMU", "DMB"]},
        "tol": _number,
    },
}

THRESHOLD_REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["param", "target", "bracket", "threshold"],
    "properties": {
        "param": {"type": "string"},
        "target": {"type": "string"},
        "bracket": {**_numbers, "minItems": 2, "maxItems": 2},
        "threshold": _number,
    },
}


def _path(error: jsonschema.ValidationError) -> str:
    out = ""
    for part in error.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<root>"


def validate(data: Any, schema: dict) -> None:
    """Raise ConfigError naming the first offending field."""
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(f"{_path(err)}: {err.message}")


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def system_from_dict(d: dict) -> NetworkParams:
    validate(d, SYSTEM_SCHEMA)
    try:
        return NetworkParams(
            omega=tuple(d["omega"]), G=tuple(d["G"]), gamma=tuple(d["gamma"]),
            nbar=tuple(d["nbar"]), chi=tuple(d["chi"]), Theta=tuple(d["theta"]),
            Delta=d["Delta"], kappa=d["kappa"], omega_m_hz=d.get("omega_m_hz"),
        )
    except ParameterError as exc:
        name = "theta" + exc.field[5:] if exc.field.startswith("Theta") else exc.field
        raise ConfigError(f"system.{name}: {str(exc).split(': ', 1)[1]}") from exc


def system_to_dict(p: NetworkParams) -> dict:
    out = {"omega": list(p.omega), "G": list(p.G), "gamma": list(p.gamma),
           "nbar": list(p.nbar), "chi": list(p.chi), "theta": list(p.Theta),
           "Delta": p.Delta, "kappa": p.kappa}
    if p.omega_m_hz is not None:
        out["omega_m_hz"] = p.omega_m_hz
    return out


def run_config_from_dict(d: dict) -> tuple[NetworkParams, dict]:
    validate(d, RUN_CONFIG_SCHEMA)
    return system_from_dict(d["system"]), {k: v for k, v in d.items() if k != "system"}


def sweep_spec_from_dict(d: dict) -> tuple[SweepSpec, int | None]:
    validate(d, SWEEP_SCHEMA)
    base = system_from_dict(d["system"])
    try:
        axes = [Axis(name=a["name"], start=a["start"], stop=a["stop"],
                     count=a.get("count", DEFAULT_POINTS_1D if len(d["axes"]) == 1
                                 else DEFAULT_POINTS_2D),
                     scale=a.get("scale", "linear")) for a in d["axes"]]
        spec = SweepSpec(base=base, axes=tuple(axes), outputs=tuple(d.get("outputs", ())))
    except (SweepError, ParameterError) as exc:
        raise ConfigError(str(exc)) from exc
    return spec, d.get("threads")


def threshold_spec_from_dict(d: dict) -> dict:
    validate(d, THRESHOLD_SCHEMA)
    base = system_from_dict(d["system"])
    target = d.get("target", "E_N_1")
    try:
        check_outputs([target], base.N)
    except SweepError as exc:
        raise ConfigError(f"target: {exc}") from exc
    return {"base": base, "param": d["param"], "bracket": tuple(d["bracket"]),
            "target_output": target, "rtol": d.get("rtol", 1e-3), "scale": d.get("scale")}
