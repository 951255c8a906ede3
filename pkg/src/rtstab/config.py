"""JSON run configuration: strict schema, defaults, resolution."""
from __future__ import annotations

import copy
import json
from pathlib import Path

from jsonschema import Draft202012Validator

from .errors import ConfigInvalid
from .params import FIELDS, FluidParams

_POS = {"type": "number", "exclusiveMinimum": 0}
_NUM = {"type": "number"}
_COMPLEX = {"oneOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}]}


def _block(props, required=()):
    return {"type": "object", "additionalProperties": False,
            "properties": props, "required": list(required)}


SCHEMA = _block({
    "params": _block({k: _POS for k in FIELDS}, FIELDS),
    "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
    "symbol": _block({
        "points": {"type": "array", "minItems": 1,
                   "items": _block({"lambda": _COMPLEX, "tau": {"type": "number", "minimum": 0}},
                                   ("lambda", "tau"))},
    }),
    "curve": _block({"n_points": {"type": "integer", "minimum": 2}, "tol": _POS}),
    "max": _block({"tol": _POS, "n_coarse": {"type": "integer", "minimum": 3}}),
    "zeros": _block({
        "taus": {"type": "array", "minItems": 1, "items": _POS},
        "region": _block({k: _NUM for k in ("re_min", "re_max", "im_min", "im_max")},
                         ("re_min", "re_max", "im_min", "im_max")),
        "locate_size": _POS,
    }),
    "profile": _block({"lambda": _COMPLEX, "tau": _POS, "h_amp": _COMPLEX,
                       "y_extent": _POS, "n_y": {"type": "integer", "minimum": 2}}),
    "witness": _block({
        "xi0": _POS,
        "eps_fractions": {"type": "array", "minItems": 2,
                          "items": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5}},
        "norm_p": {"oneOf": [{"type": "number", "minimum": 1}, {"const": "inf"}]},
        "dim": {"enum": [1, 2]},
        "n": {"type": "integer", "minimum": 8},
        "lambda0": _NUM,
    }),
    "simulate": _block({
        "dim": {"enum": [1, 2]},
        "n": {"type": "integer", "minimum": 4},
        "length": _POS,
        "initial": {"oneOf": [
            _block({"kind": {"const": "pure-mode"},
                    "index": {"type": "array", "items": {"type": "integer"},
                              "minItems": 1, "maxItems": 2},
                    "amplitude": _NUM}, ("kind", "index")),
            _block({"kind": {"const": "white-noise"}, "amplitude": _POS}, ("kind",)),
            _block({"kind": {"const": "file"}, "path": {"type": "string"}}, ("kind", "path")),
        ]},
        "times": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0}},
    }),
}, ("params",))

DEFAULTS = {
    "seed": 0,
    "symbol": {"points": [{"lambda": 1.0, "tau": 1.0}]},
    "curve": {"n_points": 256, "tol": 1e-10},
    "max": {"tol": 1e-10, "n_coarse": 256},
    "zeros": {"taus": [0.25, 0.5, 1.0, 2.0]},
    "profile": {"lambda": None, "tau": None, "h_amp": 1.0, "y_extent": None, "n_y": 201},
    "witness": {"xi0": None, "eps_fractions": [0.2, 0.1, 0.05], "norm_p": 2.0, "dim": 1,
                "n": None, "lambda0": None},
    "simulate": {"dim": 1, "n": 256, "length": None,
                 "initial": {"kind": "white-noise", "amplitude": 1e-6},
                 "times": [0.0, 10.0]},
}
COMMANDS = ("symbol", "curve", "max", "zeros", "profile", "witness", "simulate")


def _message(err):
    where = "/".join(str(x) for x in err.absolute_path) or "<root>"
    if err.validator == "additionalProperties":
        extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
        return f"{where}: unknown key(s) {', '.join(extra)}"
    if err.validator == "required":
        return f"{where}: {err.message}"
    if err.validator == "exclusiveMinimum":
        return f"{where}: must be > {err.validator_value}, got {err.instance!r}"
    return f"{where}: {err.message}"


def validate(data) -> dict:
    """Check data against the schema; ConfigInvalid lists every problem."""
    errors = sorted(Draft202012Validator(SCHEMA).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        raise ConfigInvalid([_message(e) for e in errors])
    return data


def parse_config(source) -> dict:
    """Load a config from a JSON file path (or an already parsed dict) and validate it."""
    if isinstance(source, dict):
        data = copy.deepcopy(source)
    else:
        text = Path(source).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid([f"<file>: not valid JSON ({exc})"]) from None
    return validate(data)


def params_of(cfg) -> FluidParams:
    return FluidParams.from_dict(cfg["params"])


def resolve(cfg, command, seed=None) -> dict:
    """Config with the command block's defaults filled in (embedded in manifests)."""
    out = {"params": dict(cfg["params"]),
           "seed": int(seed if seed is not None else cfg.get("seed", DEFAULTS["seed"]))}
    block = copy.deepcopy(DEFAULTS[command])
    block.update(copy.deepcopy(cfg.get(command, {})))
    out[command] = block
    return out


def as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return complex(value)
