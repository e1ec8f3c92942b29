"""JSON experiment configuration: schema, defaults and validation."""
import copy
from dataclasses import dataclass
import hashlib
import json

import jsonschema

from .beams import CubicPhase, CubicPlusFocus, Focusing, Steering
from .core import ArrayGeometry, CarrierConfig
from .exceptions import ConfigError, InvalidInputError

SCHEMA_VERSION = 1

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NUM_LIST = {"type": "array", "items": _NUM, "minItems": 1}
_POINT = {"type": "object", "properties": {"x": _NUM, "z": _POS},
          "required": ["x", "z"], "additionalProperties": False}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "carrier": {"type": "object", "additionalProperties": False,
                    "properties": {"frequency_hz": _POS, "c": _POS}},
        "array": {"type": "object", "additionalProperties": False,
                  "properties": {"n_antennas": {"type": "integer", "minimum": 1},
                                 "spacing_m": {"oneOf": [_POS, {"type": "null"}]},
                                 "spacing_wavelengths": {"oneOf": [_POS, {"type": "null"}]}}},
        "beam": {"type": "object", "additionalProperties": False,
                 "properties": {"family": {"enum": ["cubic", "cubic_focus", "focusing", "steering"]},
                                "x0": _NUM, "focus": _POINT, "theta": _NUM, "power_w": _POS}},
        "grid": {"type": "object", "additionalProperties": False,
                 "properties": {"dz": _POS, "dx": {"oneOf": [_POS, {"type": "null"}]},
                                "x_range": {"oneOf": [{"type": "array", "items": _NUM,
                                                       "minItems": 2, "maxItems": 2},
                                                      {"type": "null"}]},
                                "z_range": {"oneOf": [{"type": "array", "items": _POS,
                                                       "minItems": 2, "maxItems": 2},
                                                      {"type": "null"}]},
                                "z_cap_factor": _POS, "margin": _POS,
                                "normalization": {"enum": ["raw-sum", "d-weighted", "link-budget"]}}},
        "scenario": {"type": "object", "additionalProperties": False,
                     "properties": {
                         "user": _POINT, "obstacle_depth": _POS,
                         "c0_abs2": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                         "c0_phase": _NUM, "side": {"enum": ["above", "below"]},
                         "etas": _NUM_LIST, "snr_db": _NUM, "snr_dbs": _NUM_LIST,
                         "offsets": _NUM_LIST, "offset_axis": {"enum": ["x", "z"]},
                         "speed": _POS, "intervals": _NUM_LIST,
                         "n_users": {"type": "integer", "minimum": 1},
                         "time_samples": {"type": "integer", "minimum": 64}}},
        "sweep": {"oneOf": [{"type": "null"}, {
            "type": "object", "additionalProperties": False,
            "properties": {"variable": {"enum": ["n_antennas", "spacing_wavelengths"]},
                           "values": _NUM_LIST,
                           "range": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                           "steps": {"type": "integer", "minimum": 1},
                           "x0_values": _NUM_LIST},
            "required": ["variable"]}]},
        "output_dir": {"type": "string", "minLength": 1},
        "flags": {"type": "object", "additionalProperties": False,
                  "properties": {"paper_mode": {"type": "boolean"},
                                 "log_base": {"enum": [2, 10]},
                                 "threads": {"type": "integer", "minimum": 1}}},
    },
}

DEFAULTS = {
    "schema_version": SCHEMA_VERSION,
    "carrier": {"frequency_hz": 7e9, "c": 3.0e8},
    "array": {"n_antennas": 256, "spacing_m": None, "spacing_wavelengths": None},
    "beam": {"family": "cubic_focus", "x0": 1.0, "focus": {"x": 0.0, "z": 30.0},
             "theta": 0.0, "power_w": 1.0},
    "grid": {"dz": 0.1, "dx": None, "x_range": None, "z_range": None,
             "z_cap_factor": 3.0, "margin": 1.5, "normalization": "raw-sum"},
    "scenario": {"user": {"x": 0.0, "z": 30.0}, "obstacle_depth": 15.0, "c0_abs2": 0.5944,
                 "c0_phase": 0.0, "side": "above",
                 "etas": [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0],
                 "snr_db": 10.0, "snr_dbs": [0.0, 5.0, 10.0, 15.0, 20.0],
                 "offsets": [-0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4], "offset_axis": "x",
                 "speed": 100.0, "intervals": [0.0, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2],
                 "n_users": 4, "time_samples": 129},
    "sweep": None,
    "output_dir": "out",
    "flags": {"paper_mode": True, "log_base": 2, "threads": 1},
}


def deep_merge(base, override):
    out = copy.deepcopy(base)
    for key, val in (override or {}).items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict
    carrier: CarrierConfig
    geometry: ArrayGeometry

    @property
    def beam(self):
        return self.raw["beam"]

    @property
    def grid(self):
        return self.raw["grid"]

    @property
    def scenario(self):
        return self.raw["scenario"]

    @property
    def sweep(self):
        return self.raw["sweep"]

    @property
    def output_dir(self):
        return self.raw["output_dir"]

    @property
    def flags(self):
        return self.raw["flags"]

    @property
    def dx(self):
        return self.grid["dx"] or self.carrier.wavelength / 4

    @property
    def focus(self):
        f = self.beam["focus"]
        return (f["x"], f["z"])

    @property
    def user(self):
        u = self.scenario["user"]
        return (u["x"], u["z"])

    def beam_variant(self):
        b = self.beam
        fam = b["family"]
        if fam == "cubic":
            return CubicPhase(b["x0"])
        if fam == "cubic_focus":
            return CubicPlusFocus(b["x0"], *self.focus)
        if fam == "focusing":
            return Focusing(*self.focus)
        return Steering(b["theta"])

    def sweep_values(self):
        s = self.sweep
        if s is None:
            return None
        if "values" in s:
            return [float(v) for v in s["values"]]
        lo, hi = s["range"]
        n = s.get("steps", 2)
        return [lo + (hi - lo) * i / max(n - 1, 1) for i in range(n)]

    @property
    def hash(self):
        return config_hash(self.raw)


def config_hash(raw):
    text = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _path(err):
    return ".".join(str(p) for p in err.absolute_path) or "<root>"


def build_config(data, overrides=None):
    """Validate a config mapping, apply defaults and return an ExperimentConfig."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    merged_user = deep_merge(data, overrides or {})
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(merged_user),
                    key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, _path(err))
    raw = deep_merge(DEFAULTS, merged_user)
    sweep = raw["sweep"]
    if sweep is not None:
        if ("values" in sweep) == ("range" in sweep):
            raise ConfigError("give exactly one of 'values' or 'range'", "sweep")
        if "range" in sweep and sweep["range"][0] > sweep["range"][1]:
            raise ConfigError("range must be ordered", "sweep.range")
    try:
        carrier = CarrierConfig(raw["carrier"]["frequency_hz"], raw["carrier"]["c"])
    except InvalidInputError as exc:
        raise ConfigError(str(exc), "carrier") from exc
    arr = raw["array"]
    if arr["spacing_m"] is not None and arr["spacing_wavelengths"] is not None:
        raise ConfigError("give spacing_m or spacing_wavelengths, not both", "array")
    if arr["spacing_m"] is not None:
        d = arr["spacing_m"]
    elif arr["spacing_wavelengths"] is not None:
        d = arr["spacing_wavelengths"] * carrier.wavelength
    else:
        d = carrier.wavelength / 2
    arr["spacing_m"] = d
    geometry = ArrayGeometry(arr["n_antennas"], d)
    cfg = ExperimentConfig(raw, carrier, geometry)
    try:
        cfg.beam_variant()
    except InvalidInputError as exc:
        raise ConfigError(str(exc), "beam") from exc
    if raw["grid"]["x_range"] and raw["grid"]["x_range"][0] >= raw["grid"]["x_range"][1]:
        raise ConfigError("x_range must be increasing", "grid.x_range")
    if raw["grid"]["z_range"] and raw["grid"]["z_range"][0] >= raw["grid"]["z_range"][1]:
        raise ConfigError("z_range must be increasing", "grid.z_range")
    if raw["scenario"]["obstacle_depth"] >= raw["scenario"]["user"]["z"]:
        raise ConfigError("obstacle depth must be smaller than the user depth", "scenario.obstacle_depth")
    return cfg


def parse_config(path, overrides=None):
    """Read and validate a JSON config file (OSError propagates for I/O problems)."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    return build_config(data, overrides)
