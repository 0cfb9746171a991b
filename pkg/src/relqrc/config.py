"""Experiment configuration: schema validation, defaults, hashing.

Configs are YAML documents with fixed sections.  Unknown keys are rejected,
every run resolves all defaults up front, and the resolved document (plus
its hash) is written next to the outputs so results are reproducible.
"""

from __future__ import annotations

import hashlib
import json
import math

import yaml

from .errors import ConfigurationError

ARTIFACT_VERSION = 1

_DRIVE_G = 10.0 / math.sqrt(3.0 * math.pi)

# Section -> key -> (expected types, default).  A default of ... means the
# key has no static default and is filled in programmatically.
SCHEMA = {
    "seed": ((int,), 0),
    "workers": ((int,), 1),
    "out_dir": ((str,), "out"),
    "dataset": {
        "n": ((int,), 1000),
        "turns": ((int, float), 1.5),
        "radius": ((int, float), 1.0),
        "noise_sd": ((int, float), 0.02),
        "seed": ((int, type(None)), None),  # None -> top-level seed
        "n_train": ((int,), 800),
        "n_test": ((int,), 200),
    },
    "encoding": {
        "a0": ((int, float), 3.0),
        "delta_a": ((int, float, type(None)), None),  # None -> ratio * a0
        "delta_a_ratio": ((int, float), 0.1),
        "T": ((int, float), 2.0),
        "m": ((int,), 4),
    },
    "modes": {
        "n_modes": ((int,), 10),
        "coherent_mode": ((int,), 3),
        "Omega": ((int, float), 1.0),
        "coupling": ((int, float), 0.1),
        "alpha": ((str, int, float), "10j"),
    },
    "kinematics": ((str,), "relativistic"),
    "engine": ((str,), "gaussian"),
    "step": {
        "steps_per_period": ((int,), 200),
    },
    "learning": {
        "l": ((int, float), 1e-6),
    },
    "qubit": {
        "n_max": ((int, type(None)), None),
    },
    "sweep": {
        "T": ((list,), []),
        "a0": ((list,), []),
        "m": ((list,), []),
    },
    "drive": {
        "omega0": ((int, float), 1000.0),
        "epsilon": ((int, float), 1100.0),
        "Omega_sim": ((int, float), 1.0),
        "g": ((int, float), _DRIVE_G),
        "eta": ((int, float), 0.01),
        "omega_n": ((int, float), 1.0),
        "k_n": ((int, float), 1.0),
        "frequency_unit": ((str,), "MHz"),
        "a0": ((int, float), 2.0),
        "delta_a_ratio": ((int, float), 0.1),
        "T": ((int, float), 2.0),
        "m": ((int,), 1),
        "samples_per_period": ((int,), 30),
    },
}

_KINEMATICS_ALIASES = {
    "rel": "relativistic", "relativistic": "relativistic",
    "newt": "newtonian", "newtonian": "newtonian",
}


def _validate_section(doc, schema, path):
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{path or 'config'}: expected a mapping")
    out = {}
    for key, value in doc.items():
        if key not in schema:
            raise ConfigurationError(f"unknown config key {path}{key!r}")
        spec = schema[key]
        if isinstance(spec, dict):
            out[key] = _validate_section(value, spec, f"{path}{key}.")
        else:
            types, _ = spec
            if isinstance(value, bool) or not isinstance(value, types):
                raise ConfigurationError(
                    f"config key {path}{key} has wrong type "
                    f"{type(value).__name__}")
            out[key] = value
    for key, spec in schema.items():
        if key in out:
            continue
        if isinstance(spec, dict):
            out[key] = _validate_section({}, spec, f"{path}{key}.")
        else:
            out[key] = spec[1]
    return out


def resolve(doc: dict | None) -> dict:
    """Validate against the schema and expand every default."""
    conf = _validate_section(doc or {}, SCHEMA, "")
    if conf["dataset"]["seed"] is None:
        conf["dataset"]["seed"] = conf["seed"]
    enc = conf["encoding"]
    if enc["delta_a"] is None:
        enc["delta_a"] = enc["delta_a_ratio"] * enc["a0"]
    kin = conf["kinematics"].lower()
    if kin not in _KINEMATICS_ALIASES:
        raise ConfigurationError(f"unknown kinematics {conf['kinematics']!r}")
    conf["kinematics"] = _KINEMATICS_ALIASES[kin]
    if conf["engine"] not in ("gaussian", "qubit"):
        raise ConfigurationError(f"unknown engine {conf['engine']!r}")
    # normalize alpha to a canonical complex-literal string
    conf["modes"]["alpha"] = str(parse_alpha(conf["modes"]["alpha"]))
    return conf


def parse_alpha(value) -> complex:
    try:
        return complex(str(value).replace(" ", ""))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse alpha {value!r}") from exc


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from exc
    except OSError as exc:
        raise ConfigurationError(str(exc)) from exc
    return resolve(doc)


def canonical_json(conf: dict) -> str:
    return json.dumps(conf, sort_keys=True, separators=(",", ":"))


def config_hash(conf: dict) -> str:
    """Hash of the experiment content; where it runs (output directory,
    worker count) never changes results, so those keys are excluded."""
    content = {k: v for k, v in conf.items()
               if k not in ("out_dir", "workers")}
    return hashlib.sha256(canonical_json(content).encode()).hexdigest()[:16]


def dump_resolved(conf: dict, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# config_hash: {config_hash(conf)}\n")
        fh.write(f"# artifact_version: {ARTIFACT_VERSION}\n")
        yaml.safe_dump(conf, fh, sort_keys=True)
