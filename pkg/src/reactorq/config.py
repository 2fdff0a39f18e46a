"""Run configuration: JSON schema (version 1), defaults, validation, hashing.

Unknown keys are rejected so typos fail loudly. Every run writes back the
fully resolved config it used, and run directories are named by the hash of
that resolved config, so reruns land in the same place byte-for-byte.
"""

import copy
import hashlib
import json

from reactorq.models import MODEL_CLASSES

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


# section -> key -> default (None means optional / model-dependent)
_SCHEMA = {
    "model": {"name": None, "params": {}},
    "sampling": {"n_episodes": 40, "n_stages": 10,
                 "init_state_region": None, "action_grid": None},
    "integrator": {"substeps_per_stage": 20},
    "engine": {"n_iterations": 30, "mode": "finite-horizon", "lambda": 1e-3},
    "idp": {"candidates_per_stage": 15, "passes": 20, "contraction": 0.85},
    "cvp": {"restarts": 5, "tol": 1e-8, "max_evals": 5000},
}
_TOP_KEYS = {"schema_version", "model", "seed", "out_dir", "sampling",
             "integrator", "engine", "idp", "cvp", "scenarios"}
_SCENARIO_KEYS = {"t_start", "t_end", "forced_value"}
DEFAULT_SEED = 12345


def _check_unknown(mapping, allowed, context):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigError(
            f"unknown key(s) {sorted(unknown)} in {context}; "
            f"allowed: {sorted(allowed)}")


def resolve_config(raw: dict) -> dict:
    """Validate a parsed config and fill in all defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _check_unknown(raw, _TOP_KEYS, "config root")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}; "
                          f"this build reads version {SCHEMA_VERSION}")

    resolved = {"schema_version": SCHEMA_VERSION,
                "seed": raw.get("seed", DEFAULT_SEED),
                "out_dir": raw.get("out_dir", "runs")}
    if not isinstance(resolved["seed"], int):
        raise ConfigError("seed must be an integer")

    for section, fields in _SCHEMA.items():
        given = raw.get(section, {})
        if not isinstance(given, dict):
            raise ConfigError(f"section {section!r} must be an object")
        _check_unknown(given, fields, f"section {section!r}")
        merged = copy.deepcopy(fields)
        merged.update(given)
        resolved[section] = merged

    name = resolved["model"]["name"]
    if name not in MODEL_CLASSES:
        raise ConfigError(f"model.name must be one of {sorted(MODEL_CLASSES)}, "
                          f"got {name!r}")
    params_cls = MODEL_CLASSES[name][1]
    _check_unknown(resolved["model"]["params"],
                   params_cls.__dataclass_fields__, "model.params")

    scenarios = raw.get("scenarios", {})
    if not isinstance(scenarios, dict):
        raise ConfigError("scenarios must be an object of named windows")
    for sname, spec in scenarios.items():
        _check_unknown(spec, _SCENARIO_KEYS, f"scenario {sname!r}")
        missing = _SCENARIO_KEYS - set(spec)
        if missing:
            raise ConfigError(f"scenario {sname!r} missing {sorted(missing)}")
    resolved["scenarios"] = copy.deepcopy(scenarios)
    return resolved


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return resolve_config(raw)


def dump_config(config: dict) -> str:
    return json.dumps(config, indent=2, sort_keys=True) + "\n"


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def default_config(model_name: str, scenarios: dict | None = None) -> dict:
    return resolve_config({
        "model": {"name": model_name},
        "scenarios": scenarios or {},
    })
