"""
Validator for the effective DVLN_* configuration.

Checks every key against ENV_VAR_SPECS after all layers are merged (defaults.env,
project .env, --config file, environment) and prints the parsed result.
"""
from typing import Any

from deskvln.bench.settings import PROFILE_PREFIX
from deskvln.control.commands import ControllerKind
from deskvln.embodiment.profile import ProfileKind, default_profile, profile_from_config
from deskvln.errors import DeskVlnError
from deskvln.policy.registry import POLICY_NAMES
from deskvln.utils.env import Env, env
from deskvln.utils.env.coerce import FALSE_WORDS, TRUE_WORDS
from deskvln.world.lighting import LightingKind

# Optional spec keys: "choices", "min", "max" (inclusive), "positive".
ENV_VAR_SPECS: dict[str, dict[str, Any]] = {
    # Paths (empty allowed: demo map, seeded weights)
    "DVLN_MAP": {"type": "path", "required": False},
    "DVLN_DATASET": {"type": "path", "required": True},
    "DVLN_OUT": {"type": "path", "required": True},
    "DVLN_WEIGHTS": {"type": "path", "required": False},
    # Reproducibility
    "DVLN_SEED": {"type": "int_optional", "required": False},
    # Evaluation
    "DVLN_POLICY": {"type": "choice", "required": True, "choices": POLICY_NAMES},
    "DVLN_CONTROLLER": {
        "type": "choice",
        "required": True,
        "choices": tuple(k.value for k in ControllerKind),
    },
    "DVLN_PROFILE": {
        "type": "choice",
        "required": True,
        "choices": tuple(k.value for k in ProfileKind),
    },
    "DVLN_LIGHTING": {
        "type": "choice",
        "required": True,
        "choices": tuple(k.value for k in LightingKind),
    },
    "DVLN_MAX_STEPS": {"type": "int", "required": True, "min": 1},
    "DVLN_SUCCESS_RADIUS": {"type": "float", "required": True, "positive": True},
    "DVLN_WORKERS": {"type": "int", "required": True, "min": 1},
    # Episode generation
    "DVLN_EPISODES": {"type": "int", "required": True, "min": 0},
    "DVLN_MIN_LEN": {"type": "float", "required": True, "min": 0.0},
    "DVLN_MAX_LEN": {"type": "float", "required": True, "positive": True},
    "DVLN_SIMILARITY_RADIUS": {"type": "float", "required": True, "min": 0.0},
    "DVLN_ATTEMPTS_PER_EPISODE": {"type": "int", "required": True, "min": 1},
    # Planning
    "DVLN_DILATION_RADIUS": {"type": "float", "required": True, "min": 0.0},
    "DVLN_DILATED_COST": {"type": "float", "required": True, "min": 1.0},
    "DVLN_UNEXPLORED_COST": {"type": "float", "required": True, "min": 1.0},
    # Perception
    "DVLN_FOV_DEG": {"type": "float", "required": True, "positive": True, "max": 360.0},
    "DVLN_RAYS": {"type": "int", "required": True, "min": 1},
    "DVLN_MAX_RANGE": {"type": "float", "required": True, "positive": True},
    "DVLN_HEIGHT_SENSITIVITY": {"type": "float", "required": True, "min": 0.0},
    "DVLN_DL300_SIGMA": {"type": "float", "required": True, "min": 0.0},
    "DVLN_CL_SIGMA": {"type": "float", "required": True, "min": 0.0},
    "DVLN_CL_FALLOFF": {"type": "float", "required": True, "min": 0.0},
    # Control
    "DVLN_V_MAX": {"type": "float", "required": True, "positive": True},
    "DVLN_OMEGA_MAX": {"type": "float", "required": True, "positive": True},
    "DVLN_DT": {"type": "float", "required": True, "positive": True},
    # Diffusion policy
    "DVLN_DENOISE_STEPS": {"type": "int", "required": True, "min": 1},
    "DVLN_BETA_MIN": {"type": "float", "required": True, "positive": True, "max": 1.0},
    "DVLN_BETA_MAX": {"type": "float", "required": True, "positive": True, "max": 1.0},
    # Map-based agent
    "DVLN_REORIENT_ALPHA": {"type": "float", "required": True, "min": 0.0, "max": 1.0},
    "DVLN_DETECTION_THRESHOLD": {"type": "float", "required": True, "min": 0.0, "max": 1.0},
    "DVLN_ROOM_THRESHOLD": {"type": "float", "required": True, "min": 0.0, "max": 1.0},
    # Logging
    "DVLN_VERBOSE": {"type": "bool", "required": True},
}

TYPE_MAP = {
    "path": "path_str",
    "string": str,
    "choice": str,
    "int": int,
    "int_optional": int,
    "float": float,
    "bool": bool,
}


def _check_range(value: float, spec: dict[str, Any]) -> str:
    if spec.get("positive") and value <= 0:
        return f"must be > 0, got {value}"
    if "min" in spec and value < spec["min"]:
        return f"must be >= {spec['min']}, got {value}"
    if "max" in spec and value > spec["max"]:
        return f"must be <= {spec['max']}, got {value}"
    return ""


def validate_env_var(key: str, spec: dict[str, Any], source: Env = env) -> tuple[bool, str, Any]:
    """
    Validate one configuration key.

    Returns:
        Tuple of (is_valid, error_message, parsed_value)
    """
    var_type = spec["type"]
    get_as_type = TYPE_MAP.get(var_type)
    if get_as_type is None:
        return False, f"Unknown type: {var_type}", None

    raw_value = source.get(key)
    if raw_value is None:
        if spec["required"]:
            return False, "Required variable is empty or missing", None
        return True, "", None

    if var_type == "bool":
        if raw_value.lower() not in TRUE_WORDS + FALSE_WORDS:
            return False, f"Could not parse as boolean: {raw_value}", None
        return True, "", source.get_as(key, bool)

    try:
        value = source.get_as(key, get_as_type)
    except (OSError, RuntimeError) as e:
        return False, f"Error resolving path: {e}", None

    if var_type in ("int", "int_optional", "float"):
        if value is None:
            kind = "float" if var_type == "float" else "integer"
            return False, f"Could not parse as {kind}: {raw_value}", None
        error = _check_range(value, spec)
        return (False, error, None) if error else (True, "", value)

    if var_type == "choice" and value not in spec["choices"]:
        return False, f"Must be one of {', '.join(spec['choices'])}, got {value!r}", None
    return True, "", value


def _cross_checks(results: dict[str, dict[str, Any]]) -> None:
    """Constraints between keys; marks the second key of a violated pair invalid."""
    pairs = [("DVLN_MIN_LEN", "DVLN_MAX_LEN"), ("DVLN_BETA_MIN", "DVLN_BETA_MAX")]
    for low, high in pairs:
        lo, hi = results[low], results[high]
        if lo["valid"] and hi["valid"] and lo["value"] > hi["value"]:
            hi.update(valid=False, error=f"must be >= {low} ({lo['value']})", value=None)


def validate_profile_overrides(source: Env = env) -> dict[str, dict[str, Any]]:
    """Check every DVLN_PROFILE_<FIELD> key against the selected robot profile."""
    results = {}
    kind = source.get("DVLN_PROFILE", "flash")
    for field, raw in source.with_prefix(PROFILE_PREFIX).items():
        key = PROFILE_PREFIX + field
        try:
            profile = profile_from_config({field.lower(): raw}, default_profile(kind))
            value, ok, error = getattr(profile, field.lower()), True, ""
        except (DeskVlnError, ValueError) as e:
            value, ok, error = None, False, str(e)
        results[key] = {"valid": ok, "error": error, "value": value, "raw": raw}
    return results


def validate_all(source: Env = env) -> tuple[bool, dict[str, Any]]:
    """
    Validate all configuration keys.

    Returns:
        Tuple of (all_valid, results_dict)
    """
    results = {}
    for key, spec in ENV_VAR_SPECS.items():
        is_valid, error_msg, parsed_value = validate_env_var(key, spec, source)
        results[key] = {
            "valid": is_valid,
            "error": error_msg,
            "value": parsed_value,
            "raw": source.get(key),
        }
    _cross_checks(results)
    if results["DVLN_PROFILE"]["valid"]:
        results.update(validate_profile_overrides(source))
    return all(r["valid"] for r in results.values()), results


def print_validation_results(all_valid: bool, results: dict[str, Any]) -> None:
    """Print validation results in a readable format."""
    print("=" * 80)
    print("Configuration Validation Results")
    print("=" * 80)
    print()

    valid_vars = {k: v for k, v in results.items() if v["valid"]}
    invalid_vars = {k: v for k, v in results.items() if not v["valid"]}

    if invalid_vars:
        print("❌ INVALID VARIABLES:")
        print("-" * 80)
        for key, result in sorted(invalid_vars.items()):
            print(f"  {key}")
            print(f"    Error: {result['error']}")
            print(f"    Raw value: {result['raw']}")
            print()

    if valid_vars:
        print("✅ VALID VARIABLES:")
        print("-" * 80)
        for key, result in sorted(valid_vars.items()):
            value, raw = result["value"], result["raw"]
            value_str = "(empty/optional)" if value is None else str(value)
            print(f"  {key} = {value_str}")
            if raw is not None and raw != value_str:
                print(f"    (raw: {raw})")
        print()

    print("=" * 80)
    if all_valid:
        print("✅ All configuration values are valid!")
    else:
        print(f"❌ Found {len(invalid_vars)} invalid variable(s)")
    print("=" * 80)
