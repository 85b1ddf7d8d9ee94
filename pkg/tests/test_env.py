from pathlib import Path

import pytest

from deskvln.config import ENV_VAR_SPECS, validate_all, validate_env_var
from deskvln.utils.env import Env, coerce, coerce_bool, coerce_path
from deskvln.utils.env.env import apply_project_root
from deskvln.utils.env.load import parse_env_text, resolve_var_references


@pytest.fixture
def project(tmp_path, monkeypatch):
    """An empty project directory as the working directory, with no DVLN_* variables."""
    for key in list(Env().raw):
        monkeypatch.delenv(key, raising=False)
    (tmp_path / "pyproject.toml").write_text("[project]\nname = 'x'\n")
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_parse_env_text():
    text = """
# comment
DVLN_A=1  # trailing
DVLN_B="quoted # not a comment"
DVLN_C=none
not a line
"""
    assert parse_env_text(text) == {
        "DVLN_A": "1",
        "DVLN_B": "quoted # not a comment",
        "DVLN_C": "",
    }


def test_var_references_chain():
    resolved = resolve_var_references({"A": "$B/x", "B": "$C", "C": "root", "D": "$D"})
    assert resolved == {"A": "root/x", "B": "root", "C": "root", "D": "$D"}


@pytest.mark.parametrize(
    "value, type, expected",
    [
        ("3", int, 3),
        ("3.5", "float", 3.5),
        ("nope", int, None),
        ("", int, None),
        ("null", str, None),
        ("YES", bool, True),
        ("off", "bool", False),
        (7, int, 7),
    ],
)
def test_coerce(value, type, expected):
    assert coerce(value, type) == expected


def test_coerce_helpers(tmp_path):
    assert coerce_bool("maybe", default=True) is True
    assert coerce_path("a/b", cwd=tmp_path) == (tmp_path / "a" / "b").resolve()
    (tmp_path / "second").mkdir()
    assert coerce_path("first|second", cwd=tmp_path) == (tmp_path / "second").resolve()
    with pytest.raises(TypeError):
        coerce("1", complex)


def test_layers_in_priority_order(project, monkeypatch):
    env = Env()
    assert env.get_as("DVLN_MAX_STEPS", int) == 200
    (project / ".env").write_text("DVLN_MAX_STEPS=50\nDVLN_OUT=%/results\n")
    env.reload()
    assert env.get_as("DVLN_MAX_STEPS", int) == 50
    assert env.get("DVLN_OUT") == str(project.resolve() / "results")
    config = project / "run.env"
    config.write_text("DVLN_MAX_STEPS=60\nDVLN_DATASET=$DVLN_OUT/episodes.json\n")
    env.use_config_file(config)
    assert env.get_as("DVLN_MAX_STEPS", int) == 60
    assert env.get("DVLN_DATASET") == str(project.resolve() / "results" / "episodes.json")
    monkeypatch.setenv("DVLN_MAX_STEPS", "70")
    env.reload()
    assert env.get_as("DVLN_MAX_STEPS", int) == 70


def test_empty_values_fall_back_to_defaults(project):
    env = Env()
    assert env.get("DVLN_SEED") is None
    assert env.get("DVLN_SEED", "7") == "7"
    assert env.get_as("DVLN_SEED", int, 7) == 7
    assert "DVLN_SEED" in env


def test_with_prefix_drops_empty_values(project, monkeypatch):
    monkeypatch.setenv("DVLN_PROFILE_FOOTPRINT_RADIUS", "0.2")
    monkeypatch.setenv("DVLN_PROFILE_CAMERA_HEIGHT", "")
    assert Env().with_prefix("DVLN_PROFILE_") == {"FOOTPRINT_RADIUS": "0.2"}


def test_specs_cover_the_defaults():
    assert {key for key in Env().raw if key.startswith("DVLN_")} >= set(ENV_VAR_SPECS)


def test_defaults_are_valid(project):
    all_valid, results = validate_all(Env())
    assert all_valid, {k: r["error"] for k, r in results.items() if not r["valid"]}
    assert results["DVLN_SEED"]["value"] is None
    assert results["DVLN_MAX_STEPS"]["value"] == 200


@pytest.mark.parametrize(
    "key, value, message",
    [
        ("DVLN_MAX_STEPS", "0", "must be >= 1"),
        ("DVLN_MAX_STEPS", "many", "Could not parse as integer"),
        ("DVLN_SUCCESS_RADIUS", "-1", "must be > 0"),
        ("DVLN_POLICY", "teleport", "Must be one of"),
        ("DVLN_VERBOSE", "perhaps", "Could not parse as boolean"),
        ("DVLN_ROOM_THRESHOLD", "1.5", "must be <= 1.0"),
    ],
)
def test_invalid_values(project, monkeypatch, key, value, message):
    monkeypatch.setenv(key, value)
    ok, error, parsed = validate_env_var(key, ENV_VAR_SPECS[key], Env())
    assert not ok
    assert message in error
    assert parsed is None


def test_required_values(project, monkeypatch):
    monkeypatch.setenv("DVLN_DATASET", "")
    ok, error, _ = validate_env_var("DVLN_DATASET", ENV_VAR_SPECS["DVLN_DATASET"], Env())
    assert not ok and "Required" in error
    ok, _, value = validate_env_var("DVLN_WEIGHTS", ENV_VAR_SPECS["DVLN_WEIGHTS"], Env())
    assert ok and value is None


def test_cross_key_checks(project, monkeypatch):
    monkeypatch.setenv("DVLN_MIN_LEN", "9")
    monkeypatch.setenv("DVLN_MAX_LEN", "4")
    all_valid, results = validate_all(Env())
    assert not all_valid
    assert results["DVLN_MIN_LEN"]["valid"]
    assert "DVLN_MIN_LEN" in results["DVLN_MAX_LEN"]["error"]


def test_profile_overrides_are_checked(project, monkeypatch):
    monkeypatch.setenv("DVLN_PROFILE", "wheeled")
    monkeypatch.setenv("DVLN_PROFILE_CAMERA_HEIGHT", "0.5")
    monkeypatch.setenv("DVLN_PROFILE_WINGSPAN", "2")
    all_valid, results = validate_all(Env())
    assert not all_valid
    assert results["DVLN_PROFILE_CAMERA_HEIGHT"]["value"] == 0.5
    assert not results["DVLN_PROFILE_WINGSPAN"]["valid"]


def test_path_values_resolve_against_the_working_directory(project, monkeypatch):
    monkeypatch.setenv("DVLN_OUT", "runs/a")
    ok, _, value = validate_env_var("DVLN_OUT", ENV_VAR_SPECS["DVLN_OUT"], Env())
    assert ok
    assert Path(value) == project.resolve() / "runs" / "a"


@pytest.mark.parametrize(
    "value, expanded",
    [
        ("%", "{root}"),
        ("%/runs/a", "{root}/runs/a"),
        ("50%", "50%"),
        ("a%b", "a%b"),
        ("%runs", "%runs"),
        ("runs/%/x", "runs/%/x"),
    ],
)
def test_only_a_leading_root_token_expands(tmp_path, value, expanded):
    root = str(tmp_path.resolve())
    assert apply_project_root({"K": value}, tmp_path) == {"K": expanded.format(root=root)}


def test_literal_percent_survives_the_layers(project):
    (project / ".env").write_text("DVLN_OUT=%/runs\nDVLN_NOTE=\"50% of %/x\"\n")
    env = Env()
    assert env.get("DVLN_OUT") == str(project.resolve() / "runs")
    assert env.get("DVLN_NOTE") == "50% of %/x"


def test_lazy_env_reads_on_first_access(project, monkeypatch):
    env = Env(lazy=True)
    monkeypatch.setenv("DVLN_MAX_STEPS", "42")
    assert env.get_as("DVLN_MAX_STEPS", int) == 42
    assert env.project_root == project.resolve()
