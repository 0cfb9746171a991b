"""Config schema, defaults, and content hashing."""

import pytest

from relqrc import config as cfgmod
from relqrc.errors import ConfigurationError


def test_empty_config_resolves_all_defaults():
    conf = cfgmod.resolve({})
    assert conf["encoding"]["a0"] == 3.0
    assert conf["encoding"]["delta_a"] == pytest.approx(0.3)
    assert conf["dataset"]["seed"] == conf["seed"] == 0
    assert conf["modes"]["n_modes"] == 10
    assert conf["kinematics"] == "relativistic"
    assert conf["engine"] == "gaussian"
    assert conf["modes"]["alpha"] == "10j"


def test_unknown_key_rejected():
    with pytest.raises(ConfigurationError, match="unknown config key"):
        cfgmod.resolve({"typo": 1})
    with pytest.raises(ConfigurationError, match="unknown config key"):
        cfgmod.resolve({"encoding": {"a00": 1.0}})


def test_type_checking_rejects_bools_and_strings():
    with pytest.raises(ConfigurationError, match="wrong type"):
        cfgmod.resolve({"encoding": {"a0": True}})
    with pytest.raises(ConfigurationError, match="wrong type"):
        cfgmod.resolve({"seed": "zero"})
    with pytest.raises(ConfigurationError, match="expected a mapping"):
        cfgmod.resolve({"encoding": 3})


def test_kinematics_aliases():
    assert cfgmod.resolve({"kinematics": "rel"})["kinematics"] \
        == "relativistic"
    assert cfgmod.resolve({"kinematics": "newt"})["kinematics"] \
        == "newtonian"
    with pytest.raises(ConfigurationError):
        cfgmod.resolve({"kinematics": "galilean"})
    with pytest.raises(ConfigurationError):
        cfgmod.resolve({"engine": "tensor-network"})


def test_alpha_parsing():
    assert cfgmod.parse_alpha("10j") == 10j
    assert cfgmod.parse_alpha("1 + 2j") == 1 + 2j
    assert cfgmod.parse_alpha(3) == 3 + 0j
    with pytest.raises(ConfigurationError):
        cfgmod.parse_alpha("ten")


def test_hash_ignores_where_but_not_what():
    base = cfgmod.resolve({})
    moved = cfgmod.resolve({"out_dir": "elsewhere", "workers": 8})
    assert cfgmod.config_hash(base) == cfgmod.config_hash(moved)
    changed = cfgmod.resolve({"encoding": {"a0": 2.5}})
    assert cfgmod.config_hash(base) != cfgmod.config_hash(changed)


def test_dump_resolved_embeds_hash(tmp_path):
    conf = cfgmod.resolve({})
    path = tmp_path / "resolved.yaml"
    cfgmod.dump_resolved(conf, path)
    text = path.read_text()
    assert f"# config_hash: {cfgmod.config_hash(conf)}" in text
    assert f"# artifact_version: {cfgmod.ARTIFACT_VERSION}" in text


def test_load_config_errors(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("encoding: [not, a, mapping\n")
    with pytest.raises(ConfigurationError):
        cfgmod.load_config(bad)
    with pytest.raises(ConfigurationError):
        cfgmod.load_config(tmp_path / "missing.yaml")
