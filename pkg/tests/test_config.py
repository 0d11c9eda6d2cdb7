import json
import random
from fractions import Fraction

import pytest

from hnflow.config import ConfigError, canonical_digest, load_config, parse_config, random_unimodular_flow

BASE = {
    "family": {"matrices": [[["1", "1"], ["0", "1"]]]},
    "flows": {"weights": [["1", "-1"]]},
}


def cfg(**extra):
    raw = json.loads(json.dumps(BASE))
    raw.update(extra)
    return raw


def test_minimal_config():
    c = parse_config(cfg())
    assert c.dim == 2
    assert c.flows[0].weights == (1, -1)


def test_number_field_entries():
    c = parse_config(cfg(field={"minpoly": ["-2", "0", "1"], "interval": ["1", "2"]},
                         family={"matrices": [[["1", "t"], ["0", "1"]]]}))
    assert c.family.samples[0][0][1] * c.family.samples[0][0][1] == 2


@pytest.mark.parametrize("raw", [
    {},
    {"bogus": 1},
    {"seed": 1},
    {"family": {"matrices": []}},
    {"family": {"matrices": [[["1", "0"]]]}},
    {"family": {"matrices": [[["1", "2"], ["2", "4"]]]}},
    {"family": {"matrices": [[["1", "0"], ["0", "1"]]]}, "flows": {"weights": [["1", "0", "-1"]]}},
    {"family": {"matrices": [[["1", "0"], ["0", "1"]]], "colour": "red"}},
    {"family": {"matrices": [[["1", "t"], ["0", "1"]]]}},
    {"family": {"matrices": [[[0.5, "0"], ["0", "1"]]]}},
    {"field": {"minpoly": ["-1", "0", "1"], "interval": ["0", "2"]}, "family": {"matrices": [[["1", "0"], ["0", "1"]]]}},
    {"verify": {"criteria": [0, 11]}},
])
def test_rejected_configs(raw):
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_simulate_grid_errors():
    with pytest.raises(ConfigError):
        parse_config(cfg(simulate={"t_grid": {"start": "5", "stop": "1", "step": "1"}}))
    with pytest.raises(ConfigError):
        parse_config(cfg(simulate={"t_grid": {"start": "1", "stop": "5", "step": "1"}, "enumeration_bound_factor": "1/2"}))


def test_digest_is_canonical():
    a = {"seed": 1, "family": {"label": "x", "matrices": [[["1"]]]}}
    b = {"family": {"matrices": [[["1"]]], "label": "x"}, "seed": 1}
    assert canonical_digest(a) == canonical_digest(b)
    assert canonical_digest(a) != canonical_digest({**a, "seed": 2})


def test_load_toml_and_json(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text('[family]\nmatrices = [[["1", "1"], ["0", "1"]]]\n[flows]\nweights = [["1", "-1"]]\n')
    c = load_config(p)
    j = tmp_path / "report.json"
    j.write_text(json.dumps({"command": "hn", "inputs": c.raw}))
    assert load_config(j).digest == c.digest


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("[family\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_random_flows_are_unimodular_and_seeded():
    a = [random_unimodular_flow(random.Random(3), 3, 5) for _ in range(2)]
    assert a[0].weights == a[1].weights
    rng = random.Random(0)
    for _ in range(50):
        f = random_unimodular_flow(rng, 4, 5)
        assert f.total == 0
    c1 = parse_config(cfg(seed=7, flows={"random": 5}))
    c2 = parse_config(cfg(seed=7, flows={"random": 5}))
    assert [f.weights for f in c1.flows] == [f.weights for f in c2.flows]
