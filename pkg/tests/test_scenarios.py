import copy
import json

import pytest

from steinapprox.errors import ConfigError, HypothesisError
from steinapprox.scenarios import PRESETS, load_config, parse_config, preset_config

BASE = {"id": "s", "dist": "rademacher", "g": {"name": "square_sum", "d": 1},
        "h": {"name": "sin"}, "p": 2, "n_grid": [16, 32], "N": 10_000, "seed": 3,
        "bounds": ["cor41"]}


def with_(**kw):
    doc = copy.deepcopy(BASE)
    doc.update(kw)
    return doc


def test_all_presets_validate():
    scenarios = parse_config(preset_config())
    assert [s.id for s in scenarios] == list(PRESETS)


def test_single_object_and_wrapped_forms(tmp_path):
    (sc,) = parse_config(BASE)
    assert sc.g.name == "square_sum(1)" and sc.h.name == "sin" and sc.seed == 3
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"schema_version": 1, "scenarios": [BASE]}))
    assert load_config(path)[0].id == "s"


@pytest.mark.parametrize("doc,field", [
    (with_(dist="cauchy"), "scenarios[0].dist"),
    (with_(g={"name": "spline"}), "scenarios[0].g"),
    (with_(h={"name": "cosine"}), "scenarios[0].h"),
    (with_(N=10), "scenarios[0].N"),
    (with_(seed=-1), "scenarios[0].seed"),
    (with_(n_grid=[]), "scenarios[0].n_grid"),
    (with_(n_grid=[16, 0]), "scenarios[0].n_grid"),
    (with_(bounds=["cor99"]), "bounds"),
    (with_(d=2), "scenarios[0].d"),
    (with_(colour="red"), "scenarios[0].colour"),
    (with_(bounds=["theorem31"], p=None), "p"),
    ({"schema_version": 2, "scenarios": [BASE]}, "schema_version"),
    ({"schema_version": 1, "scenarios": [BASE, BASE]}, "scenarios"),
])
def test_validation_names_the_field(doc, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    assert exc.value.field == field


def test_bound_preconditions_checked_at_load():
    with pytest.raises(HypothesisError):
        parse_config(with_(dist="standardized_exponential", p=3, bounds=["theorem32"]))
    # rademacher matches three moments, so p = 2 is accepted
    parse_config(with_(bounds=["theorem32"]))


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


def test_n_dependent_statistic():
    (sc,) = parse_config(preset_config("delta_method"))
    assert sc.n_dependent_g
    assert sc.g_for(16).params["n"] == 16 and sc.g_for(64).params["n"] == 64
