import copy
import json

import pytest

from squeezesim.config import ExperimentConfig, example_config_path


@pytest.fixture(scope="session")
def example_dict():
    with open(example_config_path(), encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture
def make_config(example_dict):
    """Build a config from the bundled example with top-level/nested overrides applied."""

    def build(**sections):
        d = copy.deepcopy(example_dict)
        for key, val in sections.items():
            if isinstance(val, dict) and isinstance(d.get(key), dict):
                d[key] = {**d[key], **val}
            else:
                d[key] = val
        return d

    return build


@pytest.fixture
def write_config(tmp_path):
    def write(d, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(d), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture(scope="session")
def example_cfg():
    return ExperimentConfig.load(example_config_path())
