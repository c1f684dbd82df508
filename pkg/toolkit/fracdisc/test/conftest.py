from pathlib import Path

import pytest

from fracdisc.frac_core import Discretization
from fracdisc.loop import ExampleParams

PRESET_DIR = Path(__file__).resolve().parent.parent / 'presets'


@pytest.fixture
def example_params():
    """Plant and PD^delta controller of the worked example, T = 0.05, 2000 samples"""
    return ExampleParams()


@pytest.fixture
def example_plant(example_params):
    return example_params.plant()


@pytest.fixture
def example_controller(example_params):
    return example_params.controller()


@pytest.fixture
def example_disc(example_params):
    return Discretization(sample_period=example_params.T)


@pytest.fixture
def preset():
    """Return the path of a shipped preset by name"""
    def _preset(name):
        return PRESET_DIR / f'{name}.ini'
    return _preset


@pytest.fixture
def write_config(tmp_path):
    """Write a config document to a temporary file and return its path"""
    def _write(text, name='run.ini'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return _write
