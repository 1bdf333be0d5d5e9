import copy
import functools

import numpy as np
import pytest

from cavitherm.scenarios import PRESETS, scenario_from_dict, simulate
from cavitherm.spectral import build_qgaussian, make_environment

OMEGA_C = 2 * np.pi * 2.69
MHZ = 1e-3  # rad/us -> rad/ns
STRONG = 17.2 * np.pi * MHZ
WEAK = 1.72 * np.pi * MHZ
KAPPA = 0.8 * np.pi * MHZ
WIDTH = 18.8 * np.pi * MHZ


@functools.lru_cache(maxsize=None)
def preset_run(name, dt=0.25, **overrides):
    doc = copy.deepcopy(PRESETS[name])
    doc["grid"]["dt_ns"] = dt
    for k, v in overrides.items():
        section, key = k.split("__")
        doc[section][key] = v
    return simulate(scenario_from_dict(doc, name))


@pytest.fixture
def fig2_env():
    spin = build_qgaussian(STRONG, OMEGA_C, 1.39, WIDTH)
    return make_environment(spin, KAPPA, 0.1)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}")
