"""Shared fixtures.

Experiment presets are the expensive objects in this suite; both the
experiment tests and the acceptance gate read from one session-scoped cache
so each preset runs exactly once per pytest invocation.
"""

import pytest

from heatlab.presets import run_oracle, run_preset


@pytest.fixture(scope="session")
def preset_outcome():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_preset(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def oracle_outcome():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_oracle(name)
        return cache[name]

    return get
