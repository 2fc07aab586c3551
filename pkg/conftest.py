"""
🧪 Shared fixtures: named domains with their visibility graphs, default settings.
"""

import numpy as np
import pytest

from geocenter.config import Settings, set_settings
from geocenter.instances import d1, d2, d3, unit_square
from geocenter.visibility import build_visibility_graph


@pytest.fixture(autouse=True, scope="session")
def default_settings():
    """Built-in defaults for the whole run, whatever config sits in the cwd"""
    set_settings(Settings())
    yield
    set_settings(None)


@pytest.fixture
def restore_settings():
    """For tests that install their own settings"""
    yield
    set_settings(Settings())


@pytest.fixture(scope="session")
def square():
    dom = unit_square()
    return dom, build_visibility_graph(dom)


@pytest.fixture(scope="session")
def dom_d1():
    dom = d1()
    return dom, build_visibility_graph(dom)


@pytest.fixture(scope="session")
def dom_d2():
    dom = d2()
    return dom, build_visibility_graph(dom)


@pytest.fixture(scope="session")
def dom_d3():
    dom = d3()
    return dom, build_visibility_graph(dom)


@pytest.fixture
def rng():
    return np.random.default_rng(20160822)
