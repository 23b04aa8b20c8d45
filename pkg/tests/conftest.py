"""
Pytest configuration and fixtures for the qcone tests.

Presentations are built once per session; they are immutable apart from the
normal-form memo, which only ever caches correct results.
"""

import pytest

from qcone.expr import parse_element
from qcone.ncalg import normalize
from qcone.presets import PresetName, build_preset


@pytest.fixture(scope="session")
def qplane_short():
    return build_preset(PresetName.QPLANE_SHORT)


@pytest.fixture(scope="session")
def qplane_a():
    return build_preset(PresetName.QPLANE_A)


@pytest.fixture(scope="session")
def qplane_b():
    return build_preset(PresetName.QPLANE_B)


@pytest.fixture(scope="session")
def twistor():
    return build_preset(PresetName.TWISTOR)


@pytest.fixture(scope="session")
def nullvector():
    return build_preset(PresetName.NULLVECTOR)


@pytest.fixture(scope="session")
def nullvector_diff():
    return build_preset(PresetName.NULLVECTOR_DIFF)


@pytest.fixture(scope="session")
def coord_deriv():
    return build_preset(PresetName.COORD_DERIV)


@pytest.fixture(scope="session")
def deriv_only():
    return build_preset(PresetName.DERIV_ONLY)


@pytest.fixture(scope="session")
def momentum():
    return build_preset(PresetName.MOMENTUM)


@pytest.fixture
def nf():
    """Parse an expression and return its normal form: ``nf(p, "y x")``."""

    def _nf(p, text):
        return normalize(parse_element(text, p), p)

    return _nf
