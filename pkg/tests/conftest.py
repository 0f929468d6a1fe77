"""Shared fixtures.

The XDG directories are pointed at a scratch directory before weylscope
is imported, since its defaults read (and create) the config at import.
"""

import os
import tempfile

_SANDBOX = tempfile.mkdtemp(prefix="weylscope-tests-")
os.environ["XDG_CONFIG_HOME"] = os.path.join(_SANDBOX, "config")
os.environ["XDG_CACHE_HOME"] = os.path.join(_SANDBOX, "cache")
os.environ.pop("WEYLSCOPE_JOBS", None)

import json  # noqa: E402

import pytest  # noqa: E402

from weylscope.measure import DensityPiece, SignedMeasure  # noqa: E402


@pytest.fixture
def free():
    return SignedMeasure()


@pytest.fixture
def delta0():
    """2 delta_0."""
    return SignedMeasure(atoms=[(0.0, 2.0)])


@pytest.fixture
def delta05():
    return SignedMeasure(atoms=[(0.5, 1.0)])


@pytest.fixture
def two_atoms():
    """delta_0.25 + delta_0.75."""
    return SignedMeasure(atoms=[(0.25, 1.0), (0.75, 1.0)])


@pytest.fixture
def constant_density():
    """Lebesgue measure on [0, 2)."""
    return SignedMeasure(density=[DensityPiece(0.0, 2.0, [1.0])])


@pytest.fixture
def mixed():
    """Atoms of both signs on top of a linear density."""
    return SignedMeasure(atoms=[(0.0, 0.5), (0.3, -1.0), (0.6, 2.0)],
                         density=[DensityPiece(0.1, 0.9, [1.0, -0.5])])


@pytest.fixture
def suite(free, delta0, delta05, two_atoms, constant_density, mixed):
    return {
        "free": free,
        "delta0": delta0,
        "delta05": delta05,
        "two_atoms": two_atoms,
        "constant_density": constant_density,
        "mixed": mixed,
    }


@pytest.fixture
def write_measure(tmp_path):
    """Write a measure (or raw text) to a file and return its path."""
    def write(measure, name="measure.json"):
        path = tmp_path / name
        if isinstance(measure, SignedMeasure):
            text = json.dumps(measure.to_dict(), indent=2)
        elif isinstance(measure, dict):
            text = json.dumps(measure, indent=2)
        else:
            text = measure
        path.write_text(text)
        return str(path)
    return write
