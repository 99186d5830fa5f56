"""Pytest configuration and fixtures."""

import pytest

from rsos.assertions import Position, SubsetOf
from rsos.core import Process, Reaction, entities, sequential_context
from rsos.data.loader import SpecLoader


@pytest.fixture
def r1():
    """The running example reaction (ab, c, b)."""
    return Reaction.of(["a", "b"], ["c"], ["b"])


@pytest.fixture
def gamma():
    """Context sequence of the running example."""
    return [entities("a", "b"), entities("a"), entities("c"), entities("c")]


@pytest.fixture
def p0(r1, gamma):
    """The running example as a process."""
    return Process.of(r1, sequential_context(gamma))


@pytest.fixture
def loader():
    """Fixture for SpecLoader over the bundled specs."""
    return SpecLoader()


@pytest.fixture
def example1(loader):
    return loader.load("example1")


@pytest.fixture
def biosim(loader):
    return loader.load("biosim")


@pytest.fixture
def hsf(loader):
    return loader.load("hsf")


@pytest.fixture
def connector(loader):
    return loader.load("connector")


@pytest.fixture
def c_in_w():
    """Assertion ``c in W``."""
    return SubsetOf(entities("c"), Position.W)


@pytest.fixture
def spec_file(tmp_path):
    """Write a spec text to a temporary file and return its path."""

    def write(text, name="test.rs-spec"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
