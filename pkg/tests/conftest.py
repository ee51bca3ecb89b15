import pytest

from agealg.algebra import TypeRegistry
from agealg.gallery import GALLERY


@pytest.fixture(scope="session")
def registries():
    """Session-wide registry cache: one TypeRegistry per gallery template,
    grown lazily to whatever degree the tests ask for."""
    cache = {}

    def get(name):
        if name not in cache:
            t = GALLERY[name].build()
            cache[name] = (t, TypeRegistry(t))
        return cache[name]

    return get
