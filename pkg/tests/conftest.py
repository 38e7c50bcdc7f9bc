import pytest


@pytest.fixture(scope="session")
def shared():
    """Lazily computed enumerations shared across acceptance criteria."""

    class Cache:
        def __init__(self):
            self._store = {}

        def get(self, key, build):
            if key not in self._store:
                self._store[key] = build()
            return self._store[key]

    return Cache()
