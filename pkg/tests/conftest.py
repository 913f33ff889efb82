import pytest

from fbr.ring import build_ring


@pytest.fixture(scope="session")
def ring_factory():
    """Shared ring sessions so expensive lattices build once per run."""
    cache = {}

    def get(group_spec, fiber_spec):
        key = (group_spec, fiber_spec)
        if key not in cache:
            cache[key] = build_ring(group_spec, fiber_spec)
        return cache[key]

    return get
