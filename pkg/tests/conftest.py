import pytest

from critline import kernels

BACKENDS = ["numba", "numpy"] if kernels.NUMBA is not None else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    ns = kernels.select(request.param)
    monkeypatch.setattr(kernels, "active", ns)
    return ns
