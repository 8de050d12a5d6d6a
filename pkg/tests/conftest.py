import pytest

from embtopics import _kernels


@pytest.fixture(params=_kernels.available_backends())
def kernel_backend(request):
    """Run a test once per available kernel backend (compiled and numpy)."""
    previous = _kernels.active_backend()
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(previous)
