import os

import pytest
from hypothesis import HealthCheck, settings

from miniversal.fields import ComplexField, LaurentField, PadicField

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

BACKENDS = {
    "complex": ComplexField,
    "padic5": lambda: PadicField(5),
    "laurentQ": LaurentField,
    "laurent7": lambda: LaurentField(7),
}


@pytest.fixture(params=list(BACKENDS))
def field(request):
    return BACKENDS[request.param]()


@pytest.fixture(params=["padic5", "laurentQ", "laurent7"])
def exact_field(request):
    return BACKENDS[request.param]()
