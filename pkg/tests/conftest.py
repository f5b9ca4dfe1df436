import numpy as np
import pytest

from gradcorr.models import builtin_models, make_model

MODEL_IDS = tuple(sorted(builtin_models()))


@pytest.fixture(params=MODEL_IDS)
def model(request):
    return make_model(request.param)


def draw(model, n, seed, theta=None):
    """Seeded sample at theta (defaults to the model's default point)."""
    if theta is None:
        theta = model.default_theta
    rng = np.random.default_rng(seed)
    return model.sample(np.asarray(theta, dtype=float), n, rng)
