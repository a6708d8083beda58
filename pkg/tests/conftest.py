import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dyonstring import IntegratorConfig, Params, initial_state, integrate  # noqa: E402

REF_SEED = dict(a=1.0, b=0.35, r0=0.01, kappa=1.0)
NEGATIVE_LAMBDAS = (-0.25, -0.15, -0.01)
POSITIVE_LAMBDAS = (0.0, 0.0005, 0.001, 0.0025, 0.0034, 0.00425, 0.0075, 0.0125, 0.014, 0.015)


def seed_params(lam, **kw):
    return Params(lam=lam, **{**REF_SEED, **kw})


@pytest.fixture(scope="session")
def seed_run():
    """Cached default-config reference-seed runs keyed by lambda."""
    cache = {}

    def get(lam, **cfg):
        key = (lam, tuple(sorted(cfg.items())))
        if key not in cache:
            p = seed_params(lam)
            cache[key] = integrate(initial_state(p), p, IntegratorConfig(**cfg))
        return cache[key]
    return get
