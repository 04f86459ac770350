import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from graphspread import gen_complete, gen_cycle, gen_path, gen_random, gen_star

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def corpus():
    """(name, graph, center) triples used across modules."""
    return [
        ("star5-center", gen_star(5), 0),
        ("star5-leaf", gen_star(5), 1),
        ("star6-leaf", gen_star(6), 2),
        ("K2", gen_complete(2), 0),
        ("K5", gen_complete(5), 3),
        ("cycle6", gen_cycle(6), 0),
        ("path5-end", gen_path(5), 0),
        ("path5-mid", gen_path(5), 2),
        ("random9", gen_random(9, 0.4, seed=3), 4),
    ]


CORPUS = corpus()
CORPUS_IDS = [c[0] for c in CORPUS]


def random_unit(rng, count, n):
    x = rng.normal(size=(count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)
