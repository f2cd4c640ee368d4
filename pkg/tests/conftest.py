import numpy as np
import pytest

from corrcount import MixtureSpec, build_mixture_joint


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_random_mixture(rng, n_atoms=None):
    if n_atoms is None:
        n_atoms = int(rng.integers(1, 4))
    ps = rng.uniform(0.0, 1.0, size=n_atoms)
    ws = rng.uniform(0.1, 1.0, size=n_atoms)
    ws = ws / ws.sum()
    ws[-1] = 1.0 - float(np.sum(ws[:-1]))
    return MixtureSpec(tuple(zip(ps.tolist(), ws.tolist())))


def make_random_joint(rng, n):
    return build_mixture_joint(make_random_mixture(rng), n)


ALL_OR_NOTHING_3 = build_mixture_joint(MixtureSpec(((0.0, 0.5), (1.0, 0.5))), 3)
