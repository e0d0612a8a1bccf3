"""Random Perron-like matrices with a planted Jordan structure.

``A = S J S^-1`` where ``J`` holds Jordan blocks for the principal
eigenvalue ``s`` (largest block ``nu``) and for a remainder whose real parts
sit at least ``gap`` below ``s``. ``S`` is built from two random orthogonal
factors and prescribed singular values, so ``cond(S)`` is known exactly.
"""
import os
from dataclasses import dataclass, field

import numpy as np

SEED_ENV = "PERRON_EIG_SEED"
DEFAULT_SEED = 20240611


def seed_from_env(default=DEFAULT_SEED):
    raw = os.environ.get(SEED_ENV)
    return default if raw in (None, "") else int(raw)


@dataclass
class PlantedMatrix:
    a: np.ndarray = field(repr=False)
    s: float
    nu: int
    alg_multiplicity: int
    blocks: list
    gap: float
    cond: float
    ge_basis: np.ndarray = field(repr=False)


def _jordan(lam, k):
    return lam * np.eye(k) + np.eye(k, k=1)


def _orthogonal(rng, m):
    q, r = np.linalg.qr(rng.normal(size=(m, m)))
    return q * np.sign(np.diag(r))


def _principal_blocks(rng, nu, room):
    blocks = [nu]
    while room - sum(blocks) > 1 and rng.random() < 0.4:
        blocks.append(int(rng.integers(1, nu + 1)))
        if sum(blocks) > room - 1:
            blocks.pop()
            break
    return blocks


def random_perron_like(rng, m_max=6, nu_max=3, gap_min=0.5, cond_max=50.0):
    """Draw one :class:`PlantedMatrix`.

    ``m`` is uniform on ``[nu + 1, m_max]``; at least one eigenvalue lies off
    the principal one so the gap is finite.
    """
    nu = int(rng.integers(1, nu_max + 1))
    m = int(rng.integers(nu + 1, m_max + 1))
    s = float(rng.uniform(-1.0, 2.0))
    gap = float(rng.uniform(gap_min, 2.0))
    blocks = _principal_blocks(rng, nu, m)
    k = sum(blocks)

    rest = []
    left = m - k
    first = True
    while left > 0:
        re = s - gap if first else s - gap - float(rng.uniform(0.0, 2.0))
        first = False
        if left >= 2 and rng.random() < 0.4:
            im = float(rng.uniform(0.2, 1.5))
            rest.append(np.array([[re, im], [-im, re]]))
            left -= 2
        elif left >= 2 and rng.random() < 0.3:
            rest.append(_jordan(re, 2))
            left -= 2
        else:
            rest.append(np.array([[re]]))
            left -= 1

    j = np.zeros((m, m))
    pos = 0
    for b in [_jordan(s, size) for size in blocks] + rest:
        d = b.shape[0]
        j[pos : pos + d, pos : pos + d] = b
        pos += d

    cond = float(np.exp(rng.uniform(0.0, np.log(cond_max))))
    sigma = np.exp(np.linspace(0.0, -np.log(cond), m))
    rng.shuffle(sigma)
    sm = _orthogonal(rng, m) @ np.diag(sigma) @ _orthogonal(rng, m)
    a = np.linalg.solve(sm.T, (sm @ j).T).T
    q, _ = np.linalg.qr(sm[:, :k])
    return PlantedMatrix(
        a=a, s=s, nu=nu, alg_multiplicity=k, blocks=blocks, gap=gap, cond=cond, ge_basis=q
    )


def random_nonnegative(rng, m=6):
    return rng.uniform(0.0, 1.0, size=(m, m))
