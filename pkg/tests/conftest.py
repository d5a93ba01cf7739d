import itertools
from fractions import Fraction

import numpy as np
import pytest

from loefflerdct.core.loeffler import TRIVIAL_SET, ParamVector

H = Fraction(1, 2)

EFFICIENT_ALPHAS = {
    "C1": (1, 1, 0, 0, 0, 0),
    "C2": (1, 1, 0, 0, H, 0),
    "C3": (1, 1, 1, 0, 0, 0),
    "C4": (1, 1, 1, 1, H, 0),
    "C5": (1, 2, 0, 0, 1, 0),
    "C6": (1, 2, 1, 1, 1, 0),
}

SDCT = (1, 1, 1, 1, 1, 1)


def dense_T(alpha) -> list[list[Fraction]]:
    """Entrywise ``P M A`` from the printed factor definitions, no shared code."""
    a1, a2, a3, a4, a5, a6 = (Fraction(v) for v in alpha)
    A = [[0] * 8 for _ in range(8)]
    for i in range(4):
        A[i][i] = A[i][7 - i] = 1
    for j in range(4):
        A[4 + j][3 - j] = 1
        A[4 + j][4 + j] = -1
    M = [[Fraction(0)] * 8 for _ in range(8)]
    E = [[1, 1, 1, 1], [1, -1, -1, 1], [a2, a5, -a5, -a2], [a5, -a2, a2, -a5]]
    O = [[-a1, a3, -a4, a6], [-a4, -a1, -a6, a3], [a3, a6, -a1, a4], [a6, a4, a3, a1]]
    for i in range(4):
        for j in range(4):
            M[i][j] = Fraction(E[i][j])
            M[4 + i][4 + j] = Fraction(O[i][j])
    order = (0, 7, 2, 5, 1, 6, 3, 4)
    MA = [[sum(M[i][k] * A[k][j] for k in range(8)) for j in range(8)] for i in range(8)]
    return [MA[order[r]] for r in range(8)]


@pytest.fixture(scope="session")
def all_alphas():
    return [ParamVector(c) for c in itertools.product(TRIVIAL_SET, repeat=6)]


@pytest.fixture(scope="session")
def all_T_doubled():
    """``2 T(alpha)`` for every alpha, as an int64 stack in enumeration order."""
    vals = np.array([float(v) for v in TRIVIAL_SET])
    grid = np.array(list(itertools.product(range(7), repeat=6)))
    a = vals[grid]                                   # (n, 6)
    a1, a2, a3, a4, a5, a6 = a.T
    n = len(a)
    M = np.zeros((n, 8, 8))
    M[:, 0, :4] = 1
    M[:, 1, :4] = (1, -1, -1, 1)
    M[:, 2, :4] = np.stack([a2, a5, -a5, -a2], 1)
    M[:, 3, :4] = np.stack([a5, -a2, a2, -a5], 1)
    M[:, 4, 4:] = np.stack([-a1, a3, -a4, a6], 1)
    M[:, 5, 4:] = np.stack([-a4, -a1, -a6, a3], 1)
    M[:, 6, 4:] = np.stack([a3, a6, -a1, a4], 1)
    M[:, 7, 4:] = np.stack([a6, a4, a3, a1], 1)
    A = np.zeros((8, 8))
    for i in range(4):
        A[i, i] = A[i, 7 - i] = 1
        A[4 + i, 3 - i] = 1
        A[4 + i, 4 + i] = -1
    P = np.eye(8)[[0, 7, 2, 5, 1, 6, 3, 4]]
    T2 = np.rint(2 * (P @ M @ A)).astype(np.int64)
    return a, T2


def _natural_images():
    data = pytest.importorskip("skimage.data")
    from skimage.color import rgb2gray

    imgs = {"camera": data.camera(), "moon": data.moon(), "coins": data.coins(),
            "clock": data.clock()}
    for name in ("chelsea", "astronaut", "coffee"):
        imgs[name] = np.rint(rgb2gray(getattr(data, name)()) * 255).astype(np.uint8)
    return imgs


@pytest.fixture(scope="session")
def corpus():
    from loefflerdct.codec import pad_image

    return {k: pad_image(v) for k, v in _natural_images().items()}


@pytest.fixture(scope="session")
def sweep_b():
    from loefflerdct.search import sweep

    return sweep(constraint_ii="b", precision="published", jobs=1)
