"""Named transforms and published reference numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core.loeffler import (
    ParamVector,
    build_exact_dct,
    is_near_orthogonal,
    is_orthogonal,
    loeffler_alpha,
    orthonormalize,
    orthonormalize_matrix,
)
from .fast import reference_integer_transforms

H = Fraction(1, 2)

# Efficient parameter vectors, in published order (C1..C6).
EFFICIENT = {
    "C1": ParamVector((1, 1, 0, 0, 0, 0)),
    "C2": ParamVector((1, 1, 0, 0, H, 0)),
    "C3": ParamVector((1, 1, 1, 0, 0, 0)),
    "C4": ParamVector((1, 1, 1, 1, H, 0)),
    "C5": ParamVector((1, 2, 0, 0, 1, 0)),
    "C6": ParamVector((1, 2, 1, 1, 1, 0)),
}

EQUIVALENT = {"C5": "C2", "C6": "C4"}

SDCT = ParamVector((1, 1, 1, 1, 1, 1))

# (epsilon, mse, cg_db, eta, adds, shifts) as published for C1..C6 and the DCT.
PUBLISHED_METRICS = {
    "C1": (8.66, 0.059, 7.33, 80.90, 14, 0),
    "C2": (7.73, 0.056, 7.54, 81.99, 16, 2),
    "C3": (1.44, 0.007, 8.30, 89.77, 18, 0),
    "C4": (0.87, 0.006, 8.39, 88.70, 24, 2),
    "C5": (7.73, 0.056, 7.54, 81.99, 16, 2),
    "C6": (0.87, 0.006, 8.39, 88.70, 24, 2),
    "dct": (0.0, 0.0, 8.85, 93.99, None, None),
}

# Literature approximations outside the Loeffler family.  Only their published
# figures are carried (for the 2-D frontier plots); the matrices are not.
# name: (orthogonalizable, epsilon, mse, cg_db, eta, adds, shifts)
LITERATURE_METRICS = {
    "BAS1": (False, 4.19, 0.019, 6.27, 83.17, 21, 0),
    "BAS2": (True, 5.93, 0.024, 8.12, 86.86, 18, 2),
    "BAS3": (True, 6.85, 0.028, 7.91, 85.38, 18, 0),
    "BAS4": (True, 4.09, 0.021, 8.33, 88.22, 24, 4),
    "BAS5": (True, 26.86, 0.071, 7.91, 85.38, 18, 0),
    "BAS6": (True, 26.86, 0.071, 7.91, 85.64, 16, 0),
    "BAS7": (True, 26.40, 0.068, 8.12, 86.86, 18, 2),
    "BAS8": (True, 35.06, 0.102, 7.95, 85.31, 24, 0),
    "WHT": (True, 5.05, 0.025, 7.95, 85.31, 24, 0),
}

# Scaled-transform costs (adds, shifts) for N = 16, 32.
PUBLISHED_SCALED_COSTS = {
    "C1": {16: (44, 0), 32: (120, 0)},
    "C3": {16: (52, 0), 32: (136, 0)},
    "C5": {16: (48, 4), 32: (128, 8)},
    "C6": {16: (64, 4), 32: (160, 8)},
}


class UnknownTransform(KeyError):
    pass


@dataclass(frozen=True)
class NamedTransform:
    name: str
    forward: np.ndarray
    inverse: np.ndarray
    alpha: ParamVector | None = None

    @property
    def orthonormal(self) -> bool:
        return bool(np.allclose(self.forward @ self.forward.T, np.eye(len(self.forward)), atol=1e-12))

    def classification(self) -> str:
        if self.alpha is None:
            return "orthonormal" if self.orthonormal else "non-orthogonal"
        if is_orthogonal(self.alpha):
            return "orthogonal"
        if is_near_orthogonal(self.alpha):
            return "near-orthogonal"
        return "non-orthogonal"


def inverse_of(forward: np.ndarray) -> np.ndarray:
    """Transpose when orthonormal, true inverse otherwise."""
    forward = np.asarray(forward, dtype=float)
    if np.allclose(forward @ forward.T, np.eye(len(forward)), atol=1e-12):
        return forward.T.copy()
    return np.linalg.inv(forward)


def from_alpha(alpha, name: str | None = None, method: str = "polar") -> NamedTransform:
    alpha = ParamVector(alpha)
    fwd = orthonormalize(alpha, method=method)
    return NamedTransform(name or f"alpha({alpha})", fwd, inverse_of(fwd), alpha)


def resolve(name: str, method: str = "polar") -> NamedTransform:
    """Look up ``dct``, ``loeffler-exact``, ``C1``..``C6``, ``avc``, ``hevc``,
    or parse a custom parameter vector such as ``"1,1,0,0,1/2,0"``."""
    key = name.strip()
    low = key.lower()
    if low == "dct":
        c = build_exact_dct()
        return NamedTransform("dct", c, c.T.copy())
    if low == "loeffler-exact":
        c = orthonormalize(loeffler_alpha())
        return NamedTransform("loeffler-exact", c, c.T.copy())
    if key.upper() in EFFICIENT:
        return from_alpha(EFFICIENT[key.upper()], key.upper(), method)
    if low in ("avc", "hevc"):
        fwd = orthonormalize_matrix(reference_integer_transforms()[low].to_numpy(), "diagonal")
        return NamedTransform(low, fwd, inverse_of(fwd))
    if low.startswith("custom"):
        key = key[len("custom"):].strip(" :=")
    try:
        alpha = ParamVector.parse(key)
    except (ValueError, ZeroDivisionError) as exc:
        raise UnknownTransform(name) from exc
    return from_alpha(alpha, method=method)


def published_name(alpha) -> str | None:
    alpha = ParamVector(alpha)
    for name, vec in EFFICIENT.items():
        if vec == alpha:
            return name
    return None
