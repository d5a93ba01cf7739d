"""Parametrized Loeffler factorization ``T = P @ M(alpha) @ A``.

The six parameters replace the irrational multiplicands ``sqrt(2)*c_k``
(k = 1, 2, 3, 5, 6, 7, with ``c_k = cos(k*pi/16)``) of the scaled Loeffler
DCT.  Everything that depends on a rational parameter vector is computed in
exact arithmetic; only cosine-bearing matrices are floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .dyadic import Dyadic
from .matrix import ExactMatrix, SingularMatrix

HALF = Fraction(1, 2)

# Trivial multipliers: multiplication by these is a negation and/or one shift.
TRIVIAL_SET: tuple[Fraction, ...] = tuple(
    Fraction(v) for v in (-2, -1, -HALF, 0, HALF, 1, 2)
)
SHIFT_SET = frozenset(Fraction(v) for v in (-2, -HALF, HALF, 2))

EVEN_INDICES = (1, 4)          # alpha_2, alpha_5 (0-based)
ODD_INDICES = (0, 2, 3, 5)     # alpha_1, alpha_3, alpha_4, alpha_6


class NotOrthonormalizable(ValueError):
    pass


class ParamVector(tuple):
    """Six exact parameters ``(a1, ..., a6)``.

    Entries are :class:`~fractions.Fraction`.  Search candidates live in
    ``TRIVIAL_SET**6``; derived inverse vectors are arbitrary rationals.
    """

    def __new__(cls, values: Iterable):
        vals = tuple(_to_fraction(v) for v in values)
        if len(vals) != 6:
            raise ValueError(f"expected 6 parameters, got {len(vals)}")
        return super().__new__(cls, vals)

    @classmethod
    def parse(cls, text: str) -> "ParamVector":
        """Parse ``"1,1,0,0,1/2,0"`` (commas or whitespace, decimals allowed)."""
        toks = text.replace(",", " ").split()
        return cls(Fraction(t) for t in toks)

    def is_trivial(self) -> bool:
        return all(v in TRIVIAL_SET for v in self)

    def is_dyadic(self) -> bool:
        return all(Dyadic.is_dyadic(v) for v in self)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self)

    def __str__(self):
        return ",".join(str(v) for v in self)

    def __repr__(self):
        return f"ParamVector({str(self)})"


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, Dyadic):
        return v.to_fraction()
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


# --------------------------------------------------------------------------
# Fixed factors

_A_ROWS = (
    (1, 0, 0, 0, 0, 0, 0, 1),
    (0, 1, 0, 0, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1, 0, 0),
    (0, 0, 0, 1, 1, 0, 0, 0),
    (0, 0, 0, 1, -1, 0, 0, 0),
    (0, 0, 1, 0, 0, -1, 0, 0),
    (0, 1, 0, 0, 0, 0, -1, 0),
    (1, 0, 0, 0, 0, 0, 0, -1),
)

# Row r of P selects component PERMUTATION[r] of the M-stage output.
PERMUTATION = (0, 7, 2, 5, 1, 6, 3, 4)


def build_butterfly() -> ExactMatrix:
    return ExactMatrix(_A_ROWS)


def build_permutation() -> ExactMatrix:
    return ExactMatrix([[int(c == PERMUTATION[r]) for c in range(8)] for r in range(8)])


def _cos(k: int) -> float:
    return math.cos(k * math.pi / 16)


def build_exact_dct() -> np.ndarray:
    """Orthonormal 8-point DCT-II."""
    n = np.arange(8)
    k = n[:, None]
    c = np.cos((2 * n[None, :] + 1) * k * np.pi / 16) / 2
    c[0, :] = _cos(4) / 2
    return c


def build_loeffler_dct() -> np.ndarray:
    """The Loeffler-scaled DCT ``2*sqrt(2) * C``; its first row is all ones."""
    return 2 * math.sqrt(2) * build_exact_dct()


def loeffler_alpha() -> tuple[float, ...]:
    """Real parameters for which ``T(alpha)`` is the Loeffler-scaled DCT."""
    return tuple(math.sqrt(2) * _cos(k) for k in (1, 2, 3, 5, 6, 7))


def build_bcd() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Loeffler's three sub-stages of the multiplicative stage.

    ``B`` acts first and ``D`` last, so ``M' = D @ C @ B`` as a matrix
    product (see :func:`compose_bcd`).  ``D[6]`` is ``sqrt(2)`` on the
    diagonal only; a stray unit in column 4 would break the identity.
    """
    c1, c2, c3, c5, c6, c7 = (_cos(k) for k in (1, 2, 3, 5, 6, 7))
    r2 = math.sqrt(2)
    B = np.array([
        [1, 0, 0, 1, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0],
        [0, 1, -1, 0, 0, 0, 0, 0],
        [1, 0, 0, -1, 0, 0, 0, 0],
        [0, 0, 0, 0, c3, 0, 0, c5],
        [0, 0, 0, 0, 0, c1, c7, 0],
        [0, 0, 0, 0, 0, -c7, c1, 0],
        [0, 0, 0, 0, -c5, 0, 0, c3],
    ])
    C = np.array([
        [1, 1, 0, 0, 0, 0, 0, 0],
        [1, -1, 0, 0, 0, 0, 0, 0],
        [0, 0, r2 * c6, r2 * c2, 0, 0, 0, 0],
        [0, 0, -r2 * c2, r2 * c6, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 1, 0],
        [0, 0, 0, 0, 0, -1, 0, 1],
        [0, 0, 0, 0, 1, 0, -1, 0],
        [0, 0, 0, 0, 0, 1, 0, 1],
    ])
    D = np.array([
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, -1, 0, 0, 1],
        [0, 0, 0, 0, 0, r2, 0, 0],
        [0, 0, 0, 0, 0, 0, r2, 0],
        [0, 0, 0, 0, 1, 0, 0, 1],
    ])
    return B, C, D


def compose_bcd(B: np.ndarray, C: np.ndarray, D: np.ndarray) -> np.ndarray:
    """The stage ``B -> C -> D`` in signal-flow order, i.e. ``D @ C @ B``."""
    return D @ C @ B


# --------------------------------------------------------------------------
# Parametric stage

def _even_rows(a2, a5, one=1):
    return [
        [one, one, one, one],
        [one, -one, -one, one],
        [a2, a5, -a5, -a2],
        [a5, -a2, a2, -a5],
    ]


def _odd_rows(a1, a3, a4, a6):
    return [
        [-a1, a3, -a4, a6],
        [-a4, -a1, -a6, a3],
        [a3, a6, -a1, a4],
        [a6, a4, a3, a1],
    ]


def even_block(alpha: Sequence) -> ExactMatrix:
    a = ParamVector(alpha)
    return ExactMatrix(_even_rows(a[1], a[4]))


def odd_block(alpha: Sequence) -> ExactMatrix:
    a = ParamVector(alpha)
    return ExactMatrix(_odd_rows(a[0], a[2], a[3], a[5]))


def build_M(alpha: Sequence) -> ExactMatrix:
    """Block-diagonal multiplicative stage ``diag(E, O)``."""
    return ExactMatrix.block_diag(even_block(alpha), odd_block(alpha))


def build_M_real(alpha: Sequence[float]) -> np.ndarray:
    a1, a2, a3, a4, a5, a6 = (float(v) for v in alpha)
    m = np.zeros((8, 8))
    m[:4, :4] = _even_rows(a2, a5, 1.0)
    m[4:, 4:] = _odd_rows(a1, a3, a4, a6)
    return m


_P_NP = build_permutation().to_numpy()
_A_NP = build_butterfly().to_numpy()


def build_T(alpha: Sequence) -> ExactMatrix:
    """``T(alpha) = P @ M(alpha) @ A`` computed exactly."""
    return build_permutation() @ build_M(alpha) @ build_butterfly()


def build_T_real(alpha: Sequence[float]) -> np.ndarray:
    """Float version of :func:`build_T`.

    For dyadic parameters of small magnitude every entry is a short sum of
    dyadics, so the float result is still exact.
    """
    return _P_NP @ build_M_real(alpha) @ _A_NP


# --------------------------------------------------------------------------
# Gram structure

class GramSummary(NamedTuple):
    s0: Fraction
    s1: Fraction
    d: Fraction


def gram_summary(alpha: Sequence) -> GramSummary:
    a1, a2, a3, a4, a5, a6 = ParamVector(alpha)
    return GramSummary(
        s0=2 * (a2 * a2 + a5 * a5),
        s1=a1 * a1 + a3 * a3 + a4 * a4 + a6 * a6,
        d=a1 * (a4 - a3) + a6 * (a4 + a3),
    )


def gram_template(summary: GramSummary) -> ExactMatrix:
    """``T @ T.T`` assembled from ``(s0, s1, d)`` alone."""
    s0, s1, d = summary
    g = [[Fraction(0)] * 8 for _ in range(8)]
    for i, v in enumerate((8, 2 * s1, 2 * s0, 2 * s1, 8, 2 * s1, 2 * s0, 2 * s1)):
        g[i][i] = Fraction(v)
    for (i, j), v in {(1, 3): -2 * d, (1, 5): 2 * d, (3, 7): 2 * d, (5, 7): 2 * d}.items():
        g[i][j] = g[j][i] = v
    return ExactMatrix(g)


def is_orthogonal(alpha: Sequence) -> bool:
    return gram_summary(alpha).d == 0


def is_near_orthogonal(alpha: Sequence) -> bool:
    """``0 < d**2 <= 1 + s0**2/16 + s1**2/8`` in exact arithmetic.

    The lower bound is strict, so orthogonal vectors (``d == 0``) are *not*
    near-orthogonal; combine with :func:`is_orthogonal` where either will do.
    """
    s0, s1, d = gram_summary(alpha)
    return 0 < d * d <= 1 + s0 * s0 / 16 + s1 * s1 / 8


def deviation_from_diagonality(T) -> Fraction | float:
    """``1 - ||diag(T T')||_F^2 / ||T T'||_F^2``.

    Exact for an :class:`ExactMatrix`, float otherwise.
    """
    if isinstance(T, ExactMatrix):
        g = T @ T.T
        total = sum(v * v for r in g.tolist() for v in r)
        diag = sum(v * v for v in g.diagonal())
        return 1 - diag / total
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("deviation from diagonality needs a square matrix")
    g = T @ T.T
    return 1.0 - float(np.sum(np.diag(g) ** 2) / np.sum(g * g))


def deviation_closed_form(alpha: Sequence) -> Fraction:
    s0, s1, d = gram_summary(alpha)
    return 1 - 1 / (1 + 32 * d * d / (128 + 8 * s0 * s0 + 16 * s1 * s1))


# --------------------------------------------------------------------------
# Inversion

@lru_cache(maxsize=None)
def _det_even(a2: Fraction, a5: Fraction) -> Fraction:
    return ExactMatrix(_even_rows(a2, a5)).det()


@lru_cache(maxsize=None)
def _det_odd(a1: Fraction, a3: Fraction, a4: Fraction, a6: Fraction) -> Fraction:
    return ExactMatrix(_odd_rows(a1, a3, a4, a6)).det()


def block_determinants(alpha: Sequence) -> tuple[Fraction, Fraction]:
    """Exact ``(det E, det O)``."""
    a1, a2, a3, a4, a5, a6 = ParamVector(alpha)
    return _det_even(a2, a5), _det_odd(a1, a3, a4, a6)


def invertibility(alpha: Sequence) -> bool:
    det_e, det_o = block_determinants(alpha)
    return det_e != 0 and det_o != 0


def ratio_invertibility_condition(alpha: Sequence) -> bool | None:
    """The two-clause ratio test on the raw parameters.

    Returns ``None`` when the ratio's denominator vanishes and the test is
    undefined; :func:`invertibility` is the authoritative predicate.
    """
    a1, a2, a3, a4, a5, a6 = ParamVector(alpha)
    if a2 * a2 + a5 * a5 == 0:
        return False
    num = (a1**2 + a6**2) ** 2 - 4 * a3 * a4 * (a6**2 - a1**2)
    den = (a3**2 + a4**2) ** 2 - 4 * a1 * a6 * (a4**2 - a3**2)
    if den == 0:
        return None
    return num / den != -1


def inverse_coefficients(alpha: Sequence, det_e, det_o) -> tuple:
    """Closed-form ``alpha'`` with ``M(alpha)^-1 = M(alpha').T / 4``.

    Generic over the number type, so it serves the exact and float paths.
    """
    a1, a2, a3, a4, a5, a6 = alpha
    return (
        -4 * (a1**3 + 2 * a1 * a3 * a4 + a1 * a6**2 + a3**2 * a6 - a4**2 * a6) / det_o,
        -16 * a2 / det_e,
        4 * (-(a1**2) * a4 - 2 * a1 * a3 * a6 - a3**3 - a3 * a4**2 + a4 * a6**2) / det_o,
        -4 * (a1**2 * a3 - 2 * a1 * a4 * a6 + a3**2 * a4 - a3 * a6**2 + a4**3) / det_o,
        -16 * a5 / det_e,
        4 * (-(a1**2) * a6 - a1 * a3**2 + a1 * a4**2 + 2 * a3 * a4 * a6 - a6**3) / det_o,
    )


@lru_cache(maxsize=None)
def _inverse_even(a2: Fraction, a5: Fraction) -> tuple[Fraction, Fraction]:
    det_e = _det_even(a2, a5)
    if det_e == 0:
        raise SingularMatrix("det(E) = 0 (alpha_2 = alpha_5 = 0)")
    return -16 * a2 / det_e, -16 * a5 / det_e


@lru_cache(maxsize=None)
def _inverse_odd(a1: Fraction, a3: Fraction, a4: Fraction, a6: Fraction) -> tuple:
    det_o = _det_odd(a1, a3, a4, a6)
    if det_o == 0:
        raise SingularMatrix("det(O) = 0")
    # det(E) is irrelevant to the odd coefficients
    b1, _, b3, b4, _, b6 = inverse_coefficients((a1, 0, a3, a4, 0, a6), 1, det_o)
    return b1, b3, b4, b6


def inverse_params(alpha: Sequence) -> ParamVector:
    """``alpha'``; raises :class:`SingularMatrix` naming the vanishing block."""
    a1, a2, a3, a4, a5, a6 = ParamVector(alpha)
    det_e, det_o = _det_even(a2, a5), _det_odd(a1, a3, a4, a6)
    if det_e == 0 and det_o == 0:
        raise SingularMatrix("det(E) = 0 and det(O) = 0")
    b2, b5 = _inverse_even(a2, a5)
    b1, b3, b4, b6 = _inverse_odd(a1, a3, a4, a6)
    return ParamVector((b1, b2, b3, b4, b5, b6))


def invert_params(alpha: Sequence) -> tuple[ParamVector, ExactMatrix]:
    """Return ``(alpha', M(alpha)^-1)`` from the closed form."""
    alpha_inv = inverse_params(alpha)
    return alpha_inv, build_M(alpha_inv).T.scale(Fraction(1, 4))


def inverse_T(alpha: Sequence) -> ExactMatrix:
    """``T^-1 = (A/2) @ M^-1 @ P.T``."""
    _, m_inv = invert_params(alpha)
    return build_butterfly().scale(HALF) @ m_inv @ build_permutation().T


def invert_params_real(alpha: Sequence[float]) -> tuple[tuple[float, ...], np.ndarray]:
    """Float path of :func:`invert_params` for irrational parameters."""
    a = tuple(float(v) for v in alpha)
    m = build_M_real(a)
    det_e = float(np.linalg.det(m[:4, :4]))
    det_o = float(np.linalg.det(m[4:, 4:]))
    if det_e == 0 or det_o == 0:
        raise SingularMatrix("parametric stage is singular")
    alpha_inv = inverse_coefficients(a, det_e, det_o)
    return alpha_inv, build_M_real(alpha_inv).T / 4


def inverse_T_real(alpha: Sequence[float]) -> np.ndarray:
    _, m_inv = invert_params_real(alpha)
    return (_A_NP / 2) @ m_inv @ _P_NP.T


# --------------------------------------------------------------------------
# Orthonormalization

def _inv_sqrt_spd(g: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(g)
    return (v / np.sqrt(w)) @ v.T


def orthonormalize_matrix(T: np.ndarray, method: str = "polar") -> np.ndarray:
    """Scale ``T`` towards orthonormality.

    ``"diagonal"`` applies ``diag(T T')^-1/2`` and only normalizes the rows;
    ``"polar"`` applies the full inverse square root ``(T T')^-1/2`` and
    returns the orthonormal polar factor.  Both agree when ``T T'`` is
    diagonal.
    """
    T = np.asarray(T, dtype=float)
    g = T @ T.T
    if method == "diagonal":
        return T / np.sqrt(np.diag(g))[:, None]
    if method == "polar":
        return _inv_sqrt_spd(g) @ T
    raise ValueError(f"unknown orthonormalization method {method!r}")


def orthonormalize(alpha: Sequence, method: str = "polar") -> np.ndarray:
    """Orthonormalized approximation ``C_hat`` for a feasible parameter vector.

    Rational vectors must be orthogonal or near-orthogonal (checked exactly);
    float vectors such as :func:`loeffler_alpha` are taken as given.
    """
    if all(isinstance(v, (int, Fraction, Dyadic)) for v in alpha):
        if not (is_orthogonal(alpha) or is_near_orthogonal(alpha)):
            raise NotOrthonormalizable(
                f"alpha = ({ParamVector(alpha)}) is neither orthogonal nor near-orthogonal"
            )
        T = build_T_real(ParamVector(alpha).as_floats())
    else:
        T = build_T_real(alpha)
    return orthonormalize_matrix(T, method)
