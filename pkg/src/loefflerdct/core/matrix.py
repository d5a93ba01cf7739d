"""Small dense matrices over exact rationals, plus a text format shared with
float matrices.

Only what the Loeffler constructions need is here: products, transposes,
determinants and Gauss-Jordan inversion.  Sizes are 8x8 at most in practice
(32x32 for scaled transforms), so plain nested tuples are fast enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class ShapeMismatch(ValueError):
    pass


class SingularMatrix(ArithmeticError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if hasattr(x, "to_fraction"):
        return x.to_fraction()
    return Fraction(x)


class ExactMatrix:
    """Immutable rows x cols matrix of :class:`~fractions.Fraction`."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(_frac(v) for v in row) for row in entries)
        if not data or not data[0]:
            raise ShapeMismatch("empty matrix")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ShapeMismatch("ragged rows")
        self._data = data
        self.rows = len(data)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def block_diag(cls, *blocks: "ExactMatrix") -> "ExactMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[Fraction(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(out)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self._data])

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self._data))

    def _check_same(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix(
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._data, other._data)
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix(
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self._data, other._data)
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([-a for a in r] for r in self._data)

    def scale(self, k) -> "ExactMatrix":
        k = _frac(k)
        return ExactMatrix([k * a for a in r] for r in self._data)

    def __mul__(self, k):
        if isinstance(k, ExactMatrix):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ShapeMismatch(f"{self.shape} @ {other.shape}")
            cols = list(zip(*other._data))
            return ExactMatrix(
                [sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols]
                for r in self._data
            )
        vec = [_frac(v) for v in other]
        if len(vec) != self.cols:
            raise ShapeMismatch(f"{self.shape} @ vector[{len(vec)}]")
        return [sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self._data]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    def is_diagonal(self) -> bool:
        return all(
            v == 0 for i, r in enumerate(self._data) for j, v in enumerate(r) if i != j
        )

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self._data[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> Fraction:
        """Determinant by fraction-exact Gaussian elimination."""
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of a non-square matrix")
        a = [list(r) for r in self._data]
        n = self.rows
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det *= a[k][k]
            for i in range(k + 1, n):
                if a[i][k]:
                    f = a[i][k] / a[k][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return det

    def inverse(self) -> "ExactMatrix":
        """Gauss-Jordan inverse; raises :class:`SingularMatrix`."""
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.rows
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._data)]
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            a[k], a[piv] = a[piv], a[k]
            p = a[k][k]
            a[k] = [x / p for x in a[k]]
            for i in range(n):
                if i != k and a[i][k]:
                    f = a[i][k]
                    a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        return ExactMatrix(r[n:] for r in a)

    def to_text(self) -> str:
        return format_matrix(self)


def format_matrix(m) -> str:
    """Serialize to the ``rows cols`` + one-line-per-row text format.

    Exact matrices use ``p/q`` fractions; float arrays use 17 significant
    digits so the round trip is lossless.
    """
    if isinstance(m, ExactMatrix):
        lines = [f"{m.rows} {m.cols}"]
        lines += [" ".join(f"{v.numerator}/{v.denominator}" for v in r) for r in m.tolist()]
    else:
        arr = np.asarray(m, dtype=float)
        if arr.ndim != 2:
            raise ShapeMismatch("expected a 2-D array")
        lines = [f"{arr.shape[0]} {arr.shape[1]}"]
        lines += [" ".join(f"{v:.17g}" for v in r) for r in arr]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str):
    """Inverse of :func:`format_matrix`.

    Returns an :class:`ExactMatrix` when every entry is an integer or ``p/q``
    fraction, otherwise a float ``numpy`` array.
    """
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    try:
        rows, cols = (int(t) for t in lines[0].split())
    except (IndexError, ValueError) as exc:
        raise ValueError("malformed matrix header") from exc
    body = [ln.split() for ln in lines[1:]]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise ShapeMismatch(f"header says {rows}x{cols}")
    tokens = [t for r in body for t in r]
    if all(_is_rational_token(t) for t in tokens):
        return ExactMatrix([[Fraction(t) for t in r] for r in body])
    return np.array([[float(t) for t in r] for r in body])


def _is_rational_token(tok: str) -> bool:
    num, _, den = tok.partition("/")
    return num.lstrip("+-").isdigit() and (not den or den.isdigit())


def as_exact(rows: Sequence[Sequence]) -> ExactMatrix:
    return rows if isinstance(rows, ExactMatrix) else ExactMatrix(rows)
