"""Figures of merit for an 8-point transform and the add/shift cost model.

Performance measures use the AR(1) (Markov-I) autocorrelation with
``rho = 0.95``.  Closeness measures are taken against the orthonormal DCT:
orthonormalized approximations live on that scale, and this is the choice
that reproduces the published table (see ``REFERENCE_NORMALIZATION``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .core.loeffler import (
    EVEN_INDICES,
    ODD_INDICES,
    SHIFT_SET,
    TRIVIAL_SET,
    ParamVector,
    build_exact_dct,
    build_loeffler_dct,
)
from .core.matrix import ShapeMismatch

RHO = 0.95

# "dct": orthonormal DCT; "loeffler": the 2*sqrt(2)-scaled DCT.
REFERENCE_NORMALIZATION = "dct"

METRIC_FIELDS = ("alpha", "epsilon", "mse", "cg_db", "eta", "adds", "shifts")


class InvalidRho(ValueError):
    pass


class DegenerateRow(ArithmeticError):
    pass


class NotTrivialMultiplier(ValueError):
    pass


@dataclass(frozen=True)
class AutocorrModel:
    rho: float = RHO
    order: int = 8

    def __post_init__(self):
        if not -1 < self.rho < 1:
            raise InvalidRho(f"|rho| must be < 1, got {self.rho}")

    def matrix(self) -> np.ndarray:
        return autocorrelation(self.rho, self.order)


DEFAULT_MODEL = AutocorrModel()


def autocorrelation(rho: float, n: int) -> np.ndarray:
    if not -1 < rho < 1:
        raise InvalidRho(f"|rho| must be < 1, got {rho}")
    idx = np.arange(n)
    return float(rho) ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def reference_matrix(normalization: str | None = None) -> np.ndarray:
    normalization = normalization or REFERENCE_NORMALIZATION
    if normalization == "dct":
        return build_exact_dct()
    if normalization == "loeffler":
        return build_loeffler_dct()
    raise ValueError(f"unknown reference normalization {normalization!r}")


def _pair(c_hat, c_ref):
    c_hat = np.asarray(c_hat, dtype=float)
    c_ref = np.asarray(c_ref, dtype=float)
    if c_hat.shape != c_ref.shape:
        raise ShapeMismatch(f"{c_hat.shape} vs {c_ref.shape}")
    return c_hat, c_ref


def total_error_energy(c_hat, c_ref=None) -> float:
    """``pi * ||C_ref - C_hat||_F**2``."""
    c_hat, c_ref = _pair(c_hat, reference_matrix() if c_ref is None else c_ref)
    return math.pi * float(np.sum((c_ref - c_hat) ** 2))


def _model_matrix(model: AutocorrModel, n: int) -> np.ndarray:
    if model.order != n:
        raise ShapeMismatch(f"model order {model.order} vs transform size {n}")
    return model.matrix()


def mse(c_hat, c_ref=None, model: AutocorrModel = DEFAULT_MODEL) -> float:
    c_hat, c_ref = _pair(c_hat, reference_matrix() if c_ref is None else c_ref)
    r = _model_matrix(model, c_hat.shape[1])
    diff = c_ref - c_hat
    return float(np.trace(diff @ r @ diff.T)) / c_hat.shape[0]


def coding_gain(c_hat, c_inv=None, model: AutocorrModel = DEFAULT_MODEL) -> float:
    """Unified transform coding gain in dB.

    ``h_k`` is row ``k`` of the forward matrix and ``g_k`` the ``k``-th
    synthesis basis vector, i.e. column ``k`` of the inverse.
    """
    c_hat = np.asarray(c_hat, dtype=float)
    c_inv = np.linalg.inv(c_hat) if c_inv is None else np.asarray(c_inv, dtype=float)
    n = c_hat.shape[0]
    if c_inv.shape != (n, n) or c_hat.shape != (n, n):
        raise ShapeMismatch("coding gain needs square forward/inverse pair")
    r = _model_matrix(model, n)
    a = np.einsum("ki,ij,kj->k", c_hat, r, c_hat)
    b = np.sum(c_inv**2, axis=0)
    ab = a * b
    if np.any(ab <= 0):
        raise DegenerateRow("a basis vector has zero energy")
    return float(-10.0 * np.mean(np.log10(ab)))


def transform_efficiency(c_hat, model: AutocorrModel = DEFAULT_MODEL) -> float:
    """Percentage of transformed-covariance magnitude on the diagonal."""
    c_hat = np.asarray(c_hat, dtype=float)
    if c_hat.ndim != 2 or c_hat.shape[0] != c_hat.shape[1]:
        raise ShapeMismatch("transform efficiency needs a square matrix")
    r = _model_matrix(model, c_hat.shape[1])
    rxx = np.abs(c_hat @ r @ c_hat.T)
    return 100.0 * float(np.trace(rxx) / np.sum(rxx))


# --------------------------------------------------------------------------
# Arithmetic cost of the fast algorithm

def _check_trivial(alpha: ParamVector):
    bad = [str(v) for v in alpha if v not in TRIVIAL_SET]
    if bad:
        raise NotTrivialMultiplier(f"parameters {bad} are not trivial multipliers")


def addition_count(alpha: Sequence) -> int:
    a = ParamVector(alpha)
    _check_trivial(a)
    n_even = sum(a[k] != 0 for k in EVEN_INDICES)
    n_odd = sum(a[k] != 0 for k in ODD_INDICES)
    return 8 + 2 * max(1, n_even) + 4 * max(1, n_odd)


def shift_count(alpha: Sequence) -> int:
    a = ParamVector(alpha)
    _check_trivial(a)
    return 2 * sum(a[k] in SHIFT_SET for k in EVEN_INDICES) + 4 * sum(
        a[k] in SHIFT_SET for k in ODD_INDICES
    )


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricRecord:
    epsilon: float
    mse: float
    cg_db: float
    eta: float
    adds: int | None = None
    shifts: int | None = None
    alpha: str = ""

    def objectives(self) -> tuple:
        """Minimization tuple ``(eps, mse, -Cg, -eta, A, S)``."""
        return (self.epsilon, self.mse, -self.cg_db, -self.eta, self.adds, self.shifts)

    def to_row(self) -> dict:
        return {k: getattr(self, k) for k in METRIC_FIELDS}

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MetricRecord":
        return cls(**json.loads(text))


def evaluate(c_hat, c_inv=None, alpha: Sequence | None = None,
             model: AutocorrModel = DEFAULT_MODEL, reference: str | None = None) -> MetricRecord:
    """All four figures of merit, plus the cost model when ``alpha`` is given."""
    ref = reference_matrix(reference)
    adds = shifts = None
    label = ""
    if alpha is not None:
        adds, shifts = addition_count(alpha), shift_count(alpha)
        label = str(ParamVector(alpha))
    return MetricRecord(
        epsilon=total_error_energy(c_hat, ref),
        mse=mse(c_hat, ref, model),
        cg_db=coding_gain(c_hat, c_inv, model),
        eta=transform_efficiency(c_hat, model),
        adds=adds,
        shifts=shifts,
        alpha=label,
    )


def records_to_csv(records: Iterable[MetricRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=METRIC_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = rec.to_row()
        row = {k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in row.items()}
        writer.writerow(row)
    return buf.getvalue()


def records_from_csv(text: str) -> list[MetricRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(MetricRecord(
            epsilon=float(row["epsilon"]),
            mse=float(row["mse"]),
            cg_db=float(row["cg_db"]),
            eta=float(row["eta"]),
            adds=int(row["adds"]) if row["adds"] else None,
            shifts=int(row["shifts"]) if row["shifts"] else None,
            alpha=row["alpha"],
        ))
    return out
