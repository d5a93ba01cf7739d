"""Multiplierless fast algorithm for ``T(alpha)`` and its recursive 16/32-point
extensions.

The signal flow graph has three stages:

1. the input butterfly ``A`` (8 adders);
2. the parametric stage ``M(alpha)``: a fixed 4-adder butterfly plus two
   adders for the DC/Nyquist pair on the even side, then one adder chain per
   output row, where every nonzero trivial parameter is a wire (+-1) or a
   one-bit shift (+-2, +-1/2);
3. the output permutation ``P`` (wiring only).

Half-valued parameters are evaluated on a fixed-point copy of the input with
``input_scale`` fractional bits, so right shifts never discard bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core.loeffler import PERMUTATION, ParamVector, build_T
from .core.matrix import ExactMatrix, ShapeMismatch
from .metrics import NotTrivialMultiplier

ADD, SUB, SHL, SHR, NEG = "add", "subtract", "shift-left", "shift-right", "negate"
INPUT, ZERO = "input", "zero"


class InexactShift(ArithmeticError):
    pass


class InvalidSize(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple[int, ...] = ()
    stage: int = 0


@dataclass
class SfgPlan:
    """Node list in topological order plus the eight output node ids."""

    alpha: ParamVector
    nodes: list[Node] = field(default_factory=list)
    outputs: tuple[int, ...] = ()

    def _emit(self, op: str, *args: int, stage: int) -> int:
        self.nodes.append(Node(op, tuple(args), stage))
        return len(self.nodes) - 1

    def _scaled(self, coef: Fraction, src: int, stage: int) -> tuple[int, bool]:
        """Node carrying ``|coef| * src`` and whether the term is negative."""
        mag = abs(coef)
        if mag == 1:
            node = src
        elif mag == 2:
            node = self._emit(SHL, src, stage=stage)
        elif mag == Fraction(1, 2):
            node = self._emit(SHR, src, stage=stage)
        else:
            raise NotTrivialMultiplier(f"{coef} is not a trivial multiplier")
        return node, coef < 0

    def _combine(self, terms: list[tuple[Fraction, int]], stage: int) -> int:
        terms = [(c, s) for c, s in terms if c != 0]
        if not terms:
            return self._emit(ZERO, stage=stage)
        scaled = [self._scaled(c, s, stage) for c, s in terms]
        # start from a positive term so negative ones become subtractions
        scaled.sort(key=lambda t: t[1])
        acc, neg = scaled[0]
        if neg and len(scaled) == 1:
            return self._emit(NEG, acc, stage=stage)
        if neg:
            # all terms negative: sum magnitudes, negate once at the end
            for node, _ in scaled[1:]:
                acc = self._emit(ADD, acc, node, stage=stage)
            return self._emit(NEG, acc, stage=stage)
        for node, is_neg in scaled[1:]:
            acc = self._emit(SUB if is_neg else ADD, acc, node, stage=stage)
        return acc


def build_plan(alpha: Sequence) -> SfgPlan:
    a = ParamVector(alpha)
    if not a.is_trivial():
        raise NotTrivialMultiplier(f"alpha = ({a}) is outside the trivial set")
    a1, a2, a3, a4, a5, a6 = a
    plan = SfgPlan(alpha=a)
    x = [plan._emit(INPUT, i, stage=0) for i in range(8)]

    # stage 1: butterfly A
    u = [plan._emit(ADD, x[i], x[7 - i], stage=1) for i in range(4)]
    u += [plan._emit(SUB, x[3 - j], x[4 + j], stage=1) for j in range(4)]

    # stage 2, even half
    p = plan._emit(ADD, u[0], u[3], stage=2)
    q = plan._emit(ADD, u[1], u[2], stage=2)
    r = plan._emit(SUB, u[0], u[3], stage=2)
    s = plan._emit(SUB, u[1], u[2], stage=2)
    m = [
        plan._emit(ADD, p, q, stage=2),
        plan._emit(SUB, p, q, stage=2),
        plan._combine([(a2, r), (a5, s)], stage=2),
        plan._combine([(a5, r), (-a2, s)], stage=2),
    ]

    # stage 2, odd half: one adder chain per row of O(alpha)
    v = u[4:]
    odd_rows = (
        (-a1, a3, -a4, a6),
        (-a4, -a1, -a6, a3),
        (a3, a6, -a1, a4),
        (a6, a4, a3, a1),
    )
    m += [plan._combine(list(zip(row, v)), stage=2) for row in odd_rows]

    # stage 3: permutation is wiring
    plan.outputs = tuple(m[PERMUTATION[k]] for k in range(8))
    return plan


def count_ops(plan: SfgPlan) -> tuple[int, int]:
    """``(additions, shifts)`` executed by the graph.

    Every emitted node is hardware: the stage-2 even butterfly stays in the
    graph even when the rotation outputs it feeds are identically zero.
    """
    adds = sum(n.op in (ADD, SUB) for n in plan.nodes)
    shifts = sum(n.op in (SHL, SHR) for n in plan.nodes)
    return adds, shifts


def evaluate_plan(plan: SfgPlan, x: Sequence[int], input_scale: int = 1) -> list[Fraction]:
    """Run the graph on integers; returns exact outputs ``T(alpha) @ x``."""
    if len(x) != 8:
        raise ShapeMismatch("the 8-point graph needs 8 inputs")
    vals: list[int] = []
    for node in plan.nodes:
        if node.op == INPUT:
            vals.append(int(x[node.args[0]]) << input_scale)
        elif node.op == ZERO:
            vals.append(0)
        elif node.op == ADD:
            vals.append(vals[node.args[0]] + vals[node.args[1]])
        elif node.op == SUB:
            vals.append(vals[node.args[0]] - vals[node.args[1]])
        elif node.op == NEG:
            vals.append(-vals[node.args[0]])
        elif node.op == SHL:
            vals.append(vals[node.args[0]] << 1)
        elif node.op == SHR:
            v = vals[node.args[0]]
            if v & 1:
                raise InexactShift("right shift would drop a bit; raise input_scale")
            vals.append(v >> 1)
        else:  # pragma: no cover
            raise ValueError(node.op)
    return [Fraction(vals[o], 1 << input_scale) for o in plan.outputs]


def evaluate_plan_batch(plan: SfgPlan, X: np.ndarray, input_scale: int = 1) -> np.ndarray:
    """Integer graph evaluation on the rows of ``X`` (shape ``(n, 8)``).

    Returns ``2**input_scale * (T(alpha) @ x)`` per row as int64, which is
    exact as long as intermediate values fit in 63 bits.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != 8 or not np.issubdtype(X.dtype, np.integer):
        raise ShapeMismatch("batch evaluation needs an integer (n, 8) array")
    X = X.astype(np.int64)
    vals: list[np.ndarray] = []
    zero = np.zeros(len(X), dtype=np.int64)
    for node in plan.nodes:
        if node.op == INPUT:
            vals.append(X[:, node.args[0]] << input_scale)
        elif node.op == ZERO:
            vals.append(zero)
        elif node.op == ADD:
            vals.append(vals[node.args[0]] + vals[node.args[1]])
        elif node.op == SUB:
            vals.append(vals[node.args[0]] - vals[node.args[1]])
        elif node.op == NEG:
            vals.append(-vals[node.args[0]])
        elif node.op == SHL:
            vals.append(vals[node.args[0]] << 1)
        elif node.op == SHR:
            v = vals[node.args[0]]
            if np.any(v & 1):
                raise InexactShift("right shift would drop a bit; raise input_scale")
            vals.append(v >> 1)
        else:  # pragma: no cover
            raise ValueError(node.op)
    return np.stack([vals[o] for o in plan.outputs], axis=1)


def sfg_forward(alpha: Sequence, x: Sequence[int], input_scale: int = 1) -> list[Fraction]:
    return evaluate_plan(build_plan(alpha), x, input_scale)


# --------------------------------------------------------------------------
# Recursive 2N-point construction

@dataclass(frozen=True)
class ScaledTransform:
    size: int
    base: ParamVector
    matrix: ExactMatrix
    adds: int
    shifts: int


def base_transform(alpha: Sequence) -> ScaledTransform:
    plan = build_plan(alpha)
    adds, shifts = count_ops(plan)
    return ScaledTransform(8, plan.alpha, build_T(plan.alpha), adds, shifts)


def _input_butterfly(n2: int) -> ExactMatrix:
    n = n2 // 2
    rows = []
    for i in range(n):
        rows.append([int(j == i or j == n2 - 1 - i) for j in range(n2)])
    for i in range(n):
        rows.append([1 if j == i else -1 if j == n2 - 1 - i else 0 for j in range(n2)])
    return ExactMatrix(rows)


def _interleave(n2: int) -> ExactMatrix:
    """Output ``2k`` from the sum half, ``2k + 1`` from the difference half."""
    n = n2 // 2
    src = [k // 2 if k % 2 == 0 else n + k // 2 for k in range(n2)]
    return ExactMatrix([[int(c == src[r]) for c in range(n2)] for r in range(n2)])


def scale_up(base: ScaledTransform) -> ScaledTransform:
    """Double the size: a ``2N``-wide input butterfly feeds two ``N``-point
    blocks whose outputs are interleaved.

    Costs: ``adds(2N) = 2 adds(N) + 2N`` and ``shifts(2N) = 2 shifts(N)``.
    """
    if base.size not in (8, 16):
        raise InvalidSize(f"can only scale 8 or 16 points, got {base.size}")
    n2 = 2 * base.size
    core = ExactMatrix.block_diag(base.matrix, base.matrix)
    matrix = _interleave(n2) @ core @ _input_butterfly(n2)
    return ScaledTransform(n2, base.base, matrix, 2 * base.adds + n2, 2 * base.shifts)


def scaled_transform(alpha: Sequence, size: int) -> ScaledTransform:
    if size not in (8, 16, 32):
        raise InvalidSize(f"size must be 8, 16 or 32, got {size}")
    st = base_transform(alpha)
    while st.size < size:
        st = scale_up(st)
    return st


def scaled_forward(alpha: Sequence, x: Sequence[int], input_scale: int = 1) -> list[Fraction]:
    """Apply the scaled transform through the 8-point graph recursively."""
    n2 = len(x)
    if n2 == 8:
        return sfg_forward(alpha, x, input_scale)
    if n2 not in (16, 32):
        raise InvalidSize(f"input length must be 8, 16 or 32, got {n2}")
    n = n2 // 2
    sums = [x[i] + x[n2 - 1 - i] for i in range(n)]
    diffs = [x[i] - x[n2 - 1 - i] for i in range(n)]
    ys, yd = scaled_forward(alpha, sums, input_scale), scaled_forward(alpha, diffs, input_scale)
    out = []
    for k in range(n):
        out += [ys[k], yd[k]]
    return out


# --------------------------------------------------------------------------
# Separable 2-D transform and reference integer transforms

def transform_2d(C, X):
    """``C @ X @ C.T``; works on exact matrices and on stacks of float blocks."""
    if isinstance(C, ExactMatrix):
        X = X if isinstance(X, ExactMatrix) else ExactMatrix(X)
        if C.cols != X.rows or X.cols != C.cols:
            raise ShapeMismatch(f"{C.shape} vs block {X.shape}")
        return C @ X @ C.T
    C = np.asarray(C, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.shape[-2:] != (C.shape[1], C.shape[1]):
        raise ShapeMismatch(f"{C.shape} vs block {X.shape[-2:]}")
    return C @ X @ C.T


_AVC = (
    (8, 8, 8, 8, 8, 8, 8, 8),
    (12, 10, 6, 3, -3, -6, -10, -12),
    (8, 4, -4, -8, -8, -4, 4, 8),
    (10, -3, -12, -6, 6, 12, 3, -10),
    (8, -8, -8, 8, 8, -8, -8, 8),
    (6, -12, 3, 10, -10, -3, 12, -6),
    (4, -8, 8, -4, -4, 8, -8, 4),
    (3, -6, 10, -12, 12, -10, 6, -3),
)

_HEVC = (
    (64, 64, 64, 64, 64, 64, 64, 64),
    (89, 75, 50, 18, -18, -50, -75, -89),
    (83, 36, -36, -83, -83, -36, 36, 83),
    (75, -18, -89, -50, 50, 89, 18, -75),
    (64, -64, -64, 64, 64, -64, -64, 64),
    (50, -89, 18, 75, -75, -18, 89, -50),
    (36, -83, 83, -36, -36, 83, -83, 36),
    (18, -50, 75, -89, 89, -75, 50, -18),
)


def reference_integer_transforms() -> dict[str, ExactMatrix]:
    """H.264/AVC (scale 1/8) and H.265/HEVC (scale 1/64) 8-point cores."""
    return {
        "avc": ExactMatrix(_AVC).scale(Fraction(1, 8)),
        "hevc": ExactMatrix(_HEVC).scale(Fraction(1, 64)),
    }

