"""Exhaustive multicriteria search over the trivial-multiplier parameter space.

A candidate is feasible when

(i)   ``T(alpha)`` is invertible,
(ii)  its inverse is also low complexity (see ``CONSTRAINT_II``), and
(iii) it is orthogonal or near-orthogonal,

and the efficient set is the Pareto front of the six objectives
``(eps, MSE, -Cg, -eta, adds, shifts)`` over the feasible candidates.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core.loeffler import (
    TRIVIAL_SET,
    ParamVector,
    block_determinants,
    gram_summary,
    inverse_params,
    orthonormalize,
)
from .core.dyadic import Dyadic
from .metrics import MetricRecord, evaluate
from .transforms import EFFICIENT, LITERATURE_METRICS, published_name

# Inverse low-complexity predicates.  "a": every alpha' entry is 0 or +-2**j;
# "b": every alpha'/4 is a trivial multiplier.  Orthogonal candidates pass
# either way, since their inverse is the transpose of T(alpha) up to a
# diagonal scaling.  The "-literal" variants drop that exemption.
CONSTRAINT_II = ("a", "b", "a-literal", "b-literal")
DEFAULT_CONSTRAINT_II = "b"

# Dominance is decided on objectives rounded to the published precision
# ("published") or with a 1e-9 absolute tolerance on the raw values ("exact").
PRECISIONS = ("published", "exact")
DEFAULT_PRECISION = "published"
PUBLISHED_DECIMALS = (2, 3, 2, 2)
EXACT_TOL = 1e-9

OBJECTIVE_NAMES = ("epsilon", "mse", "neg_cg", "neg_eta", "adds", "shifts")

_TRIVIAL = frozenset(TRIVIAL_SET)


class UnsupportedFormat(ValueError):
    pass


def enumerate_alphas() -> Iterator[ParamVector]:
    """All 7**6 vectors in lexicographic order, starting at (-2, ..., -2)."""
    for combo in itertools.product(TRIVIAL_SET, repeat=6):
        yield ParamVector(combo)


@dataclass(frozen=True)
class Candidate:
    alpha: ParamVector
    invertible: bool
    inverse_low_complexity: bool
    orthogonal: bool
    near_orthogonal: bool
    record: MetricRecord | None = None

    @property
    def feasible(self) -> bool:
        return (self.invertible and self.inverse_low_complexity
                and (self.orthogonal or self.near_orthogonal))

    def flags(self) -> dict:
        return {
            "invertible": self.invertible,
            "inverse_low_complexity": self.inverse_low_complexity,
            "orthogonal": self.orthogonal,
            "near_orthogonal": self.near_orthogonal,
        }


def _power_of_two_or_zero(v) -> bool:
    return v == 0 or (Dyadic.is_dyadic(v) and Dyadic.from_value(v).is_power_of_two())


def inverse_is_low_complexity(alpha, orthogonal: bool, rule: str = DEFAULT_CONSTRAINT_II) -> bool:
    if rule not in CONSTRAINT_II:
        raise ValueError(f"constraint (ii) must be one of {CONSTRAINT_II}, got {rule!r}")
    if orthogonal and not rule.endswith("-literal"):
        return True
    alpha_inv = inverse_params(alpha)
    if rule.startswith("a"):
        return all(_power_of_two_or_zero(v) for v in alpha_inv)
    return all(v / 4 in _TRIVIAL for v in alpha_inv)


def feasible(alpha: Sequence, constraint_ii: str = DEFAULT_CONSTRAINT_II,
             with_metrics: bool = True) -> Candidate:
    """Check constraints (i)-(iii) and attach metrics when all hold."""
    alpha = ParamVector(alpha)
    det_e, det_o = block_determinants(alpha)
    invertible = det_e != 0 and det_o != 0
    s0, s1, d = gram_summary(alpha)
    orthogonal = d == 0
    near = 0 < d * d <= 1 + s0 * s0 / 16 + s1 * s1 / 8
    low = invertible and inverse_is_low_complexity(alpha, orthogonal, constraint_ii)
    cand = Candidate(alpha, invertible, low, orthogonal, near)
    if with_metrics and cand.feasible:
        cand = Candidate(alpha, invertible, low, orthogonal, near, metrics_for(alpha))
    return cand


def metrics_for(alpha: ParamVector) -> MetricRecord:
    c_hat = orthonormalize(alpha)
    return evaluate(c_hat, np.linalg.inv(c_hat), alpha=alpha)


def objectives(c: Candidate) -> tuple:
    if c.record is None:
        raise ValueError("objectives are defined for feasible candidates only")
    return c.record.objectives()


def dominance_key(obj: Sequence, precision: str = DEFAULT_PRECISION) -> tuple:
    """The tuple actually compared for dominance."""
    if precision == "published":
        reals = tuple(round(float(v), n) + 0.0 for v, n in zip(obj[:4], PUBLISHED_DECIMALS))
    elif precision == "exact":
        reals = tuple(float(v) for v in obj[:4])
    else:
        raise ValueError(f"precision must be one of {PRECISIONS}")
    return reals + (int(obj[4]), int(obj[5]))


def dominates(p: Sequence, q: Sequence, tol: float = 0.0) -> bool:
    """Componentwise ``p <= q`` with at least one strict ``<``."""
    le = all(a <= b + tol for a, b in zip(p, q))
    lt = any(a < b - tol for a, b in zip(p, q))
    return le and lt


@dataclass
class EfficientSet:
    members: list[Candidate]
    groups: dict[tuple, list[Candidate]] = field(default_factory=dict)
    precision: str = DEFAULT_PRECISION

    def alphas(self) -> list[ParamVector]:
        return [m.alpha for m in self.members]

    def group_of(self, alpha) -> list[Candidate]:
        alpha = ParamVector(alpha)
        for grp in self.groups.values():
            if any(c.alpha == alpha for c in grp):
                return grp
        return []


def pareto_front(candidates: Iterable[Candidate],
                 precision: str = DEFAULT_PRECISION) -> EfficientSet:
    """Non-dominated candidates; equal keys are all kept and grouped."""
    groups: dict[tuple, list[Candidate]] = {}
    for c in candidates:
        groups.setdefault(dominance_key(objectives(c), precision), []).append(c)
    tol = EXACT_TOL if precision == "exact" else 0.0
    keys = sorted(groups)
    front: list[tuple] = []
    # a lexicographically smaller key can never be dominated by a larger one
    # (up to tol), so one pass against the running front suffices ...
    for k in keys:
        if not any(dominates(f, k, tol) for f in front):
            front.append(k)
    # ... and a vectorized recheck guards the tolerance edge cases.
    if front and tol:
        allk = np.array(keys, dtype=float)
        keep = []
        for f in front:
            fa = np.array(f, dtype=float)
            le = np.all(allk <= fa + tol, axis=1)
            lt = np.any(allk < fa - tol, axis=1)
            if not np.any(le & lt):
                keep.append(f)
        front = keep
    members = sorted((c for k in front for c in groups[k]), key=lambda c: c.alpha)
    return EfficientSet(members, {k: sorted(groups[k], key=lambda c: c.alpha) for k in front},
                        precision)


# --------------------------------------------------------------------------
# Sweep

@dataclass
class SweepResult:
    total: int
    invertible: int
    feasible: list[Candidate]
    front: EfficientSet
    constraint_ii: str
    precision: str


def _sweep_chunk(args) -> tuple[int, int, list[Candidate]]:
    first, constraint_ii = args
    total = invertible = 0
    out = []
    for rest in itertools.product(TRIVIAL_SET, repeat=5):
        c = feasible((first,) + rest, constraint_ii)
        total += 1
        invertible += c.invertible
        if c.feasible:
            out.append(c)
    return total, invertible, out


def sweep(constraint_ii: str = DEFAULT_CONSTRAINT_II, precision: str = DEFAULT_PRECISION,
          jobs: int = 1) -> SweepResult:
    """Feasibility + metrics over all of ``TRIVIAL_SET**6``, then the front.

    Work is split by the first parameter; results merge in enumeration order
    so the outcome does not depend on ``jobs``.
    """
    tasks = [(first, constraint_ii) for first in TRIVIAL_SET]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_chunk, tasks))
    else:
        parts = [_sweep_chunk(t) for t in tasks]
    total = sum(p[0] for p in parts)
    invertible = sum(p[1] for p in parts)
    feas = [c for p in parts for c in p[2]]
    return SweepResult(total, invertible, feas, pareto_front(feas, precision),
                       constraint_ii, precision)


# --------------------------------------------------------------------------
# Reports

REPORT_FIELDS = ("alpha", "group", "published", "invertible", "inverse_low_complexity",
                 "orthogonal", "near_orthogonal", "epsilon", "mse", "cg_db", "eta",
                 "adds", "shifts")


def _rows(es: EfficientSet) -> list[dict]:
    order = {k: i for i, k in enumerate(sorted(es.groups, key=lambda k: min(c.alpha for c in es.groups[k])))}
    rows = []
    for key, grp in es.groups.items():
        for c in grp:
            r = c.record
            rows.append({
                "alpha": str(c.alpha),
                "group": order[key],
                "published": published_name(c.alpha) or "",
                **c.flags(),
                "epsilon": r.epsilon, "mse": r.mse, "cg_db": r.cg_db, "eta": r.eta,
                "adds": r.adds, "shifts": r.shifts,
            })
    rows.sort(key=lambda row: ParamVector.parse(row["alpha"]))
    return rows


def report(es: EfficientSet, fmt: str = "csv") -> str:
    """Deterministic CSV or JSON rendering, rows ordered by alpha."""
    rows = _rows(es)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "precision": es.precision,
            "members": rows,
            "published_missing": [n for n, a in EFFICIENT.items() if a not in es.alphas()],
            "extra": [row["alpha"] for row in rows if not row["published"]],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise UnsupportedFormat(f"unsupported report format {fmt!r}")


def parse_report(text: str, fmt: str = "csv") -> list[dict]:
    """Rows of a report, typed back from their text form."""
    if fmt == "json":
        return json.loads(text)["members"]
    if fmt != "csv":
        raise UnsupportedFormat(f"unsupported report format {fmt!r}")
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        typed = dict(row)
        typed["group"] = int(row["group"])
        for k in ("invertible", "inverse_low_complexity", "orthogonal", "near_orthogonal"):
            typed[k] = row[k] == "True"
        for k in ("epsilon", "mse", "cg_db", "eta"):
            typed[k] = float(row[k])
        for k in ("adds", "shifts"):
            typed[k] = int(row[k])
        out.append(typed)
    return out


# --------------------------------------------------------------------------
# 2-D projections (complexity vs one metric)

PROJECTION_METRICS = {"epsilon": 1, "mse": 1, "cg_db": -1, "eta": -1}


def _frontier_2d(points: list[tuple[str, float, float, int]]) -> set[str]:
    """Names on the 2-D front: minimize adds, and minimize sign*metric."""
    on = set()
    for name, x, y, _ in points:
        if not any((x2 <= x and y2 <= y) and (x2 < x or y2 < y) for _, x2, y2, _ in points):
            on.add(name)
    return on


def projections(efficient: Iterable[Candidate], include_literature: bool = True) -> dict[str, str]:
    """One CSV per metric: ``name,adds,<metric>,orthogonal,on_frontier``."""
    base = []
    for c in efficient:
        r = c.record
        name = published_name(c.alpha) or str(c.alpha)
        base.append((name, r.adds, {"epsilon": r.epsilon, "mse": r.mse, "cg_db": r.cg_db,
                                    "eta": r.eta}, c.orthogonal or c.near_orthogonal))
    if include_literature:
        for name, (orth, eps, m, cg, eta, adds, _) in LITERATURE_METRICS.items():
            base.append((name, adds, {"epsilon": eps, "mse": m, "cg_db": cg, "eta": eta}, orth))
    out = {}
    for metric, sign in PROJECTION_METRICS.items():
        pts = [(n, float(a), sign * v[metric], int(o)) for n, a, v, o in base]
        on = _frontier_2d(pts)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "adds", metric, "orthogonal", "on_frontier"])
        for n, a, v, o in sorted(base, key=lambda t: (t[1], t[0])):
            w.writerow([n, a, repr(v[metric]), int(o), int(n in on)])
        out[metric] = buf.getvalue()
    return out


def candidate_to_json(c: Candidate) -> dict:
    doc = {"alpha": str(c.alpha), **c.flags()}
    if c.record is not None:
        doc["record"] = asdict(c.record)
    return doc

