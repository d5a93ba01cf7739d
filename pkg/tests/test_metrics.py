import numpy as np
import pytest

from loefflerdct.core import build_exact_dct, orthonormalize
from loefflerdct.core.matrix import ShapeMismatch
from loefflerdct.metrics import (
    AutocorrModel,
    DegenerateRow,
    InvalidRho,
    MetricRecord,
    NotTrivialMultiplier,
    addition_count,
    autocorrelation,
    coding_gain,
    evaluate,
    mse,
    records_from_csv,
    records_to_csv,
    shift_count,
    total_error_energy,
    transform_efficiency,
)

from conftest import EFFICIENT_ALPHAS, H

PUBLISHED = {
    "C1": (8.66, 0.059, 7.33, 80.90, 14, 0),
    "C2": (7.73, 0.056, 7.54, 81.99, 16, 2),
    "C3": (1.44, 0.007, 8.30, 89.77, 18, 0),
    "C4": (0.87, 0.006, 8.39, 88.70, 24, 2),
    "C5": (7.73, 0.056, 7.54, 81.99, 16, 2),
    "C6": (0.87, 0.006, 8.39, 88.70, 24, 2),
}


def chat(name):
    return orthonormalize(EFFICIENT_ALPHAS[name])


def test_autocorrelation():
    assert np.array_equal(autocorrelation(0.0, 8), np.eye(8))
    r = autocorrelation(0.95, 8)
    assert r[0, 7] == pytest.approx(0.95**7) and r[0, 7] == pytest.approx(0.69834, abs=1e-5)
    assert np.array_equal(r, r.T) and np.all(np.linalg.eigvalsh(r) > 0)
    with pytest.raises(InvalidRho):
        autocorrelation(1.0, 8)
    with pytest.raises(InvalidRho):
        AutocorrModel(rho=-1.2)


def test_identity_cases_are_zero():
    c = build_exact_dct()
    assert total_error_energy(c, c) == 0
    assert mse(c, c) == 0
    with pytest.raises(ShapeMismatch):
        total_error_energy(np.eye(4), c)


@pytest.mark.parametrize("name", sorted(PUBLISHED))
def test_published_rows(name):
    eps, m, cg, eta, adds, shifts = PUBLISHED[name]
    rec = evaluate(chat(name), alpha=EFFICIENT_ALPHAS[name])
    assert rec.epsilon == pytest.approx(eps, abs=0.005)
    assert rec.mse == pytest.approx(m, abs=0.0005)
    assert rec.cg_db == pytest.approx(cg, abs=0.005)
    assert rec.eta == pytest.approx(eta, abs=0.005)
    assert (rec.adds, rec.shifts) == (adds, shifts)


def test_dct_efficiency():
    assert transform_efficiency(build_exact_dct()) == pytest.approx(93.99, abs=0.005)


def test_klt_limit_efficiency_is_100():
    _, v = np.linalg.eigh(autocorrelation(0.95, 8))
    assert transform_efficiency(v.T) == pytest.approx(100.0, abs=1e-9)


def test_mse_monte_carlo():
    """Trace formula vs sample mean over AR(1) vectors."""
    rng = np.random.default_rng(2024)
    n, rho = 100_000, 0.95
    x = np.empty((n, 8))
    x[:, 0] = rng.standard_normal(n)
    for k in range(1, 8):
        x[:, k] = rho * x[:, k - 1] + np.sqrt(1 - rho**2) * rng.standard_normal(n)
    c_hat = chat("C1")
    diff = build_exact_dct() - c_hat
    estimate = np.mean(np.sum((x @ diff.T) ** 2, axis=1)) / 8
    assert estimate == pytest.approx(mse(c_hat), rel=0.02)


def test_coding_gain_row_permutation_invariance():
    c = chat("C4")
    inv = np.linalg.inv(c)
    perm = np.random.default_rng(1).permutation(8)
    assert coding_gain(c[perm], inv[:, perm]) == pytest.approx(coding_gain(c, inv), abs=1e-12)


def test_coding_gain_degenerate_row():
    c = np.eye(8)
    inv = np.eye(8)
    inv[:, 3] = 0
    with pytest.raises(DegenerateRow):
        coding_gain(c, inv)


def test_cost_model_examples():
    assert (addition_count(EFFICIENT_ALPHAS["C1"]), shift_count(EFFICIENT_ALPHAS["C1"])) == (14, 0)
    assert (addition_count(EFFICIENT_ALPHAS["C4"]), shift_count(EFFICIENT_ALPHAS["C4"])) == (24, 2)
    assert (addition_count(EFFICIENT_ALPHAS["C5"]), shift_count(EFFICIENT_ALPHAS["C5"])) == (16, 2)
    with pytest.raises(NotTrivialMultiplier):
        addition_count((3, 1, 0, 0, 0, 0))
    with pytest.raises(NotTrivialMultiplier):
        shift_count((1, 1, 0, 0, H / 2, 0))


def test_record_serialization_round_trip():
    recs = [evaluate(chat(n), alpha=EFFICIENT_ALPHAS[n]) for n in ("C1", "C3")]
    recs.append(evaluate(build_exact_dct()))
    assert records_from_csv(records_to_csv(recs)) == recs
    for r in recs:
        assert MetricRecord.from_json(r.to_json()) == r


def test_objectives_negate_gains():
    rec = evaluate(chat("C1"), alpha=EFFICIENT_ALPHAS["C1"])
    obj = rec.objectives()
    assert obj[2] == -rec.cg_db and obj[3] == -rec.eta
    assert obj[:2] == (rec.epsilon, rec.mse)
