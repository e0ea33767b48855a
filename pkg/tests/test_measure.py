import csv

import numpy as np
import pytest

from gibbslearn.measure import (
    MeasurementPlan,
    ObservableJob,
    build_plan,
    hermitian_split,
    run_plan,
    sample_expectation,
)
from gibbslearn.pauli import PauliString
from gibbslearn.spectral import gibbs_state

from conftest import random_spec


def two_qubit_state(seed=0, beta=1.0):
    rng = np.random.default_rng(seed)
    return gibbs_state(random_spec(rng, 2, 3), beta)


def test_hermitian_split_reconstructs(rng):
    q = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h1, h2 = hermitian_split(q)
    np.testing.assert_allclose(h1, h1.conj().T, atol=1e-14)
    np.testing.assert_allclose(h2, h2.conj().T, atol=1e-14)
    np.testing.assert_allclose(h1 + 1j * h2, q, atol=1e-14)


def job(label, sites, dim_sites, rng):
    d = 2 ** len(dim_sites)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return ObservableJob(label=label, q_op=m, support=frozenset(sites))


def test_build_plan_groups_disjoint_supports(rng):
    jobs = [
        job("a", {0}, range(3), rng),
        job("b", {1}, range(3), rng),
        job("c", {0, 1}, range(3), rng),
    ]
    plan = build_plan(jobs, shots=10, seed=0)
    # a and b fit one group; c overlaps both and needs its own
    assert plan.chi == 2
    assert plan.job_count == 3
    assert plan.total_copies == 2 * 10
    assert sorted(plan.labels()) == ["a", "b", "c"]
    first = {j.label for j in plan.groups[0]}
    assert first == {"a", "b"}


def test_build_plan_chain_needs_two_colors(rng):
    # nearest-neighbour pairs on a chain: odd and even edges interleave
    jobs = [job(f"e{i}", {i, i + 1}, range(5), rng) for i in range(4)]
    plan = build_plan(jobs, shots=1, seed=0)
    assert plan.chi == 2
    for group in plan.groups:
        seen = set()
        for j in group:
            assert not (seen & j.support)
            seen |= j.support


def test_build_plan_rejects_duplicate_labels(rng):
    jobs = [job("same", {0}, range(2), rng), job("same", {1}, range(2), rng)]
    with pytest.raises(ValueError):
        build_plan(jobs, shots=1, seed=0)


def test_exact_mode_is_trace(rng):
    state = two_qubit_state()
    q = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    plan = build_plan([ObservableJob("q", q, frozenset({0, 1}))], shots=100, seed=3)
    out = run_plan(plan, state, mode="exact")
    assert out["q"].shots == 0
    assert out["q"].std_error == 0.0
    assert abs(out["q"].mean - np.trace(q @ state.rho)) < 1e-12


def test_run_plan_rejects_unknown_mode():
    state = two_qubit_state()
    plan = build_plan([ObservableJob("q", np.eye(4), frozenset({0, 1}))], 1, 0)
    with pytest.raises(ValueError):
        run_plan(plan, state, mode="fast")


def test_shots_deterministic_per_seed_and_label(rng):
    state = two_qubit_state()
    q = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    jobs = [ObservableJob("q", q, frozenset({0, 1}))]
    a = run_plan(build_plan(jobs, 500, seed=7), state)["q"]
    b = run_plan(build_plan(jobs, 500, seed=7), state)["q"]
    c = run_plan(build_plan(jobs, 500, seed=8), state)["q"]
    assert a.mean == b.mean and a.std_error == b.std_error
    assert a.mean != c.mean


def test_shots_stream_keyed_by_label_not_position(rng):
    state = two_qubit_state()
    q1 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    q2 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    j1 = ObservableJob("first", q1, frozenset({0, 1}))
    j2 = ObservableJob("second", q2, frozenset({0, 1}))
    fwd = run_plan(build_plan([j1, j2], 200, seed=1), state)
    rev = run_plan(build_plan([j2, j1], 200, seed=1), state)
    assert fwd["first"].mean == rev["first"].mean
    assert fwd["second"].mean == rev["second"].mean


def test_shots_error_shrinks_like_inverse_sqrt(rng):
    state = two_qubit_state(seed=2)
    z1 = PauliString.from_map({0: "Z"}).to_dense([0, 1])
    truth = float(np.real(np.trace(z1 @ state.rho)))
    lo, hi = 1_000, 16_000
    err_lo, err_hi = [], []
    for s in range(12):
        err_lo.append(abs(sample_expectation(z1, state, lo, seed=[s, 0]).mean - truth))
        err_hi.append(abs(sample_expectation(z1, state, hi, seed=[s, 1]).mean - truth))
    ratio = np.mean(err_lo) / np.mean(err_hi)
    # 16x the shots should shave the error by about 4x
    assert 2.0 < ratio < 8.0


def test_sample_expectation_unbiased_identity():
    state = two_qubit_state()
    est = sample_expectation(np.eye(4), state, 50, seed=0)
    assert est.mean == 1.0
    assert est.std_error == 0.0


def test_sample_expectation_validates_inputs():
    state = two_qubit_state()
    with pytest.raises(ValueError):
        sample_expectation(np.eye(4), state, 0, seed=0)
    with pytest.raises(ValueError):
        sample_expectation(np.eye(4), 2.0 * state.rho, 10, seed=0)


def test_std_error_tracks_spread():
    state = two_qubit_state()
    z1 = PauliString.from_map({0: "Z"}).to_dense([0, 1])
    est = sample_expectation(z1, state, 4000, seed=5)
    truth = float(np.real(np.trace(z1 @ state.rho)))
    assert abs(est.mean - truth) < 6 * est.std_error
    assert est.std_error > 0


def test_transcript_csv(tmp_path, rng):
    state = two_qubit_state()
    q = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    jobs = [
        ObservableJob("left", q, frozenset({0})),
        ObservableJob("right", q, frozenset({1})),
    ]
    path = tmp_path / "transcript.csv"
    out = run_plan(build_plan(jobs, 300, seed=4), state, transcript_path=path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert set(rows[0]) == {"label", "group", "shots", "mean_re", "mean_im", "std_error"}
    by_label = {r["label"]: r for r in rows}
    for label, est in out.items():
        assert float(by_label[label]["mean_re"]) == pytest.approx(est.mean.real)
        assert int(by_label[label]["shots"]) == 300


def test_plan_counters():
    plan = MeasurementPlan(
        groups=[[ObservableJob("a", np.eye(2), frozenset({0}))],
                [ObservableJob("b", np.eye(2), frozenset({0}))]],
        shots_per_job=25,
        seed=0,
    )
    assert plan.chi == 2
    assert plan.job_count == 2
    assert plan.total_copies == 50
    assert plan.labels() == ["a", "b"]
