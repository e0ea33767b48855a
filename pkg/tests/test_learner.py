import csv

import numpy as np
import pytest

from gibbslearn.geometry import GeometrySpec
from gibbslearn.learner import (
    BudgetExceeded,
    LearnConfig,
    coefficient_error,
    enumerate_candidates,
    iterate_once,
    learn_iterative,
    learn_simple,
    local_closeness_sides,
    make_net,
    score_candidate,
)
from gibbslearn.measure import ShotEstimate
from gibbslearn.pauli import HamiltonianSpec, PauliString

from conftest import random_spec


def two_qubit_truth():
    geom = GeometrySpec(kind="chain", extents=(2,))
    terms = {
        0: (PauliString.from_map({0: "Z"}), 0.5),
        1: (PauliString.from_map({1: "Z"}), -0.3),
        2: (PauliString.from_map({0: "X", 1: "X"}), 0.7),
    }
    return HamiltonianSpec(terms, geom)


# ------------------------------------------------------------------ nets

def test_make_net_endpoints_and_mesh():
    net = make_net(1.0)
    assert net.points == (-1.0, 0.0, 1.0)
    assert make_net(2.0).points == (-1.0, 1.0)
    fine = make_net(0.3)
    assert fine.mesh <= 0.3
    assert fine.points[0] == -1.0 and fine.points[-1] == 1.0


def test_make_net_rejects_nonpositive():
    with pytest.raises(ValueError):
        make_net(0.0)


def test_net_covers_interval(rng):
    net = make_net(0.07)
    xs = rng.uniform(-1, 1, size=1000)
    worst = max(abs(x - net.round_to(x)) for x in xs)
    assert worst <= net.mesh / 2 + 1e-12


# ------------------------------------------------- candidate enumeration

def test_enumerate_candidates_lexicographic():
    net = make_net(1.0)
    cands = list(enumerate_candidates((4, 9), net, cap=100))
    assert len(cands) == 9
    assert cands[0] == {4: -1.0, 9: -1.0}
    assert cands[1] == {4: -1.0, 9: 0.0}
    assert cands[-1] == {4: 1.0, 9: 1.0}


def test_enumerate_candidates_budget():
    net = make_net(1.0)
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_candidates((0, 1), net, cap=8)
    assert exc.value.required == 9
    assert exc.value.cap == 8


def test_score_candidate_is_worst_abs():
    est = {
        "a": ShotEstimate(mean=0.1 + 0.2j, shots=1, std_error=0.0),
        "b": ShotEstimate(mean=-0.5, shots=1, std_error=0.0),
    }
    assert score_candidate(["a", "b"], est) == pytest.approx(0.5)
    with pytest.raises(RuntimeError):
        score_candidate(["a", "missing"], est)


# --------------------------------------------------------- error metrics

def test_coefficient_error_cases():
    truth = two_qubit_truth()
    errs, mx = coefficient_error(dict(truth.coefficients()), truth)
    assert mx == 0.0 and all(v == 0.0 for v in errs.values())
    off = dict(truth.coefficients())
    off[2] += 0.25
    errs, mx = coefficient_error(off, truth)
    assert mx == pytest.approx(0.25)
    # absent term counts as zero
    errs, mx = coefficient_error({}, truth)
    assert mx == pytest.approx(0.7)


def test_local_closeness_identity_random(rng):
    for _ in range(5):
        h1 = random_spec(rng, 3, 5)
        h2 = h1.with_coefficients({t: rng.uniform(-1, 1) for t in h1.terms})
        for site in h1.sites:
            lhs, rhs = local_closeness_sides(h1, h2, site)
            assert abs(lhs - rhs) < 1e-10


def test_local_closeness_single_term_closed_form():
    h1 = two_qubit_truth()
    delta = 0.37
    shifted = dict(h1.coefficients())
    shifted[1] += delta
    h2 = h1.with_coefficients(shifted)
    lhs, rhs = local_closeness_sides(h1, h2, 1)
    assert rhs == pytest.approx(8 * delta**2)
    assert lhs == pytest.approx(8 * delta**2, abs=1e-10)
    # site 0 never touches term 1
    lhs0, rhs0 = local_closeness_sides(h1, h2, 0)
    assert lhs0 == pytest.approx(0.0, abs=1e-12) and rhs0 == 0.0


def test_local_closeness_requires_matching_terms():
    h1 = two_qubit_truth()
    geom = GeometrySpec(kind="chain", extents=(2,))
    h2 = HamiltonianSpec({0: (PauliString.from_map({0: "Z"}), 0.5)}, geom)
    with pytest.raises(ValueError):
        local_closeness_sides(h1, h2, 0)


# ------------------------------------------------------------ config

def test_config_validation():
    with pytest.raises(ValueError):
        LearnConfig(beta=1.0, search="annealing")
    with pytest.raises(ValueError):
        LearnConfig(beta=0.0)
    with pytest.raises(ValueError):
        LearnConfig(beta=1.0, epsilon=-0.1)


# ------------------------------------------------------- exact learning

def test_learn_simple_recovers_on_net():
    truth = two_qubit_truth()
    cfg = LearnConfig(beta=1.0, epsilon=0.05, kappa=0.05, ell=3, search="sweep")
    rep = learn_simple(truth, cfg)
    assert rep.mode == "simple"
    assert rep.success
    for t, c in truth.coefficients().items():
        assert abs(rep.learned[t] - c) <= 0.05 + 1e-3


def test_learn_simple_coarse_net_degrades_to_kappa():
    truth = two_qubit_truth()
    rep = learn_simple(truth, LearnConfig(beta=1.0, epsilon=0.5, kappa=0.5, ell=3))
    assert rep.max_error <= 0.5 + 1e-3
    # 0.7 and -0.3 are off this net by exactly 0.2
    assert rep.max_error == pytest.approx(0.2, abs=1e-9)


def test_learn_simple_high_temperature_rescale():
    truth = two_qubit_truth()
    rep = learn_simple(truth, LearnConfig(beta=0.2, epsilon=0.05, kappa=0.05, ell=3))
    assert rep.details["scale"] == pytest.approx(0.2 * truth.graph.degree_bound)
    assert rep.max_error <= 0.05 + 1e-3


def test_learn_simple_budget_guard():
    truth = two_qubit_truth()
    cfg = LearnConfig(
        beta=1.0, epsilon=0.05, kappa=0.05, ell=3, search="exhaustive", budget_cap=100
    )
    with pytest.raises(BudgetExceeded):
        learn_simple(truth, cfg)


# ------------------------------------------------------- shots learning

def test_learn_simple_shots_accounting(tmp_path):
    truth = two_qubit_truth()
    path = tmp_path / "transcript.csv"
    cfg = LearnConfig(
        beta=1.0, epsilon=0.5, kappa=0.5, ell=3, shots=3000, seed=1,
        transcript=str(path),
    )
    rep = learn_simple(truth, cfg)
    assert rep.max_error <= 0.5 + 1e-3
    rows = list(csv.DictReader(open(path, newline="")))
    chi = max(int(r["group"]) for r in rows) + 1
    assert rep.samples_used == chi * 3000
    assert all(int(r["shots"]) == 3000 for r in rows)


def test_learn_simple_shots_rejects_sweep():
    truth = two_qubit_truth()
    cfg = LearnConfig(beta=1.0, epsilon=0.5, kappa=0.5, ell=3, shots=100, search="sweep")
    with pytest.raises(BudgetExceeded):
        learn_simple(truth, cfg)


# ---------------------------------------------------- iterative learning

def test_iterate_once_fixed_point():
    truth = two_qubit_truth()
    h0 = dict(truth.coefficients())
    cfg = LearnConfig(beta=1.0, epsilon=0.05, kappa=0.05, ell=3)
    out = iterate_once(truth, h0, 0.1, cfg)
    for t, c in h0.items():
        assert out[t] == pytest.approx(c, abs=1e-12)


def test_learn_iterative_zero_rounds_when_eta0_is_eps():
    truth = two_qubit_truth()
    rep = learn_iterative(
        truth, LearnConfig(beta=1.0, epsilon=0.25, eta0=0.25, ell=3, search="sweep")
    )
    assert rep.iterations == 0
    assert rep.per_iteration == []
    assert rep.max_error <= 0.25 + 1e-9


def test_learn_iterative_contracts():
    truth = two_qubit_truth()
    rep = learn_iterative(
        truth, LearnConfig(beta=1.0, epsilon=0.06, eta0=0.25, ell=3, search="sweep")
    )
    assert rep.iterations == 3
    errors = [p["max_error"] for p in rep.per_iteration]
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    assert rep.max_error <= 0.06


def test_learn_iterative_rejects_shots():
    truth = two_qubit_truth()
    with pytest.raises(ValueError):
        learn_iterative(truth, LearnConfig(beta=1.0, epsilon=0.1, shots=500))
