import json

import numpy as np
import pytest

from gibbslearn.learner import LearnConfig, learn_simple
from gibbslearn.models import (
    build_model,
    chain,
    heisenberg,
    lattice2d,
    parse_geometry,
    random_model,
    tfim,
    with_random_coefficients,
)
from gibbslearn.serialize import (
    SCHEMA_VERSION,
    dumps,
    load_spec,
    report_to_dict,
    save_spec,
    spec_from_dict,
    spec_to_dict,
)


def test_tfim_chain_layout():
    spec = tfim(chain(4))
    # n-1 couplings then n fields
    assert len(spec) == 7
    coeffs = spec.coefficients()
    for tid in range(3):
        ps, c = spec.terms[tid]
        assert sorted(ps.support) == [tid, tid + 1]
        assert set(dict(ps.letters).values()) == {"Z"}
        assert c == 1.0
    for tid in range(3, 7):
        ps, c = spec.terms[tid]
        assert ps.support == frozenset({tid - 3})
        assert set(dict(ps.letters).values()) == {"X"}
        assert c == 0.7


def test_heisenberg_has_three_couplings_per_edge():
    spec = heisenberg(chain(3))
    per_edge = {}
    for tid, (ps, c) in spec.terms.items():
        if len(ps.support) == 2:
            per_edge.setdefault(frozenset(ps.support), set()).update(dict(ps.letters).values())
    assert all(v == {"X"} or v == {"Y"} or v == {"Z"} or v == {"X", "Y", "Z"}
               for v in per_edge.values())
    assert all(len(v) == 1 or len(v) == 3 for v in per_edge.values())
    # every edge carries XX, YY and ZZ
    merged = {}
    for tid, (ps, c) in spec.terms.items():
        if len(ps.support) == 2:
            merged.setdefault(frozenset(ps.support), []).append(ps)
    for edge, plist in merged.items():
        assert {next(iter(dict(p.letters).values())) for p in plist} == {"X", "Y", "Z"}


def test_random_model_is_seeded():
    g = chain(4)
    a = random_model(g, seed=5)
    b = random_model(g, seed=5)
    c = random_model(g, seed=6)
    assert a.coefficients() == b.coefficients()
    assert a.coefficients() != c.coefficients()
    assert all(abs(v) <= 1.0 for v in a.coefficients().values())


def test_with_random_coefficients_keeps_terms():
    spec = tfim(chain(3))
    r1 = with_random_coefficients(spec, seed=9)
    r2 = with_random_coefficients(spec, seed=9)
    assert r1.coefficients() == r2.coefficients()
    assert set(r1.terms) == set(spec.terms)
    for t in spec.terms:
        assert r1.terms[t][0] == spec.terms[t][0]
    assert r1.coefficients() != spec.coefficients()


def test_build_model_dispatch():
    g = chain(3)
    assert set(build_model("tfim", g).terms) == set(tfim(g).terms)
    assert build_model("random", g, seed=2).coefficients() == random_model(g, 2).coefficients()
    with pytest.raises(ValueError):
        build_model("xy", g)


def test_parse_geometry():
    g = parse_geometry("chain:5")
    assert g.kind == "chain" and len(g.sites) == 5
    l = parse_geometry("lattice2d:2x3")
    assert l.kind == "lattice2d" and len(l.sites) == 6
    with pytest.raises(ValueError):
        parse_geometry("ring:4")


def test_lattice2d_edges():
    g = lattice2d(2, 2)
    assert len(g.sites) == 4
    assert len(g.edges()) == 4


# ------------------------------------------------------------ serialize

def test_spec_round_trip(tmp_path):
    spec = with_random_coefficients(tfim(chain(4)), seed=3)
    d = spec_to_dict(spec)
    assert d["schema_version"] == SCHEMA_VERSION
    back = spec_from_dict(d)
    assert back.coefficients() == spec.coefficients()
    for t in spec.terms:
        assert back.terms[t][0] == spec.terms[t][0]
    path = tmp_path / "model.json"
    save_spec(spec, path)
    loaded = load_spec(path)
    assert loaded.coefficients() == spec.coefficients()


def test_spec_from_dict_validates():
    spec = tfim(chain(3))
    d = spec_to_dict(spec)
    bad = dict(d)
    bad["schema_version"] = 99
    with pytest.raises(ValueError):
        spec_from_dict(bad)
    dup = json.loads(dumps(d))
    dup["terms"].append(dict(dup["terms"][0]))
    with pytest.raises(ValueError):
        spec_from_dict(dup)


def test_dumps_is_valid_json():
    spec = tfim(chain(3))
    text = dumps(spec_to_dict(spec))
    assert json.loads(text)["schema_version"] == SCHEMA_VERSION


def test_report_to_dict_contains_run_summary():
    geom = chain(2)
    spec = tfim(geom)
    rep = learn_simple(
        spec, LearnConfig(beta=1.0, epsilon=0.5, kappa=0.5, ell=3, search="sweep")
    )
    doc = report_to_dict(rep, {"beta": 1.0})
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["mode"] == "simple"
    assert doc["config"] == {"beta": 1.0}
    assert set(map(int, doc["learned"])) == set(spec.term_ids)
    json.loads(dumps(doc))
