import json
from fractions import Fraction

import pytest

from finitealg.catalog import CHECKS, Fixture, load_fixtures, run_all, run_fixture
from finitealg.catalog import builders
from finitealg.catalog.runner import Subject
from finitealg.commuting import kernel_profile, socle_dim
from finitealg.exactalg import Matrix


@pytest.fixture(scope="module")
def report():
    return run_all()


def test_fixture_files_are_well_formed():
    fixtures = load_fixtures()
    assert len(fixtures) >= 40
    assert len({f.id for f in fixtures}) == len(fixtures)
    for f in fixtures:
        for c in f.checks:
            assert c["name"] in CHECKS, (f.id, c["name"])
            assert c["anchor"]


def test_statuses(report):
    by_id = {f.fixture.id: f for f in report.fixtures}
    for fid, f in by_id.items():
        if fid.startswith("table2v_"):
            # the verbatim rows carry an extra linear dual generator each
            assert f.status == "DISCREPANCY", fid
            failed = [r for r in f.results if r.status == "FAIL"]
            assert [r.check for r in failed] == ["colength"]
            assert all(r.computed > r.expected for r in failed)
        else:
            assert f.status == "PASS", (fid, [r.to_json() for r in f.results if r.status != "PASS"])
    info = {(r.fixture, r.check): r.computed for f in report.fixtures for r in f.results if r.status == "INFO"}
    assert info[("prop_1432_case1", "hilb_tangent_dim")] == 49
    assert info[("ray_14211", "lower_colengths")] == [9, 7, 7, 7]


def test_run_all_is_deterministic(report):
    again = run_all()
    assert json.dumps(again.to_json(timing=False)) == json.dumps(report.to_json(timing=False))
    assert again.to_tsv().splitlines()[0] == report.to_tsv().splitlines()[0]


def test_every_table1_cell_has_a_fixture_of_that_colength(report):
    cells = set()
    for f in report.fixtures:
        t = f.fixture.table1
        if not t or f.status != "PASS":
            continue
        got = {r.check: r.computed for r in f.results}
        d = got.get("colength")
        if d is None:
            d = Subject(f.fixture).tuple.d
        if d == t["d"]:
            cells.add((min(t["n"], 6), t["d"]))
    assert cells == {(n, d) for n in (4, 5, 6) for d in (8, 9, 10)}


def test_table1_text_layout(report):
    text = report.table1_text()
    lines = text.splitlines()
    assert "d = 8" in lines[0] and "d = 10" in lines[0]
    assert any(line.startswith("n = 4") for line in lines)
    assert any(line.startswith("n >= 6") for line in lines)


def test_broken_fixture_is_reported_not_raised():
    fx = Fixture.from_json({"id": "broken", "kind": "inverse_system",
                            "payload": {"vars": 2, "generators": ["x1^^2"]},
                            "checks": [{"name": "colength", "expected": 3, "anchor": "negative control"},
                                       {"name": "no_such_check", "expected": 1, "anchor": "negative control"}]})
    rep = run_fixture(fx)
    assert rep.status == "ERROR"
    assert all(r.status == "ERROR" and r.error for r in rep.results)
    with pytest.raises(ValueError):
        Fixture.from_json({"id": "x", "kind": "inverse_system", "payload": {}, "checks": []})


def test_laurent_limit_rejects_poles():
    recipe = {"A1": {"sizes": [1, 1], "const": {"1,0": [[1]]}, "lambda": {"0,0": [[1]]}},
              "powers": [[[1, -1, 1]]]}
    assert not builders.limit_is_polynomial(recipe)
    with pytest.raises(builders.RecipeError):
        builders.tuple_at(recipe, 0)
    t = builders.tuple_at(recipe, 2)
    assert t.matrices[1] == t.matrices[0].scale(Fraction(1, 2))


def test_block_matrix():
    m = builders.block_matrix([1, 2], {"0,1": [[1, 2]], "1,1": "I", "1,0": "e2"})
    assert m == Matrix([[0, 1, 2], [0, 1, 0], [1, 0, 1]])


@pytest.mark.parametrize("n,r,s", [(4, 3, 1), (4, 3, 2), (4, 4, 3), (5, 4, 2), (5, 5, 5), (4, 4, 4)])
def test_socle_example(n, r, s):
    t = builders.socle_example(n, r, s)
    assert t.d == n + r + 2
    assert socle_dim(t) == r - s + 1
    assert kernel_profile(t)[:2] == (1, n)


@pytest.mark.parametrize("n,r", [(4, 3), (5, 4), (5, 3)])
def test_socle_example_when_s_equals_r_below_n(n, r):
    # the recipe's D_i vanish for i > s, leaving extra socle: n - r + 1 instead of 1
    assert socle_dim(builders.socle_example(n, r, r)) == n - r + 1


def test_syzygy_constraint_ranks():
    ranks = {}
    for fid in ("fiberdim_i", "fiberdim_ii", "fiberdim_iii", "fiberdim_iv"):
        fx = Fixture.load(fid)
        args = next(c["args"] for c in fx.checks if c["name"] == "constraint_rank")
        ranks[fid] = CHECKS["constraint_rank"](Subject(fx), **args)
    assert ranks == {"fiberdim_i": 5, "fiberdim_ii": 10, "fiberdim_iii": 5, "fiberdim_iv": 10}
