import json

import pytest

import cmpsolve


def corridor():
    walls = [(x, y) for x in range(13) for y in (1, -1)]
    return cmpsolve.Instance("pingpong", walls, [(2, 0), (10, 0)], [(10, 0), (2, 0)])


def test_solve_and_validate():
    inst = cmpsolve.generate(20, 8, 0.0, 3)
    assert len(inst) == 20
    sol = cmpsolve.solve(inst, "cross", seed=1)
    report = cmpsolve.validate(inst, sol)
    assert report["feasible"]
    assert report["makespan"] == sol.makespan
    assert sol.makespan >= cmpsolve.lower_bound(inst)


def test_optimize_never_worse():
    inst = cmpsolve.generate(20, 8, 0.1, 4)
    start = cmpsolve.solve(inst, "escape")
    better = cmpsolve.optimize(inst, start, "conflict", max_steps=300, seed=2)
    assert cmpsolve.validate(inst, better)["feasible"]
    assert better.makespan <= start.makespan


def test_json_round_trip():
    inst = cmpsolve.generate(10, 6, 0.1, 5)
    sol = cmpsolve.solve(inst, "cootie")
    assert cmpsolve.read_instance(inst.to_json()) == inst
    assert cmpsolve.read_solution(sol.to_json(), inst) == sol
    doc = json.loads(sol.to_json())
    assert doc["meta"]["makespan"] == sol.makespan


def test_transform_keeps_makespan():
    inst = cmpsolve.generate(10, 6, 0.0, 6)
    sol = cmpsolve.solve(inst, "cross")
    ti = cmpsolve.transform_instance(inst, "rot90")
    ts = cmpsolve.transform_solution(sol, "rot90")
    assert cmpsolve.validate(ti, ts)["feasible"]
    assert ts.makespan == sol.makespan


def test_errors():
    with pytest.raises(cmpsolve.UnsupportedInstance):
        cmpsolve.solve(corridor(), "dichotomy")
    with pytest.raises(cmpsolve.SolverFailure, match="stalled"):
        cmpsolve.solve(corridor(), "greedy")
    with pytest.raises(cmpsolve.ValidationError):
        cmpsolve.Instance("bad", [], [(0, 0), (0, 0)], [(1, 0), (2, 0)])


def test_svg():
    inst = cmpsolve.Instance("s", [(1, 1)], [(0, 0)], [(2, 0)])
    sol = cmpsolve.solve(inst, "cross")
    svg = cmpsolve.render_svg(inst, sol, "target")
    assert svg.count('class="robot"') == 1
    assert svg.count('class="obstacle"') == 1
