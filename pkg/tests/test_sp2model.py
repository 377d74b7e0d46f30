import pytest

from legweb.exterior import Form, MatrixForm, mc_defect, w1
from legweb.sp2model import SP2_RULES, check_sp2, exceptional_model, hyperplane_model, normalized_phi
from legweb.sp2model.checks import (
    QUADRIC_BRANCH, derive_ST, exceptional_checks, hyperplane_checks, intersect_planes_check, quadric_checks,
    shape_checks, solve_da0, structure_checks,
)
from legweb.symkernel import P


def _by_id(checks):
    return {c.id: c for c in checks}


def test_models_have_sp2_shape():
    assert check_sp2(normalized_phi()).ok
    assert check_sp2(hyperplane_model()[0]).ok
    assert check_sp2(exceptional_model().phi).ok


def test_block_rule_violation_is_witnessed():
    phi = normalized_phi()
    rows = [[phi[i, j] for j in range(4)] for i in range(4)]
    rows[3][2] = rows[3][2] + w1 * P("1")
    res = check_sp2(MatrixForm(rows))
    assert not res.ok and res.witnesses


def test_rules_cover_the_block_shape():
    # ten independent entries of sp2 in a 4x4 matrix
    assert len(SP2_RULES) == 16 - 10


def test_printed_exceptional_entry_is_published():
    c = _by_id(shape_checks())["shape.exceptional-as-printed"]
    assert c.verdict == "residual-published"


def test_hyperplane_model_closes():
    assert all(c.verdict == "pass" for c in hyperplane_checks())
    phi, table = hyperplane_model()
    assert all(f.is_zero() for _, f in mc_defect(phi, table).entries())


def test_structure_suite():
    checks = _by_id(structure_checks())
    assert all(c.ok for c in checks.values())
    assert checks["structure.dd-B0"].verdict == "pass"
    assert checks["structure.residual-without-exception"].verdict == "pass"


def test_S_T_derived():
    sol, _ = derive_ST()
    assert sol == {"S": P("2*R"), "T": P("-2*R")}


def test_da0_solution():
    sol = solve_da0()["solution"]
    assert sol == {"a0_1": P("0"), "a0_2": P("0"), "a0_0": P("0"), "a0_r": P("-a0")}


def test_exceptional_and_quadrics():
    assert all(c.verdict == "pass" for c in exceptional_checks())
    q = _by_id(quadric_checks())
    assert len([k for k in q if k.startswith("quadrics.vanish.")]) == 9
    assert all(c.ok for c in q.values())
    assert q["quadrics.legendrian.same-root"].verdict == "residual-published"


def test_other_root_breaks_legendrian():
    q = _by_id(quadric_checks(-QUADRIC_BRANCH))
    assert any(c.verdict == "fail" for k, c in q.items() if k.startswith("quadrics.legendrian.p"))


def test_plane_intersection():
    p = _by_id(intersect_planes_check())
    assert p["planes.kernel"].verdict == "pass"
    assert p["planes.degenerate"].payload["kernel_dim"] == 2
