import pytest

from relcm.generators import filter_regular_instances, weak_annihilation_instances
from relcm.ideals import IdealHandle
from relcm.modules import ModulePresentation
from relcm.ring import polynomial_ring
from relcm.seqcheck import Budget
from relcm.theorems import VALIDATORS, Clause, TheoremInstance, equivalent, implies, verify_theorem_instance

# slow validators are exercised through the acceptance suite and the corpus
FAST = ["2.3B(i)", "2.4", "2.5", "3.2", "3.3", "3.5", "4.1", "4.3-chain", "4.4", "4.6", "4.7"]


@pytest.fixture(scope="module")
def planes_instance(two_planes, qxyzw, m4):
    x, y, z, w = qxyzw.gens
    return TheoremInstance(m4, two_planes, [x - z, y - w])


def test_clause_logic():
    assert implies("c", "false", "false").verdict == "pass"
    assert implies("c", "true", "false").verdict == "fail"
    assert implies("c", "within", "false").verdict == "inconclusive"
    assert implies("c", None, "true").verdict == "inconclusive"
    assert equivalent("c", "true", "within").verdict == "pass"
    assert equivalent("c", "true", "false").verdict == "fail"


@pytest.mark.parametrize("tid", FAST)
def test_validators_pass_on_two_planes(planes_instance, tid):
    rep = verify_theorem_instance(tid, planes_instance)
    assert rep.status == "pass", [c.to_json() for c in rep.clauses]


def test_open_direction_is_exploratory(planes_instance):
    rep = verify_theorem_instance("4.2", planes_instance)
    open_clauses = [c for c in rep.clauses if "open" in c.name]
    assert open_clauses and all(c.exploratory and c.verdict != "fail" for c in open_clauses)


def test_unknown_theorem_id(planes_instance):
    with pytest.raises(ValueError, match="unknown theorem id"):
        verify_theorem_instance("9.9", planes_instance)


def test_sequence_required(two_planes, m4):
    with pytest.raises(ValueError):
        verify_theorem_instance("2.6", TheoremInstance(m4, two_planes))


def test_jacobson_necessity_on_example(ex45):
    R, x, a = ex45
    rep = verify_theorem_instance("4.5-necessity", TheoremInstance(a, ModulePresentation.free(R, [0]), x))
    assert rep.status == "pass" and rep.data["reproduced"]
    assert rep.data["dSequence"]["verdict"] == "fails"


def test_jacobson_necessity_skips_when_not_relative_cm(planes_instance):
    rep = verify_theorem_instance("4.5-necessity", planes_instance)
    assert rep.status == "skipped" and not rep.data["reproduced"]


def test_chain_on_example(ex45):
    R, x, a = ex45
    rep = verify_theorem_instance("4.3-chain", TheoremInstance(a, ModulePresentation.free(R, [0]), x))
    assert rep.status == "pass"


def test_clauses_carry_route(planes_instance):
    js = verify_theorem_instance("2.3B(i)", planes_instance).to_json()
    assert js["theoremId"] == "2.3B(i)"
    assert all(c["route"] == "validator:2.3B(i)" for c in js["clauses"])
    assert js["counterexample"] is None


def test_failed_report_serializes_instance(planes_instance):
    from relcm.theorems import TheoremReport
    rep = TheoremReport("x", planes_instance, clauses=[Clause("c", "fail")])
    assert rep.status == "fail"
    assert rep.to_json()["counterexample"]["ideal"] == ["x", "y", "z", "w"]


def test_weak_annihilation_on_generated_instances():
    for inst in weak_annihilation_instances(count=8, seed=1):
        rep = verify_theorem_instance("2.6", TheoremInstance(inst.ideal, inst.module, inst.sequence,
                                                             ell=inst.ell), Budget(B=3))
        assert rep.status in ("pass", "skipped"), inst.label


def test_filter_regular_reduction_on_generated_instances():
    for inst in filter_regular_instances(count=4, seed=1):
        rep = verify_theorem_instance("2.3B(i)", TheoremInstance(inst.ideal, inst.module, inst.sequence))
        assert rep.status == "pass", inst.label


def test_power_weak_principal():
    R = polynomial_ring("x,y")
    x, y = R.gens
    inst = TheoremInstance(IdealHandle(R, [x]), ModulePresentation.free(R, [0]), [x])
    # <x> is not irrelevant on S, so without local mode every clause is exploratory
    rep = verify_theorem_instance("3.5", inst)
    assert rep.status == "skipped" and all(c.exploratory and c.verdict == "pass" for c in rep.clauses)
    inst.local_mode = True
    assert verify_theorem_instance("3.5", inst).status == "pass"


def test_validator_table_is_complete():
    assert {"2.6", "3.3", "4.3-chain", "4.5-necessity", "4.8"} <= set(VALIDATORS)
