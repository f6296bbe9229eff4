from hypothesis import given, settings, strategies as st

from relcm.ideals import IdealHandle, maximal_ideal
from relcm.modules import ModulePresentation
from relcm.relclass import (CLASSES, FALSE, TRUE, UNKNOWN, WITHIN, Verdict, chain_conflicts, classify_module,
                            enforce_chain, implication_edges, local_mode_status, search_rsop, verify_rsop)
from relcm.ring import polynomial_ring

from conftest import monomials

QXY = polynomial_ring("x,y")
F2 = polynomial_ring("x,y,z", 2)


def test_verify_rsop_examples(ex45, two_planes, qxyzw, m4):
    R, x, a = ex45
    cert = verify_rsop(x, a, ModulePresentation.free(R, [0]))
    assert cert.verified and cert.cd["value"] == 3
    X, Y, Z, W = qxyzw.gens
    cert = verify_rsop([X - Z, Y - W], m4, two_planes)
    assert cert.verified
    # every generator of m is in the radical of <x - z, y - w> + Ann M
    assert all(e["holds"] for e in cert.evidence)


def test_verify_rsop_refuses_wrong_length():
    x, y = QXY.gens
    cert = verify_rsop([x], maximal_ideal(QXY), ModulePresentation.free(QXY, [0]))
    assert not cert.verified
    assert "length 1" in cert.reason


def test_verify_rsop_refuses_elements_outside_ideal():
    x, y = QXY.gens
    cert = verify_rsop([x, y + 1], maximal_ideal(QXY), ModulePresentation.free(QXY, [0]))
    assert not cert.verified and "not in the ideal" in cert.reason


def test_search_rsop_examples(ex45, two_planes, m4):
    x, y = QXY.gens
    found = search_rsop(IdealHandle(QXY, [x]), ModulePresentation.free(QXY, [0])).found
    assert found.sequence == ["x"]
    R, _, a = ex45
    assert len(search_rsop(a, ModulePresentation.free(R, [0])).found.sequence) == 3
    s = search_rsop(m4, two_planes)
    assert len(s.found.sequence) == 2 and s.ara_upper == 2


def test_classify_polynomial_ring_all_true():
    rep = classify_module(maximal_ideal(QXY), ModulePresentation.free(QXY, [0]))
    assert all(rep.verdict(k) == TRUE for k in CLASSES)


def test_classify_two_planes(two_planes, m4):
    rep = classify_module(m4, two_planes)
    assert rep.verdict("relativeCM") == FALSE
    assert rep.verdict("relativeGenCM") == TRUE
    assert rep.verdict("quasiBuchsbaum") == TRUE
    assert rep.verdict("buchsbaum") in (TRUE, WITHIN)
    assert not rep.ledger


def test_classify_example_needs_jacobson(ex45):
    R, x, a = ex45
    rep = classify_module(a, ModulePresentation.free(R, [0]))
    assert rep.verdict("relativeCM") == TRUE
    assert rep.verdict("buchsbaum") == FALSE
    assert rep.flags["buchsbaum"].route == "rsop-not-d-sequence"
    assert rep.hypotheses[0]["status"] == "violated"
    assert any("Jacobson" in line for line in rep.ledger)
    # asking for local mode re-enables the hypothesis without changing the definitional verdict
    local = classify_module(a, ModulePresentation.free(R, [0]), local_mode=True)
    assert local.hypotheses[0]["status"] == "assumed"


def test_local_mode_status_graded(two_planes, m4, qxyzw):
    assert local_mode_status(m4, two_planes)["status"] == "verified (graded-local)"
    x, y, z, w = qxyzw.gens
    assert local_mode_status(IdealHandle(qxyzw, [x]), two_planes)["status"] == "violated"


def test_chain_edges():
    edges = implication_edges(False, False)
    assert ("relativeCM", "surjectiveBuchsbaum") in edges
    assert ("buchsbaum", "relativeGenCM") in edges
    assert ("surjectiveBuchsbaum", "buchsbaum") not in edges
    full = implication_edges(True, True)
    assert ("relativeCM", "quasiBuchsbaum") in full


def test_chain_conflicts_demoted():
    flags = {k: Verdict(TRUE, "test") for k in CLASSES}
    flags["quasiBuchsbaum"] = Verdict(FALSE, "test")
    assert ("buchsbaum", "quasiBuchsbaum") in chain_conflicts(flags, False, False)
    ledger = []
    enforce_chain(flags, False, False, ledger)
    assert flags["quasiBuchsbaum"].value == UNKNOWN and flags["buchsbaum"].value == UNKNOWN
    assert ledger and not chain_conflicts(flags, False, False)


def test_vacuous_when_am_is_m():
    x, y = QXY.gens
    rep = classify_module(IdealHandle(QXY, [x]), ModulePresentation.cyclic(QXY, [x - 1]))
    assert rep.verdict("relativeCM") == TRUE
    assert rep.invariants["cd"] == "-inf"


@settings(max_examples=12, deadline=None)
@given(st.lists(monomials(F2, 3), min_size=0, max_size=3), st.lists(monomials(F2, 2), min_size=1, max_size=3))
def test_reports_never_violate_chain(igens, agens):
    M = ModulePresentation.cyclic(F2, igens)
    a = IdealHandle(F2, agens)
    rep = classify_module(a, M, samples=3)
    jac = rep.hypotheses[0]["status"] != "violated"
    ara = any(h["hypothesis"] == "ara = cd" and h["status"] == "verified" for h in rep.hypotheses)
    assert not chain_conflicts(rep.flags, jac, ara)
    for v in rep.flags.values():
        assert v.value in (TRUE, FALSE, UNKNOWN, WITHIN) and v.route


@settings(max_examples=12, deadline=None)
@given(st.lists(monomials(F2, 3), min_size=0, max_size=3), st.lists(monomials(F2, 2), min_size=1, max_size=3))
def test_found_rsop_reverifies(igens, agens):
    M = ModulePresentation.cyclic(F2, igens)
    a = IdealHandle(F2, agens)
    s = search_rsop(a, M, samples=8)
    if s.found is not None:
        again = verify_rsop(s.found.polys, a, M)
        assert again.verified and len(again.sequence) == s.cd["value"]
