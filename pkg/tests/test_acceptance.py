"""The eight acceptance criteria, one test each.

Each test records a one-line PASS/FAIL summary; conftest prints them at the
end of the run (see ``pytest_terminal_summary``).
"""

import time

import pytest

from relcm import linalg
from relcm.cli import golden_name, read_command_file, render
from relcm.generators import filter_regular_instances, koszul_instances, weak_annihilation_instances
from relcm.groebner import buchberger
from relcm.homological import ext_module, grade
from relcm.ideals import IdealHandle, colon_ideal, maximal_ideal
from relcm.koszul import KoszulComplex, is_chain_map, long_exact_sequence_check, psi_chain_map
from relcm.localcohom import (cech_cohomology_window, cohomological_dimension, finiteness_dimension,
                              local_cohomology_at_irrelevant)
from relcm.modules import ModulePresentation, basis_vector, vec_add, vec_mul
from relcm.relclass import chain_conflicts, classify_module, verify_rsop
from relcm.ring import polynomial_ring
from relcm.seqcheck import Budget, check_sequence
from relcm.theorems import TheoremInstance, verify_theorem_instance
from relcm.workspace import load_workspace

from conftest import CORPUS

RESULTS: dict = {}


@pytest.fixture
def record(request):
    """Call ``record(summary)`` after the checks; a failing test is recorded as FAIL."""
    number = request.node.get_closest_marker("criterion").args[0]
    note = {"text": ""}

    def put(text):
        note["text"] = text

    yield put
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    RESULTS[number] = ("FAIL" if failed else "PASS", request.node.name, note["text"])


def corpus_pairs():
    """Distinct (workspace, ideal, module) triples named by the corpus commands."""
    out = []
    for cmds in sorted((CORPUS / "commands").glob("*.cmds")):
        for argv in read_command_file(cmds):
            if "--ideal" in argv and "--module" in argv:
                t = (cmds.stem, argv[argv.index("--ideal") + 1], argv[argv.index("--module") + 1])
                if t not in out:
                    out.append(t)
    return out


def load_pair(name, ideal, module):
    ws = load_workspace(CORPUS / "workspaces" / f"{name}.ws")
    return ws.ideal(ideal), ws.module(module)


# -- 1 -------------------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_worked_example_reproduction(record):
    t0 = time.perf_counter()
    R = polynomial_ring("u,v,w")
    u, v, w = R.gens
    a1, a2, a3 = v * (1 - u), w * (1 - u), u
    a = IdealHandle(R, [a1, a2, a3])
    S = ModulePresentation.free(R, [0])
    # (a) colons
    A1 = IdealHandle(R, [a1])
    assert colon_ideal(A1, a2 * a3).contains(v)
    assert not colon_ideal(A1, a3).contains(v)
    # (b) not a d-sequence, witness at (2, 3)
    rep = check_sequence("d-sequence", [a1, a2, a3], None, S)
    assert rep.verdict == "fails" and (rep.witness["i"], rep.witness["j"]) == (2, 3)
    # (c) reduced Groebner bases agree
    assert buchberger(a.gens) == buchberger([u, v, w])
    # (d) grade = cd = 3 and the generators form an Rs.o.p.
    cd = cohomological_dimension(a, S)
    assert grade(a, S) == 3 and cd.exact and cd.value == 3
    assert verify_rsop([a1, a2, a3], a, S, cd).verified
    # (e) classification without local mode
    cls = classify_module(a, S, local_mode=False)
    assert cls.verdict("relativeCM") == "true"
    assert cls.verdict("buchsbaum") == "false"
    assert cls.flags["buchsbaum"].witness is not None
    assert any("Jacobson" in line for line in cls.ledger)
    dt = time.perf_counter() - t0
    assert dt < 5
    record(f"colons, d-sequence witness (2,3), GB equality, grade = cd = 3, Buchsbaum false; {dt:.2f} s")


# -- 2 -------------------------------------------------------------------------------------

def koszul_laws(inst, window=range(-3, 7)):
    M, x = inst.module, inst.sequence
    ring = M.ring
    K = KoszulComplex(x, M)
    assert K.d_squared_is_zero(), "d o d"
    Q = M.quotient_by_ideal(IdealHandle(ring, x))
    ann = M.zero_submodule().colon_ideal(IdealHandle(ring, x))
    shift = sum(f.degree() for f in x)
    for d in window:
        assert K.homology_dim(0, d) == Q.hilbert(d), f"H_0 at {d}"
        assert K.homology_dim(K.n, d) == linalg.rank(ann.piece_span(d - shift)), f"H_n at {d}"
    for j in range(K.n + 1):
        P, _ = K.homology(j)
        for f in x:
            assert all(P.is_zero_element(vec_mul(f, basis_vector(ring, q))) for q in range(P.rank)), \
                f"<x> H_{j}"
    Ks = {u: KoszulComplex(x, M, u) for u in (1, 2, 3)}
    psi = {(u, v): psi_chain_map(u, v, x, M) for u in (1, 2, 3) for v in (1, 2, 3) if u < v}
    for (u, v), maps in psi.items():
        assert is_chain_map(maps, Ks[u], Ks[v]), f"psi {u}->{v}"
    for k in range(K.n + 1):
        comp = psi[(2, 3)][k].compose(psi[(1, 2)][k])
        target = Ks[3].term(k)
        for p, q in zip(comp.images, psi[(1, 3)][k].images):
            assert target.is_zero_element(vec_add(p, q, -1)), "psi coherence"
    if inst.ses is not None:
        assert long_exact_sequence_check(*inst.ses, x, (-3, 6)).exact, "long exact sequence"


@pytest.mark.criterion(2)
def test_koszul_law_suite(record):
    t0 = time.perf_counter()
    insts = koszul_instances(count=56, seed=0)
    assert len(insts) >= 50
    assert {i.module.ring.characteristic for i in insts} == {0, 2}
    assert max(i.module.ring.n for i in insts) <= 3
    for inst in insts:
        koszul_laws(inst)
    dt = time.perf_counter() - t0
    assert dt < 60
    n_les = sum(i.ses is not None for i in insts)
    record(f"{len(insts)} instances ({n_les} with a short exact sequence); {dt:.1f} s")


# -- 3 -------------------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_weak_annihilation_sweep(record):
    t0 = time.perf_counter()
    insts = weak_annihilation_instances(count=32, seed=0)
    assert len(insts) >= 30 and {i.ell for i in insts} == {1, 2}
    holds = 0
    for inst in insts:
        rep = verify_theorem_instance("2.6", TheoremInstance(inst.ideal, inst.module, inst.sequence,
                                                             ell=inst.ell), Budget(B=3))
        assert rep.status == "pass", (inst.label, [c.to_json() for c in rep.clauses])
        holds += rep.data.get("weak", {}).get("verdict") == "holds"
    dt = time.perf_counter() - t0
    assert dt < 300
    record(f"{len(insts)} instances agree ({holds} weak, {len(insts) - holds} not); {dt:.1f} s")


# -- 4 -------------------------------------------------------------------------------------

def ext_dual_dims(i, M, window):
    """Independent oracle: dim H^i_m(M)_d = dim Ext^{n-i}(M, S)_{-d-n}."""
    S = ModulePresentation.free(M.ring, [0])
    n = M.ring.n
    E = ext_module(n - i, M, S).module
    return {d: E.hilbert(-d - n) for d in range(window[0], window[1] + 1)}


@pytest.mark.criterion(4)
def test_duality_cech_cross_check(record):
    t0 = time.perf_counter()
    R = polynomial_ring("x,y,z,w")
    x, y, z, w = R.gens
    M = ModulePresentation.cyclic(R, [x * z, x * w, y * z, y * w])
    m = maximal_ideal(R)
    window = (-3, 3)
    for i in range(3):
        dual = local_cohomology_at_irrelevant(i, M, window).dims
        cech = cech_cohomology_window(i, m.gens, M, window).dims
        oracle = ext_dual_dims(i, M, window)
        assert dual == cech == oracle, i
    H1 = ext_dual_dims(1, M, window)
    assert sum(H1.values()) == 1 and H1[0] == 1
    f = finiteness_dimension(m, M)
    cd = cohomological_dimension(m, M)
    assert f.exact and f.value == 2 and cd.exact and cd.value == 2
    dt = time.perf_counter() - t0
    assert dt < 120
    record(f"H^0..H^2 agree on [-3,3]; H^1 = k in degree 0; f = cd = 2; {dt:.2f} s")


# -- 5 -------------------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_classification_chain(record):
    pairs = corpus_pairs()
    for name, i, mod in pairs:
        a, M = load_pair(name, i, mod)
        rep = classify_module(a, M)
        jac = rep.hypotheses[0]["status"] != "violated"
        ara = any(h["hypothesis"] == "ara = cd" and h["status"] == "verified" for h in rep.hypotheses)
        assert not chain_conflicts(rep.flags, jac, ara), (name, i, mod)
        assert not chain_conflicts(rep.raw, jac, ara), (name, i, mod, "before demotion")
    a, M = load_pair("two_planes", "m", "TwoPlanes")
    rep = classify_module(a, M, stage_bound=3)
    assert rep.verdict("relativeGenCM") == "true"
    assert rep.verdict("quasiBuchsbaum") == "true"
    assert rep.flags["quasiBuchsbaum"].route == "annihilator-criterion"
    assert rep.verdict("buchsbaum") == "true-within-budget"
    maps = rep.invariants["lambda"]["maps"]
    assert [mp["index"] for mp in maps] == [0, 1]
    assert all(mp["verdict"] in ("surjective", "surjective-within-bounds") for mp in maps)
    assert maps[1]["stageBound"] == 3
    record(f"{len(pairs)} corpus instances monotone; two planes: genCM, quasi true, Buchsbaum within budget")


# -- 6 -------------------------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_rsop_quotient_descent(record):
    checked, exploratory = 0, 0
    for name, i, mod in corpus_pairs():
        a, M = load_pair(name, i, mod)
        cls = classify_module(a, M)
        ara = any(h["hypothesis"] == "ara = cd" and h["status"] == "verified" for h in cls.hypotheses)
        if cls.verdict("relativeGenCM") != "true" or not ara:
            continue
        rep = verify_theorem_instance("3.3", TheoremInstance(a, M, samples=4))
        if cls.hypotheses[0]["status"] == "violated":
            # the theorem assumes a in the Jacobson radical; clauses are exploratory here
            assert all(c.exploratory for c in rep.clauses)
            exploratory += 1
            continue
        assert rep.status == "pass", (name, i, mod, [c.to_json() for c in rep.clauses if c.verdict != "pass"])
        if a.equals(maximal_ideal(M.ring)):
            assert all(row["cd"]["exact"] and row["cd"]["route"] in ("graded-duality", "torsion-module",
                                                                     "convention")
                       for row in rep.data["quotients"])
        checked += 1
    assert checked >= 5
    record(f"{checked} instances under the hypotheses pass; {exploratory} outside them run exploratorily")


# -- 7 -------------------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_filter_regular_reduction(record):
    insts = filter_regular_instances(count=12, seed=0)
    assert len(insts) >= 10
    for inst in insts:
        rep = verify_theorem_instance("2.3B(i)", TheoremInstance(inst.ideal, inst.module, inst.sequence))
        assert rep.status == "pass", inst.label
        assert len(rep.clauses) == len(inst.sequence)
    record(f"{len(insts)} filter-regular instances, all windows agree below r")


# -- 8 -------------------------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_determinism_on_corpus(record):
    runs = 0
    for cmds in sorted((CORPUS / "commands").glob("*.cmds")):
        ws = str(CORPUS / "workspaces" / f"{cmds.stem}.ws")
        for k, argv in enumerate(read_command_file(cmds)):
            first = render([ws] + argv)
            assert render([ws] + argv) == first, (cmds.stem, k)
            assert first == (CORPUS / "golden" / cmds.stem / golden_name(k, argv)).read_bytes(), (cmds.stem, k)
            runs += 1
    record(f"{runs} corpus commands byte-identical on repeat and against golden files")
