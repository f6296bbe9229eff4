"""Batch front end: ``relcm WORKSPACE COMMAND [options]``.

Exit status 0 means the command ran to completion, whatever the mathematical
verdict; 1 is a tool error (bad workspace, missing object, invalid request);
2 is a usage error.
"""

from __future__ import annotations

import argparse
import shlex
import sys
import time

from .ideals import IdealHandle
from .koszul import KoszulComplex
from .localcohom import (_irrelevant, cech_cohomology_window, cohomological_dimension, duality_applies,
                         finiteness_dimension, height_and_lambda_bounds, inf_json,
                         local_cohomology_at_irrelevant)
from .homological import grade
from .relclass import classify_module, search_rsop, verify_rsop
from .report import ReportEnvelope, emit
from .ring import ParseError
from .seqcheck import KINDS, ALIASES, Budget, check_sequence, default_budget
from .theorems import VALIDATORS, TheoremInstance, verify_theorem_instance
from .workspace import WorkspaceError, load_workspace


class ToolError(RuntimeError):
    pass


def _budget(args, ws) -> Budget:
    B = args.budget_B if args.budget_B is not None else ws.options.get("budget.B", default_budget())
    seed = args.seed if args.seed is not None else ws.options.get("seed", 0)
    return Budget(B=B, perm_limit=ws.options.get("budget.permLimit", 5),
                  samples=ws.options.get("budget.samples", 24), seed=seed)


def _local_mode(args, ws) -> bool:
    return bool(args.local_mode or ws.options.get("localMode", False))


def _primes(args, ws):
    if not getattr(args, "primes", None):
        return []
    return [ws.ideal(p.strip()) for p in args.primes.split(",") if p.strip()]


def _window(args):
    lo, hi = args.window
    if lo > hi:
        raise ToolError("empty degree window")
    return (lo, hi)


# -- commands ------------------------------------------------------------------------------

def cmd_check_sequence(args, ws, budget):
    M = ws.module(args.module)
    x = ws.sequence(args.seq)
    a = ws.ideal(args.ideal) if args.ideal else None
    rep = check_sequence(args.kind, x, a, M, budget)
    out = rep.to_json()
    out["budget"] = out["budget"] or {"exact": True}
    return out, [f"{rep.kind} on {rep.sequence}: {rep.verdict}",
                 f"witness: {out['witness']}" if rep.witness else "witness: none"]


def cmd_classify(args, ws, budget):
    a, M = ws.ideal(args.ideal), ws.module(args.module)
    samples = ws.options.get("samples", 8)
    cr = classify_module(a, M, _local_mode(args, ws), budget, samples, budget.seed,
                         ws.options.get("stageBound", 3))
    out = cr.to_json()
    lines = [f"{k}: {v['verdict']} (route: {v['route']})" for k, v in out["flags"].items()]
    return out, lines


def cmd_koszul(args, ws, budget):
    M = ws.module(args.module)
    x = ws.sequence(args.seq)
    K = KoszulComplex(x, M, args.power)
    lo, hi = _window(args)
    table = {}
    for j in range(K.n + 1):
        table[str(j)] = {str(d): K.homology_dim(j, d) for d in range(lo, hi + 1)}
    out = {"sequence": [str(f) for f in x], "power": args.power, "dSquaredZero": K.d_squared_is_zero(),
           "homologyDims": table, "window": [lo, hi], "route": "graded-pieces", "exactness": "exact"}
    lines = [f"H_{j}: " + " ".join(f"{d}:{v}" for d, v in row.items()) for j, row in table.items()]
    return out, lines


def cmd_localcohom(args, ws, budget):
    a, M = ws.ideal(args.ideal), ws.module(args.module)
    lo, hi = _window(args)
    route = args.route
    if route == "auto":
        route = "duality" if duality_applies(a, M) else "cech"
    if route == "duality" and not duality_applies(a, M):
        raise ToolError("the duality route needs a graded module and Rad(a + Ann M) = Rad(m + Ann M)")
    n = M.ring.n
    indices = [args.index] if args.index is not None else list(range(n + 1))
    windows = []
    for i in indices:
        if route == "duality":
            w = local_cohomology_at_irrelevant(i, M, (lo, hi))
            w.ideal = str(a)
        else:
            w = cech_cohomology_window(i, a.gens, M, (lo, hi))
        windows.append(w.to_json())
    lines = [f"H^{w['index']}: " + " ".join(f"{d}:{v}" for d, v in w["dims"].items()) + f"  [{w['exactness']}]"
             for w in windows]
    return {"route": route, "windows": windows}, lines


def cmd_rsop(args, ws, budget):
    a, M = ws.ideal(args.ideal), ws.module(args.module)
    if args.seq:
        cert = verify_rsop(ws.sequence(args.seq), a, M)
        out = {"mode": "verify", "certificate": cert.to_json()}
        return out, [f"verified: {cert.verified}" + (f" ({cert.reason})" if cert.reason else "")]
    res = search_rsop(a, M, samples=ws.options.get("samples", 32), seed=budget.seed)
    out = {"mode": "search", "search": res.to_json()}
    line = f"found: {res.found.sequence}" if res.found else f"no Rs.o.p. found; {res.note or 'budget exhausted'}"
    return out, [line]


def cmd_verify_theorem(args, ws, budget):
    a, M = ws.ideal(args.ideal), ws.module(args.module)
    inst = TheoremInstance(a, M, ws.sequence(args.seq) if args.seq else None, args.ell, args.n,
                           _primes(args, ws), _local_mode(args, ws), ws.options.get("samples", 4),
                           budget.seed, _window(args))
    rep = verify_theorem_instance(args.id, inst, budget)
    out = rep.to_json()
    lines = [f"{c.name}: {c.verdict}{' [exploratory]' if c.exploratory else ''} {c.detail}".rstrip()
             for c in rep.clauses]
    lines.append(f"status: {rep.status}")
    return out, lines


def cmd_invariants(args, ws, budget):
    a, M = ws.ideal(args.ideal), ws.module(args.module)
    cd = cohomological_dimension(a, M)
    out = {"grade": inf_json(grade(a, M)), "cd": cd.to_json()}
    if cd.hi >= 1:
        out["f_a"] = finiteness_dimension(a, M, cd).to_json()
    ht, lam = height_and_lambda_bounds(a, M, _primes(args, ws))
    out["ht_M"] = ht.to_json()
    out["lambdaUpper"] = lam.to_json()
    if duality_applies(a, M):
        D = _irrelevant(M)
        out["irrelevantFacts"] = {str(i): D.facts(i) for i in range(D.n + 1)}
    lines = [f"{k}: {v['lo']}..{v['hi']}" if isinstance(v, dict) and "lo" in v else f"{k}: {v}"
             for k, v in out.items() if k != "irrelevantFacts"]
    return out, lines


COMMANDS = {
    "check-sequence": cmd_check_sequence,
    "classify": cmd_classify,
    "koszul": cmd_koszul,
    "localcohom": cmd_localcohom,
    "rsop": cmd_rsop,
    "verify-theorem": cmd_verify_theorem,
    "invariants": cmd_invariants,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relcm", description="Relative Cohen-Macaulay / Buchsbaum computations")
    p.add_argument("workspace", help="workspace file")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget-B", dest="budget_B", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks determinism)")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, *, ideal=True, ideal_required=True, seq=False, seq_required=False, window=False):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--module", required=True)
        if ideal:
            sp.add_argument("--ideal", required=ideal_required)
        if seq:
            sp.add_argument("--seq", required=seq_required)
        if window:
            sp.add_argument("--window", nargs=2, type=int, default=(-3, 3), metavar=("LO", "HI"))
        sp.add_argument("--local-mode", dest="local_mode", action="store_true")
        return sp

    sp = add("check-sequence", ideal_required=False, seq=True, seq_required=True)
    sp.add_argument("--kind", required=True, choices=sorted(set(KINDS) | set(ALIASES)))
    add("classify")
    sp = add("koszul", ideal=False, seq=True, seq_required=True, window=True)
    sp.add_argument("--power", type=int, default=1)
    sp = add("localcohom", window=True)
    sp.add_argument("--index", type=int, default=None)
    sp.add_argument("--route", choices=("auto", "duality", "cech"), default="auto")
    add("rsop", seq=True)
    sp = add("verify-theorem", seq=True, window=True)
    sp.add_argument("--id", required=True, choices=sorted(VALIDATORS))
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--primes", default=None, help="comma-separated names of prime ideals")
    sp = add("invariants")
    sp.add_argument("--primes", default=None, help="comma-separated names of prime ideals")
    return p


def run(argv) -> tuple:
    """(envelope, format) for the given argument list; raises ToolError on tool failures."""
    args = build_parser().parse_args(argv)
    try:
        ws = load_workspace(args.workspace)
    except OSError as exc:
        raise ToolError(f"cannot read workspace: {exc}") from None
    except ParseError as exc:
        raise ToolError(f"{args.workspace}: {exc}") from None
    budget = _budget(args, ws)
    t0 = time.perf_counter()
    try:
        result, lines = COMMANDS[args.command](args, ws, budget)
    except (WorkspaceError, ValueError) as exc:
        raise ToolError(str(exc)) from None
    elapsed = time.perf_counter() - t0
    echo = {k: v for k, v in sorted(vars(args).items())
            if k not in ("workspace", "command", "format", "timing", "output") and v not in (None, False)}
    echo = {k: list(v) if isinstance(v, tuple) else v for k, v in echo.items()}
    env = ReportEnvelope(args.command, echo, budget.seed, budget.to_json(), result, ws.ring.describe(),
                         elapsed if args.timing else None, lines)
    return env, args


def render(argv) -> bytes:
    """The exact bytes a run would print; raises ToolError like ``run``."""
    env, args = run(argv)
    return emit(env, args.format)


def read_command_file(path) -> list:
    """Argument lists (after the workspace path), one per non-comment line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(shlex.split(line))
    return out


def golden_name(k: int, argv) -> str:
    ext = "txt" if "text" in argv and argv[argv.index("text") - 1] == "--format" else "json"
    return f"{k:02d}.{ext}"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        env, args = run(argv)
    except ToolError as exc:
        print(f"relcm: error: {exc}", file=sys.stderr)
        return 1
    data = emit(env, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
