"""Seeded sweeps of three theorem validators over generated instances.

Weak annihilation (id 2.6) on monomial instances, filter-regular reduction
(id 2.3B(i)) on linear sequences, and the class chain (4.3-chain) on the
corpus.  Any "fail" line would be a counterexample to report.

    python3 demos/theorem_sweeps.py [seed]
"""

import collections
import pathlib
import sys
import time

from relcm.generators import filter_regular_instances, weak_annihilation_instances
from relcm.seqcheck import Budget
from relcm.theorems import TheoremInstance, verify_theorem_instance
from relcm.workspace import load_workspace

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
corpus = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "workspaces"


def sweep(tid, instances, budget=None):
    t0 = time.perf_counter()
    tally = collections.Counter()
    for label, inst in instances:
        rep = verify_theorem_instance(tid, inst, budget)
        tally[rep.status] += 1
        if rep.status == "fail":
            print("  FAIL", label, [c.to_json() for c in rep.clauses if c.verdict == "fail"])
    print(f"{tid:10s} {dict(tally)}  {time.perf_counter() - t0:.1f} s")


sweep("2.6", [(w.label, TheoremInstance(w.ideal, w.module, w.sequence, ell=w.ell))
              for w in weak_annihilation_instances(count=32, seed=seed)], Budget(B=3, seed=seed))
sweep("2.3B(i)", [(f.label, TheoremInstance(f.ideal, f.module, f.sequence))
                  for f in filter_regular_instances(count=12, seed=seed)])

pairs = [("two_planes", "m", "TwoPlanes"), ("socle", "m", "Socle"), ("embedded", "m", "Emb"),
         ("example45", "a", "R"), ("line_plane", "m", "LinePlane")]
chain = []
for name, ideal, module in pairs:
    ws = load_workspace(corpus / f"{name}.ws")
    chain.append((name, TheoremInstance(ws.ideal(ideal), ws.module(module))))
sweep("4.3-chain", chain)
