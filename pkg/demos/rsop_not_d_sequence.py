"""Three elements that form a relative system of parameters but not a d-sequence.

Over Q[u,v,w] take a1 = v(1-u), a2 = w(1-u), a3 = u.  They generate the
irrelevant ideal, the ring is relative Cohen-Macaulay for it, and yet the
colon test for a d-sequence fails.  The ideal is not in the graded-local
setting, which is why the Buchsbaum implication does not apply.

    python3 demos/rsop_not_d_sequence.py
"""

from relcm.groebner import buchberger
from relcm.homological import grade
from relcm.ideals import IdealHandle, colon_ideal
from relcm.localcohom import cohomological_dimension
from relcm.modules import ModulePresentation
from relcm.relclass import classify_module, verify_rsop
from relcm.ring import polynomial_ring
from relcm.seqcheck import check_sequence

R = polynomial_ring("u,v,w")
u, v, w = R.gens
a1, a2, a3 = v * (1 - u), w * (1 - u), u
a = IdealHandle(R, [a1, a2, a3])
S = ModulePresentation.free(R, [0])

print("reduced GB of <a1,a2,a3>:", [str(g) for g in buchberger(a.gens)])
print("v in <a1> : a2*a3 ?", colon_ideal(IdealHandle(R, [a1]), a2 * a3).contains(v))
print("v in <a1> : a3    ?", colon_ideal(IdealHandle(R, [a1]), a3).contains(v))

cd = cohomological_dimension(a, S)
print("grade =", grade(a, S), " cd =", cd.value, f"({cd.route})")
print("Rs.o.p. certified:", verify_rsop([a1, a2, a3], a, S, cd).verified)

rep = check_sequence("d-sequence", [a1, a2, a3], None, S)
shown = {k: v for k, v in rep.witness.items() if not k.startswith("_")}
print("d-sequence:", rep.verdict, "witness", shown)

cls = classify_module(a, S)
for name, verdict in cls.flags.items():
    print(f"  {name:20s} {verdict.value:20s} route: {verdict.route}")
for line in cls.ledger:
    print("ledger:", line)
