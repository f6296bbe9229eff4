"""Two planes in affine 4-space meeting at the origin.

M = S/<xz, xw, yz, yw> over S = Q[x,y,z,w] has depth 1 and dimension 2.  Its
only non-finite local cohomology at m is H^2, and H^1 is a copy of the
residue field in degree 0.  That makes M generalized Cohen-Macaulay and
quasi Buchsbaum without being Cohen-Macaulay.

    python3 demos/two_planes.py
"""

from relcm.ideals import maximal_ideal
from relcm.koszul import lambda_to_local_cohomology
from relcm.localcohom import (cech_cohomology_window, cohomological_dimension, finiteness_dimension,
                              local_cohomology_at_irrelevant)
from relcm.modules import ModulePresentation
from relcm.relclass import classify_module, search_rsop
from relcm.ring import polynomial_ring

S = polynomial_ring("x,y,z,w")
x, y, z, w = S.gens
M = ModulePresentation.cyclic(S, [x * z, x * w, y * z, y * w])
m = maximal_ideal(S)

print("degree      " + " ".join(f"{d:>3d}" for d in range(-3, 4)))
for i in range(3):
    dual = local_cohomology_at_irrelevant(i, M, (-3, 3)).dims
    cech = cech_cohomology_window(i, m.gens, M, (-3, 3)).dims
    print(f"H^{i} duality " + " ".join(f"{dual[d]:>3d}" for d in range(-3, 4)))
    print(f"H^{i} Cech    " + " ".join(f"{cech[d]:>3}" for d in range(-3, 4)))

print("cd =", cohomological_dimension(m, M).value, " f =", finiteness_dimension(m, M).value)
print("Rs.o.p.:", search_rsop(m, M).found.sequence)

H1 = local_cohomology_at_irrelevant(1, M, (-1, 1)).dims
lam = lambda_to_local_cohomology(1, S.gens, M, stage_bound=3, window=(-1, 1), exact_dims=H1)
print("lambda^1 on the variables:", lam.verdict)

cls = classify_module(m, M)
for name, verdict in cls.flags.items():
    print(f"  {name:20s} {verdict.value:20s} route: {verdict.route}")
