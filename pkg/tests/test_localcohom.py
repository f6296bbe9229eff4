import pytest
from hypothesis import given, settings, strategies as st

from relcm import linalg
from relcm.ideals import IdealHandle, maximal_ideal
from relcm.localcohom import (INF, FilterRegularityError, cech_cohomology_window, cohomological_dimension,
                              filter_regular_reduce, finiteness_dimension, height_and_lambda_bounds,
                              local_cohomology_at_irrelevant, torsion_submodule)
from relcm.homological import ext_module, grade
from relcm.modules import ModulePresentation
from relcm.ring import polynomial_ring

from conftest import monomials

Q3 = polynomial_ring("x,y,z")
F2 = polynomial_ring("x,y,z", 2)


def nonzero(dims):
    return {d: v for d, v in dims.items() if v}


def ext_dual_dims(i, M, window):
    """Independent oracle: dim H^i_m(M)_d = dim Ext^{n-i}(M, S(-n))_{-d}."""
    S = ModulePresentation.free(M.ring, [0])
    n = M.ring.n
    E = ext_module(n - i, M, S).module
    return {d: E.hilbert(-d - n) for d in range(window[0], window[1] + 1)}


def test_torsion_examples(two_planes, m4):
    m = maximal_ideal(Q3)
    assert torsion_submodule(m, ModulePresentation.free(Q3, [0])).is_zero()
    assert torsion_submodule(m, ModulePresentation.cyclic(Q3, m.power(2))).is_whole()
    assert torsion_submodule(m4, two_planes).is_zero()


def test_polynomial_ring_is_cm():
    S = ModulePresentation.free(Q3, [0])
    for i in range(3):
        assert not nonzero(local_cohomology_at_irrelevant(i, S, (-6, 3)).dims)
    top = local_cohomology_at_irrelevant(3, S, (-6, 3)).dims
    assert nonzero(top) == {-3: 1, -4: 3, -5: 6, -6: 10}


def test_two_planes_windows(two_planes):
    H1 = local_cohomology_at_irrelevant(1, two_planes, (-3, 3))
    assert nonzero(H1.dims) == {0: 1}
    H2 = local_cohomology_at_irrelevant(2, two_planes, (-6, 0)).dims
    assert [H2[d] for d in (-2, -3, -4, -5)] == [2, 4, 6, 8]


def test_fat_point_h0():
    m = maximal_ideal(Q3)
    M = ModulePresentation.cyclic(Q3, m.power(2))
    assert sum(local_cohomology_at_irrelevant(0, M, (-3, 3)).dims.values()) == 4


def test_cech_examples(two_planes, qxyzw):
    R = polynomial_ring("x")
    x, = R.gens
    w = cech_cohomology_window(1, [x], ModulePresentation.free(R, [0]), (-3, 0))
    assert w.dims == {-3: 1, -2: 1, -1: 1, 0: 0}
    c = cech_cohomology_window(1, qxyzw.gens, two_planes, (-2, 2))
    assert c.dims == local_cohomology_at_irrelevant(1, two_planes, (-2, 2)).dims == {-2: 0, -1: 0, 0: 1, 1: 0, 2: 0}


def test_cech_h0_is_torsion():
    x, y, z = Q3.gens
    M = ModulePresentation.cyclic(Q3, [x ** 2, x * y])
    a = IdealHandle(Q3, [x, y])
    T = torsion_submodule(a, M)
    w = cech_cohomology_window(0, a.gens, M, (-1, 3))
    assert w.dims == {d: linalg.rank(T.piece_span(d)) for d in range(-1, 4)}


def test_filter_regular_reduction(two_planes, qxyzw, m4):
    x, y, z, w = qxyzw.gens
    seq = [x - z, y - w]
    for i in (0, 1):
        red = filter_regular_reduce(i, m4, seq, two_planes, (-3, 3))
        assert red.dims == local_cohomology_at_irrelevant(i, two_planes, (-3, 3)).dims
    with pytest.raises(ValueError):
        filter_regular_reduce(2, m4, seq, two_planes, (-3, 3))
    with pytest.raises(FilterRegularityError):
        filter_regular_reduce(0, m4, [x, y], two_planes, (-3, 3))
    S = ModulePresentation.free(Q3, [0])
    red = filter_regular_reduce(1, maximal_ideal(Q3), Q3.gens[:2], S, (-3, 3))
    assert not nonzero(red.dims)


def test_cd_examples(ex45, two_planes, m4):
    R, _, a = ex45
    cd = cohomological_dimension(a, ModulePresentation.free(R, [0]))
    assert cd.exact and cd.value == 3
    cd = cohomological_dimension(m4, two_planes)
    assert cd.exact and cd.value == 2
    x, y, z = Q3.gens
    cd = cohomological_dimension(IdealHandle(Q3, [x]), ModulePresentation.cyclic(Q3, [x - 1]))
    assert cd.value == -INF


def test_cd_of_principal_ideal_on_reducible_hypersurface():
    x, y, z = Q3.gens
    cd = cohomological_dimension(IdealHandle(Q3, [x]), ModulePresentation.cyclic(Q3, [x * y * z]))
    assert cd.exact and cd.value == 1


def test_finiteness_examples(two_planes, m4):
    f = finiteness_dimension(m4, two_planes)
    assert f.exact and f.value == 2
    m = maximal_ideal(Q3)
    with pytest.raises(ValueError):
        finiteness_dimension(m, ModulePresentation.cyclic(Q3, m.power(2)))
    f = finiteness_dimension(m, ModulePresentation.free(Q3, [0]))
    assert f.value == 3


def test_height_and_lambda(two_planes, m4, qxyzw):
    x, y, z, w = qxyzw.gens
    ht, lam = height_and_lambda_bounds(m4, two_planes, [IdealHandle(qxyzw, [x, y])])
    assert ht.exact and ht.value == 2
    assert lam.hi == 2
    _, lam = height_and_lambda_bounds(m4, two_planes, [])
    assert lam.hi == INF
    # f equals the lambda bound attained over an associated prime
    assert finiteness_dimension(m4, two_planes).value == 2


@settings(max_examples=15, deadline=None)
@given(st.lists(monomials(F2, 3), min_size=1, max_size=3))
def test_duality_matches_ext_oracle_and_cech(gens):
    M = ModulePresentation.cyclic(F2, gens)
    m = maximal_ideal(F2)
    window = (-3, 2)
    for i in range(4):
        dual = local_cohomology_at_irrelevant(i, M, window).dims
        assert dual == ext_dual_dims(i, M, window)
        if i > M.dimension():
            assert not nonzero(dual)
    for i in range(2):
        cech = cech_cohomology_window(i, m.gens, M, window).dims
        dual = local_cohomology_at_irrelevant(i, M, window).dims
        assert all(cech[d] is None or cech[d] == dual[d] for d in dual)


@settings(max_examples=20, deadline=None)
@given(st.lists(monomials(F2, 3), min_size=0, max_size=3), st.lists(monomials(F2, 2), min_size=1, max_size=3))
def test_invariant_ordering(igens, agens):
    M = ModulePresentation.cyclic(F2, igens)
    a = IdealHandle(F2, agens)
    cd = cohomological_dimension(a, M)
    assert cd.lo <= cd.hi
    g = grade(a, M)
    if g == INF:
        return
    assert g <= cd.hi
    ht, _ = height_and_lambda_bounds(a, M)
    assert ht.lo <= cd.hi
    if cd.hi >= 1:
        f = finiteness_dimension(a, M, cd)
        assert f.lo <= f.hi
        assert f.lo <= cd.hi
