"""Composition tallies, c_p and a(G), simplicity testing, and the p-core."""

import numpy as np
import pytest

from crfactor.errors import PreconditionViolated
from crfactor.gf import field_create, prime_factors, vp
from crfactor.grp import MatrixGroup, PermGroup
from crfactor.matfq import Matrix, direct_sum
from crfactor.modstruct import decompose
from crfactor.structure import (
    a_of_g,
    c_p,
    composition_tally,
    p_core,
    simplicity_test,
)

F2 = field_create(2, 1)
F3 = field_create(3, 1)
F13 = field_create(13, 1)


def perm(*images):
    return np.array(images, dtype=np.int32)


def gamma_l_1_4():
    mult = Matrix.from_rows(F2, [[0, 1], [1, 1]])
    frob = Matrix.from_rows(F2, [[1, 0], [1, 1]])
    return MatrixGroup(F2, 2, [mult, frob])


def sl_2_3():
    a = Matrix.from_rows(F3, [[1, 1], [0, 1]])
    b = Matrix.from_rows(F3, [[0, 1], [2, 0]])
    return MatrixGroup(F3, 2, [a, b])


def upper_triangular_gl23():
    gens = [
        Matrix.from_rows(F3, [[1, 1], [0, 1]]),
        Matrix.from_rows(F3, [[2, 0], [0, 1]]),
        Matrix.from_rows(F3, [[1, 0], [0, 2]]),
    ]
    return MatrixGroup(F3, 2, gens)


def alt5():
    return PermGroup(5, [perm(1, 2, 0, 3, 4), perm(0, 1, 3, 4, 2)])


def test_tally_cyclic_c12():
    # 2 has multiplicative order 12 mod 13
    g = MatrixGroup(F13, 1, [Matrix.from_rows(F13, [[2]])])
    assert g.order() == 12
    tally = composition_tally(g)
    assert tally.cyclic_counts == {2: 2, 3: 1}
    assert tally.nonabelian_factors == []


def test_tally_sl23():
    tally = composition_tally(sl_2_3())
    assert tally.cyclic_counts == {2: 3, 3: 1}
    assert tally.c_p(3) == 1
    assert a_of_g(sl_2_3()) == 24


def test_cp_gamma_l_1_4():
    assert c_p(gamma_l_1_4(), 2) == 1


def test_cp_gl_1_343():
    F343 = field_create(7, 3)
    # x is primitive for the default modulus, so it generates GL(1,343)
    g = MatrixGroup(F343, 1, [Matrix.from_rows(F343, [[7]])])
    assert g.order() == 342
    assert c_p(g, 3) == 2
    assert c_p(g, 3) == vp(342, 3)


def test_tally_total_order_matches():
    for g in [gamma_l_1_4(), sl_2_3(), upper_triangular_gl23()]:
        tally = composition_tally(g)
        assert tally.total_order() == g.order()


def test_alt5_simple_exhaustive():
    g = alt5()
    assert g.order() == 60
    res = simplicity_test(g)
    assert res.simple and not res.sampled


def test_simplicity_precondition():
    with pytest.raises(PreconditionViolated):
        simplicity_test(sl_2_3())  # not perfect: |G/G'| = 3


def test_direct_product_with_center_not_simple():
    # Alt(5) x C2 on 7 points is perfect? No: it is not perfect either.
    # Use Alt(5) x Alt(5) via diagonal-free generators: perfect, not simple.
    a5 = alt5()
    gens = []
    for g in a5.gens:
        gens.append(np.concatenate([g, np.arange(5, dtype=np.int32) + 5]))
        gens.append(np.concatenate([np.arange(5, dtype=np.int32), g + 5]))
    gg = PermGroup(10, gens)
    assert gg.order() == 3600
    res = simplicity_test(gg)
    assert not res.simple
    assert res.proper_normal.order() in (60, 3600 // 60)


def test_tally_alt5_nonabelian_factor():
    tally = composition_tally(alt5())
    assert tally.cyclic_counts == {}
    assert tally.nonabelian_factors == [(60, 1)]


def test_jordan_holder_strategies_agree():
    groups = [
        gamma_l_1_4(),
        sl_2_3(),
        upper_triangular_gl23(),
        alt5(),
    ]
    for g in groups:
        t1 = composition_tally(g, strategy="derived")
        for seed in (0, 1, 2):
            t2 = composition_tally(g, strategy="random", seed=seed)
            assert t1.cyclic_counts == t2.cyclic_counts
            assert t1.nonabelian_factors == t2.nonabelian_factors


def test_tally_additive_over_random_normal_subgroups():
    import random

    rng = random.Random(0)
    for g in [sl_2_3().group, upper_triangular_gl23().group]:
        total = composition_tally(g)
        for _ in range(5):
            x = g.random_element(rng)
            n = g.normal_closure([x])
            if n.order() in (1, g.order()):
                continue
            quotient = g.coset_action(n).group
            tn = composition_tally(n)
            tq = composition_tally(quotient)
            for p in set(total.cyclic_counts) | set(tn.cyclic_counts) | set(tq.cyclic_counts):
                assert total.c_p(p) == tn.c_p(p) + tq.c_p(p)


def test_soluble_cp_equals_vp():
    for g in [gamma_l_1_4(), sl_2_3(), upper_triangular_gl23()]:
        order = g.order()
        tally = composition_tally(g)
        assert not tally.nonabelian_factors  # soluble fixtures
        for p in prime_factors(order):
            assert tally.c_p(p) == vp(order, p)


def test_cp_bounded_by_vp_generally():
    for g in [alt5()]:
        tally = composition_tally(g)
        for p in prime_factors(g.order()):
            assert tally.c_p(p) <= vp(g.order(), p)


def test_symmetric_image_cp_bound():
    # images in Sym(r) via coset actions: c_p(image) <= (r-1)/(p-1)
    g = sl_2_3().group
    q8 = g.derived_subgroup()
    act = g.coset_action(q8)
    image = act.group
    r = act.degree
    tally = composition_tally(image)
    for p in prime_factors(max(image.order(), 2)):
        assert tally.c_p(p) <= (r - 1) // (p - 1)


def test_p_core_completely_reducible_is_trivial():
    g = gamma_l_1_4()
    core = p_core(g)
    assert core.order() == 1


def test_p_core_upper_triangular():
    g = upper_triangular_gl23()
    core = p_core(g)
    assert core.order() == 3
    m = core.generators[0]
    assert m[0, 0] == 1 and m[1, 1] == 1  # unitriangular


def test_p_core_of_p_group_is_whole_group():
    gens = [
        Matrix.from_rows(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        Matrix.from_rows(F2, [[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
        Matrix.from_rows(F2, [[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
    ]
    g = MatrixGroup(F2, 3, gens)
    assert g.order() == 8
    core = p_core(g)
    assert core.order() == 8


def test_clifford_normal_subgroup_of_cr_is_cr():
    g1 = gamma_l_1_4()
    gens = [direct_sum(a, Matrix.identity(F2, 2)) for a in g1.generators]
    gens += [direct_sum(Matrix.identity(F2, 2), a) for a in g1.generators]
    g = MatrixGroup(F2, 4, gens)
    assert decompose(g).completely_reducible
    n = g.derived_subgroup()
    if n.order() > 1:
        assert decompose(n).completely_reducible
