"""Example-family constructors and the wreath tower invariants."""

import pytest

from crfactor.errors import (
    OddPowerField,
    PreconditionViolated,
    UnsupportedFermatPrime,
)
from crfactor.gf import field_create, vp
from crfactor.grp import MatrixGroup
from crfactor.matfq import Matrix, Subspace
from crfactor.modstruct import decompose, endo_dim
from crfactor.construct import (
    counterexample_gl,
    cyclic_group,
    direct_sum_groups,
    extraspecial_normalizer,
    gamma_l1_field,
    gamma_l_1,
    gu_3_2,
    hermitian_gram,
    preserves_hermitian_form,
    scalar_extension,
    subdirect_sample,
    tensor_groups,
    tower,
    wreath_product,
)
from crfactor.structure import c_p, composition_tally


def test_gamma_l_1_p2():
    g = gamma_l_1(2)
    assert g.d == 2
    assert g.order() == 6  # 2 * (2^2 - 1)
    dec = decompose(g)
    assert dec.completely_reducible and dec.r == 1 and dec.s == 1


def test_gamma_l_1_p3():
    g = gamma_l_1(3)
    assert g.d == 3
    assert g.order() == 78  # 3 * (3^3 - 1)
    assert c_p(g, 3) == 1
    assert endo_dim(g, Subspace.full(g.field, 3)) == 1


def test_gamma_l_1_scalar_extension_stays_irreducible():
    g = gamma_l_1(2)
    over4 = scalar_extension(g, field_create(2, 2))
    dec = decompose(over4)
    assert dec.completely_reducible and dec.r == 1


def test_wreath_trivial_base():
    F2 = field_create(2, 1)
    base = MatrixGroup(F2, 1, [Matrix.identity(F2, 1)])
    w = wreath_product(base, cyclic_group(2))
    assert w.order() == 2


def test_wreath_gamma_l_order():
    w = wreath_product(gamma_l_1(2), cyclic_group(2), verify_order=True)
    assert w.d == 4
    assert w.order() == 72  # 6^2 * 2


def test_tower_level_one_is_base():
    base = gamma_l_1(2)
    assert tower(base, 2, 1) is base


def test_tower_order_law():
    base = gamma_l_1(2)
    prev = base.order()
    for n in (2, 3):
        t = tower(base, 2, n)
        assert t.d == 2**n
        assert t.order() == prev**2 * 2
        prev = t.order()


def test_tower_cp_recursion():
    base = gamma_l_1(2)
    prev_cp = c_p(base, 2)
    assert prev_cp == 1
    for n in (2, 3):
        t = tower(base, 2, n)
        cp = c_p(t, 2)
        assert cp == 2 * prev_cp + 1
        prev_cp = cp


def test_tower_irreducible_at_each_level():
    base = gamma_l_1(2)
    for n in (1, 2, 3):
        t = tower(base, 2, n)
        dec = decompose(t)
        assert dec.completely_reducible and dec.r == 1


def test_gu32_order_and_form():
    g = gu_3_2()
    assert g.order() == 648  # q^3 (q+1)(q^2-1)(q^3+1) at q = 2
    for gen in g.generators:
        assert preserves_hermitian_form(g.field, gen)


def test_gu32_c2():
    assert c_p(gu_3_2(), 2) == 3


def test_gu32_irreducible():
    dec = decompose(gu_3_2())
    assert dec.completely_reducible and dec.r == 1


def test_gu32_rejects_odd_power():
    with pytest.raises(OddPowerField):
        gu_3_2(field_create(2, 3))


def test_gu32_over_f16():
    g = gu_3_2(field_create(2, 4))
    assert g.order() == 648
    for gen in g.generators:
        assert preserves_hermitian_form(g.field, gen)


def test_extraspecial_p3():
    g = extraspecial_normalizer(3)
    assert g.d == 2
    assert g.order() == 24  # <Q8, order-3 element>, SL(2,3)-isomorphic
    assert c_p(g, 3) == 1
    dec = decompose(g)
    assert dec.completely_reducible and dec.r == 1 and dec.s == 1


def test_extraspecial_p5():
    g = extraspecial_normalizer(5)
    assert g.d == 4
    assert g.order() == 160  # 2^5 * 5
    assert c_p(g, 5) == 1
    assert endo_dim(g, Subspace.full(g.field, 4)) == 1


def test_extraspecial_rejects_other_primes():
    with pytest.raises(UnsupportedFermatPrime):
        extraspecial_normalizer(17)


def test_extraspecial_p3_tower_level2():
    g = tower(extraspecial_normalizer(3), 3, 2)
    assert g.d == 6
    assert g.order() == 24**3 * 3
    assert c_p(g, 3) == 4  # = (3/2 * 6 - 1) / 2


def test_counterexample_gl_1_343():
    g = counterexample_gl(3, 7, 3)
    assert g.order() == 342
    assert c_p(g, 3) == 2
    assert c_p(g, 3) >= vp(342, 3)


def test_counterexample_rejects_bad_f():
    with pytest.raises(PreconditionViolated):
        counterexample_gl(3, 7, 1)
    with pytest.raises(PreconditionViolated):
        counterexample_gl(3, 7, 6)


def test_counterexample_rejects_bad_r():
    with pytest.raises(PreconditionViolated):
        counterexample_gl(3, 5, 3)  # 5 != 1 mod 3


def test_counterexample_gl_11_pow5():
    g = counterexample_gl(5, 11, 5)
    assert g.order() == 11**5 - 1
    assert c_p(g, 5) == 2  # 161050 = 2 * 5^2 * 3221


def test_counterexample_full_gl_small():
    g = counterexample_gl(3, 7, 3, d=2, degree_limit=2**21)
    expected = (343**2 - 1) * (343**2 - 343)
    assert g.name == "GL(2,343)"
    # order check via the two-generator set would need a huge BSGS; the
    # same construction is order-checked at small q elsewhere
    assert len(g.generators) == 2


def test_direct_sum_groups_doubles_r():
    g = gamma_l_1(2)
    gg = direct_sum_groups(g, g)
    dec = decompose(gg)
    assert dec.completely_reducible
    assert dec.r == 2


def test_tensor_groups_dimension():
    F3 = field_create(3, 1)
    c = MatrixGroup(F3, 2, [Matrix.from_rows(F3, [[0, 1], [2, 0]])])
    t = tensor_groups(c, c)
    assert t.d == 4
    assert t.field.q == 3


def test_subdirect_sample_projections():
    g = gamma_l_1(2)
    s = subdirect_sample(g, g, seed=0)
    assert s.d == 4
    # projections are surjective by construction; the subdirect subgroup
    # can be anything between the diagonal and the full product
    assert s.order() % g.order() == 0
    assert s.order() <= g.order() ** 2


def test_cp_of_subdirect_bounded_by_sum():
    g = gamma_l_1(2)
    s = subdirect_sample(g, g, seed=1)
    assert c_p(s, 2) <= 2 * c_p(g, 2)


def test_cp_of_tensor_bounded_by_sum():
    # central product bound via the tensor construction
    g = gu_3_2()
    h = gamma_l_1(2)
    h4 = scalar_extension(h, field_create(2, 2))
    t = tensor_groups(h4, h4)
    assert c_p(t, 2) <= 2 * c_p(h4, 2)


def test_hermitian_gram_involution():
    F4 = field_create(2, 2)
    j = hermitian_gram(F4)
    assert j * j == Matrix.identity(F4, 3)
