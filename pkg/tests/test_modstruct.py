"""Module decomposition: invariant subspaces, splitting, flags, endo algebras."""

import pytest

from crfactor.errors import InputError, NotIrreducible
from crfactor.gf import field_create
from crfactor.grp import MatrixGroup
from crfactor.matfq import Matrix, Subspace, direct_sum
from crfactor.modstruct import (
    decompose,
    endo_dim,
    find_invariant_subspace,
    flag_factor_actions,
    is_absolutely_irreducible,
    restriction_matrices,
    split,
)

F2 = field_create(2, 1)
F3 = field_create(3, 1)
F4 = field_create(2, 2)


def gamma_l_1_4():
    mult = Matrix.from_rows(F2, [[0, 1], [1, 1]])
    frob = Matrix.from_rows(F2, [[1, 0], [1, 1]])
    return MatrixGroup(F2, 2, [mult, frob])


def gl_1_4_in_gl22():
    """Multiplication-only embedding of F_4^* (misses the Frobenius)."""
    mult = Matrix.from_rows(F2, [[0, 1], [1, 1]])
    return MatrixGroup(F2, 2, [mult])


def gamma_l_1_27():
    F27 = field_create(3, 3)
    d = 3
    comp_rows = []
    for i in range(d):
        if i + 1 < d:
            row = [0] * d
            row[i + 1] = 1
        else:
            row = [(-c) % 3 for c in F27.modulus[:d]]
        comp_rows.append(row)
    frob_rows = []
    for i in range(d):
        xi = F27.pow(3, i)
        img = F27.pow(xi, 3)
        coords = []
        n = img
        for _ in range(d):
            coords.append(n % 3)
            n //= 3
        frob_rows.append(coords)
    return MatrixGroup(
        F3, 3, [Matrix.from_rows(F3, comp_rows), Matrix.from_rows(F3, frob_rows)]
    )


def upper_triangular_gl23():
    gens = [
        Matrix.from_rows(F3, [[1, 1], [0, 1]]),
        Matrix.from_rows(F3, [[2, 0], [0, 1]]),
        Matrix.from_rows(F3, [[1, 0], [0, 2]]),
    ]
    return MatrixGroup(F3, 2, gens)


def test_trivial_group_has_invariant_line():
    g = MatrixGroup(F2, 2, [Matrix.identity(F2, 2)])
    w = find_invariant_subspace(g)
    assert w is not None and w.dim == 1
    # lexicographically first by flattened RREF basis
    assert w.basis == ((0, 1),)


def test_direct_sum_module_is_reducible():
    g1 = gamma_l_1_4()
    gens = [direct_sum(a, b) for a in g1.generators for b in g1.generators]
    g = MatrixGroup(F2, 4, gens)
    w = find_invariant_subspace(g)
    assert w is not None
    assert w.dim == 2


def test_gamma_l_27_is_irreducible():
    g = gamma_l_1_27()
    assert find_invariant_subspace(g) is None


def test_gamma_l_4_is_irreducible():
    assert find_invariant_subspace(gamma_l_1_4()) is None


def test_split_trivial_group_every_line_splits():
    g = MatrixGroup(F3, 2, [Matrix.identity(F3, 2)])
    line = Subspace.from_vectors(F3, 2, [(1, 0)])
    comp = split(g, line)
    assert comp is not None
    assert comp.dim == 1
    assert comp.intersection(line).is_zero()


def test_split_unitriangular_has_no_complement():
    g = MatrixGroup(F2, 2, [Matrix.from_rows(F2, [[1, 1], [0, 1]])])
    # the only invariant line of the row action is <e_1>
    line = Subspace.from_vectors(F2, 2, [(0, 1)])
    assert split(g, line) is None


def test_split_block_direct_sum():
    g1 = gamma_l_1_4()
    gens = [direct_sum(a, Matrix.identity(F2, 2)) for a in g1.generators]
    gens += [direct_sum(Matrix.identity(F2, 2), a) for a in g1.generators]
    g = MatrixGroup(F2, 4, gens)
    first_block = Subspace.from_vectors(F2, 4, [(1, 0, 0, 0), (0, 1, 0, 0)])
    comp = split(g, first_block)
    assert comp is not None
    assert comp == Subspace.from_vectors(F2, 4, [(0, 0, 1, 0), (0, 0, 0, 1)])


def test_split_rejects_non_invariant_subspace():
    g = gamma_l_1_4()
    line = Subspace.from_vectors(F2, 2, [(1, 0)])
    with pytest.raises(InputError):
        split(g, line)


def test_decompose_irreducible():
    dec = decompose(gamma_l_1_4())
    assert dec.completely_reducible
    assert dec.r == 1
    assert dec.s == 1
    assert len(dec.summands) == 1 and dec.summands[0].is_full()


def test_decompose_direct_sum_of_two():
    g1 = gamma_l_1_4()
    gens = [direct_sum(a, Matrix.identity(F2, 2)) for a in g1.generators]
    gens += [direct_sum(Matrix.identity(F2, 2), a) for a in g1.generators]
    g = MatrixGroup(F2, 4, gens)
    dec = decompose(g)
    assert dec.completely_reducible
    assert dec.r == 2
    assert sorted(s.dim for s in dec.summands) == [2, 2]


def test_decompose_direct_sums_up_to_four():
    g1 = gamma_l_1_4()
    base = g1.generators
    ident = Matrix.identity(F2, 2)
    for k in (2, 3, 4):
        gens = []
        for pos in range(k):
            for a in base:
                blocks = [ident] * k
                blocks[pos] = a
                m = blocks[0]
                for b in blocks[1:]:
                    m = direct_sum(m, b)
                gens.append(m)
        g = MatrixGroup(F2, 2 * k, gens)
        dec = decompose(g)
        assert dec.completely_reducible
        assert dec.r == k


def test_decompose_upper_triangular_not_cr():
    dec = decompose(upper_triangular_gl23())
    assert not dec.completely_reducible
    assert dec.r == 2
    assert dec.factor_dims == [1, 1]
    assert dec.summands is None


def test_flag_subspaces_are_invariant():
    g = upper_triangular_gl23()
    dec = decompose(g)
    for sub in dec.flag:
        for gen in g.generators:
            for b in sub.basis:
                assert sub.contains(gen.apply(b))


def test_decompose_summands_are_irreducible_and_disjoint():
    g1 = gamma_l_1_4()
    gens = [direct_sum(a, b) for a, b in zip(g1.generators, g1.generators)]
    extra = [direct_sum(Matrix.identity(F2, 2), a) for a in g1.generators]
    g = MatrixGroup(F2, 4, gens + extra)
    dec = decompose(g)
    if dec.completely_reducible:
        total = 0
        for s in dec.summands:
            total += s.dim
            sub_gens = restriction_matrices(s, g.generators)
            assert all(m.rows == s.dim for m in sub_gens)
        assert total == 4


def test_endo_dim_distinguishes_gamma_l_from_gl():
    full = Subspace.full(F2, 2)
    assert endo_dim(gamma_l_1_4(), full) == 1
    assert endo_dim(gl_1_4_in_gl22(), full) == 2
    assert is_absolutely_irreducible(gamma_l_1_4(), full)
    assert not is_absolutely_irreducible(gl_1_4_in_gl22(), full)


def test_endo_dim_identity_on_line():
    g = MatrixGroup(F3, 1, [Matrix.identity(F3, 1)])
    assert endo_dim(g, Subspace.full(F3, 1)) == 1


def test_endo_dim_rejects_reducible():
    g = MatrixGroup(F2, 2, [Matrix.identity(F2, 2)])
    with pytest.raises(NotIrreducible):
        endo_dim(g, Subspace.full(F2, 2))


def test_endo_dim_divides_dimension():
    g27 = gamma_l_1_27()
    assert 3 % endo_dim(g27, Subspace.full(F3, 3)) == 0


def test_gamma_l_27_absolutely_irreducible():
    g27 = gamma_l_1_27()
    assert endo_dim(g27, Subspace.full(F3, 3)) == 1


def test_gl_1_27_endo_dim_three():
    # multiplication-only subgroup: commutant is the embedded F_27
    g27 = gamma_l_1_27()
    g = MatrixGroup(F3, 3, [g27.generators[0]])
    assert endo_dim(g, Subspace.full(F3, 3)) == 3


def test_flag_factor_actions_upper_triangular():
    g = upper_triangular_gl23()
    dec = decompose(g)
    blocks, dims = flag_factor_actions(g, dec)
    assert dims == [1, 1]
    # each generator must act on each factor by its diagonal entry
    for gen, per_factor in zip(g.generators, blocks):
        assert all(b.rows == 1 for b in per_factor)
        diag = sorted([per_factor[0][0, 0], per_factor[1][0, 0]])
        assert diag == sorted([gen[0, 0], gen[1, 1]])


def test_decompose_deterministic():
    g = upper_triangular_gl23()
    d1 = decompose(g)
    d2 = decompose(g)
    assert [s.basis for s in d1.flag] == [s.basis for s in d2.flag]
