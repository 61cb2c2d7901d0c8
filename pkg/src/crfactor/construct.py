"""Constructors for the sharp example families and fuzzing building blocks.

Wreath products are realized linearly in block form: the base group
embedded in the first block plus block-permutation matrices for the top
group, which is the smallest generating set for the imprimitive action.
Towers iterate the wreath with a cyclic group of order p.

The extraspecial normalizer avoids random search: the order-p outer
automorphism is found by enumerating the (tiny) orthogonal group on the
Frattini quotient, lifted to the extraspecial group by a sign search,
and realized as a matrix by solving the intertwiner equations; Schur's
lemma makes the solution unique up to the scalar fixed at the end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionTooLarge,
    FieldTooLarge,
    InputError,
    OddPowerField,
    PreconditionViolated,
    UnsupportedFermatPrime,
)
from .gf import Field, field_create, is_prime, subfield_embedding
from .grp import DEFAULT_DEGREE_LIMIT, MatrixGroup, PermGroup
from .matfq import Matrix, _rref_rows, direct_sum, kronecker


@dataclass(frozen=True)
class TowerSpec:
    """Parameters of an iterated wreath tower built on a base group."""

    base_name: str
    p: int
    level: int
    dim: int


def cyclic_group(k: int) -> PermGroup:
    """C_k as a permutation group on k points."""
    images = np.roll(np.arange(k, dtype=np.int32), -1)
    return PermGroup(k, [images])


def _block_embed(m: Matrix, pos: int, k: int) -> Matrix:
    """m placed in block pos of a k-block diagonal, identity elsewhere."""
    F = m.field
    dd = m.rows
    total = dd * k
    rows = []
    for i in range(total):
        bi, off = divmod(i, dd)
        row = [0] * total
        if bi == pos:
            for j in range(dd):
                row[pos * dd + j] = m[off, j]
        else:
            row[i] = 1
        rows.append(row)
    return Matrix.from_rows(F, rows)


def _block_perm(field: Field, dd: int, perm: np.ndarray) -> Matrix:
    """Block permutation matrix sending block i to block perm[i]."""
    k = len(perm)
    total = dd * k
    rows = []
    for i in range(total):
        bi, off = divmod(i, dd)
        row = [0] * total
        row[int(perm[bi]) * dd + off] = 1
        rows.append(row)
    return Matrix.from_rows(field, rows)


def wreath_product(
    base: MatrixGroup,
    top: PermGroup,
    degree_limit: int = DEFAULT_DEGREE_LIMIT,
    verify_order: bool = False,
) -> MatrixGroup:
    """The wreath product base wr top as an imprimitive matrix group.

    Generators: base generators in the first block, plus one block
    permutation per top generator.  When top is transitive this
    generates the full wreath product of order |base|^k * |top|.
    """
    k = top.degree
    d = base.d * k
    if base.field.q**d - 1 > degree_limit:
        raise DimensionTooLarge(
            f"wreath dimension {d} over F_{base.field.q} exceeds the degree limit"
        )
    gens = [_block_embed(g, 0, k) for g in base.generators]
    gens += [_block_perm(base.field, base.d, t) for t in top.gens]
    name = f"{base.name or 'base'} wr (top on {k} pts)"
    out = MatrixGroup(base.field, d, gens, name=name, degree_limit=degree_limit)
    if verify_order:
        expected = base.order() ** k * top.order()
        got = out.order()
        if got != expected:
            raise InputError(
                f"wreath order {got} != |base|^{k} * |top| = {expected}"
            )
    return out


def tower(
    base: MatrixGroup,
    p: int,
    n: int,
    degree_limit: int = DEFAULT_DEGREE_LIMIT,
) -> MatrixGroup:
    """Level n of the iterated wreath tower: G_1 = base, G_i = G_{i-1} wr C_p."""
    if n < 1:
        raise PreconditionViolated("tower level must be >= 1")
    g = base
    for level in range(2, n + 1):
        g = wreath_product(g, cyclic_group(p), degree_limit=degree_limit)
        g.name = f"{base.name or 'base'} tower level {level}"
    return g


# ---------------------------------------------------------------------------
# Gamma L(1, p^f): the semilinear group of a field extension


def gamma_l1_field(p: int, f: int, degree_limit: int = DEFAULT_DEGREE_LIMIT) -> MatrixGroup:
    """GammaL(1, p^f) <= GL(f, p): multiplication by a primitive element
    together with the Frobenius, in the power basis of the modulus root."""
    big = field_create(p, f)  # raises FieldTooLarge beyond 2^31
    if not big.primitive_flag:
        raise InputError("default modulus should be primitive")
    F = field_create(p, 1)
    if p**f - 1 > degree_limit:
        raise FieldTooLarge(
            f"vector action of GL({f},{p}) needs {p**f - 1} points"
        )
    comp_rows = []
    for i in range(f):
        if i + 1 < f:
            row = [0] * f
            row[i + 1] = 1
        else:
            row = [(-c) % p for c in big.modulus[:f]]
        comp_rows.append(row)
    frob_rows = []
    for i in range(f):
        xi = big.pow(p if f > 1 else 1, i)
        img = big.pow(xi, p)
        coords = []
        rest = img
        for _ in range(f):
            coords.append(rest % p)
            rest //= p
        frob_rows.append(coords)
    gens = [Matrix.from_rows(F, comp_rows)]
    if f > 1:
        gens.append(Matrix.from_rows(F, frob_rows))
    return MatrixGroup(F, f, gens, name=f"GammaL(1,{p}^{f})", degree_limit=degree_limit)


def gamma_l_1(p: int, degree_limit: int = DEFAULT_DEGREE_LIMIT) -> MatrixGroup:
    """The tower base GammaL(1, p^p) <= GL(p, p), of order p(p^p - 1)."""
    if not is_prime(p):
        raise PreconditionViolated(f"{p} is not prime")
    return gamma_l1_field(p, p, degree_limit=degree_limit)


# ---------------------------------------------------------------------------
# GU(3,2): the unitary isometry group of an order-648 Hermitian form


def _conj(field: Field, x: int) -> int:
    """Squaring: the F_4/F_2 conjugation, also on embedded F_4 entries."""
    return field.frobenius(x)


def hermitian_gram(field: Field) -> Matrix:
    return Matrix.from_rows(field, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def preserves_hermitian_form(field: Field, g: Matrix) -> bool:
    """Row convention: g J conj(g)^T = J."""
    j = hermitian_gram(field)
    conj_gt = Matrix.from_rows(
        field,
        [[_conj(field, g[j_, i]) for j_ in range(3)] for i in range(3)],
    )
    return g * j * conj_gt == j


def gu_3_2(field: Field | None = None, degree_limit: int = DEFAULT_DEGREE_LIMIT) -> MatrixGroup:
    """GU(3,2) <= GL(3, q) for q an even power of 2, order 648.

    Generators over F_4 (omega a cube root of unity, encoded 2):
    a diagonal torus element, two unitriangular transvections, and the
    antidiagonal Gram matrix itself; entries are pushed through the
    subfield embedding when q > 4.
    """
    if field is None:
        field = field_create(2, 2)
    if field.p != 2 or field.f % 2 != 0:
        raise OddPowerField("GU(3,2) needs a field of even power of 2")
    f4 = field_create(2, 2)
    omega = 2  # encodes x in F_4
    omega2 = 3
    gens4 = [
        Matrix.from_rows(f4, [[omega, 0, 0], [0, 1, 0], [0, 0, omega]]),
        Matrix.from_rows(f4, [[1, 0, 0], [0, omega, 0], [0, 0, 1]]),
        Matrix.from_rows(f4, [[1, 1, omega], [0, 1, 1], [0, 0, 1]]),
        Matrix.from_rows(f4, [[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        Matrix.from_rows(f4, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
    ]
    for g in gens4:
        if not preserves_hermitian_form(f4, g):
            raise InputError("GU(3,2) generator does not preserve the form")
    if field.q == 4:
        gens = [Matrix(field, 3, 3, g.entries) for g in gens4]
    else:
        emb = subfield_embedding(f4, field)
        gens = [
            Matrix(field, 3, 3, [emb[x] for x in g.entries]) for g in gens4
        ]
        for g in gens:
            if not preserves_hermitian_form(field, g):
                raise InputError("embedded generator lost the form")
    return MatrixGroup(field, 3, gens, name=f"GU(3,2) in GL(3,{field.q})",
                       degree_limit=degree_limit)


# ---------------------------------------------------------------------------
# extraspecial normalizer E . P for Fermat primes


def _extraspecial_gens(field: Field, m: int) -> list[Matrix]:
    """Generators of the extraspecial 2-group 2^(1+2m) of minus type as
    Kronecker products of 2x2 symplectic pairs over F_p."""
    p = field.p
    minus_one = p - 1
    # Q8 (minus type): i^2 = j^2 = -1, ij = -ji
    qi = Matrix.from_rows(field, [[0, minus_one], [1, 0]])
    qj = None
    for c in range(p):
        for d in range(p):
            val = (c * c + d * d) % p
            if val == minus_one and (c or d):
                cand = Matrix.from_rows(field, [[c, d], [d, (-c) % p]])
                prod1 = qi * cand
                prod2 = cand * qi
                if prod1 == prod2.scale(minus_one):
                    qj = cand
                    break
        if qj is not None:
            break
    if qj is None:
        raise InputError("no quaternion pair found")
    if m == 1:
        return [qi, qj]
    # D8 (plus type): a^2 = b^2 = 1, ab = -ba
    da = Matrix.from_rows(field, [[1, 0], [0, minus_one]])
    db = Matrix.from_rows(field, [[0, 1], [1, 0]])
    ident2 = Matrix.identity(field, 2)
    gens = [kronecker(da, ident2), kronecker(db, ident2)]
    gens += [kronecker(ident2, qi), kronecker(ident2, qj)]
    return gens


def _closure(mats: list[Matrix]) -> list[Matrix]:
    seen = {m.entries: m for m in mats}
    frontier = list(mats)
    ident = Matrix.identity(mats[0].field, mats[0].rows)
    if ident.entries not in seen:
        seen[ident.entries] = ident
        frontier.append(ident)
    while frontier:
        x = frontier.pop()
        for g in mats:
            y = x * g
            if y.entries not in seen:
                seen[y.entries] = y
                frontier.append(y)
    return list(seen.values())


def extraspecial_normalizer(p: int, degree_limit: int = DEFAULT_DEGREE_LIMIT) -> MatrixGroup:
    """E . P <= GL(p-1, p) for a Fermat prime p: an extraspecial group of
    order 2^(1+2m) and minus type (2^m = p - 1), extended by an order-p
    element inducing an order-p outer automorphism.

    Supported for p in {3, 5}: p = 17 would need degree 17^16.
    """
    if p not in (3, 5):
        raise UnsupportedFermatPrime(
            f"extraspecial normalizer implemented for p in {{3, 5}}, not {p}"
        )
    m = {3: 1, 5: 2}[p]
    field = field_create(p, 1)
    dim = 2**m
    gens = _extraspecial_gens(field, m)
    elements = _closure(gens)
    if len(elements) != 2 ** (1 + 2 * m):
        raise InputError("extraspecial closure has wrong order")

    # label elements by Frattini-quotient coordinates and a sign
    minus = Matrix.identity(field, dim).scale(p - 1)
    coords: dict[tuple, tuple[int, ...]] = {}
    words: dict[tuple[int, ...], Matrix] = {}
    for x in range(2 ** (2 * m)):
        bits = tuple((x >> i) & 1 for i in range(2 * m))
        w = Matrix.identity(field, dim)
        for gi, b in enumerate(bits):
            if b:
                w = w * gens[gi]
        words[bits] = w
        coords[w.entries] = bits
        coords[(w.scale(p - 1)).entries] = bits

    def quad(bits: tuple[int, ...]) -> int:
        w = words[bits]
        return 0 if (w * w).entries == Matrix.identity(field, dim).entries else 1

    # order-p element of the orthogonal group on F_2^(2m) preserving quad
    f2 = field_create(2, 1)
    nn = 2 * m
    target = None
    for enc in range(2 ** (nn * nn)):
        entries = [(enc >> i) & 1 for i in range(nn * nn)]
        g = Matrix(f2, nn, nn, entries)
        if not g.is_invertible():
            continue
        if g.pow(p) != Matrix.identity(f2, nn) or g == Matrix.identity(f2, nn):
            continue
        ok = True
        for x in range(1, 2**nn):
            bits = tuple((x >> i) & 1 for i in range(nn))
            img = g.apply(bits)
            if quad(tuple(img)) != quad(bits):
                ok = False
                break
        if ok:
            target = g
            break
    if target is None:
        raise InputError("no order-p isometry of the Frattini form found")

    # lift to an automorphism of E by choosing signs for generator images
    def element(bits: tuple[int, ...], sign: int) -> Matrix:
        w = words[bits]
        return w if sign == 0 else w.scale(p - 1)

    lift = None
    for signs in range(2**nn):
        images = []
        for gi in range(nn):
            e = tuple(1 if j == gi else 0 for j in range(nn))
            img_bits = tuple(target.apply(e))
            images.append(element(img_bits, (signs >> gi) & 1))
        # verify multiplicativity on all pairs of elements
        def sigma(mat: Matrix) -> Matrix:
            bits = coords[mat.entries]
            out = Matrix.identity(field, dim)
            for gi, b in enumerate(bits):
                if b:
                    out = out * images[gi]
            if mat.entries != element(bits, 0).entries:
                out = out.scale(p - 1)
            return out

        good = True
        for e1 in elements:
            for e2 in elements:
                if sigma(e1 * e2) != sigma(e1) * sigma(e2):
                    good = False
                    break
            if not good:
                break
        if good:
            lift = images
            break
    if lift is None:
        raise InputError("no sign lift of the isometry to the group")

    # intertwiner: X g_i = sigma(g_i) X, nonzero solution unique up to scalar
    nvars = dim * dim
    columns = []
    for gmat, simg in zip(gens, lift):
        for i in range(dim):
            for j in range(dim):
                eq = [0] * nvars
                for t in range(dim):
                    c = gmat[t, j]
                    if c:
                        eq[i * dim + t] = field.add(eq[i * dim + t], c)
                    c2 = simg[i, t]
                    if c2:
                        eq[t * dim + j] = field.sub(eq[t * dim + j], c2)
                columns.append(eq)
    rows = [[col[v] for col in columns] + [1 if w == v else 0 for w in range(nvars)]
            for v in range(nvars)]
    reduced, _, _ = _rref_rows(rows, field)
    neq = len(columns)
    kernel_rows = [row[neq:] for row in reduced if not any(row[:neq]) and any(row[neq:])]
    if len(kernel_rows) != 1:
        raise InputError(
            f"intertwiner space has dimension {len(kernel_rows)}, expected 1"
        )
    x = Matrix(field, dim, dim, kernel_rows[0])
    if not x.is_invertible():
        raise InputError("intertwiner is singular")
    xp = x.pow(p)
    mu = xp[0, 0]
    if xp != Matrix.identity(field, dim).scale(mu):
        raise InputError("X^p is not scalar")
    # Fermat: c^p = c mod p, so c = mu^{-1} normalizes X^p to the identity
    x = x.scale(field.inv(mu))
    out_gens = gens + [x]
    return MatrixGroup(
        field, dim, out_gens,
        name=f"extraspecial normalizer p={p}", degree_limit=degree_limit,
    )


# ---------------------------------------------------------------------------
# GL(d, q) for the cross-characteristic counterexample family


def counterexample_gl(
    p: int,
    r: int,
    f: int,
    d: int = 1,
    degree_limit: int = DEFAULT_DEGREE_LIMIT,
) -> MatrixGroup:
    """GL(d, r^f) for p odd, r prime with r = 1 mod p, and f a positive
    power of p; its cyclic determinant quotient gives c_p >= v_p(q - 1)."""
    if p == 2 or not is_prime(p):
        raise PreconditionViolated("p must be an odd prime")
    if not is_prime(r):
        raise PreconditionViolated("r must be prime")
    if r % p != 1:
        raise PreconditionViolated("r must be 1 mod p")
    ff = f
    while ff % p == 0:
        ff //= p
    if ff != 1 or f == 1:
        raise PreconditionViolated("f must be a positive power of p")
    field = field_create(r, f)  # FieldTooLarge beyond the limit
    if field.q**d - 1 > degree_limit:
        raise DimensionTooLarge(f"degree {field.q ** d - 1} exceeds the limit")
    zeta = field.p if field.f > 1 else _smallest_primitive_root(field)
    if field.element_order(zeta) != field.q - 1:
        raise InputError("primitive element expected from the default modulus")
    if d == 1:
        gens = [Matrix.from_rows(field, [[zeta]])]
    else:
        diag = Matrix.identity(field, d).row_list()
        diag[0][0] = zeta
        g1 = Matrix.from_rows(field, diag)
        rows = [[0] * d for _ in range(d)]
        rows[0][0] = field.neg(1)
        rows[0][d - 1] = 1
        for i in range(1, d):
            rows[i][i - 1] = field.neg(1)
        g2 = Matrix.from_rows(field, rows)
        gens = [g1, g2]
    return MatrixGroup(
        field, d, gens, name=f"GL({d},{field.q})", degree_limit=degree_limit
    )


def _smallest_primitive_root(field: Field) -> int:
    for cand in range(2, field.q):
        if field.element_order(cand) == field.q - 1:
            return cand
    raise InputError("no primitive root found")


# ---------------------------------------------------------------------------
# fuzzing building blocks


def direct_sum_groups(a: MatrixGroup, b: MatrixGroup) -> MatrixGroup:
    if a.field != b.field:
        raise InputError("direct sum needs a common field")
    ia = Matrix.identity(a.field, a.d)
    ib = Matrix.identity(b.field, b.d)
    gens = [direct_sum(g, ib) for g in a.generators]
    gens += [direct_sum(ia, g) for g in b.generators]
    return MatrixGroup(a.field, a.d + b.d, gens, name="direct sum")


def tensor_groups(a: MatrixGroup, b: MatrixGroup) -> MatrixGroup:
    if a.field != b.field:
        raise InputError("tensor product needs a common field")
    ia = Matrix.identity(a.field, a.d)
    ib = Matrix.identity(b.field, b.d)
    gens = [kronecker(g, ib) for g in a.generators]
    gens += [kronecker(ia, g) for g in b.generators]
    return MatrixGroup(a.field, a.d * b.d, gens, name="tensor product")


def scalar_extension(group: MatrixGroup, big: Field) -> MatrixGroup:
    """The same matrices read over an extension field."""
    emb = subfield_embedding(group.field, big)
    gens = [
        Matrix(big, g.rows, g.cols, [emb[x] for x in g.entries])
        for g in group.generators
    ]
    return MatrixGroup(
        big, group.d, gens, name=f"{group.name or 'group'} over F_{big.q}"
    )


def subdirect_sample(a: MatrixGroup, b: MatrixGroup, seed: int = 0) -> MatrixGroup:
    """A seeded subgroup of a x b with surjective projections."""
    if a.field != b.field:
        raise InputError("subdirect product needs a common field")
    rng = random.Random(seed)
    ia = Matrix.identity(a.field, a.d)
    ib = Matrix.identity(b.field, b.d)

    def random_word(g: MatrixGroup) -> Matrix:
        w = Matrix.identity(g.field, g.d)
        for _ in range(rng.randrange(1, 6)):
            w = w * rng.choice(g.generators)
        return w

    for _ in range(24):
        pair_gens = []
        for g in a.generators:
            pair_gens.append(direct_sum(g, random_word(b)))
        for g in b.generators:
            pair_gens.append(direct_sum(random_word(a), g))
        cand = MatrixGroup(a.field, a.d + b.d, pair_gens, name="subdirect sample")
        proj_a = MatrixGroup(a.field, a.d, [
            Matrix.from_rows(a.field, [list(m.row(i))[: a.d] for i in range(a.d)])
            for m in pair_gens
        ])
        proj_b_rows = [
            Matrix.from_rows(
                b.field,
                [list(m.row(a.d + i))[a.d :] for i in range(b.d)],
            )
            for m in pair_gens
        ]
        proj_b = MatrixGroup(b.field, b.d, proj_b_rows)
        if proj_a.order() == a.order() and proj_b.order() == b.order():
            return cand
    raise InputError("no subdirect sample found for this seed")
