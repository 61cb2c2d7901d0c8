"""Structure of the natural module: invariant subspaces, splittings,
composition flags, and endomorphism algebras.

Reducibility search runs in three deterministic stages: spin the standard
basis vectors, then spin kernels of eigenvalue shifts of pseudorandom
enveloping-algebra elements (seeded, so reproducible), and finally sweep
one representative per vector orbit.  The sweep is the irreducibility
certificate: a proper invariant subspace contains an orbit representative
whose spin stays proper, so finding none proves irreducibility.  The
sweep needs the vector count q^d - 1 within the degree limit; beyond
that an undetected module raises DegreeTooLarge rather than guessing.

Complements are found by solving the linear system for an equivariant
section of the quotient map, which is correct in every characteristic
(averaging over the group is unavailable when p divides the order).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import DegreeTooLarge, InputError, NotIrreducible
from .gf import Field
from .grp import DEFAULT_DEGREE_LIMIT, _matrix_action
from .matfq import Matrix, Subspace, _rref_rows, solve_linear, spin_vector

MEATAXE_ATTEMPTS = 12
MEATAXE_WORD_LENGTH = 8
EIGENVALUE_SWEEP_LIMIT = 256


@dataclass
class ModuleDecomposition:
    """Flag and (when completely reducible) direct-sum data for a module.

    flag is the full chain V = F_0 > F_1 > ... > F_r = 0 including both
    ends; factor_dims lists dim(F_{i-1}) - dim(F_i).  summands is only
    set when the module is completely reducible, and s counts the
    absolutely irreducible summands.
    """

    field: Field
    dim: int
    flag: list[Subspace]
    factor_dims: list[int]
    completely_reducible: bool
    summands: list[Subspace] | None
    s: int | None

    @property
    def r(self) -> int:
        return len(self.factor_dims)

    def to_json_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "completely_reducible": self.completely_reducible,
            "r": self.r,
            "factor_dims": self.factor_dims,
            "flag": [[list(row) for row in sub.basis] for sub in self.flag],
        }
        if self.summands is not None:
            out["summands"] = [
                [list(row) for row in sub.basis] for sub in self.summands
            ]
        if self.s is not None:
            out["s"] = self.s
        return out


# ---------------------------------------------------------------------------
# invariant subspace search


def _algebra_words(gens: Sequence[Matrix], field: Field, d: int, rng) -> Matrix:
    """A pseudorandom enveloping-algebra element: an F_q-combination of
    short generator words."""
    ident = Matrix.identity(field, d)
    terms = rng.randrange(2, 4)
    acc = Matrix.zero(field, d, d)
    for _ in range(terms):
        w = ident
        for _ in range(rng.randrange(1, MEATAXE_WORD_LENGTH + 1)):
            w = w * rng.choice(gens)
        c = rng.randrange(1, field.q)
        acc = acc + w.scale(c)
    return acc


def _kernel_vectors(a: Matrix) -> list[tuple[int, ...]]:
    """Basis of {v : v * a = 0}."""
    F = a.field
    n = a.rows
    rows = [list(a.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    reduced, _, _ = _rref_rows(rows, F)
    return [
        tuple(row[a.cols :])
        for row in reduced
        if not any(row[: a.cols]) and any(row[a.cols :])
    ]


def _proper(sub: Subspace, d: int) -> bool:
    return 0 < sub.dim < d


def _find_invariant(
    field: Field,
    d: int,
    gens: Sequence[Matrix],
    seed: int = 0,
    degree_limit: int = DEFAULT_DEGREE_LIMIT,
) -> Subspace | None:
    """A proper nonzero invariant subspace, or None as an irreducibility
    certificate."""
    if d == 1:
        return None

    # stage 1: spins of the standard basis vectors
    found = []
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        sub = spin_vector(gens, field, e)
        if _proper(sub, d):
            found.append(sub)
    if found:
        return min(found, key=lambda s: s.key())

    # stage 2: kernels of eigenvalue shifts of pseudorandom algebra elements
    rng = random.Random(seed)
    ident = Matrix.identity(field, d)
    lambdas = range(field.q) if field.q <= EIGENVALUE_SWEEP_LIMIT else (0,)
    for _ in range(MEATAXE_ATTEMPTS):
        a = _algebra_words(gens, field, d, rng)
        found = []
        for lam in lambdas:
            shifted = a - ident.scale(lam) if lam else a
            for v in _kernel_vectors(shifted):
                sub = spin_vector(gens, field, v)
                if _proper(sub, d):
                    found.append(sub)
        if found:
            return min(found, key=lambda s: s.key())

    # stage 3: certificate sweep over one representative per vector orbit
    n = field.q**d - 1
    if n > degree_limit:
        raise DegreeTooLarge(
            f"cannot certify irreducibility: {n} vectors exceed the limit"
        )
    if field.np_mul is not None:
        perms = [_matrix_action(field, d, g, n) for g in gens]
        seen = bytearray(n)
        for pt in range(n):
            if seen[pt]:
                continue
            stack = [pt]
            seen[pt] = 1
            while stack:
                x = stack.pop()
                for g in perms:
                    y = int(g[x])
                    if not seen[y]:
                        seen[y] = 1
                        stack.append(y)
            sub = spin_vector(gens, field, _decode_vector(field, d, pt + 1))
            if _proper(sub, d):
                return sub
        return None
    # small-field tables unavailable: spin every vector encoding directly
    for enc in range(1, n + 1):
        sub = spin_vector(gens, field, _decode_vector(field, d, enc))
        if _proper(sub, d):
            return sub
    return None


def _decode_vector(field: Field, d: int, enc: int) -> tuple[int, ...]:
    q = field.q
    out = []
    for _ in range(d):
        out.append(enc % q)
        enc //= q
    return tuple(out)


def find_invariant_subspace(group, seed: int = 0) -> Subspace | None:
    """Public wrapper over the staged search for a matrix group."""
    return _find_invariant(group.field, group.d, group.generators, seed=seed)


# ---------------------------------------------------------------------------
# restriction / quotient modules


def restriction_matrices(basis: Subspace, gens: Sequence[Matrix]) -> list[Matrix]:
    """Action of the generators on an invariant subspace, in its RREF basis.

    RREF coordinates make this a pivot-column read-off; invariance of the
    subspace is asserted along the way.
    """
    F = basis.field
    out = []
    for g in gens:
        rows = []
        for b in basis.basis:
            img = g.apply(b)
            if any(basis.reduce(img)):
                raise InputError("subspace is not invariant under the generators")
            rows.append([img[c] for c in basis.pivots])
        out.append(Matrix.from_rows(F, rows) if rows else Matrix.identity(F, 0))
    return out


class _QuotientMap:
    """Coordinates for V / W via the non-pivot columns of W's RREF."""

    def __init__(self, w: Subspace):
        self.w = w
        self.free = [c for c in range(w.ambient_dim) if c not in set(w.pivots)]
        self.dim = len(self.free)

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        red = self.w.reduce(v)
        return tuple(red[c] for c in self.free)

    def lift(self, x: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.w.ambient_dim
        for c, val in zip(self.free, x):
            out[c] = val
        return tuple(out)

    def action(self, gens: Sequence[Matrix], field: Field) -> list[Matrix]:
        out = []
        for g in gens:
            rows = []
            for i in range(self.dim):
                e = [0] * self.dim
                e[i] = 1
                rows.append(self.project(g.apply(self.lift(e))))
            out.append(Matrix.from_rows(field, rows) if rows else Matrix.identity(field, 0))
        return out


def split(group, w: Subspace) -> Subspace | None:
    """An invariant complement of the invariant subspace w, or None.

    Solves for a linear section s of the projection V -> V/W with
    g s = s g-bar for every generator; its image is then an invariant
    complement, and unsolvability certifies that none exists.
    """
    return _split(group.field, group.d, group.generators, w)


def _split(field: Field, d: int, gens: Sequence[Matrix], w: Subspace) -> Subspace | None:
    if not _proper(w, d):
        raise InputError("split needs a proper nonzero subspace")
    for g in gens:
        for b in w.basis:
            if not w.contains(g.apply(b)):
                raise InputError("split needs an invariant subspace")
    qmap = _QuotientMap(w)
    k = qmap.dim
    qgens = qmap.action(gens, field)
    nvars = k * d  # section matrix S, row-major: S[i, t] at i*d + t
    columns: list[list[int]] = []
    rhs: list[int] = []

    def new_eq():
        columns.append([0] * nvars)
        rhs.append(0)
        return columns[-1]

    add, mul, neg, sub_ = field.add, field.mul, field.neg, field.sub
    for g, qg in zip(gens, qgens):
        # S g - qg S = 0, entrywise
        for i in range(k):
            for j in range(d):
                eq = new_eq()
                for t in range(d):
                    c = g[t, j]
                    if c:
                        eq[i * d + t] = add(eq[i * d + t], c)
                for t in range(k):
                    c = qg[i, t]
                    if c:
                        eq[t * d + j] = sub_(eq[t * d + j], c)
    # projection constraint: project(S_i) = e_i
    proj_rows = []
    for t in range(d):
        e = [0] * d
        e[t] = 1
        proj_rows.append(qmap.project(e))
    for i in range(k):
        for j in range(k):
            eq = new_eq()
            for t in range(d):
                c = proj_rows[t][j]
                if c:
                    eq[i * d + t] = add(eq[i * d + t], c)
            rhs[-1] = 1 if i == j else 0

    # solve x * A = b where A columns are the equations
    neqs = len(columns)
    amat = Matrix(field, nvars, neqs, [
        columns[e][v] for v in range(nvars) for e in range(neqs)
    ])
    sol = solve_linear(amat, rhs)
    if sol is None:
        return None
    section = [list(sol.particular[i * d : (i + 1) * d]) for i in range(k)]
    comp = Subspace.from_vectors(field, d, section)
    assert comp.dim == k and comp.intersection(w).is_zero()
    return comp


# ---------------------------------------------------------------------------
# full decomposition


def _embed(parent: Subspace, local: Subspace) -> Subspace:
    """Rows of a subspace in basis coordinates, expressed in parent space."""
    field = parent.field
    rows = []
    for lrow in local.basis:
        acc = [0] * parent.ambient_dim
        for coef, brow in zip(lrow, parent.basis):
            if coef:
                for j in range(parent.ambient_dim):
                    if brow[j]:
                        acc[j] = field.add(acc[j], field.mul(coef, brow[j]))
        rows.append(acc)
    return Subspace.from_vectors(field, parent.ambient_dim, rows)


def _preimage(qmap: _QuotientMap, field: Field, local: Subspace) -> Subspace:
    rows = [qmap.lift(b) for b in local.basis]
    rows += [list(b) for b in qmap.w.basis]
    return Subspace.from_vectors(field, qmap.w.ambient_dim, rows)


@dataclass
class _Dec:
    flag: list[Subspace]  # local coordinates, including full and zero
    summands: list[Subspace] | None
    cr: bool


def _decompose(field: Field, d: int, gens: Sequence[Matrix], seed: int) -> _Dec:
    w = _find_invariant(field, d, gens, seed=seed)
    if w is None:
        return _Dec(
            flag=[Subspace.full(field, d), Subspace.zero(field, d)],
            summands=[Subspace.full(field, d)],
            cr=True,
        )
    comp = _split(field, d, gens, w)
    sub_dec = _decompose(
        field, w.dim, restriction_matrices(w, gens), seed
    )
    if comp is not None:
        comp_dec = _decompose(
            field, comp.dim, restriction_matrices(comp, gens), seed
        )
        quotient_like = [_embed(comp, s) for s in comp_dec.flag]
        flag = [
            Subspace.from_vectors(
                field, d, list(sub.basis) + list(w.basis)
            )
            for sub in quotient_like
        ]
        flag = flag + [_embed(w, s) for s in sub_dec.flag[1:]]
        if comp_dec.cr and sub_dec.cr:
            summands = [_embed(w, s) for s in sub_dec.summands]
            summands += [_embed(comp, s) for s in comp_dec.summands]
            return _Dec(flag=flag, summands=summands, cr=True)
        return _Dec(flag=flag, summands=None, cr=False)
    qmap = _QuotientMap(w)
    q_dec = _decompose(field, qmap.dim, qmap.action(gens, field), seed)
    flag = [_preimage(qmap, field, s) for s in q_dec.flag]
    flag = flag + [_embed(w, s) for s in sub_dec.flag[1:]]
    return _Dec(flag=flag, summands=None, cr=False)


def decompose(group, seed: int = 0) -> ModuleDecomposition:
    """Composition flag of the natural module plus the direct-sum
    decomposition when the module is completely reducible."""
    field, d, gens = group.field, group.d, group.generators
    dec = _decompose(field, d, gens, seed)
    dims = [dec.flag[i].dim - dec.flag[i + 1].dim for i in range(len(dec.flag) - 1)]
    assert all(dim > 0 for dim in dims)
    assert sum(dims) == d
    s = None
    summands = None
    if dec.cr:
        summands = sorted(dec.summands, key=lambda sub: sub.key())
        s = 0
        for u in summands:
            if endo_dim(group, u) == 1:
                s += 1
    return ModuleDecomposition(
        field=field,
        dim=d,
        flag=dec.flag,
        factor_dims=dims,
        completely_reducible=dec.cr,
        summands=summands,
        s=s,
    )


def endo_dim(group, u: Subspace) -> int:
    """Dimension over F_q of the commutant of the action on the
    irreducible summand u; 1 means absolutely irreducible."""
    field = group.field
    gens = restriction_matrices(u, group.generators)
    k = u.dim
    if _find_invariant(field, k, gens) is not None:
        raise NotIrreducible("endo_dim needs an irreducible summand")
    if k == 0:
        raise NotIrreducible("empty summand")
    nvars = k * k
    columns = []
    add, sub_ = field.add, field.sub
    for g in gens:
        # X g - g X = 0
        for i in range(k):
            for j in range(k):
                eq = [0] * nvars
                for t in range(k):
                    c = g[t, j]
                    if c:
                        eq[i * k + t] = add(eq[i * k + t], c)
                    c2 = g[i, t]
                    if c2:
                        eq[t * k + j] = sub_(eq[t * k + j], c2)
                columns.append(eq)
    if not columns:
        return k * k if k else 1
    rows = [[col[v] for col in columns] for v in range(nvars)]
    _, rank, _ = _rref_rows(rows, field)
    e = nvars - rank
    assert k % e == 0
    return e


def is_absolutely_irreducible(group, u: Subspace) -> bool:
    return endo_dim(group, u) == 1


# ---------------------------------------------------------------------------
# adapted bases for flag-factor actions (used by the p-core computation)


def flag_factor_actions(
    group, dec: ModuleDecomposition
) -> tuple[list[list[Matrix]], list[int]]:
    """Block actions of the generators on the flag factors F_{i-1}/F_i.

    Returns (blocks, dims) where blocks[k] lists, for generator k, the
    factor actions ordered from the top of the flag (W_1 = V/F_1) down.
    """
    field, d = group.field, group.d
    maps = []
    for i in range(len(dec.flag) - 1):
        upper, lower = dec.flag[i], dec.flag[i + 1]
        # coordinates for upper/lower as a quotient: reduce against lower,
        # then read the coordinates inside upper
        maps.append((upper, lower))
    blocks: list[list[Matrix]] = []
    dims = [upper.dim - lower.dim for upper, lower in maps]
    for g in group.generators:
        per_factor = []
        for upper, lower in maps:
            # basis of a complement of lower inside upper: rows of upper's
            # RREF basis that are independent modulo lower
            rows = []
            for b in upper.basis:
                red = lower.reduce(b)
                if any(red):
                    rows.append(red)
            cbasis = Subspace.from_vectors(field, d, rows)
            # action: image of each basis row, reduced mod lower, in coords
            mat_rows = []
            for b in cbasis.basis:
                img = lower.reduce(g.apply(b))
                mat_rows.append(cbasis.coordinates(img))
            per_factor.append(
                Matrix.from_rows(field, mat_rows)
                if mat_rows
                else Matrix.identity(field, 0)
            )
        blocks.append(per_factor)
    return blocks, dims
