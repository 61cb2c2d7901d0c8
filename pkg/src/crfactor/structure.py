"""Composition-factor analysis: tallies, c_p, a(G), simplicity, O_p(G).

The tally recursion descends the derived series while the group is not
perfect (abelian quotients contribute the prime factorization of their
order, so no quotient group is ever materialized there), and falls back
to a normal-subgroup search for perfect groups.  By Jordan-Holder the
resulting multiset does not depend on the series; the test suite checks
that against an independent random-series strategy.

Simplicity testing is exhaustive up to a configurable order limit and
switches to a seeded deterministic sample above it; sampled verdicts are
flagged in the tally so reports stay honest.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import lcm

import numpy as np

from .errors import InputError, PreconditionViolated
from .gf import prime_factors
from .grp import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    MatrixGroup,
    PermGroup,
    action_kernel,
    _matrix_action,
)
from .modstruct import ModuleDecomposition, decompose, flag_factor_actions

SAMPLE_SIZE = 64


@dataclass
class CompositionTally:
    """Multiset of composition factors: cyclic ones by prime, the rest by order."""

    cyclic_counts: dict[int, int] = dc_field(default_factory=dict)
    nonabelian_factors: list[tuple[int, int]] = dc_field(default_factory=list)
    sampled_simplicity: bool = False

    def c_p(self, p: int) -> int:
        return self.cyclic_counts.get(p, 0)

    def a_value(self) -> int:
        out = 1
        for p, m in self.cyclic_counts.items():
            out *= p**m
        return out

    def total_order(self) -> int:
        out = self.a_value()
        for order, count in self.nonabelian_factors:
            out *= order**count
        return out

    def to_json_dict(self) -> dict:
        return {
            "cyclic": {str(p): m for p, m in sorted(self.cyclic_counts.items())},
            "nonabelian": [list(t) for t in sorted(self.nonabelian_factors)],
            "sampled_simplicity": self.sampled_simplicity,
        }


class _TallyBuilder:
    def __init__(self):
        self.cyclic: dict[int, int] = {}
        self.nonabelian: dict[int, int] = {}
        self.sampled = False

    def add_abelian(self, order: int):
        for p, m in prime_factors(order).items():
            self.cyclic[p] = self.cyclic.get(p, 0) + m

    def add_simple(self, order: int):
        self.nonabelian[order] = self.nonabelian.get(order, 0) + 1

    def build(self) -> CompositionTally:
        return CompositionTally(
            cyclic_counts=dict(sorted(self.cyclic.items())),
            nonabelian_factors=sorted(self.nonabelian.items()),
            sampled_simplicity=self.sampled,
        )


def _as_perm_group(g) -> PermGroup:
    if isinstance(g, MatrixGroup):
        return g.group
    if isinstance(g, PermGroup):
        return g
    raise InputError(f"cannot tally {type(g).__name__}")


@dataclass
class SimplicityResult:
    simple: bool
    proper_normal: PermGroup | None
    sampled: bool


def _perm_order(p: np.ndarray) -> int:
    n = len(p)
    seen = bytearray(n)
    out = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = 1
            x = int(p[x])
            length += 1
        if length > 1:
            out = lcm(out, length)
    return out


def _perm_power(p: np.ndarray, e: int) -> np.ndarray:
    result = np.arange(len(p), dtype=p.dtype)
    base = p
    while e:
        if e & 1:
            result = base[result]
        base = base[base]
        e >>= 1
    return result


def simplicity_test(
    group,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    seed: int = 0,
    sample_size: int = SAMPLE_SIZE,
) -> SimplicityResult:
    """Decide simplicity of a perfect group by normal closures of elements.

    Exhaustive below the order limit; above it, closures of a seeded
    deterministic sample (strong generators, their prime-order powers,
    and pseudorandom words), with the verdict flagged as sampled.
    """
    g = _as_perm_group(group)
    order = g.order()
    if order == 1:
        raise PreconditionViolated("simplicity test needs a nontrivial group")
    if g.derived_subgroup().order() != order:
        raise PreconditionViolated("simplicity test needs a perfect group")
    ident = np.arange(g.degree, dtype=np.int32)
    if order <= exhaustive_limit:
        for x in g.elements(limit=exhaustive_limit):
            if (x == ident).all():
                continue
            closure = g.normal_closure([x])
            if closure.order() < order:
                return SimplicityResult(False, closure, sampled=False)
        return SimplicityResult(True, None, sampled=False)
    candidates: list[np.ndarray] = []
    seen = set()

    def push(x):
        key = x.tobytes()
        if key not in seen and not (x == ident).all():
            seen.add(key)
            candidates.append(x)

    for lev in g.chain.levels:
        for s in lev.gens:
            push(s)
            o = _perm_order(s)
            for ell in prime_factors(o):
                push(_perm_power(s, o // ell))
    rng = random.Random(seed)
    for _ in range(sample_size):
        push(g.random_element(rng))
    for x in candidates:
        closure = g.normal_closure([x])
        if closure.order() < order:
            return SimplicityResult(False, closure, sampled=True)
    return SimplicityResult(True, None, sampled=True)


def composition_tally(
    group,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    strategy: str = "derived",
    seed: int = 0,
) -> CompositionTally:
    """Composition factors of the group as a tally.

    strategy "derived" descends the derived series first; "random"
    refines along seeded random normal closures instead (used to check
    Jordan-Holder independence).  Both agree on every input.
    """
    if isinstance(group, MatrixGroup) and group.d == 1:
        # subgroups of GL(1,q) are cyclic; no permutation engine needed
        builder = _TallyBuilder()
        if group.order() > 1:
            builder.add_abelian(group.order())
        return builder.build()
    g = _as_perm_group(group)
    builder = _TallyBuilder()
    if strategy == "derived":
        _tally_derived(g, builder, exhaustive_limit, seed)
    elif strategy == "random":
        _tally_random(g, builder, exhaustive_limit, random.Random(seed), seed)
    else:
        raise InputError(f"unknown tally strategy {strategy!r}")
    tally = builder.build()
    assert tally.total_order() == g.order()
    return tally


def _tally_derived(g: PermGroup, builder: _TallyBuilder, limit: int, seed: int):
    order = g.order()
    if order == 1:
        return
    derived = g.derived_subgroup()
    if derived.order() < order:
        builder.add_abelian(order // derived.order())
        _tally_derived(derived, builder, limit, seed)
        return
    _tally_perfect(g, builder, limit, seed, _tally_derived)


def _tally_perfect(g: PermGroup, builder: _TallyBuilder, limit: int, seed: int, rec):
    res = simplicity_test(g, exhaustive_limit=limit, seed=seed)
    if res.sampled:
        builder.sampled = True
    if res.simple:
        builder.add_simple(g.order())
        return
    n = res.proper_normal
    rec(n, builder, limit, seed)
    quotient = g.coset_action(n).group
    rec(quotient, builder, limit, seed)


def _tally_random(
    g: PermGroup, builder: _TallyBuilder, limit: int, rng: random.Random, seed: int
):
    order = g.order()
    if order == 1:
        return
    ident = np.arange(g.degree, dtype=np.int32)
    for _ in range(20):
        x = g.random_element(rng)
        if (x == ident).all():
            continue
        n = g.normal_closure([x])
        if 1 < n.order() < order:
            _tally_random(n, builder, limit, rng, seed)
            quotient = g.coset_action(n).group
            _tally_random(quotient, builder, limit, rng, seed)
            return
    if g.is_abelian():
        builder.add_abelian(order)
        return
    derived = g.derived_subgroup()
    if derived.order() < order:
        builder.add_abelian(order // derived.order())
        _tally_random(derived, builder, limit, rng, seed)
        return
    _tally_perfect(
        g,
        builder,
        limit,
        seed,
        lambda h, b, l, s: _tally_random(h, b, l, rng, s),
    )


def c_p(group, p: int, **kwargs) -> int:
    """Number of composition factors of order exactly p."""
    return composition_tally(group, **kwargs).c_p(p)


def a_of_g(group, **kwargs) -> int:
    """Product of the orders of the abelian composition factors."""
    return composition_tally(group, **kwargs).a_value()


# ---------------------------------------------------------------------------
# p-core via the action on the flag factors


def flag_image_action(
    group: MatrixGroup, module: ModuleDecomposition
) -> tuple[int, list[np.ndarray], list[list]]:
    """Permutation images of the generators on the disjoint union of the
    nonzero vectors of the flag factors (the block-diagonal action)."""
    blocks, dims = flag_factor_actions(group, module)
    field = group.field
    offsets = []
    total = 0
    for dim in dims:
        offsets.append(total)
        total += field.q**dim - 1
    images = []
    for per_factor in blocks:
        parts = []
        for block, dim, off in zip(per_factor, dims, offsets):
            part = _matrix_action(field, dim, block, field.q**dim - 1)
            parts.append(part + off)
        images.append(np.concatenate(parts).astype(np.int32))
    return total, images, blocks


def p_core(
    group: MatrixGroup,
    module: ModuleDecomposition | None = None,
    validate: bool = True,
) -> MatrixGroup:
    """The largest normal p-subgroup O_p(G): the kernel of the action on
    the composition factors of the natural module."""
    if module is None:
        module = decompose(group)
    if sum(module.factor_dims) != group.d:
        raise InputError("module decomposition does not match the group")
    rep = group.perm_rep
    image_degree, images, blocks = flag_image_action(group, module)
    kernel, image_order = action_kernel(rep.degree, rep.images, image_degree, images)
    p = group.field.p
    n = kernel.order()
    assert group.order() == n * image_order
    while n % p == 0:
        n //= p
    assert n == 1, "p-core kernel must be a p-group"
    mats = [rep.perm_to_matrix(x) for x in kernel.gens]
    out = MatrixGroup(group.field, group.d, mats, degree_limit=group.degree_limit)
    out._perm_rep = type(rep)(rep.field, rep.d, rep.degree, kernel.gens)
    out._group = kernel
    if validate and kernel.order() > 1:
        # the induced image group must itself have trivial p-core
        from .matfq import direct_sum as mat_direct_sum

        image_mats = []
        for per_factor in blocks:
            m = per_factor[0]
            for b in per_factor[1:]:
                m = mat_direct_sum(m, b)
            image_mats.append(m)
        image_group = MatrixGroup(group.field, group.d, image_mats)
        assert p_core(image_group, validate=False).order() == 1
    return out
