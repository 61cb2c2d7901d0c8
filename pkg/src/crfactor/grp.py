"""Permutation-group engine for matrix groups acting on nonzero vectors.

A matrix group over F_q in dimension d acts faithfully on the q^d - 1
nonzero row vectors; vectors are numbered by integer encoding (vector
(v_0, ..., v_{d-1}) gets point sum(v_i q^i) - 1), so the action order is
reproducible.  Permutations are numpy int32 arrays with composition
"apply p then q" being q[p].

The stabilizer chain is a deterministic incremental Schreier-Sims:
base points are chosen greedily as first moved points, transversals are
Schreier vectors (walks are re-multiplied on demand, never stored as
whole permutations), and every level keeps a queue of Schreier-generator
pairs still to be verified.  An optional base cap diverts residues that
fix every point below the cap into a collector; that single hook is what
computes kernels of actions.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import (
    DegreeTooLarge,
    IndexTooLarge,
    InputError,
    NotNormal,
)
from .gf import Field
from .matfq import Matrix

Perm = np.ndarray

DEFAULT_DEGREE_LIMIT = 2**20
DEFAULT_EXHAUSTIVE_LIMIT = 10**5


def pmul(p: Perm, q: Perm) -> Perm:
    """Composition: apply p, then q."""
    return q[p]


def pinv(p: Perm) -> Perm:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


def conjugate(x: Perm, g: Perm, ginv: Perm) -> Perm:
    """g^-1 * x * g."""
    return pmul(pmul(ginv, x), g)


class _Level:
    __slots__ = (
        "beta",
        "gens",
        "inv_gens",
        "tree_gens",
        "tree_inv",
        "sv",
        "depth",
        "orbit_list",
        "pending",
    )

    def __init__(self, beta: int):
        self.beta = beta
        self.gens: list[Perm] = []
        self.inv_gens: list[Perm] = []
        # the Schreier tree may use extra "shortcut" elements of <gens>
        # so that transversal walks stay logarithmically short
        self.tree_gens: list[Perm] = []
        self.tree_inv: list[Perm] = []
        self.sv: dict[int, tuple[int, int] | None] = {beta: None}
        self.depth: dict[int, int] = {beta: 0}
        self.orbit_list: list[int] = [beta]
        self.pending: deque[tuple[int, int]] = deque()

    def tree_threshold(self) -> int:
        return max(12, 2 * len(self.tree_gens))


class BSGS:
    """Base and strong generating set with on-demand transversal walks.

    ``cap`` restricts base points to the range [0, cap); any residue
    fixing all of [0, cap) is handed to ``collector`` instead of
    extending the chain.  With cap=None this is the plain deterministic
    Schreier-Sims.
    """

    def __init__(
        self,
        degree: int,
        cap: int | None = None,
        collector: Callable[[Perm], None] | None = None,
    ):
        self.degree = degree
        self.cap = cap
        self.collector = collector
        self.levels: list[_Level] = []
        self._id = np.arange(degree, dtype=np.int32)

    # -- basic queries ---------------------------------------------------

    def order(self) -> int:
        n = 1
        for lev in self.levels:
            n *= len(lev.orbit_list)
        return n

    def base(self) -> list[int]:
        return [lev.beta for lev in self.levels]

    def is_identity(self, p: Perm) -> bool:
        return bool((p == self._id).all())

    def _first_moved(self, p: Perm) -> int:
        return int(np.argmax(p != self._id))

    def sift(self, p: Perm, start: int = 0) -> tuple[Perm | None, int]:
        """Strip p through the chain from the given level.

        Returns (None, k) when p reduces to the identity, else the
        non-identity residue and the level index where sifting stopped
        (== len(levels) when the residue fixes every base point).
        """
        w = p
        for i in range(start, len(self.levels)):
            lev = self.levels[i]
            pt = int(w[lev.beta])
            if pt == lev.beta:
                continue
            if pt not in lev.sv:
                return w, i
            while pt != lev.beta:
                gi, pre = lev.sv[pt]  # type: ignore[misc]
                w = pmul(w, lev.tree_inv[gi])
                pt = pre
        if self.is_identity(w):
            return None, len(self.levels)
        return w, len(self.levels)

    def contains(self, p: Perm) -> bool:
        residue, _ = self.sift(p)
        return residue is None

    def transversal(self, level: int, pt: int) -> Perm | None:
        """Element u with beta^u = pt, rebuilt from the Schreier vector."""
        lev = self.levels[level]
        word: list[int] = []
        while pt != lev.beta:
            gi, pre = lev.sv[pt]  # type: ignore[misc]
            word.append(gi)
            pt = pre
        u: Perm | None = None
        for gi in reversed(word):
            g = lev.tree_gens[gi]
            u = g if u is None else pmul(u, g)
        return u

    # -- construction ----------------------------------------------------

    def extend(self, p: Perm) -> bool:
        """Adjoin p to the generated group; True if the group grew."""
        if self.is_identity(p):
            return False
        w, lev_idx = self.sift(p)
        if w is None:
            return False
        if lev_idx == len(self.levels):
            if self._divert(w):
                return True
            self.levels.append(_Level(self._first_moved(w)))
        winv = pinv(w)
        for i in range(lev_idx + 1):
            self._add_gen_to_level(i, w, winv)
        self._complete(lev_idx)
        return True

    def _divert(self, w: Perm) -> bool:
        if self.cap is None:
            return False
        if self._first_moved(w) >= self.cap:
            if self.collector is not None:
                self.collector(w)
            return True
        return False

    def _add_gen_to_level(self, i: int, g: Perm, ginv: Perm):
        lev = self.levels[i]
        k = len(lev.gens)
        lev.gens.append(g)
        lev.inv_gens.append(ginv)
        lev.pending.extend((pt, k) for pt in lev.orbit_list)
        frontier = []
        for pt in list(lev.orbit_list):
            im = int(g[pt])
            if im not in lev.sv:
                self._orbit_add(lev, im, k, pt, frontier)
        self._orbit_bfs(lev, frontier)

    def _orbit_add(self, lev: _Level, pt: int, gi: int, pre: int, frontier: list[int]):
        lev.sv[pt] = (gi, pre)
        lev.orbit_list.append(pt)
        lev.pending.extend((pt, j) for j in range(len(lev.gens)))
        frontier.append(pt)

    def _orbit_bfs(self, lev: _Level, frontier: list[int]):
        while frontier:
            pt = frontier.pop()
            for gi, g in enumerate(lev.gens):
                im = int(g[pt])
                if im not in lev.sv:
                    self._orbit_add(lev, im, gi, pt, frontier)

    def _schreier_gen(self, level: int, pt: int, gi: int) -> Perm:
        lev = self.levels[level]
        s = lev.gens[gi]
        g = self.transversal(level, pt)
        g = s if g is None else pmul(g, s)
        tpt = int(s[pt])
        while tpt != lev.beta:
            tgi, pre = lev.sv[tpt]  # type: ignore[misc]
            g = pmul(g, lev.inv_gens[tgi])
            tpt = pre
        return g

    def _complete(self, start: int):
        i = start
        while i >= 0:
            found = self._check_level(i)
            if found is None:
                i -= 1
                continue
            w, j = found
            if j == len(self.levels):
                self.levels.append(_Level(self._first_moved(w)))
            winv = pinv(w)
            for k in range(i + 1, j + 1):
                self._add_gen_to_level(k, w, winv)
            i = j

    def _check_level(self, i: int) -> tuple[Perm, int] | None:
        lev = self.levels[i]
        while lev.pending:
            pt, gi = lev.pending.popleft()
            g = self._schreier_gen(i, pt, gi)
            if self.is_identity(g):
                continue
            w, j = self.sift(g, i + 1)
            if w is None:
                continue
            if j == len(self.levels) and self._divert(w):
                continue
            lev.pending.appendleft((pt, gi))
            return w, j
        return None

    # -- enumeration -------------------------------------------------------

    def elements(self) -> Iterator[Perm]:
        """Every group element, as products of transversal elements."""

        def rec(level: int) -> Iterator[Perm | None]:
            if level == len(self.levels):
                yield None
                return
            for rest in rec(level + 1):
                for pt in self.levels[level].orbit_list:
                    u = self.transversal(level, pt)
                    if rest is None:
                        yield u
                    elif u is None:
                        yield rest
                    else:
                        yield pmul(rest, u)

        for p in rec(0):
            yield self._id.copy() if p is None else p


class PermGroup:
    """A permutation group given by generators, with a lazy BSGS."""

    def __init__(
        self,
        degree: int,
        gens: Sequence[Perm],
        chain: BSGS | None = None,
        known_order: int | None = None,
    ):
        self.degree = degree
        self._id = np.arange(degree, dtype=np.int32)
        uniq: list[Perm] = []
        seen = set()
        for g in gens:
            g = np.asarray(g, dtype=np.int32)
            key = g.tobytes()
            if key in seen or (g == self._id).all():
                continue
            seen.add(key)
            uniq.append(g)
        self.gens = uniq
        self._inv_gens: list[Perm] | None = None
        self._chain = chain
        self._order = known_order

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, [])

    @property
    def chain(self) -> BSGS:
        if self._chain is None:
            chain = BSGS(self.degree)
            for g in self.gens:
                chain.extend(g)
            self._chain = chain
        return self._chain

    @property
    def inv_gens(self) -> list[Perm]:
        if self._inv_gens is None:
            self._inv_gens = [pinv(g) for g in self.gens]
        return self._inv_gens

    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    def is_trivial(self) -> bool:
        return not self.gens

    def contains(self, p: Perm) -> bool:
        return self.chain.contains(np.asarray(p, dtype=np.int32))

    def is_abelian(self) -> bool:
        for i, g in enumerate(self.gens):
            for h in self.gens[i + 1 :]:
                if not (pmul(g, h) == pmul(h, g)).all():
                    return False
        return True

    def elements(self, limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> Iterator[Perm]:
        if self.order() > limit:
            raise DegreeTooLarge(
                f"refusing to enumerate {self.order()} elements (limit {limit})"
            )
        return self.chain.elements()

    def random_element(self, rng) -> Perm:
        """Deterministic pseudorandom element: a word in the generators."""
        if not self.gens:
            return self._id.copy()
        length = rng.randrange(3, 12)
        w = self._id
        for _ in range(length):
            g = rng.choice(self.gens)
            if rng.randrange(2):
                g = pinv(g)
            w = pmul(w, g)
        return w

    # -- constructions -----------------------------------------------------

    def normal_closure(self, seeds: Sequence[Perm]) -> "PermGroup":
        """Smallest normal subgroup containing the seeds."""
        chain = BSGS(self.degree)
        sub_gens: list[Perm] = []
        work: list[Perm] = []
        for s in seeds:
            s = np.asarray(s, dtype=np.int32)
            if chain.extend(s):
                sub_gens.append(s)
                work.append(s)
        while work:
            x = work.pop()
            for g, ginv in zip(self.gens, self.inv_gens):
                y = conjugate(x, g, ginv)
                if chain.extend(y):
                    sub_gens.append(y)
                    work.append(y)
        return PermGroup(self.degree, sub_gens, chain=chain)

    def derived_subgroup(self) -> "PermGroup":
        comms = []
        for i, g in enumerate(self.gens):
            for h in self.gens[i + 1 :]:
                comms.append(pmul(pmul(pmul(pinv(g), pinv(h)), g), h))
        return self.normal_closure(comms)

    def is_normal_subgroup(self, n: "PermGroup") -> bool:
        for x in n.gens:
            for g, ginv in zip(self.gens, self.inv_gens):
                if not n.contains(conjugate(x, g, ginv)):
                    return False
        return True

    def coset_action(
        self, n: "PermGroup", index_limit: int = DEFAULT_DEGREE_LIMIT
    ) -> "CosetAction":
        """Action of this group on the right cosets of the normal subgroup n."""
        if not self.is_normal_subgroup(n):
            raise NotNormal("coset action requires a normal subgroup")
        index = self.order() // n.order()
        if index > index_limit:
            raise IndexTooLarge(f"index {index} exceeds limit {index_limit}")
        # label cosets N*x by the image of a fixed N-orbit, then confirm
        # membership by sifting; the key avoids index^2 sift scans
        if n.chain.levels:
            probe = n.chain.levels[0].beta
            orbit = tuple(sorted(n.chain.levels[0].orbit_list))
        else:
            probe = 0
            orbit = (0,)
        orbit_arr = np.array(orbit, dtype=np.int32)

        reps: list[Perm] = [self._id.copy()]
        rep_invs: list[Perm] = [self._id.copy()]
        buckets: dict[bytes, list[int]] = {}

        def key_of(x: Perm) -> bytes:
            img = np.sort(x[orbit_arr])
            return img.tobytes()

        def locate(x: Perm) -> int | None:
            for idx in buckets.get(key_of(x), []):
                if n.contains(pmul(x, rep_invs[idx])):
                    return idx
            return None

        buckets[key_of(reps[0])] = [0]
        images = [np.empty(index, dtype=np.int32) for _ in self.gens]
        queue = deque([0])
        while queue:
            ci = queue.popleft()
            r = reps[ci]
            for gi, g in enumerate(self.gens):
                t = pmul(r, g)
                target = locate(t)
                if target is None:
                    target = len(reps)
                    if target > index:
                        raise InputError("coset enumeration exceeded the index")
                    reps.append(t)
                    rep_invs.append(pinv(t))
                    buckets.setdefault(key_of(t), []).append(target)
                    queue.append(target)
                images[gi][ci] = target
        if len(reps) != index:
            raise InputError(
                f"coset enumeration found {len(reps)} cosets, expected {index}"
            )
        group = PermGroup(index, images)
        return CosetAction(degree=index, images=images, group=group, probe=probe)


class CosetAction:
    """Permutation images of the generators on a coset space."""

    def __init__(self, degree: int, images: list[Perm], group: PermGroup, probe: int):
        self.degree = degree
        self.images = images
        self.group = group
        self.probe = probe


def action_kernel(
    domain_degree: int,
    gens: Sequence[Perm],
    image_degree: int,
    image_gens: Sequence[Perm],
) -> tuple[PermGroup, int]:
    """Kernel of the homomorphism sending gens[i] to image_gens[i].

    Runs Schreier-Sims on the combined action (image points first, so
    base points exhaust the image side); residues that fix the whole
    image side are exactly the kernel elements and are collected into
    their own chain.  Returns (kernel on the domain, image order).
    """
    if len(gens) != len(image_gens):
        raise InputError("generator and image lists differ in length")
    m = image_degree
    kernel_chain = BSGS(domain_degree)
    kernel_gens: list[Perm] = []

    def collect(w: Perm):
        part = (w[m:] - m).astype(np.int32)
        if kernel_chain.extend(part):
            kernel_gens.append(part)

    chain = BSGS(m + domain_degree, cap=m, collector=collect)
    for g, img in zip(gens, image_gens):
        combined = np.concatenate(
            [np.asarray(img, dtype=np.int32), np.asarray(g, dtype=np.int32) + m]
        )
        chain.extend(combined)
    kernel = PermGroup(domain_degree, kernel_gens, chain=kernel_chain)
    return kernel, chain.order()


class PermRep:
    """Faithful action of a matrix group on the nonzero vectors of F_q^d."""

    def __init__(self, field: Field, d: int, degree: int, images: list[Perm]):
        self.field = field
        self.d = d
        self.degree = degree
        self.images = images

    def point_to_vector(self, pt: int) -> tuple[int, ...]:
        n = pt + 1
        q = self.field.q
        out = []
        for _ in range(self.d):
            out.append(n % q)
            n //= q
        return tuple(out)

    def vector_to_point(self, v: Sequence[int]) -> int:
        q = self.field.q
        n = 0
        for x in reversed(v):
            n = n * q + x
        return n - 1

    def matrix_to_perm(self, mat: Matrix) -> Perm:
        return _matrix_action(self.field, self.d, mat, self.degree)

    def perm_to_matrix(self, p: Perm) -> Matrix:
        """Matrix whose vector action is p (rows = images of basis vectors)."""
        q = self.field.q
        rows = []
        for i in range(self.d):
            pt = q**i - 1
            rows.append(self.point_to_vector(int(p[pt])))
        return Matrix.from_rows(self.field, rows)


def _matrix_action(field: Field, d: int, mat: Matrix, degree: int) -> Perm:
    q = field.q
    if field.np_mul is not None:
        return _matrix_action_tables(field, d, mat, degree)
    out = np.empty(degree, dtype=np.int32)
    for pt in range(degree):
        n = pt + 1
        v = []
        for _ in range(d):
            v.append(n % q)
            n //= q
        w = mat.apply(v)
        enc = 0
        for x in reversed(w):
            enc = enc * q + x
        out[pt] = enc - 1
    return out


def _matrix_action_tables(field: Field, d: int, mat: Matrix, degree: int) -> Perm:
    q = field.q
    mul_t = field.np_mul
    add_t = field.np_add
    out = np.empty(degree, dtype=np.int32)
    chunk = 1 << 16
    for lo in range(0, degree, chunk):
        hi = min(lo + chunk, degree)
        enc = np.arange(lo + 1, hi + 1, dtype=np.int64)
        digits = []
        rest = enc.copy()
        for _ in range(d):
            digits.append((rest % q).astype(np.int32))
            rest //= q
        img_enc = np.zeros(hi - lo, dtype=np.int64)
        weight = 1
        for j in range(d):
            acc = None
            for i in range(d):
                mij = mat[i, j]
                if not mij:
                    continue
                term = mul_t[digits[i], mij]
                acc = term if acc is None else add_t[acc, term]
            if acc is not None:
                img_enc += acc.astype(np.int64) * weight
            weight *= q
        out[lo:hi] = img_enc - 1
    return out


class MatrixGroup:
    """A finite matrix group with a lazily attached permutation engine."""

    def __init__(
        self,
        field: Field,
        d: int,
        generators: Sequence[Matrix],
        name: str | None = None,
        degree_limit: int = DEFAULT_DEGREE_LIMIT,
    ):
        for g in generators:
            if g.field != field or g.rows != d or g.cols != d:
                raise InputError("generator shape or field mismatch")
            if not g.is_invertible():
                raise InputError("generators must be invertible")
        self.field = field
        self.d = d
        self.generators = list(generators)
        self.name = name
        self.degree_limit = degree_limit
        self._perm_rep: PermRep | None = None
        self._group: PermGroup | None = None

    def __repr__(self):
        label = self.name or f"subgroup of GL({self.d},{self.field.q})"
        return f"MatrixGroup({label}, {len(self.generators)} gens)"

    @property
    def degree(self) -> int:
        return self.field.q**self.d - 1

    @property
    def perm_rep(self) -> PermRep:
        if self._perm_rep is None:
            degree = self.degree
            if degree > self.degree_limit:
                raise DegreeTooLarge(
                    f"vector action degree {degree} exceeds limit {self.degree_limit}"
                )
            images = [
                _matrix_action(self.field, self.d, g, degree)
                for g in self.generators
            ]
            self._perm_rep = PermRep(self.field, self.d, degree, images)
        return self._perm_rep

    @property
    def group(self) -> PermGroup:
        if self._group is None:
            rep = self.perm_rep
            self._group = PermGroup(rep.degree, rep.images)
        return self._group

    def order(self) -> int:
        if self.d == 1:
            return self._cyclic_order()
        return self.group.order()

    def _cyclic_order(self) -> int:
        # subgroups of GL(1,q) = F_q^* are cyclic; the subgroup generated
        # by several elements has order lcm of their orders, so the huge
        # regular orbit never needs a stabilizer chain
        from math import lcm

        out = 1
        for g in self.generators:
            out = lcm(out, self.field.element_order(g[0, 0]))
        return out

    def is_member(self, mat: Matrix) -> bool:
        if mat.field != self.field or mat.rows != self.d or mat.cols != self.d:
            return False
        if not mat.is_invertible():
            return False
        if self.d == 1:
            return self.field.pow(mat[0, 0], self._cyclic_order()) == 1
        return self.group.contains(self.perm_rep.matrix_to_perm(mat))

    def normal_closure(self, seeds: Sequence[Matrix]) -> "MatrixGroup":
        rep = self.perm_rep
        seed_perms = [rep.matrix_to_perm(m) for m in seeds]
        for m in seeds:
            if not self.is_member(m):
                raise InputError("normal closure seeds must lie in the group")
        sub = self.group.normal_closure(seed_perms)
        return self._subgroup_from_perms(sub)

    def derived_subgroup(self) -> "MatrixGroup":
        sub = self.group.derived_subgroup()
        return self._subgroup_from_perms(sub)

    def _subgroup_from_perms(self, sub: PermGroup) -> "MatrixGroup":
        rep = self.perm_rep
        mats = [rep.perm_to_matrix(p) for p in sub.gens]
        out = MatrixGroup(
            self.field, self.d, mats, degree_limit=self.degree_limit
        )
        out._perm_rep = PermRep(rep.field, rep.d, rep.degree, sub.gens)
        out._group = sub
        return out


def vector_action(group: MatrixGroup) -> PermRep:
    """The faithful permutation representation on nonzero vectors."""
    return group.perm_rep
