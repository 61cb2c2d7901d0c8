"""Bound evaluation and reporting.

Every report carries the exact rational bound (eps_q * d - r) / (p - 1),
its slack against the computed composition count, and a sharpness flag;
no floating point is involved anywhere, so slack == 0 detection is
exact.  A negative slack on a completely reducible group is recorded as
a failing report, never silently accepted.

The sharpened bound replacing r by the number s of absolutely
irreducible components is reported whenever q is not an odd power of 2
(the restriction under which it is claimed).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import NotCompletelyReducible
from .gf import epsilon_q, field_create
from .grp import DEFAULT_DEGREE_LIMIT, MatrixGroup, PermGroup
from .matfq import Matrix
from .modstruct import ModuleDecomposition, decompose
from .structure import composition_tally, flag_image_action, p_core
from . import construct

TSV_COLUMNS = [
    "name", "p", "f", "d", "r", "s", "c_p", "epsilon", "bound", "slack", "sharp",
]


@dataclass
class BoundReport:
    """One verified group: inputs, computed invariants, exact bound data."""

    name: str
    p: int
    f: int
    q: int
    d: int
    r: int
    c_p: int
    epsilon: Fraction
    bound: Fraction
    slack: Fraction
    sharp: bool
    cr_status: str
    s: int | None = None
    s_bound: Fraction | None = None
    s_slack: Fraction | None = None
    corollary: bool = False
    p_core_order: int | None = None
    sampled_simplicity: bool = False
    timings: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        if self.slack < 0:
            return False
        if self.s_slack is not None and self.s_slack < 0:
            return False
        return True

    def to_json_dict(self) -> dict:
        out = {
            "name": self.name,
            "p": self.p,
            "f": self.f,
            "q": self.q,
            "d": self.d,
            "r": self.r,
            "s": self.s,
            "c_p": self.c_p,
            "epsilon": str(self.epsilon),
            "bound": str(self.bound),
            "slack": str(self.slack),
            "sharp": self.sharp,
            "ok": self.ok,
            "cr_status": self.cr_status,
            "corollary": self.corollary,
            "sampled_simplicity": self.sampled_simplicity,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
        }
        if self.s_bound is not None:
            out["s_bound"] = str(self.s_bound)
            out["s_slack"] = str(self.s_slack)
        if self.p_core_order is not None:
            out["p_core_order"] = self.p_core_order
        return out

    def tsv_row(self) -> str:
        vals = [
            self.name,
            self.p,
            self.f,
            self.d,
            self.r,
            "" if self.s is None else self.s,
            self.c_p,
            self.epsilon,
            self.bound,
            self.slack,
            int(self.sharp),
        ]
        return "\t".join(str(v) for v in vals)


def _s_bound_applies(p: int, f: int) -> bool:
    # the sharpening is claimed unless q is an odd power of 2
    return not (p == 2 and f % 2 == 1)


def verify_bound(
    group: MatrixGroup,
    name: str | None = None,
    module: ModuleDecomposition | None = None,
) -> BoundReport:
    """Check c_p(G) <= (eps_q d - r)/(p - 1) for a completely reducible G."""
    field = group.field
    p, f, d = field.p, field.f, group.d
    t0 = time.perf_counter()
    dec = module if module is not None else decompose(group)
    t_dec = time.perf_counter() - t0
    if not dec.completely_reducible:
        raise NotCompletelyReducible(
            "group is not completely reducible; use verify_corollary"
        )
    t0 = time.perf_counter()
    tally = composition_tally(group)
    t_tally = time.perf_counter() - t0
    cp = tally.c_p(p)
    eps = epsilon_q(p, f)
    bound = (eps * d - dec.r) / (p - 1)
    slack = bound - cp
    report = BoundReport(
        name=name or group.name or f"subgroup of GL({d},{field.q})",
        p=p,
        f=f,
        q=field.q,
        d=d,
        r=dec.r,
        c_p=cp,
        epsilon=eps,
        bound=bound,
        slack=slack,
        sharp=slack == 0,
        cr_status="completely_reducible",
        s=dec.s,
        sampled_simplicity=tally.sampled_simplicity,
        timings={"decompose": t_dec, "tally": t_tally},
    )
    if dec.s is not None and _s_bound_applies(p, f):
        report.s_bound = (eps * d - dec.s) / (p - 1)
        report.s_slack = report.s_bound - cp
    return report


def verify_corollary(
    group: MatrixGroup,
    name: str | None = None,
    module: ModuleDecomposition | None = None,
) -> BoundReport:
    """Check c_p(G / O_p(G)) <= (eps_q d - r)/(p - 1) for arbitrary G.

    r counts the simple factors of any composition flag of the natural
    module; the quotient by the p-core is realized as the block action
    on the flag factors, whose kernel is exactly O_p(G).
    """
    field = group.field
    p, f, d = field.p, field.f, group.d
    t0 = time.perf_counter()
    dec = module if module is not None else decompose(group)
    t_dec = time.perf_counter() - t0
    t0 = time.perf_counter()
    core = p_core(group, dec, validate=False)
    core_order = core.order()
    degree, images, _ = flag_image_action(group, dec)
    quotient = PermGroup(degree, images)
    tally = composition_tally(quotient)
    t_tally = time.perf_counter() - t0
    cp = tally.c_p(p)
    eps = epsilon_q(p, f)
    bound = (eps * d - dec.r) / (p - 1)
    slack = bound - cp
    return BoundReport(
        name=name or group.name or f"subgroup of GL({d},{field.q})",
        p=p,
        f=f,
        q=field.q,
        d=d,
        r=dec.r,
        c_p=cp,
        epsilon=eps,
        bound=bound,
        slack=slack,
        sharp=slack == 0,
        cr_status=(
            "completely_reducible"
            if dec.completely_reducible
            else "not_completely_reducible"
        ),
        s=dec.s,
        corollary=True,
        p_core_order=core_order,
        sampled_simplicity=tally.sampled_simplicity,
        timings={"decompose": t_dec, "quotient_tally": t_tally},
    )


# ---------------------------------------------------------------------------
# sharpness suite


@dataclass
class SuiteRow:
    """One tower level checked against its family's exact c_p formula.

    A tower built on a base with c_p(base) = c and r irreducible base
    dimensions satisfies c_p(level n) = (eps_fam * d_n - 1)/(p - 1) with
    eps_fam = (c (p-1) + 1)/r, exactly and at every level.  The family
    ratio equals eps_q precisely for the fields the family was built
    for; there the row is also sharp for the theorem bound, which is
    carried alongside.
    """

    report: BoundReport
    family_epsilon: Fraction
    family_bound: Fraction
    family_slack: Fraction

    @property
    def family_sharp(self) -> bool:
        return self.family_slack == 0

    @property
    def ok(self) -> bool:
        return self.report.ok and self.family_sharp

    def to_json_dict(self) -> dict:
        out = self.report.to_json_dict()
        out["family_epsilon"] = str(self.family_epsilon)
        out["family_bound"] = str(self.family_bound)
        out["family_slack"] = str(self.family_slack)
        out["family_sharp"] = self.family_sharp
        return out

    def tsv_row(self) -> str:
        r = self.report
        vals = [
            r.name,
            r.p,
            r.f,
            r.d,
            r.r,
            "" if r.s is None else r.s,
            r.c_p,
            self.family_epsilon,
            self.family_bound,
            self.family_slack,
            int(self.family_sharp),
        ]
        return "\t".join(str(v) for v in vals)


def _tower_rows(
    base: MatrixGroup,
    p: int,
    base_cp: int,
    label: str,
    max_dim: int,
    degree_limit: int,
) -> list[SuiteRow]:
    family_eps = Fraction(base_cp * (p - 1) + 1, base.d)
    out = []
    level = 1
    g = base
    while True:
        d = g.d
        if d > max_dim or g.field.q**d - 1 > degree_limit:
            break
        report = verify_bound(g, name=f"{label} level {level}")
        fam_bound = (family_eps * d - 1) / (p - 1)
        out.append(
            SuiteRow(
                report=report,
                family_epsilon=family_eps,
                family_bound=fam_bound,
                family_slack=fam_bound - report.c_p,
            )
        )
        level += 1
        next_d = d * p
        if next_d > max_dim or g.field.q**next_d - 1 > degree_limit:
            break
        g = construct.wreath_product(
            g, construct.cyclic_group(p), degree_limit=degree_limit
        )
    return out


def sharpness_suite(
    max_dim: int = 9,
    degree_limit: int = DEFAULT_DEGREE_LIMIT,
) -> list[SuiteRow]:
    """Tower families over every small field, checked for exact slack 0
    against each family's c_p formula (computed by the tally engine,
    never by the recursion).

    Rows: the semilinear tower for q in {2,3,4,5}, the unitary tower
    over F_4, and the extraspecial towers for p in {3,5}, each iterated
    while the dimension and vector-action degree stay within bounds.
    The unitary and extraspecial families (and the semilinear family at
    eps_q = 1) attain the theorem bound itself.
    """
    rows: list[SuiteRow] = []
    for q in (2, 3, 4, 5):
        p, f = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}[q]
        base = construct.gamma_l_1(p, degree_limit=degree_limit)
        if f > 1:
            base = construct.scalar_extension(base, field_create(p, f))
        rows += _tower_rows(
            base, p, 1, f"gammaL1 tower q={q}", max_dim, degree_limit
        )
    gu = construct.gu_3_2(degree_limit=degree_limit)
    rows += _tower_rows(gu, 2, 3, "gu32 tower q=4", max_dim, degree_limit)
    for p in (3, 5):
        base = construct.extraspecial_normalizer(p, degree_limit=degree_limit)
        rows += _tower_rows(
            base, p, 1, f"extraspecial tower p={p}", max_dim, degree_limit
        )
    return rows


# ---------------------------------------------------------------------------
# fuzzing


@dataclass
class FuzzSummary:
    tested: int = 0
    cr: int = 0
    sharp: int = 0
    max_cp: int = 0
    violations: list = dc_field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "tested": self.tested,
            "cr": self.cr,
            "sharp": self.sharp,
            "max_cp": self.max_cp,
            "violations": [r.to_json_dict() for r in self.violations],
        }


def _random_invertible(field, d, rng) -> Matrix:
    while True:
        m = Matrix.from_rows(
            field, [[rng.randrange(field.q) for _ in range(d)] for _ in range(d)]
        )
        if m.is_invertible():
            return m


def _random_group(field, d_max, rng) -> MatrixGroup:
    """One fuzz subject: random generators or a constructor-built group."""
    style = rng.randrange(6)
    d = rng.randrange(1, d_max + 1)
    if style <= 2:
        k = rng.randrange(1, 4)
        gens = [_random_invertible(field, d, rng) for _ in range(k)]
        return MatrixGroup(field, d, gens, name=f"random d={d} q={field.q}")
    if style == 3 and d_max >= 2:
        # reducible style: block upper-triangular thickening of random diag
        d = max(d, 2)
        gens = []
        for _ in range(rng.randrange(1, 3)):
            rows = [[0] * d for _ in range(d)]
            for i in range(d):
                rows[i][i] = rng.randrange(1, field.q)
                for j in range(i + 1, d):
                    rows[i][j] = rng.randrange(field.q)
            gens.append(Matrix.from_rows(field, rows))
        return MatrixGroup(field, d, gens, name=f"triangular d={d} q={field.q}")
    if style == 4 and d_max >= 2:
        # imprimitive style: scalars wreathed by a cycle
        block = MatrixGroup(
            field, 1, [_random_invertible(field, 1, rng)], name="scalar"
        )
        k = rng.choice([k for k in (2, 3) if k <= d_max])
        return construct.wreath_product(block, construct.cyclic_group(k))
    # scalar or diagonal style
    gens = []
    for _ in range(rng.randrange(1, 3)):
        rows = [[0] * d for _ in range(d)]
        for i in range(d):
            rows[i][i] = rng.randrange(1, field.q)
        gens.append(Matrix.from_rows(field, rows))
    return MatrixGroup(field, d, gens, name=f"diagonal d={d} q={field.q}")


def fuzz(
    d_max: int = 3,
    q_list: tuple[int, ...] = (2, 3, 4, 5),
    trials: int = 200,
    seed: int = 0,
) -> FuzzSummary:
    """Random subgroups of GL(d, q): every completely reducible one must
    satisfy the bound.  Deterministic under the seed."""
    rng = random.Random(seed)
    fields = {}
    for q in q_list:
        for p in (2, 3, 5, 7, 11, 13):
            if q % p == 0:
                f = 0
                qq = q
                while qq % p == 0:
                    qq //= p
                    f += 1
                if qq != 1:
                    raise ValueError(f"{q} is not a prime power")
                fields[q] = field_create(p, f)
                break
    summary = FuzzSummary()
    for _ in range(trials):
        q = rng.choice(list(q_list))
        group = _random_group(fields[q], d_max, rng)
        summary.tested += 1
        dec = decompose(group)
        if not dec.completely_reducible:
            continue
        summary.cr += 1
        report = verify_bound(group, module=dec)
        summary.max_cp = max(summary.max_cp, report.c_p)
        if report.sharp:
            summary.sharp += 1
        if not report.ok:
            summary.violations.append(report)
    return summary


def reports_to_tsv(reports) -> str:
    """TSV table for BoundReport or SuiteRow lists (same columns)."""
    lines = ["\t".join(TSV_COLUMNS)]
    lines += [r.tsv_row() for r in reports]
    return "\n".join(lines) + "\n"
