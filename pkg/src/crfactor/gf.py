"""Finite field arithmetic F_{p^f} and p-adic valuation utilities.

Field elements are plain Python integers: the element with polynomial
coordinates (c_0, ..., c_{f-1}) in the power basis of the modulus root is
encoded as sum(c_i * p**i).  This encoding is the wire format everywhere
(JSON files, reports), so all modules share it.

Small fields get lookup tables.  For q <= PAIR_TABLE_LIMIT the field
carries dense q x q add/mul tables (as nested tuples for scalar code and
as numpy arrays for the batched vector-action engine in grp).  For
q <= LOG_TABLE_LIMIT multiplicative exp/log tables give fast mul/inv.
Beyond that, arithmetic falls back to polynomial operations; fields with
p**f >= 2**31 are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    DivisionByZero,
    FieldTooLarge,
    InputError,
    NotPrime,
    ReduciblePolynomial,
)

FIELD_SIZE_LIMIT = 2**31
PAIR_TABLE_LIMIT = 1024
LOG_TABLE_LIMIT = 2**16

Rational = Fraction


def is_prime(n: int) -> bool:
    """Deterministic primality test for n < 2**31 (trial division)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> dict[int, int]:
    """Factor n >= 1 by trial division, returning {prime: exponent}."""
    if n < 1:
        raise InputError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def vp(n: int, p: int) -> int:
    """Exponent of p in n (n != 0)."""
    if n == 0:
        raise InputError("v_p(0) is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n >= 0."""
    s = 0
    while n:
        s += n % p
        n //= p
    return s


@dataclass(frozen=True)
class Valuation:
    """A p-adic valuation v together with the corresponding power p**v."""

    value: int
    p_part: int


def legendre_valuation(r: int, p: int) -> Valuation:
    """Valuation of r! at the prime p via the digit-sum formula.

    Returns (r - s_p(r)) / (p - 1) where s_p(r) is the base-p digit sum
    of r; this equals sum(floor(r / p**k) for k >= 1).
    """
    if r < 1:
        raise InputError("r must be a positive integer")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    v = (r - digit_sum(r, p)) // (p - 1)
    return Valuation(value=v, p_part=p**v)


def is_fermat_prime(p: int) -> bool:
    """True when p is an odd prime with p - 1 a power of two."""
    if p < 3 or not is_prime(p):
        return False
    m = p - 1
    return m & (m - 1) == 0


def epsilon_q(p: int, f: int) -> Fraction:
    """The exact rational epsilon for the field of size p**f.

    4/3 when p = 2 and f is even, p/(p-1) when p is a Fermat prime,
    and 1 otherwise.  Always between 1 and 3/2.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise InputError("f must be a positive integer")
    if p == 2:
        return Fraction(4, 3) if f % 2 == 0 else Fraction(1)
    if is_fermat_prime(p):
        return Fraction(p, p - 1)
    return Fraction(1)


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient lists, ascending, no zero padding)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    lead_inv = pow(m[-1], p - 2, p)
    while len(a) > dm:
        c = (a[-1] * lead_inv) % p
        shift = len(a) - 1 - dm
        if c:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
        _poly_trim(a)
        if not a:
            break
    return a


def _poly_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _poly_trim(out)


def _is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test: m of degree f is irreducible over F_p iff
    x**(p**f) == x mod m and gcd(x**(p**(f/l)) - x, m) = 1 for prime l | f."""
    f = len(m) - 1
    if f < 1:
        return False
    if f == 1:
        return True
    x = [0, 1]
    for ell in prime_factors(f):
        h = _poly_powmod(x, p ** (f // ell), m, p)
        if len(_poly_gcd(_poly_sub(h, x, p), m, p)) - 1 != 0:
            return False
    h = _poly_powmod(x, p**f, m, p)
    return _poly_sub(h, x, p) == []


def _encode(coeffs: list[int], p: int) -> int:
    e = 0
    for c in reversed(coeffs):
        e = e * p + c
    return e


def _decode(e: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        out.append(e % p)
        e //= p
    return out


class Field:
    """The finite field F_{p^f} with a fixed irreducible modulus.

    Immutable after construction; all operations are pure, so instances
    are safe to share across threads.
    """

    def __init__(
        self,
        p: int,
        f: int,
        modulus: list[int],
        primitive_flag: bool,
        build_tables: bool = True,
    ):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = tuple(modulus)
        self.primitive_flag = primitive_flag
        self.zero = 0
        self.one = 1
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add_rows: tuple[tuple[int, ...], ...] | None = None
        self._mul_rows: tuple[tuple[int, ...], ...] | None = None
        self._np_add: np.ndarray | None = None
        self._np_mul: np.ndarray | None = None
        if build_tables and self.q <= LOG_TABLE_LIMIT:
            self._build_log_tables()
        if build_tables and self.q <= PAIR_TABLE_LIMIT:
            self._build_pair_tables()

    # -- construction -------------------------------------------------

    def __repr__(self):
        return f"Field(p={self.p}, f={self.f})"

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.f == other.f
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def _build_log_tables(self):
        g = self._find_generator()
        exp = [1] * (self.q - 1)
        e = 1
        for i in range(1, self.q - 1):
            e = self._mul_poly(e, g)
            exp[i] = e
        log = [0] * self.q
        for i, e in enumerate(exp):
            log[e] = i
        self._exp = exp
        self._log = log

    def _find_generator(self) -> int:
        if self.primitive_flag:
            return self.p if self.f > 1 else self._x_residue()
        factors = prime_factors(self.q - 1)
        for cand in range(2, self.q):
            if all(
                self.pow(cand, (self.q - 1) // ell) != 1 for ell in factors
            ):
                return cand
        return 1  # q = 2

    def _x_residue(self) -> int:
        # residue of the polynomial x modulo a linear modulus
        return (-self.modulus[0]) % self.p

    def _build_pair_tables(self):
        q, p, f = self.q, self.p, self.f
        digits = np.arange(q, dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int64)
        rest = digits.copy()
        weight = 1
        for _ in range(f):
            di = rest % p
            add += ((di[:, None] + di[None, :]) % p) * weight
            rest //= p
            weight *= p
        mul = np.zeros((q, q), dtype=np.int64)
        assert self._exp is not None and self._log is not None
        logv = np.array(self._log, dtype=np.int64)
        expv = np.array(self._exp, dtype=np.int64)
        if q > 1:
            idx = (logv[1:, None] + logv[None, 1:]) % (q - 1)
            mul[1:, 1:] = expv[idx]
        self._np_add = add.astype(np.int32)
        self._np_mul = mul.astype(np.int32)
        self._add_rows = tuple(tuple(int(v) for v in row) for row in self._np_add)
        self._mul_rows = tuple(tuple(int(v) for v in row) for row in self._np_mul)

    # -- scalar arithmetic ---------------------------------------------

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise InputError(f"{a!r} is not an element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        if self._add_rows is not None:
            return self._add_rows[a][b]
        p = self.p
        out, w = 0, 1
        while a or b:
            out += ((a + b) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out, w = 0, 1
        while a:
            out += (-a % p) * w
            a //= p
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_poly(self, a: int, b: int) -> int:
        pa = _decode(a, self.p, self.f)
        pb = _decode(b, self.p, self.f)
        prod = _poly_mod(_poly_mul(pa, pb, self.p), list(self.modulus), self.p)
        return _encode(prod, self.p)

    def mul(self, a: int, b: int) -> int:
        if self._mul_rows is not None:
            return self._mul_rows[a][b]
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: int) -> int:
        """The automorphism a -> a**p; fixes the prime subfield."""
        return self.pow(a, self.p)

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero("order of zero")
        n = self.q - 1
        for ell, k in prime_factors(n).items():
            for _ in range(k):
                if self.pow(a, n // ell) == 1:
                    n //= ell
                else:
                    break
        return n

    # -- numpy views for the batched engines ----------------------------

    @property
    def np_add(self) -> np.ndarray | None:
        return self._np_add

    @property
    def np_mul(self) -> np.ndarray | None:
        return self._np_mul

    def elements(self):
        return range(self.q)


@lru_cache(maxsize=None)
def _default_modulus(p: int, f: int) -> tuple[tuple[int, ...], bool]:
    """Lexicographically smallest primitive monic polynomial of degree f.

    Coefficient lists are compared low-degree-first.  Primitivity of the
    root is tested through a throwaway field over each irreducible
    candidate.
    """
    for enc in range(p**f):
        coeffs = _decode(enc, p, f) + [1]
        if not _is_irreducible(coeffs, p):
            continue
        trial = Field(p, f, coeffs, primitive_flag=False, build_tables=False)
        x = trial._x_residue() if f == 1 else p
        if x != 0 and trial.element_order(x) == p**f - 1:
            return tuple(coeffs), True
    raise InputError(f"no primitive polynomial of degree {f} over F_{p}")


@lru_cache(maxsize=None)
def _default_field(p: int, f: int) -> Field:
    coeffs, primitive = _default_modulus(p, f)
    return Field(p, f, list(coeffs), primitive_flag=primitive)


def field_create(p: int, f: int, modulus: list[int] | None = None) -> Field:
    """Build F_{p^f}; select the default primitive modulus when omitted."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise InputError("f must be a positive integer")
    if p**f >= FIELD_SIZE_LIMIT:
        raise FieldTooLarge(f"{p}^{f} exceeds the field size limit 2^31")
    if modulus is None:
        return _default_field(p, f)
    coeffs = [c % p for c in modulus]
    if len(coeffs) != f + 1 or coeffs[f] == 0:
        raise InputError(f"modulus must have degree exactly {f}")
    if coeffs[-1] != 1:
        lead_inv = pow(coeffs[-1], p - 2, p)
        coeffs = [(c * lead_inv) % p for c in coeffs]
    if not _is_irreducible(coeffs, p):
        raise ReduciblePolynomial(
            f"modulus {modulus} is reducible over F_{p}"
        )
    field = Field(p, f, coeffs, primitive_flag=False)
    x = field._x_residue() if f == 1 else p
    if x != 0 and field.element_order(x) == p**f - 1:
        field.primitive_flag = True
    return field


def subfield_embedding(small: Field, big: Field) -> dict[int, int]:
    """Element map for F_{p^f} -> F_{p^{fk}} (same p, f | fk).

    Sends the small field's modulus root to its lexicographically
    smallest root in the big field, so the map is deterministic.
    """
    if small.p != big.p or big.f % small.f != 0:
        raise InputError(
            f"no embedding of F_{small.p}^{small.f} into F_{big.p}^{big.f}"
        )
    if small.f == 1:
        return {a: a for a in range(small.p)}
    root = None
    for cand in range(big.q):
        acc = 0
        power = 1
        for c in small.modulus:
            if c:
                acc = big.add(acc, big.mul(c % big.q, power))
            power = big.mul(power, cand)
        if acc == 0:
            root = cand
            break
    if root is None:
        raise InputError("embedding root not found")
    table = {}
    for a in range(small.q):
        coeffs = _decode(a, small.p, small.f)
        img = 0
        power = 1
        for c in coeffs:
            if c:
                img = big.add(img, big.mul(c, power))
            power = big.mul(power, root)
        table[a] = img
    return table
