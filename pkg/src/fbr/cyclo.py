"""Exact arithmetic in cyclotomic fields and their residue fields.

A value at level n is a rational polynomial in a fixed primitive n-th
root of unity zeta, reduced modulo the n-th cyclotomic polynomial, so
the coefficient vector of length phi(n) is a normal form and equality
is coefficientwise.  Reduction modulo a prime ideal above p lands in
the finite field F_p[x]/(factor) for an irreducible factor of the
cyclotomic polynomial mod p.

No floating point is used anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InputError, InvariantViolationError, NotIntegralAtPError

# largest p^d for exhaustive factor search before the randomized
# (seeded, canonically post-sorted) equal-degree split takes over
_EXHAUSTIVE_CANDIDATE_CAP = 65536


def euler_phi(n):
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_int(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_int(num, den):
    """Exact division of integer polynomials with monic-ish divisor."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 0)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1] != 0:
            raise InvariantViolationError("inexact integer polynomial division")
        c //= den[-1]
        q[i] = c
        if c:
            for j, y in enumerate(den):
                num[i + j] -= c * y
    return q, _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of the n-th cyclotomic polynomial, ascending, monic.

    Computed by dividing x^n - 1 by the cyclotomic polynomials of the
    proper divisors of n.
    """
    if n < 1:
        raise InputError("cyclotomic polynomial needs n >= 1")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            if rem:
                raise InvariantViolationError("cyclotomic recursion left a remainder")
    return tuple(num)


@lru_cache(maxsize=None)
def _level_data(n):
    """Reduction data at level n: phi(n), the cyclotomic polynomial, the
    reduction of x^k for k up to max(n-1, 2 phi(n) - 2)."""
    poly = cyclotomic_polynomial(n)
    phi = len(poly) - 1
    top = max(n - 1, 2 * phi - 2)
    rows = []
    cur = [Fraction(1)] + [Fraction(0)] * (phi - 1) if phi else []
    for k in range(top + 1):
        if k == 0:
            rows.append(tuple(cur))
            continue
        shifted = [Fraction(0)] + cur[:]
        if len(shifted) > phi:
            lead = shifted.pop()
            if lead:
                for i in range(phi):
                    shifted[i] -= lead * poly[i]
        cur = shifted
        rows.append(tuple(cur))
    return phi, poly, tuple(rows)


class Cyclotomic:
    """Element of Q(zeta_n) in the power basis 1, zeta, ..., zeta^(phi(n)-1)."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level, coeffs):
        self.level = level
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_rational(cls, level, value):
        phi = _level_data(level)[0]
        coeffs = [Fraction(value)] + [Fraction(0)] * (phi - 1)
        return cls(level, coeffs)

    @classmethod
    def zero(cls, level):
        return cls.from_rational(level, 0)

    @classmethod
    def one(cls, level):
        return cls.from_rational(level, 1)

    @classmethod
    def zeta_power(cls, level, k):
        phi, _, rows = _level_data(level)
        return cls(level, rows[k % level])

    def _check(self, other):
        if self.level != other.level:
            raise InputError(
                f"level mismatch: {self.level} vs {other.level}"
            )

    def __add__(self, other):
        self._check(other)
        return Cyclotomic(self.level,
                          [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return Cyclotomic(self.level,
                          [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Cyclotomic(self.level, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.level, [a * other for a in self.coeffs])
        self._check(other)
        phi, _, rows = _level_data(self.level)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:phi])
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                row = rows[k]
                for i in range(phi):
                    out[i] += c * row[i]
        return Cyclotomic(self.level, out)

    __rmul__ = __mul__

    def scalar_div(self, q):
        q = Fraction(q)
        if q == 0:
            raise InputError("division by zero scalar")
        return Cyclotomic(self.level, [a / q for a in self.coeffs])

    def conj(self):
        """Complex conjugation zeta -> zeta^-1."""
        if self.level <= 2:
            return self
        return self.galois(self.level - 1)

    def galois(self, t):
        """Galois map zeta -> zeta^t for t coprime to the level."""
        n = self.level
        if gcd(t, n) != 1:
            raise InputError(f"galois exponent {t} not coprime to {n}")
        _, _, rows = _level_data(n)
        out = None
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            term = [a * c for c in rows[(i * t) % n]]
            out = term if out is None else [x + y for x, y in zip(out, term)]
        if out is None:
            return Cyclotomic.zero(n)
        return Cyclotomic(n, out)

    def inverse(self):
        """Multiplicative inverse via extended gcd against the cyclotomic
        polynomial.  Internal helper for exact linear algebra."""
        if self.is_zero():
            raise InputError("inverse of zero")
        n = self.level
        _, poly, _ = _level_data(n)
        f = [Fraction(c) for c in poly]
        g = list(self.coeffs)
        inv = _poly_modular_inverse(g, f)
        phi = len(poly) - 1
        inv = inv + [Fraction(0)] * (phi - len(inv))
        return Cyclotomic(n, inv[:phi])

    def is_zero(self):
        return all(a == 0 for a in self.coeffs)

    def is_rational(self):
        return all(a == 0 for a in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise InputError("value is not rational")
        return self.coeffs[0]

    def is_integral(self):
        return all(a.denominator == 1 for a in self.coeffs)

    def is_integer(self):
        return self.is_rational() and self.coeffs[0].denominator == 1

    def __eq__(self, other):
        return (isinstance(other, Cyclotomic)
                and self.level == other.level and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.level, self.coeffs))

    def to_json(self):
        return {"level": self.level,
                "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc):
        coeffs = [Fraction(s) for s in doc["coeffs"]]
        return cls(int(doc["level"]), coeffs)

    def __repr__(self):
        return f"Cyclotomic({self.level}, {render_cyclotomic(self)!r})"


def _poly_modular_inverse(g, f):
    """Inverse of g modulo f over Q, both as Fraction coefficient lists."""

    def trim(c):
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        return c

    def pmul(a, b):
        if not a or not b:
            return []
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(out)

    def divmod_q(a, b):
        a = list(a)
        q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
        inv_lead = 1 / b[-1]
        for i in range(len(a) - len(b), -1, -1):
            c = a[i + len(b) - 1] * inv_lead
            q[i] = c
            if c:
                for j, y in enumerate(b):
                    a[i + j] -= c * y
        return trim(q), trim(a)

    r0, r1 = trim(f), trim(g)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_q(r0, r1)
        qs = pmul(q, s1)
        m = max(len(s0), len(qs))
        new_s = [(s0[i] if i < len(s0) else Fraction(0))
                 - (qs[i] if i < len(qs) else Fraction(0)) for i in range(m)]
        r0, r1 = r1, r
        s0, s1 = s1, trim(new_s)
    if len(r0) != 1:
        raise InvariantViolationError("element not invertible modulo the level polynomial")
    # invariant: s0 * g == r0 mod f, and r0 is the (constant) gcd
    c = r0[0]
    return [a / c for a in s0]


def render_cyclotomic(x):
    """Human form: polynomial in z with rational coefficients, e.g. 'z^2+1'."""
    parts = []
    for k in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[k]
        if c == 0:
            continue
        if k == 0:
            mon = ""
        elif k == 1:
            mon = "z"
        else:
            mon = f"z^{k}"
        mag = abs(c)
        if mag == 1 and mon:
            body = mon
        else:
            frac = f"{mag.numerator}" if mag.denominator == 1 else \
                f"{mag.numerator}/{mag.denominator}"
            body = f"{frac}*{mon}" if mon else frac
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first_body = parts[0]
    text = (first_sign if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += sign + body
    return text


# ---------------------------------------------------------------------------
# finite field arithmetic mod (p, factor)


def _pm_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pm_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pm_trim(out)


def _pm_divmod(a, b, p):
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], -1, p)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv_lead) % p
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return _pm_trim(q), _pm_trim(a)


def _pm_mod(a, b, p):
    return _pm_divmod(a, b, p)[1]


def _pm_gcd(a, b, p):
    a, b = _pm_trim(a), _pm_trim(b)
    while b:
        a, b = b, _pm_mod(a, b, p)
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = [(c * inv_lead) % p for c in a]
    return a


def _pm_pow_mod(base, e, mod, p):
    result = [1]
    base = _pm_mod(base, mod, p)
    while e:
        if e & 1:
            result = _pm_mod(_pm_mul(result, base, p), mod, p)
        base = _pm_mod(_pm_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _pm_add(a, b, p):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return _pm_trim([(x + y) % p for x, y in zip(a, b)])


def _pm_sub(a, b, p):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return _pm_trim([(x - y) % p for x, y in zip(a, b)])


@dataclass(frozen=True)
class PrimeIdealData:
    """Prime of Z[zeta_n] above p, named by an irreducible factor of the
    n-th cyclotomic polynomial mod p."""

    p: int
    level: int
    factor: tuple
    degree: int

    def to_json(self):
        return {"p": self.p, "level": self.level, "factor": list(self.factor)}


class FiniteFieldElem:
    """Residue in F_p[x]/(factor), coefficients ascending, length = degree."""

    __slots__ = ("p", "factor", "coeffs")

    def __init__(self, p, factor, coeffs):
        self.p = p
        self.factor = tuple(factor)
        d = len(self.factor) - 1
        coeffs = list(coeffs)[: d] + [0] * max(0, d - len(coeffs))
        self.coeffs = tuple(c % p for c in coeffs[:d]) if d else ()

    @classmethod
    def from_int(cls, p, factor, value):
        return cls(p, factor, [value % p])

    def __add__(self, other):
        return FiniteFieldElem(self.p, self.factor,
                               _pm_add(list(self.coeffs), list(other.coeffs), self.p))

    def __mul__(self, other):
        prod = _pm_mul(list(self.coeffs), list(other.coeffs), self.p)
        return FiniteFieldElem(self.p, self.factor,
                               _pm_mod(prod, list(self.factor), self.p))

    def __pow__(self, e):
        out = _pm_pow_mod(list(self.coeffs), e, list(self.factor), self.p)
        return FiniteFieldElem(self.p, self.factor, out)

    def __eq__(self, other):
        return (isinstance(other, FiniteFieldElem) and self.p == other.p
                and self.factor == other.factor and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.p, self.factor, self.coeffs))

    def is_one(self):
        return self.coeffs[:1] == (1,) and all(c == 0 for c in self.coeffs[1:])

    def to_json(self):
        return {"p": self.p, "factor": list(self.factor), "coeffs": list(self.coeffs)}

    def __repr__(self):
        return f"FiniteFieldElem(p={self.p}, coeffs={list(self.coeffs)})"


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _multiplicative_order(p, m):
    if m == 1:
        return 1
    t = p % m
    o = 1
    cur = t
    while cur != 1:
        cur = (cur * t) % m
        o += 1
    return o


def _candidate_polys(p, d):
    """Monic candidates x^d - sum t_i x^i in canonical search order.

    The order makes the least linear factor x - r the one with the least
    root r, matching the deterministic factor choice used throughout.
    """
    import itertools
    for ts in itertools.product(range(p), repeat=d):
        # ts = (t_{d-1}, ..., t_0)
        coeffs = [(-t) % p for t in reversed(ts)] + [1]
        yield tuple(coeffs)


def _equal_degree_split(f, d, p, rng):
    """Cantor-Zassenhaus style split of a squarefree product of
    irreducible degree-d factors.  Randomized, but callers sort the
    final factor list so the output stays canonical."""
    deg = len(f) - 1
    if deg == d:
        return [tuple(f)]
    while True:
        u = [rng.randrange(p) for _ in range(deg)]
        u = _pm_trim(u)
        if len(u) < 1:
            continue
        if p == 2:
            trace = list(u)
            acc = list(u)
            for _ in range(d - 1):
                acc = _pm_mod(_pm_mul(acc, acc, p), f, p)
                trace = _pm_add(trace, acc, p)
            g = _pm_gcd(trace, f, p)
        else:
            e = (p ** d - 1) // 2
            w = _pm_pow_mod(u, e, f, p)
            g = _pm_gcd(_pm_sub(w, [1], p), f, p)
        if 0 < len(g) - 1 < deg:
            q, r = _pm_divmod(f, g, p)
            if r:
                raise InvariantViolationError("split is not a divisor")
            return (_equal_degree_split(g, d, p, rng)
                    + _equal_degree_split(q, d, p, rng))


def factor_cyclotomic_mod_p(n, p):
    """Distinct irreducible factors of the n-th cyclotomic polynomial mod p,
    monic with ascending coefficients, in canonical order.

    For p not dividing n the factors all share degree equal to the
    multiplicative order of p mod n; when p divides n the reduction is a
    power of the cyclotomic polynomial at the p'-part of n, so factoring
    happens there.
    """
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    m = n
    while m % p == 0:
        m //= p
    d = _multiplicative_order(p, m)
    target = [c % p for c in cyclotomic_polynomial(m)]
    target = _pm_trim(target)
    if len(target) - 1 == 0:
        raise InvariantViolationError("degenerate cyclotomic reduction")
    factors = []
    remaining = list(target)
    if len(remaining) - 1 == d:
        factors = [tuple(remaining)]
    elif p ** d <= _EXHAUSTIVE_CANDIDATE_CAP:
        while len(remaining) - 1 > 0:
            found = None
            for cand in _candidate_polys(p, d):
                q, r = _pm_divmod(remaining, list(cand), p)
                if not r:
                    found = (cand, q)
                    break
            if found is None:
                raise InvariantViolationError("no factor of the expected degree")
            factors.append(found[0])
            remaining = found[1]
    else:
        rng = random.Random(p * 1000003 + n)
        factors = [tuple(f) for f in _equal_degree_split(remaining, d, p, rng)]
    factors = sorted(set(factors), key=lambda f: _factor_sort_key(f, p))
    check = [1]
    for f in factors:
        check = _pm_mul(check, list(f), p)
    if check != target:
        raise InvariantViolationError("factor product check failed")
    return factors


def _factor_sort_key(f, p):
    # same order the exhaustive search uses: degree, then the subtracted
    # tail coefficients from the top down
    d = len(f) - 1
    return (d, tuple((-f[i]) % p for i in range(d - 1, -1, -1)))


def prime_ideals(p, n):
    """All primes of Z[zeta_n] above p, one per irreducible factor."""
    return [PrimeIdealData(p, n, f, len(f) - 1)
            for f in factor_cyclotomic_mod_p(n, p)]


def find_prime_ideal(p, n):
    """The canonical (least-factor) prime of Z[zeta_n] above p."""
    return prime_ideals(p, n)[0]


def reduce_mod(x, ideal):
    """Image of a cyclotomic value in the residue field of the ideal.

    Requires every coefficient denominator to be coprime to p.
    """
    p = ideal.p
    coeffs = []
    for c in x.coeffs:
        if c.denominator % p == 0:
            raise NotIntegralAtPError(
                f"denominator {c.denominator} not invertible mod {p}"
            )
        coeffs.append((c.numerator * pow(c.denominator, -1, p)) % p)
    reduced = _pm_mod(_pm_trim(coeffs), list(ideal.factor), p)
    return FiniteFieldElem(p, ideal.factor, reduced)
