"""Finite abelian fiber groups and Hom(H, A) with explicit value tables.

The fiber A is given by invariant factors.  For a subgroup H of a
permutation group, Hom(H, A) is enumerated through an explicit cyclic
basis of the abelianization of H, so every homomorphism is stored as a
total value table keyed by element index.  Characters of Hom(H, A) are
kept as tuples of root-of-unity exponents, one per homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iterproduct
from math import gcd, lcm

from .errors import InputError, InvariantViolationError, ResourceLimitError

DEFAULT_HOM_CAP = 1_000_000


def _factorint(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def normalize_invariant_factors(factors):
    """Smith-style normalization of an arbitrary cyclic factor list.

    Splits into elementary divisors and recombines so the result is an
    ascending divisibility chain d1 | d2 | ... | dk with every di >= 2.
    """
    primary = {}
    for d in factors:
        d = int(d)
        if d < 1:
            raise InputError(f"cyclic factor must be positive, got {d}")
        for p, e in _factorint(d).items():
            primary.setdefault(p, []).append(e)
    depth = max((len(v) for v in primary.values()), default=0)
    out = []
    for i in range(depth):
        f = 1
        for p, exps in primary.items():
            exps_sorted = sorted(exps, reverse=True)
            if i < len(exps_sorted):
                f *= p ** exps_sorted[i]
        out.append(f)
    out.reverse()
    return tuple(out)


class FiniteAbelianGroup:
    """Finite abelian group C_{d1} x ... x C_{dk} with d1 | d2 | ... | dk.

    Elements are exponent tuples componentwise mod the factors; the
    empty product is the trivial group.
    """

    def __init__(self, invariant_factors):
        factors = tuple(int(d) for d in invariant_factors)
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise InputError(f"invariant factors must divide in turn: {factors}")
        if any(d < 2 for d in factors):
            raise InputError(f"invariant factors must be >= 2: {factors}")
        self.invariant_factors = factors
        self.rank = len(factors)
        self.order = 1
        for d in factors:
            self.order *= d
        self.exponent = factors[-1] if factors else 1

    @classmethod
    def from_factors(cls, factors):
        return cls(normalize_invariant_factors(factors))

    def zero(self):
        return (0,) * self.rank

    def add(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a):
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def scale(self, k, a):
        return tuple((k * x) % d for x, d in zip(a, self.invariant_factors))

    def elements(self):
        return list(iterproduct(*(range(d) for d in self.invariant_factors)))

    def element_order(self, a):
        return lcm(*(d // gcd(d, x) for x, d in zip(a, self.invariant_factors))) \
            if self.rank else 1

    def torsion_elements(self, n):
        """Sorted list of elements killed by n."""
        per_component = []
        for d in self.invariant_factors:
            g = gcd(d, n)
            step = d // g
            per_component.append([j * step for j in range(g)])
        return sorted(iterproduct(*per_component)) if self.rank else [()]

    def tor(self, n):
        """The n-torsion subgroup with its componentwise embedding data."""
        if n < 1:
            raise InputError("tor requires n >= 1")
        aligned = tuple(gcd(d, n) for d in self.invariant_factors)
        multipliers = tuple(d // g for d, g in zip(self.invariant_factors, aligned))
        group = FiniteAbelianGroup(tuple(g for g in aligned if g > 1))
        return TorsionSubgroup(group, aligned, multipliers,
                               tuple(self.torsion_elements(n)))

    def __eq__(self, other):
        return (isinstance(other, FiniteAbelianGroup)
                and self.invariant_factors == other.invariant_factors)

    def __hash__(self):
        return hash(self.invariant_factors)

    def __str__(self):
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"C{d}" for d in self.invariant_factors)

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.invariant_factors)})"


@dataclass(frozen=True)
class TorsionSubgroup:
    group: FiniteAbelianGroup
    aligned_factors: tuple
    multipliers: tuple
    parent_elements: tuple


def parse_fiber_spec(spec):
    """Parse 'A=d1xd2x...' or the bare 'd1xd2x...'; 'A=1' or '1' is trivial."""
    text = spec.strip()
    if text.startswith("A="):
        text = text[2:]
    if text == "1" or text == "":
        return FiniteAbelianGroup(())
    parts = text.split("x")
    try:
        factors = [int(p) for p in parts]
    except ValueError:
        raise InputError(f"bad fiber spec {spec!r}") from None
    return FiniteAbelianGroup.from_factors(factors)


# ---------------------------------------------------------------------------
# abelianization bases


def _pgroup_basis(elems, mul, identity, p, order_of):
    """Cyclic basis of a finite abelian p-group given by explicit data.

    Peels a maximal-order generator, recurses on the quotient by it, and
    adjusts the lifted quotient basis so lifted orders match quotient
    orders.  The adjustment x -> x * g^(-t/m) is possible because the
    order of g is maximal.
    """
    if len(elems) == 1:
        return []
    # deterministic pick: first element of maximal order in list order
    g = elems[0]
    for x in elems:
        if order_of(x) > order_of(g):
            g = x
    og = order_of(g)
    powers = [identity]
    cur = identity
    for _ in range(og - 1):
        cur = mul(cur, g)
        powers.append(cur)
    gen_set = set(powers)
    if og == len(elems):
        return [(g, og)]
    coset_key = {}
    for x in elems:
        if x in coset_key:
            continue
        coset = sorted(mul(x, s) for s in gen_set)
        key = coset[0]
        for y in coset:
            coset_key[y] = key
    q_elems = sorted(set(coset_key.values()))

    def q_mul(a, b):
        return coset_key[mul(a, b)]

    def q_order(x):
        o = 1
        cur = x
        while coset_key[cur] != coset_key[identity]:
            cur = mul(cur, x)
            o += 1
        return o

    basis = [(g, og)]
    ginv = powers[-1] if og > 1 else identity
    for xbar, m in _pgroup_basis(q_elems, q_mul, coset_key[identity], p, q_order):
        x = xbar
        xm = identity
        for _ in range(m):
            xm = mul(xm, x)
        # xm lies in <g>; find t with g^t = xm
        t = powers.index(xm)
        if t % m != 0:
            raise InvariantViolationError("basis lift failed divisibility")
        c = t // m
        for _ in range(c):
            x = mul(x, ginv)
        basis.append((x, m))
    return basis


def abelianization_basis(group, subgroup, derived_elems):
    """Cyclic basis of H/[H,H] lifted to coset representatives in H.

    Returns (basis, coords) where basis is a list of (element index,
    order) pairs whose images form an independent cyclic basis of the
    abelianization with orders in ascending divisibility, and coords
    maps each element index of H to its exponent tuple in that basis.
    """
    d_sorted = sorted(derived_elems)
    coset_key = {}
    for x in subgroup.sorted_elems:
        if x in coset_key:
            continue
        coset = sorted(group.mul(x, d) for d in d_sorted)
        key = coset[0]
        for y in coset:
            coset_key[y] = key
    q_elems = sorted(set(coset_key.values()))
    ident = coset_key[group.identity]

    def q_mul(a, b):
        return coset_key[group.mul(a, b)]

    def q_order(x):
        o = 1
        cur = x
        while cur != ident:
            cur = q_mul(cur, x)
            o += 1
        return o

    n = len(q_elems)
    per_prime = {}
    for p in (_factorint(n) if n > 1 else {}):
        pk = 1
        m = n
        while m % p == 0:
            pk *= p
            m //= p
        comp = sorted(x for x in q_elems if pk % q_order(x) == 0)
        per_prime[p] = _pgroup_basis(comp, q_mul, ident, p, q_order)
    # combine p-primary bases into an ascending invariant-factor basis
    depth = max((len(b) for b in per_prime.values()), default=0)
    combined = []
    for i in range(depth):
        elem = ident
        order = 1
        for p in sorted(per_prime):
            b = sorted(per_prime[p], key=lambda t: -t[1])
            if i < len(b):
                x, m = b[i]
                elem = q_mul(elem, x)
                order *= m
        combined.append((elem, order))
    combined.reverse()

    coords_of_coset = {}
    ranges = [range(m) for _, m in combined]
    for exps in iterproduct(*ranges):
        cur = ident
        for (x, _), e in zip(combined, exps):
            for _ in range(e):
                cur = q_mul(cur, x)
        if cur in coords_of_coset:
            raise InvariantViolationError("abelianization basis is not independent")
        coords_of_coset[cur] = exps
    if len(coords_of_coset) != n:
        raise InvariantViolationError("abelianization basis does not span")
    coords = {x: coords_of_coset[coset_key[x]] for x in subgroup.sorted_elems}
    return combined, coords


# ---------------------------------------------------------------------------
# Hom groups


class HomGroup:
    """All homomorphisms H -> A as total value tables.

    The table of a homomorphism is a tuple of A-exponent vectors aligned
    with the sorted elements of H; tables double as canonical keys.  The
    group is generated by one homomorphism per (abelianization basis
    element, cyclic component of the relevant torsion subgroup of A).
    """

    def __init__(self, group, subgroup, derived_elems, fiber, cap=DEFAULT_HOM_CAP):
        self.group = group
        self.subgroup_id = subgroup.id
        self.domain = subgroup.sorted_elems
        self.pos = {e: i for i, e in enumerate(self.domain)}
        self.fiber = fiber
        basis, coords = abelianization_basis(group, subgroup, derived_elems)
        self.basis = tuple(basis)
        self.coords = coords

        gen_data = []
        for i, (_, m) in enumerate(basis):
            for j, d in enumerate(fiber.invariant_factors):
                g = gcd(m, d)
                if g == 1:
                    continue
                unit = [0] * fiber.rank
                unit[j] = d // g
                gen_data.append((i, j, g, tuple(unit)))
        self.gen_data = tuple(gen_data)
        self.gen_orders = tuple(g for _, _, g, _ in gen_data)

        size = 1
        for g in self.gen_orders:
            size *= g
        if size > cap:
            raise ResourceLimitError(f"|Hom| = {size} exceeds cap {cap}")

        tables = []
        element_coords = []
        for ks in iterproduct(*(range(g) for g in self.gen_orders)):
            images = [fiber.zero() for _ in basis]
            for (i, _, _, unit), k in zip(gen_data, ks):
                images[i] = fiber.add(images[i], fiber.scale(k, unit))
            table = []
            for x in self.domain:
                val = fiber.zero()
                for i, e in enumerate(coords[x]):
                    val = fiber.add(val, fiber.scale(e, images[i]))
                table.append(val)
            tables.append(tuple(table))
            element_coords.append(ks)
        self.tables = tuple(tables)
        self.element_coords = tuple(element_coords)
        self.index = {t: i for i, t in enumerate(self.tables)}
        if len(self.index) != len(self.tables):
            raise InvariantViolationError("duplicate homomorphisms enumerated")
        self.size = len(self.tables)
        self.exponent = lcm(*self.gen_orders) if self.gen_orders else 1
        self.structure = normalize_invariant_factors(self.gen_orders)
        # index of each generator homomorphism inside the element list
        gen_indices = []
        for slot in range(len(self.gen_orders)):
            ks = tuple(1 if t == slot else 0 for t in range(len(self.gen_orders)))
            gen_indices.append(self.element_coords.index(ks))
        self.gen_indices = tuple(gen_indices)

    def value(self, hom_index, elem):
        return self.tables[hom_index][self.pos[elem]]

    def values_map(self, hom_index):
        return dict(zip(self.domain, self.tables[hom_index]))

    def key_of_map(self, values_map):
        return tuple(values_map[e] for e in self.domain)

    def index_of_map(self, values_map):
        key = self.key_of_map(values_map)
        idx = self.index.get(key)
        if idx is None:
            raise InvariantViolationError("value map is not a homomorphism into the fiber")
        return idx

    def trivial_index(self):
        return self.index[tuple(self.fiber.zero() for _ in self.domain)]


def conj_values_map(group, values_map, g):
    """Conjugate homomorphism ^g(phi) on ^g(domain): x -> phi(g^-1 x g)."""
    return {group.conj(g, x): v for x, v in values_map.items()}


def restrict_values_map(values_map, sub_elems):
    missing = [e for e in sub_elems if e not in values_map]
    if missing:
        raise InputError("restriction target is not inside the domain")
    return {e: values_map[e] for e in sub_elems}


# ---------------------------------------------------------------------------
# characters of Hom groups

# A character is stored as a tuple of integers mod the cyclotomic level:
# entry k is the exponent e with value zeta^e on homomorphism k.


def dual_character_values(hom_group, level):
    """All characters of a Hom group as exponent tuples at the given level."""
    if level % hom_group.exponent != 0:
        raise InvariantViolationError(
            f"level {level} not divisible by Hom exponent {hom_group.exponent}"
        )
    out = []
    orders = hom_group.gen_orders
    for cs in iterproduct(*(range(g) for g in orders)):
        values = []
        for ks in hom_group.element_coords:
            e = 0
            for c, k, g in zip(cs, ks, orders):
                e += c * k * (level // g)
            values.append(e % level)
        out.append(tuple(values))
    if len(set(out)) != len(out):
        raise InvariantViolationError("characters are not pairwise distinct")
    return out


def character_order(values, level):
    g = level
    for v in values:
        g = gcd(g, v)
    return level // g if level else 1


def character_power(values, t, level):
    return tuple((v * t) % level for v in values)


def character_mul(a, b, level):
    return tuple((x + y) % level for x, y in zip(a, b))


def character_p_parts(values, p, level):
    """Split a character into its p-part and p'-part.

    Done by exponent CRT on the character order o = p^a * m: the p-part
    is the power by m * (m^-1 mod p^a) and the p'-part the power by
    p^a * (p^a^-1 mod m).
    """
    o = character_order(values, level)
    pa = 1
    m = o
    while m % p == 0:
        pa *= p
        m //= p
    if pa == 1:
        return character_power(values, 0, level), values
    if m == 1:
        return values, character_power(values, 0, level)
    tp = m * pow(m, -1, pa)
    tq = pa * pow(pa, -1, m)
    return character_power(values, tp, level), character_power(values, tq, level)


def evaluate_character(values, hom_index, level):
    """Value of a character on one homomorphism, a root of unity."""
    from .cyclo import Cyclotomic
    return Cyclotomic.zeta_power(level, values[hom_index])


def conj_evaluate_character(values, hom_index, level):
    """Complex conjugate of the character value: zeta -> zeta^-1."""
    from .cyclo import Cyclotomic
    return Cyclotomic.zeta_power(level, (-values[hom_index]) % level)


def character_gen_exponents(values, hom_group, level):
    """Exponents c with value zeta^(c * level/order) on each Hom generator."""
    out = []
    for gi, g in zip(hom_group.gen_indices, hom_group.gen_orders):
        e = values[gi]
        step = level // g
        if e % step != 0:
            raise InvariantViolationError("character value has wrong order on generator")
        out.append((e // step) % g)
    return tuple(out)
