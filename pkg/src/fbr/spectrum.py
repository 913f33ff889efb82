"""Prime spectrum shadow, block decomposition and the Weyl block map.

Primes of the ring are represented combinatorially: a dual pair orbit
together with a residue characteristic descriptor (zero, or a prime p
with a chosen prime ideal of the cyclotomic integers above it).  Two
descriptors name the same prime exactly when the species rows agree
modulo the ideal, which the partition operations compute both by the
p-regularization climb and by the exhaustive finite-field congruence
oracle.

Blocks are indexed by conjugacy classes of perfect subgroups: the block
idempotent at J sums the primitive idempotents of the dual pairs whose
subgroup has perfect residual conjugate to J, and the block at J is
isomorphic to the solvable block of the ring of the Weyl group N(J)/J
through inflation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import species as species_mod
from .abelian import character_p_parts, character_order
from .cyclo import Cyclotomic, PrimeIdealData, find_prime_ideal, reduce_mod
from .errors import (InputError, InvariantViolationError,
                     TheoremViolationError)
from .perm import quotient_group, sylow_subgroup
from .ring import FiberedBurnsideRing, RingElement


@dataclass(frozen=True)
class PrimeDescriptor:
    """Residue characteristic of a prime: zero, or (p, ideal above p)."""

    characteristic: int
    ideal: PrimeIdealData | None

    @classmethod
    def char_zero(cls):
        return cls(0, None)

    @classmethod
    def char_p(cls, p, level, ideal=None):
        if ideal is None:
            ideal = find_prime_ideal(p, level)
        if ideal.p != p:
            raise InputError("ideal does not lie above p")
        return cls(p, ideal)


@dataclass(frozen=True)
class EquivalencePartition:
    prime: PrimeDescriptor
    classes: tuple
    regular_representatives: tuple | None


@dataclass(frozen=True)
class ComponentDescriptor:
    index: int
    perfect_id: int
    dual_orbits: tuple
    basis_orbits: tuple


@dataclass(frozen=True)
class BlockIdempotent:
    component: ComponentDescriptor
    element: RingElement


@dataclass(frozen=True)
class WeylBlockIso:
    perfect_id: int
    weyl_ring: FiberedBurnsideRing
    bijection: tuple  # pairs (weyl basis orbit, ambient basis orbit)


# ---------------------------------------------------------------------------
# p-regularity and p-regularization


def _dual_pair_stabilizer(ring, sid, values):
    """Elements of N(H) fixing the character; the stabilizer N(H, Phi)."""
    lattice = ring.lattice
    rep = lattice.class_rep(sid)
    if sid == rep:
        hg = ring.hom_group(sid)
        action = ring.hom_action(sid)
        inv = ring.group.inverse
        norm = lattice.subgroups[lattice.normalizer_ids[sid]].sorted_elems
        out = []
        for n in norm:
            sigma = action[inv[n]]
            if all(values[sigma[k]] == values[k] for k in range(hg.size)):
                out.append(n)
        return out
    # work at the class representative and conjugate back
    w = lattice.to_rep[sid]
    _, moved = species_mod.conjugate_character(ring, sid, values, w)
    stab = _dual_pair_stabilizer(ring, rep, moved)
    winv = ring.group.inverse[w]
    return sorted(ring.group.conj(winv, x) for x in stab)


def is_p_regular(ring, d, p):
    """p divides neither the character order nor the normalizer index."""
    dual = species_mod.dual_orbits(ring)[d if isinstance(d, int) else d.index]
    o = character_order(dual.values, ring.level)
    h_order = ring.lattice.subgroups[dual.subgroup_id].order
    index = dual.stabilizer_order // h_order
    return o % p != 0 and index % p != 0


def p_regularize(ring, d, p, reverse=False):
    """Canonical dual orbit of a p-regularization of the given orbit.

    Strips the p-part of the character, then repeatedly climbs to the
    preimage of a Sylow p-subgroup of N(K, Psi)/K, composing with
    restriction, until the pair is p-regular.  The subgroup strictly
    grows, so the climb terminates; the resulting conjugacy class does
    not depend on the Sylow choices.  With reverse=True the Sylow
    search scans elements in reversed order, exercising that fact.
    """
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    dual = species_mod.dual_orbits(ring)[d if isinstance(d, int) else d.index]
    sid = dual.subgroup_id
    _, values = character_p_parts(dual.values, p, ring.level)
    group = ring.group
    lattice = ring.lattice
    while True:
        stab = _dual_pair_stabilizer(ring, sid, values)
        k_order = lattice.subgroups[sid].order
        if (len(stab) // k_order) % p != 0:
            oidx, _ = species_mod.canonicalize_dual(ring, sid, values)
            return oidx
        k_elems = lattice.subgroups[sid].elems
        quotient, onto, _ = quotient_group(group, stab, k_elems)
        if reverse:
            syl = _sylow_reversed(quotient, p)
        else:
            syl = sylow_subgroup(quotient, p)
        new_set = frozenset(x for x in stab if onto[x] in syl)
        new_sid = lattice.by_set[new_set]
        src_hg = ring.hom_group(sid)
        dst_hg = ring.hom_group(new_sid)
        sub_elems = lattice.subgroups[sid].sorted_elems
        new_values = []
        for k in range(dst_hg.size):
            restricted = {x: dst_hg.value(k, x) for x in sub_elems}
            new_values.append(values[src_hg.index_of_map(restricted)])
        sid, values = new_sid, tuple(new_values)


def _sylow_reversed(group, p):
    target = 1
    n = group.order
    while n % p == 0:
        target *= p
        n //= p
    current = frozenset({group.identity})
    while len(current) < target:
        grown = False
        for g in range(group.order - 1, -1, -1):
            if g in current:
                continue
            o = group.element_orders[g]
            if o == 1 or _p_part(o, p) != o:
                continue
            if group.conj_set(g, current) != current:
                continue
            current = group.closure(sorted(current) + [g])
            grown = True
            break
        if not grown:
            raise InvariantViolationError("Sylow growth stalled")
    return current


def _p_part(n, p):
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# the finite-field congruence oracle


def reduced_species_row(ring, d, prime):
    """Species row of a dual orbit reduced modulo the prime ideal."""
    row = species_mod.species_table(ring)[d if isinstance(d, int) else d.index]
    if prime.characteristic == 0:
        return row
    return tuple(reduce_mod(v, prime.ideal) for v in row)


def congruent_mod_p(ring, d1, d2, prime):
    """Species rows agree modulo the prime on every basis element.

    Species values of basis elements are sums of roots of unity, hence
    integral, so the reduction is always defined.
    """
    return reduced_species_row(ring, d1, prime) == reduced_species_row(ring, d2, prime)


def p_equivalence_partition(ring, prime, verify=True):
    """Partition of the dual orbits by congruence of species modulo P.

    Primary path: group by the conjugacy class of the p-regularization.
    With verify=True (the default) the exhaustive finite-field oracle
    must reproduce the same partition; any discrepancy raises.
    """
    n = ring.rank
    if prime.characteristic == 0:
        classes = tuple((d,) for d in range(n))
        if verify:
            rows = [reduced_species_row(ring, d, prime) for d in range(n)]
            if len(set(rows)) != n:
                raise TheoremViolationError(
                    "distinct dual orbits with equal species rows at characteristic 0"
                )
        return EquivalencePartition(prime, classes, None)
    p = prime.characteristic
    by_regular = {}
    for d in range(n):
        r = p_regularize(ring, d, p)
        by_regular.setdefault(r, []).append(d)
    classes = tuple(tuple(sorted(v)) for _, v in sorted(
        by_regular.items(), key=lambda kv: min(kv[1])))
    regular_reps = tuple(r for r, v in sorted(
        by_regular.items(), key=lambda kv: min(kv[1])))
    if verify:
        by_row = {}
        for d in range(n):
            by_row.setdefault(reduced_species_row(ring, d, prime), []).append(d)
        oracle = set(tuple(sorted(v)) for v in by_row.values())
        if oracle != set(classes):
            raise TheoremViolationError(
                "regularization partition disagrees with the congruence oracle"
            )
        for cls, rep in zip(classes, regular_reps):
            regs = sorted(d for d in cls if is_p_regular(ring, d, p))
            if regs != [rep]:
                raise TheoremViolationError(
                    "a P-class does not contain exactly one regular orbit"
                )
    return EquivalencePartition(prime, classes, regular_reps)


def galois_orbit(ring, d):
    """Orbit of a dual pair under zeta -> zeta^t for all t coprime to
    the level: (H, Phi) goes to (H, Phi^t)."""
    dual = species_mod.dual_orbits(ring)[d if isinstance(d, int) else d.index]
    n = ring.level
    out = set()
    for t in range(1, n + 1):
        if gcd(t, n) != 1:
            continue
        powered = tuple((v * t) % n for v in dual.values)
        oidx, _ = species_mod.canonicalize_dual(ring, dual.subgroup_id, powered)
        out.add(oidx)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# connected components and blocks


def components(ring):
    """One component per conjugacy class of perfect subgroups; dual and
    basis orbits are split by the class of the perfect residual."""
    if ring.component_cache is not None:
        return ring.component_cache
    lattice = ring.lattice
    perfect = lattice.perfect_class_reps()
    perfect_class_of = {}
    for cls in lattice.classes:
        res = lattice.perfect_residual_id(cls.rep)
        perfect_class_of[cls.index] = lattice.class_rep(res)
    comps = []
    for jid in perfect:
        duals = tuple(d.index for d in species_mod.dual_orbits(ring)
                      if perfect_class_of[d.class_index] == jid)
        basis = tuple(o.index for o in ring.basis.orbits
                      if perfect_class_of[o.class_index] == jid)
        comps.append(ComponentDescriptor(len(comps), jid, duals, basis))
    total_d = sum(len(c.dual_orbits) for c in comps)
    total_b = sum(len(c.basis_orbits) for c in comps)
    if total_d != ring.rank or total_b != ring.rank:
        raise InvariantViolationError("components do not partition the orbits")
    ring.component_cache = tuple(comps)
    return ring.component_cache


def block_idempotent(ring, component):
    """Sum of the primitive idempotents over one component.

    The result must have integer coefficients in the standard basis;
    anything else is a theorem violation.
    """
    cached = ring.block_cache.get(component.index)
    if cached is not None:
        return cached
    total = ring.zero()
    for d in component.dual_orbits:
        total = total + species_mod.idempotent(ring, d)
    for v in total.coeffs.values():
        if not v.is_integer():
            raise TheoremViolationError(
                "block idempotent has a non-integer coefficient"
            )
    out = BlockIdempotent(component, total)
    ring.block_cache[component.index] = out
    return out


def block_idempotents(ring):
    return [block_idempotent(ring, c) for c in components(ring)]


def block_basis(ring, component):
    """Basis of the block: [K, phi] e_J over the component's pair orbits.

    Verified square and of full rank against the component's species
    coordinates; rank deficiency is a theorem violation.
    """
    e = block_idempotent(ring, component).element
    elems = [ring.multiply(ring.basis_element(b), e)
             for b in component.basis_orbits]
    if len(component.basis_orbits) != len(component.dual_orbits):
        raise TheoremViolationError("block basis and dual counts differ")
    matrix = [[species_mod.apply_species(ring, d, x)
               for d in component.dual_orbits] for x in elems]
    if elems:
        det = species_mod.exact_determinant(matrix)
        if det.is_zero():
            raise TheoremViolationError("block basis is linearly dependent")
    return elems


# ---------------------------------------------------------------------------
# the Weyl block isomorphism


def weyl_ring(ring, perfect_id):
    """Ring of the Weyl group N(J)/J at the ambient level, with the
    quotient map data."""
    lattice = ring.lattice
    nid = lattice.normalizer_ids[perfect_id]
    n_elems = lattice.subgroups[nid].sorted_elems
    j_elems = lattice.subgroups[perfect_id].elems
    quotient, onto, cosets = quotient_group(ring.group, n_elems, j_elems)
    wring = FiberedBurnsideRing(quotient, ring.fiber, level=ring.level,
                                hom_cap=ring.hom_cap)
    return wring, onto, cosets


def weyl_block_iso(ring, perfect_id, check=True):
    """The inflation bijection between the solvable block of the Weyl
    ring at J and the J-block of the ambient ring.

    Every mismatch (non-bijectivity, a structure constant, the image of
    the solvable block idempotent) raises a theorem violation.
    """
    lattice = ring.lattice
    if lattice.derived_id(perfect_id) != perfect_id:
        raise InputError("block map requires a perfect subgroup")
    if lattice.class_rep(perfect_id) != perfect_id:
        raise InputError("perfect subgroup must be a class representative")
    comp = next(c for c in components(ring) if c.perfect_id == perfect_id)
    e_j = block_idempotent(ring, comp).element

    wring, onto, _ = weyl_ring(ring, perfect_id)
    fibers_of = {}
    for x, q in onto.items():
        fibers_of.setdefault(q, []).append(x)

    wcomp = next(c for c in components(wring)
                 if c.perfect_id == wring.lattice.trivial_id())
    e_w1 = block_idempotent(wring, wcomp).element

    # basis bijection through inflation
    mapping = []
    for b in wcomp.basis_orbits:
        worbit = wring.basis.orbits[b]
        wsub = wring.lattice.subgroups[worbit.subgroup_id]
        whom = wring.pair_values_map(b)
        k_elems = sorted(x for wq in wsub.sorted_elems for x in fibers_of[wq])
        values = {x: whom[onto[x]] for x in k_elems}
        sid = lattice.by_set[frozenset(k_elems)]
        oidx, _ = ring.canonicalize_pair(sid, values)
        mapping.append((b, oidx))

    images = [m for _, m in mapping]
    if check:
        if len(set(images)) != len(images):
            raise TheoremViolationError("inflation map is not injective")
        if set(images) != set(comp.basis_orbits):
            raise TheoremViolationError("inflation map misses part of the block")

    iso = WeylBlockIso(perfect_id, wring, tuple(mapping))
    if check:
        _check_weyl_multiplicative(ring, iso, e_j, e_w1, wcomp)
    return iso


def _apply_inflation(ring, iso, welem):
    """Linear extension of the basis bijection followed by e_J."""
    lut = dict(iso.bijection)
    out = {}
    for k, c in welem.coeffs.items():
        if k not in lut:
            raise TheoremViolationError(
                "element leaves the solvable block under inflation"
            )
        if not c.is_integer():
            raise InvariantViolationError("inflation needs integer coefficients")
        tgt = lut[k]
        val = Cyclotomic.from_rational(ring.level, c.rational_value())
        out[tgt] = out[tgt] + val if tgt in out else val
    return ring.element_from_ints({k: int(v.rational_value())
                                   for k, v in out.items()})


def _check_weyl_multiplicative(ring, iso, e_j, e_w1, wcomp):
    wring = iso.weyl_ring
    lut = dict(iso.bijection)
    for i, b1 in enumerate(wcomp.basis_orbits):
        for b2 in wcomp.basis_orbits[i:]:
            wprod = wring.multiply(wring.basis_element(b1), wring.basis_element(b2))
            lhs = ring.multiply(_apply_inflation(ring, iso, wprod), e_j)
            rhs = ring.multiply(
                ring.multiply(ring.basis_element(lut[b1]), e_j),
                ring.multiply(ring.basis_element(lut[b2]), e_j))
            if lhs != rhs:
                raise TheoremViolationError(
                    f"inflation is not multiplicative on ({b1}, {b2})"
                )
    image_e = ring.multiply(_apply_inflation(ring, iso, e_w1), e_j)
    if image_e != e_j:
        raise TheoremViolationError(
            "inflation does not map the solvable block idempotent to e_J"
        )
