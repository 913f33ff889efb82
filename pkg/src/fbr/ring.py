"""The fibered Burnside ring of a finite group in its monomial basis.

A basis element is the conjugation orbit of a monomial pair (H, phi)
with H a subgroup and phi a homomorphism from H into the fiber.  Orbits
are keyed canonically: the subgroup is the class representative of its
conjugacy class, and among the homomorphisms in the normalizer orbit
the one with the lexicographically least value table wins.  Products
follow the double coset formula and are memoized as integer structure
constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import abelian, perm
from .abelian import DEFAULT_HOM_CAP, HomGroup, conj_values_map
from .cyclo import Cyclotomic
from .errors import InputError, InvariantViolationError
from .perm import FiniteGroup, SubgroupLattice


@dataclass(frozen=True)
class PairOrbit:
    """Conjugation orbit [H, phi] with its canonical representative."""

    index: int
    subgroup_id: int
    hom_index: int
    class_index: int
    stabilizer_order: int
    orbit_size: int


class StandardBasis:
    def __init__(self, orbits, lookup):
        self.orbits = tuple(orbits)
        # lookup: class rep subgroup id -> {hom index: (orbit index, witness)}
        self.lookup = lookup

    def __len__(self):
        return len(self.orbits)


class RingElement:
    """Finite coefficient vector over the monomial basis, no stored zeros."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    def support(self):
        return sorted(self.coeffs)

    def coeff(self, k):
        c = self.coeffs.get(k)
        return c if c is not None else Cyclotomic.zero(self.ring.level)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return RingElement(self.ring, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] - v if k in out else -v
        return RingElement(self.ring, out)

    def __neg__(self):
        return RingElement(self.ring, {k: -v for k, v in self.coeffs.items()})

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = Cyclotomic.from_rational(self.ring.level, c)
        return RingElement(self.ring, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return self.ring.multiply(self, other)
        return self.scale(other)

    def __eq__(self, other):
        return (isinstance(other, RingElement) and self.ring is other.ring
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self):
        return not self.coeffs

    def is_integral(self):
        return all(v.is_integer() for v in self.coeffs.values())

    def int_coeffs(self):
        out = {}
        for k, v in self.coeffs.items():
            if not v.is_integer():
                raise InvariantViolationError("element has a non-integer coefficient")
            out[k] = int(v.rational_value())
        return out

    def to_json(self):
        return {
            "basis": [self.ring.orbit_descriptor(k) for k in self.support()],
            "coeffs": {str(k): self.coeffs[k].to_json() for k in self.support()},
        }

    def __repr__(self):
        if not self.coeffs:
            return "RingElement(0)"
        from .cyclo import render_cyclotomic
        parts = [f"({render_cyclotomic(v)})*b{k}" for k, v in sorted(self.coeffs.items())]
        return "RingElement(" + " + ".join(parts) + ")"


def natural_level(group, fiber):
    """Exponent of the torsion of the fiber at the group exponent."""
    exp_g = 1
    for o in group.element_orders:
        exp_g = exp_g * o // gcd(exp_g, o)
    torsion = fiber.tor(exp_g)
    return torsion.group.exponent


class FiberedBurnsideRing:
    """Session object for one (group, fiber) pair.

    Holds the subgroup lattice, the Hom groups, the standard basis and
    the memoized structure constants.  All data is effectively
    immutable once built; the memo tables only grow.
    """

    def __init__(self, group, fiber, level=None, lattice=None,
                 hom_cap=DEFAULT_HOM_CAP):
        self.group = group
        self.fiber = fiber
        self.lattice = lattice if lattice is not None else SubgroupLattice(group)
        self.level = level if level is not None else natural_level(group, fiber)
        if self.level % natural_level(group, fiber) != 0:
            raise InputError("level must be a multiple of the natural level")
        self.hom_cap = hom_cap
        self._hom_groups = {}
        self._actions = {}
        self._structure = {}
        self._subrings = {}
        self._build_basis()
        # caches owned by the species and spectrum layers
        self.dual_cache = None
        self.species_cache = None
        self.idempotent_cache = {}
        self.component_cache = None
        self.block_cache = {}

    # -- hom groups and normalizer action -----------------------------------

    def hom_group(self, sid):
        hg = self._hom_groups.get(sid)
        if hg is None:
            sub = self.lattice.subgroups[sid]
            derived = self.lattice.subgroups[self.lattice.derived_id(sid)].elems
            hg = HomGroup(self.group, sub, derived, self.fiber, self.hom_cap)
            self._hom_groups[sid] = hg
        return hg

    def hom_action(self, rep_id):
        """For a class representative H: the permutation of Hom(H, A)
        induced by each element of the normalizer, n -> sigma_n with
        sigma_n[k] = index of ^n(phi_k)."""
        act = self._actions.get(rep_id)
        if act is None:
            hg = self.hom_group(rep_id)
            norm_elems = self.lattice.subgroups[
                self.lattice.normalizer_ids[rep_id]].sorted_elems
            act = {}
            for n in norm_elems:
                perm_map = []
                for k in range(hg.size):
                    moved = conj_values_map(self.group, hg.values_map(k), n)
                    perm_map.append(hg.index_of_map(moved))
                act[n] = tuple(perm_map)
            self._actions[rep_id] = act
        return act

    # -- basis construction --------------------------------------------------

    def _build_basis(self):
        orbits = []
        lookup = {}
        for cls in self.lattice.classes:
            rep = cls.rep
            hg = self.hom_group(rep)
            action = self.hom_action(rep)
            norm_order = self.lattice.subgroups[
                self.lattice.normalizer_ids[rep]].order
            assigned = {}
            reps_here = []
            for k in range(hg.size):
                if k in assigned:
                    continue
                seen = {}
                for n, sigma in action.items():
                    img = sigma[k]
                    if img not in seen:
                        seen[img] = n
                canon = min(seen, key=lambda i: hg.tables[i])
                stab = norm_order // len(seen)
                n_to_canon = seen[canon]
                for img, n in seen.items():
                    # ^n phi_k = phi_img, so phi_canon = ^(n_c * n^-1) phi_img
                    w = self.group.mul(n_to_canon, self.group.inverse[n])
                    assigned[img] = (canon, w, stab)
                reps_here.append(canon)
            reps_here.sort(key=lambda i: hg.tables[i])
            orbit_of_canon = {}
            for canon in reps_here:
                stab = assigned[canon][2]
                orbit = PairOrbit(
                    index=len(orbits),
                    subgroup_id=rep,
                    hom_index=canon,
                    class_index=cls.index,
                    stabilizer_order=stab,
                    orbit_size=self.group.order // stab,
                )
                orbit_of_canon[canon] = orbit.index
                orbits.append(orbit)
            lookup[rep] = {k: (orbit_of_canon[canon], w)
                           for k, (canon, w, _) in assigned.items()}
        self.basis = StandardBasis(orbits, lookup)

    @property
    def rank(self):
        return len(self.basis)

    def orbit(self, i):
        return self.basis.orbits[i]

    # -- canonicalization ----------------------------------------------------

    def canonicalize_pair(self, sid, values_map):
        """Canonical orbit of the pair (subgroup sid, hom given by its
        value map), plus a conjugating witness g with ^g(pair) canonical."""
        w = self.lattice.to_rep[sid]
        rep = self.lattice.class_rep(sid)
        moved = conj_values_map(self.group, values_map, w)
        hg = self.hom_group(rep)
        k = hg.index_of_map(moved)
        oidx, n = self.basis.lookup[rep][k]
        return oidx, self.group.mul(n, w)

    def pair_values_map(self, i):
        o = self.basis.orbits[i]
        return self.hom_group(o.subgroup_id).values_map(o.hom_index)

    # -- multiplication ------------------------------------------------------

    def multiply_basis(self, i, j, reverse=False):
        """Product of two basis orbits as an integer coefficient dict.

        With reverse=True the double coset scan runs over the reversed
        element order; the result must not depend on this.
        """
        oi, oj = self.basis.orbits[i], self.basis.orbits[j]
        h = self.lattice.subgroups[oi.subgroup_id]
        k = self.lattice.subgroups[oj.subgroup_id]
        phi = self.pair_values_map(i)
        psi = self.pair_values_map(j)
        group = self.group
        if not reverse:
            reps = self.lattice.double_coset_reps(oi.subgroup_id, oj.subgroup_id)
        else:
            reps = _double_coset_reps_reversed(group, h.sorted_elems, k.sorted_elems)
        out = {}
        for g in reps:
            gk = group.conj_set(g, k.sorted_elems)
            inter = h.elems & gk
            ginv = group.inverse[g]
            values = {x: self.fiber.add(phi[x], psi[group.conj(ginv, x)])
                      for x in inter}
            sid = self.lattice.by_set[inter]
            oidx, _ = self.canonicalize_pair(sid, values)
            out[oidx] = out.get(oidx, 0) + 1
        return out

    def structure_constants(self, i, j):
        key = (i, j) if i <= j else (j, i)
        val = self._structure.get(key)
        if val is None:
            prod = self.multiply_basis(key[0], key[1])
            val = tuple(sorted(prod.items()))
            self._structure[key] = val
        return val

    def multiply(self, x, y):
        if x.ring is not self or y.ring is not self:
            raise InputError("elements from different rings")
        out = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                ab = a * b
                if ab.is_zero():
                    continue
                for k, c in self.structure_constants(i, j):
                    term = ab * c
                    out[k] = out[k] + term if k in out else term
        return RingElement(self, out)

    # -- element constructors -------------------------------------------------

    def zero(self):
        return RingElement(self, {})

    def one(self):
        full = self.lattice.full_group_id()
        hg = self.hom_group(full)
        oidx, _ = self.basis.lookup[full][hg.trivial_index()]
        return self.basis_element(oidx)

    def basis_element(self, i):
        if not 0 <= i < self.rank:
            raise InputError(f"basis index {i} out of range")
        return RingElement(self, {i: Cyclotomic.one(self.level)})

    def element_from_ints(self, coeffs):
        return RingElement(self, {
            k: Cyclotomic.from_rational(self.level, v) for k, v in coeffs.items()
        })

    # -- retraction and the Burnside ring embedding ---------------------------

    def pi_retraction(self, x):
        """Keep only the pairs whose subgroup is the whole group."""
        full = self.lattice.full_group_id()
        keep = {k: v for k, v in x.coeffs.items()
                if self.basis.orbits[k].subgroup_id == full}
        return RingElement(self, keep)

    def trivial_pair_orbit(self, class_rep_id):
        """Orbit index of [H, 1] for a class representative H."""
        hg = self.hom_group(class_rep_id)
        oidx, _ = self.basis.lookup[class_rep_id][hg.trivial_index()]
        return oidx

    def burnside_embed(self, marks_coeffs):
        """Embedding of the Burnside ring: class index -> [H, 1]."""
        out = {}
        for cidx, c in marks_coeffs.items():
            rep = self.lattice.classes[cidx].rep
            oidx = self.trivial_pair_orbit(rep)
            cy = Cyclotomic.from_rational(self.level, c)
            out[oidx] = out[oidx] + cy if oidx in out else cy
        return RingElement(self, out)

    def burnside_project(self, x):
        """Section onto the Burnside ring: [H, phi] -> [G/H]."""
        out = {}
        for k, v in x.coeffs.items():
            cidx = self.basis.orbits[k].class_index
            out[cidx] = out[cidx] + v if cidx in out else v
        return {k: v for k, v in out.items() if not v.is_zero()}

    # -- subrings over subgroups ----------------------------------------------

    def subring(self, sid):
        """The same construction over a subgroup, at the same level."""
        ring = self._subrings.get(sid)
        if ring is None:
            sub = self.lattice.subgroups[sid]
            elems = [self.group.elements[x] for x in sub.sorted_elems]
            child = FiniteGroup.from_elements(self.group.degree, elems)
            ring = FiberedBurnsideRing(child, self.fiber, level=self.level,
                                       hom_cap=self.hom_cap)
            self._subrings[sid] = ring
        return ring

    # -- descriptors ------------------------------------------------------------

    def orbit_descriptor(self, i):
        o = self.basis.orbits[i]
        sub = self.lattice.subgroups[o.subgroup_id]
        hg = self.hom_group(o.subgroup_id)
        table = hg.tables[o.hom_index]
        gens = [perm.cycle_string(self.group.elements[g]) for g in sub.gens]
        images = [list(table[hg.pos[g]]) for g in sub.gens]
        return {
            "index": i,
            "subgroup": {"order": sub.order, "class": o.class_index,
                         "generators": gens},
            "hom": {"images": images},
            "stabilizer_order": o.stabilizer_order,
            "orbit_size": o.orbit_size,
        }


def build_ring(group_spec, fiber_spec, order_cap=perm.DEFAULT_ORDER_CAP,
               hom_cap=DEFAULT_HOM_CAP, level=None):
    """Ring session from spec strings; the usual entry point."""
    group = perm.parse_group_spec(group_spec, order_cap)
    fiber = abelian.parse_fiber_spec(fiber_spec)
    return FiberedBurnsideRing(group, fiber, level=level, hom_cap=hom_cap)


def _double_coset_reps_reversed(group, h_elems, k_elems):
    covered = bytearray(group.order)
    reps = []
    for g in range(group.order - 1, -1, -1):
        if covered[g]:
            continue
        reps.append(g)
        for h in h_elems:
            hg = group.mul(h, g)
            for k in k_elems:
                covered[group.mul(hg, k)] = 1
    return tuple(reps)


# ---------------------------------------------------------------------------
# maps between rings over nested subgroups


def _translate_elem(src_group, dst_group, idx):
    return dst_group.index[src_group.elements[idx]]


def _translate_values_map(src_ring, dst_ring, values_map):
    return {_translate_elem(src_ring.group, dst_ring.group, x): v
            for x, v in values_map.items()}


def induce(x, target):
    """Induction along an inclusion of groups: [U, phi] keeps its name."""
    src = x.ring
    for e in src.group.elements:
        if e not in target.group.index:
            raise InputError("induction target does not contain the source group")
    out = {}
    for i, c in x.coeffs.items():
        values = _translate_values_map(src, target, src.pair_values_map(i))
        sid = target.lattice.by_set[frozenset(values)]
        oidx, _ = target.canonicalize_pair(sid, values)
        out[oidx] = out[oidx] + c if oidx in out else c
    return RingElement(target, out)


def restrict(x, target):
    """Restriction along an inclusion, by the double coset formula."""
    src = x.ring
    for e in target.group.elements:
        if e not in src.group.index:
            raise InputError("restriction target is not a subgroup of the source")
    k_elems = sorted(src.group.index[e] for e in target.group.elements)
    k_set = frozenset(k_elems)
    out = {}
    for i, c in x.coeffs.items():
        o = src.basis.orbits[i]
        u = src.lattice.subgroups[o.subgroup_id]
        phi = src.pair_values_map(i)
        for g in perm.double_coset_reps(src.group, k_elems, u.sorted_elems):
            gu = src.group.conj_set(g, u.sorted_elems)
            inter = k_set & gu
            ginv = src.group.inverse[g]
            values = {y: phi[src.group.conj(ginv, y)] for y in inter}
            tvalues = _translate_values_map(src, target, values)
            sid = target.lattice.by_set[frozenset(tvalues)]
            oidx, _ = target.canonicalize_pair(sid, tvalues)
            out[oidx] = out[oidx] + c if oidx in out else c
    return RingElement(target, out)


def conjugate(x, g_images, target):
    """Conjugation isomorphism onto the ring of the conjugate subgroup.

    g_images is the conjugating permutation of the ambient symmetric
    group, given by its image tuple.
    """
    src = x.ring
    g_inv = perm.invert(g_images)
    out = {}
    for i, c in x.coeffs.items():
        phi = src.pair_values_map(i)
        values = {}
        for xidx, v in phi.items():
            moved = perm.compose(perm.compose(g_images, src.group.elements[xidx]),
                                 g_inv)
            values[target.group.index[moved]] = v
        sid = target.lattice.by_set[frozenset(values)]
        oidx, _ = target.canonicalize_pair(sid, values)
        out[oidx] = out[oidx] + c if oidx in out else c
    return RingElement(target, out)
