"""Species homomorphisms and primitive idempotents over the cyclotomic field.

A species is indexed by the orbit of a dual pair (H, Phi): a subgroup
together with a character of Hom(H, A).  Its value on a basis orbit
[K, psi] is the double coset sum over the g with H contained in ^gK of
Phi(^g(psi) restricted to H).  The table of all species values against
the standard basis is square and invertible; inverting it through the
explicit idempotent formula gives the primitive idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ring as ring_mod
from .abelian import (character_gen_exponents, character_order,
                      conj_evaluate_character, conj_values_map,
                      dual_character_values, evaluate_character)
from .cyclo import Cyclotomic
from .errors import InputError, InvariantViolationError, TheoremViolationError
from .perm import cycle_string


@dataclass(frozen=True)
class DualOrbit:
    """Conjugation orbit [H, Phi] of a dual pair, canonically keyed.

    values holds the character as root-of-unity exponents, one per
    element of Hom(H, A) for the class-representative subgroup H.
    """

    index: int
    subgroup_id: int
    values: tuple
    class_index: int
    stabilizer_order: int
    orbit_size: int


def _build_dual_data(ring):
    orbits = []
    lookup = {}
    for cls in ring.lattice.classes:
        rep = cls.rep
        hg = ring.hom_group(rep)
        chars = dual_character_values(hg, ring.level)
        action = ring.hom_action(rep)
        inv = ring.group.inverse
        norm_elems = ring.lattice.subgroups[
            ring.lattice.normalizer_ids[rep]].sorted_elems
        norm_order = len(norm_elems)
        assigned = {}
        reps_here = []
        for values in chars:
            if values in assigned:
                continue
            seen = {}
            for n in norm_elems:
                sigma = action[inv[n]]
                moved = tuple(values[sigma[k]] for k in range(hg.size))
                if moved not in seen:
                    seen[moved] = n
            canon = min(seen)
            stab = norm_order // len(seen)
            n_to_canon = seen[canon]
            for moved, n in seen.items():
                w = ring.group.mul(n_to_canon, inv[n])
                assigned[moved] = (canon, w, stab)
            reps_here.append(canon)
        reps_here.sort()
        table = {}
        canon_to_idx = {}
        for canon in reps_here:
            stab = assigned[canon][2]
            orbit = DualOrbit(
                index=len(orbits),
                subgroup_id=rep,
                values=canon,
                class_index=cls.index,
                stabilizer_order=stab,
                orbit_size=ring.group.order // stab,
            )
            canon_to_idx[canon] = orbit.index
            orbits.append(orbit)
        for values, (canon, w, _) in assigned.items():
            table[values] = (canon_to_idx[canon], w)
        lookup[rep] = table
    if len(orbits) != ring.rank:
        raise InvariantViolationError(
            f"dual orbit count {len(orbits)} != basis rank {ring.rank}"
        )
    return orbits, lookup


def dual_orbits(ring):
    """All dual pair orbits in canonical order; count equals the rank."""
    if ring.dual_cache is None:
        ring.dual_cache = _build_dual_data(ring)
    return ring.dual_cache[0]


def _dual_lookup(ring):
    if ring.dual_cache is None:
        ring.dual_cache = _build_dual_data(ring)
    return ring.dual_cache[1]


def conjugate_character(ring, sid, values, g):
    """The pair ^g(H, Phi) = (^gH, ^gPhi) with ^gPhi(psi) = Phi(^(g^-1)psi).

    Returns (subgroup id of ^gH, value tuple over Hom(^gH, A)).
    """
    tid = ring.lattice.conj_subgroup_id(g, sid)
    src = ring.hom_group(sid)
    dst = ring.hom_group(tid)
    ginv = ring.group.inverse[g]
    out = []
    for k in range(dst.size):
        pulled = conj_values_map(ring.group, dst.values_map(k), ginv)
        out.append(values[src.index_of_map(pulled)])
    return tid, tuple(out)


def canonicalize_dual(ring, sid, values):
    """Canonical dual orbit of (subgroup sid, character values), with a
    conjugating witness."""
    w = ring.lattice.to_rep[sid]
    rep = ring.lattice.class_rep(sid)
    _, moved = conjugate_character(ring, sid, values, w)
    oidx, n = _dual_lookup(ring)[rep][moved]
    return oidx, ring.group.mul(n, w)


# ---------------------------------------------------------------------------
# species values


def species_value(ring, d, b):
    """Species of the dual orbit d evaluated on the basis orbit b."""
    dual = dual_orbits(ring)[d] if isinstance(d, int) else d
    orbit = ring.basis.orbits[b]
    h = ring.lattice.subgroups[dual.subgroup_id]
    k = ring.lattice.subgroups[orbit.subgroup_id]
    hg = ring.hom_group(dual.subgroup_id)
    psi = ring.pair_values_map(b)
    group = ring.group
    total = Cyclotomic.zero(ring.level)
    for g in ring.lattice.double_coset_reps(dual.subgroup_id, orbit.subgroup_id):
        ginv = group.inverse[g]
        # H <= ^gK iff g^-1 H g <= K
        if not all(group.conj(ginv, x) in k.elems for x in h.gens):
            continue
        values = {x: psi[group.conj(ginv, x)] for x in h.sorted_elems}
        idx = hg.index_of_map(values)
        total = total + evaluate_character(dual.values, idx, ring.level)
    return total


def species_table(ring):
    """Full species table: rows are dual orbits, columns basis orbits."""
    if ring.species_cache is None:
        duals = dual_orbits(ring)
        rows = []
        for d in duals:
            rows.append(tuple(species_value(ring, d, b) for b in range(ring.rank)))
        ring.species_cache = tuple(rows)
    return ring.species_cache


def apply_species(ring, d, x):
    """Linear extension of a species to an arbitrary element."""
    row = species_table(ring)[d if isinstance(d, int) else d.index]
    total = Cyclotomic.zero(ring.level)
    for k, c in x.coeffs.items():
        total = total + c * row[k]
    return total


def species_value_composite(ring, d, b):
    """Oracle path for one species value: restrict to the subgroup ring,
    retract onto the full-subgroup span there, then apply the character
    linearly.  Must agree with the double coset form."""
    dual = dual_orbits(ring)[d] if isinstance(d, int) else d
    sub = ring.subring(dual.subgroup_id)
    res = ring_mod.restrict(ring.basis_element(b), sub)
    pi = sub.pi_retraction(res)
    hg = ring.hom_group(dual.subgroup_id)
    total = Cyclotomic.zero(ring.level)
    for k, c in pi.coeffs.items():
        values_child = sub.pair_values_map(k)
        values = {ring.group.index[sub.group.elements[x]]: v
                  for x, v in values_child.items()}
        idx = hg.index_of_map(values)
        total = total + c * evaluate_character(dual.values, idx, ring.level)
    return total


# ---------------------------------------------------------------------------
# idempotents


def idempotent(ring, d):
    """Primitive idempotent attached to a dual orbit, in the standard basis.

    The formula runs over every subgroup K below the representative H
    (not just class representatives) and every homomorphism phi of H,
    weighting [K, phi restricted] by |K| mu(K, H) times the conjugate
    character value, then divides by |N_G(H, Phi)| |Hom(H, A)|.
    """
    didx = d if isinstance(d, int) else d.index
    cached = ring.idempotent_cache.get(didx)
    if cached is not None:
        return cached
    dual = dual_orbits(ring)[didx]
    hid = dual.subgroup_id
    hg = ring.hom_group(hid)
    lattice = ring.lattice
    level = ring.level
    acc = {}
    for kid in lattice.subs_of[hid]:
        mu = lattice.mobius(kid, hid)
        if mu == 0:
            continue
        kw = lattice.subgroups[kid].order * mu
        ksub = lattice.subgroups[kid]
        for k in range(hg.size):
            coeff = conj_evaluate_character(dual.values, k, level) * kw
            values = {x: hg.tables[k][hg.pos[x]] for x in ksub.sorted_elems}
            oidx, _ = ring.canonicalize_pair(kid, values)
            acc[oidx] = acc[oidx] + coeff if oidx in acc else coeff
    denom = dual.stabilizer_order * hg.size
    out = ring_mod.RingElement(
        ring, {k: v.scalar_div(denom) for k, v in acc.items()}
    )
    ring.idempotent_cache[didx] = out
    return out


def idempotent_coordinates(ring, x):
    """Coordinates of an element in the idempotent basis: one species
    value per dual orbit."""
    return [apply_species(ring, d, x) for d in range(ring.rank)]


# ---------------------------------------------------------------------------
# exact linear algebra over the cyclotomic field


def exact_determinant(rows):
    """Determinant by Gaussian elimination with exact pivot inversion.

    Entries are Cyclotomic values at one level; no rounding anywhere.
    """
    n = len(rows)
    if n == 0:
        raise InputError("empty matrix")
    level = rows[0][0].level
    m = [list(r) for r in rows]
    det = Cyclotomic.one(level)
    sign = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not m[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return Cyclotomic.zero(level)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        pv = m[col][col]
        det = det * pv
        pv_inv = pv.inverse()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            factor = m[r][col] * pv_inv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    if sign < 0:
        det = -det
    return det


def species_determinant(ring):
    table = species_table(ring)
    det = exact_determinant([list(r) for r in table])
    if det.is_zero():
        raise TheoremViolationError("species table is singular")
    return det


def dual_descriptor(ring, d):
    dual = dual_orbits(ring)[d if isinstance(d, int) else d.index]
    sub = ring.lattice.subgroups[dual.subgroup_id]
    hg = ring.hom_group(dual.subgroup_id)
    gens = [cycle_string(ring.group.elements[g]) for g in sub.gens]
    hom_gens = [
        [list(hg.tables[gi][hg.pos[g]]) for g in sub.gens]
        for gi in hg.gen_indices
    ]
    return {
        "index": dual.index,
        "subgroup": {"order": sub.order, "class": dual.class_index,
                     "generators": gens},
        "character": {
            "order": character_order(dual.values, ring.level),
            "hom_generators": hom_gens,
            "exponents": list(character_gen_exponents(dual.values, hg, ring.level)),
        },
        "stabilizer_order": dual.stabilizer_order,
        "orbit_size": dual.orbit_size,
    }
