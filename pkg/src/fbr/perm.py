"""Finite permutation groups with full subgroup-lattice machinery.

Group elements are permutations of {0, ..., degree-1} stored as image
tuples.  A group keeps its elements in sorted tuple order and addresses
them by index, so the identity is always element 0 and element identity
is index equality.  Everything built here is immutable after
construction and safe to share.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm

from .errors import InputError, InvariantViolationError, ResourceLimitError

DEFAULT_ORDER_CAP = 10000

# Above this order the n x n multiplication table is skipped and products
# are recomputed from image tuples.
_MUL_TABLE_LIMIT = 2048


# ---------------------------------------------------------------------------
# raw permutation helpers


def identity_perm(degree):
    return tuple(range(degree))


def compose(a, b):
    """Product a*b with (a*b)(x) = a(b(x))."""
    return tuple(a[i] for i in b)


def invert(a):
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def perm_cycles(p):
    """Cycle decomposition with fixed points omitted.

    Each cycle starts at its least point and cycles are listed by their
    least point, which makes the decomposition canonical.
    """
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s] or p[s] == s:
            seen[s] = True
            continue
        cyc = [s]
        seen[s] = True
        x = p[s]
        while x != s:
            cyc.append(x)
            seen[x] = True
            x = p[x]
        out.append(tuple(cyc))
    return tuple(out)


def perm_order(p):
    cycles = perm_cycles(p)
    if not cycles:
        return 1
    return lcm(*(len(c) for c in cycles))


def cycle_string(p):
    """Render as 1-based disjoint cycles, identity as '()'."""
    cycles = perm_cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles)


def parse_cycles(degree, text):
    """Parse a 1-based cycle expression like '(1 2 3)(4 5)' into a permutation.

    Raises InputError with the offending position on malformed input.
    """
    images = list(range(degree))
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise InputError(f"expected '(' at position {i} in {text!r}")
        i += 1
        points = []
        while True:
            while i < n and (text[i].isspace() or text[i] == ","):
                i += 1
            if i >= n:
                raise InputError(f"unclosed cycle at position {i} in {text!r}")
            if text[i] == ")":
                i += 1
                break
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j == i:
                raise InputError(f"expected point at position {i} in {text!r}")
            pt = int(text[i:j])
            if not 1 <= pt <= degree:
                raise InputError(f"point {pt} out of range 1..{degree} at position {i}")
            points.append(pt - 1)
            i = j
        if len(set(points)) != len(points):
            raise InputError(f"repeated point in cycle {points} in {text!r}")
        for k, pt in enumerate(points):
            if images[pt] != pt:
                raise InputError(f"point {pt + 1} appears in two cycles in {text!r}")
            images[pt] = points[(k + 1) % len(points)]
    perm = tuple(images)
    if sorted(perm) != list(range(degree)):
        raise InputError(f"not a permutation of 1..{degree}: {text!r}")
    return perm


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup:
    """A finite permutation group given by its full sorted element list."""

    def __init__(self, degree, elements, generator_indices=()):
        self.degree = degree
        self.elements = tuple(sorted(elements))
        self.order = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if identity_perm(degree) not in self.index:
            raise InvariantViolationError("identity missing from element list")
        # identity is the lex-least permutation, hence index 0
        self.identity = self.index[identity_perm(degree)]
        if self.identity != 0:
            raise InvariantViolationError("identity is not element 0")
        self.inverse = tuple(self.index[invert(e)] for e in self.elements)
        self.element_orders = tuple(perm_order(e) for e in self.elements)
        self.generator_indices = tuple(generator_indices)
        if self.order <= _MUL_TABLE_LIMIT:
            idx = self.index
            elems = self.elements
            self._table = [
                tuple(idx[compose(a, b)] for b in elems) for a in elems
            ]
        else:
            self._table = None

    @classmethod
    def from_generators(cls, degree, generators, order_cap=DEFAULT_ORDER_CAP):
        if degree < 1:
            raise InputError("degree must be at least 1")
        gens = []
        for g in generators:
            g = tuple(g)
            if sorted(g) != list(range(degree)):
                raise InputError(f"invalid permutation of degree {degree}: {g}")
            gens.append(g)
        ident = identity_perm(degree)
        known = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = compose(x, g)
                    if y not in known:
                        known.add(y)
                        nxt.append(y)
            if len(known) > order_cap:
                raise ResourceLimitError(
                    f"group order exceeds cap {order_cap}"
                )
            frontier = nxt
        ordered = sorted(known)
        idx = {e: i for i, e in enumerate(ordered)}
        return cls(degree, ordered, tuple(idx[g] for g in gens))

    @classmethod
    def from_elements(cls, degree, elements):
        """Wrap an element set known to be closed (subgroups, quotients)."""
        group = cls(degree, elements)
        # cheap closure sanity check: products of a generating set stay inside
        gens = _greedy_generators_tuples(group)
        for e in group.elements:
            for g in gens:
                if compose(e, g) not in group.index:
                    raise InvariantViolationError("element set is not closed")
        return group

    def mul(self, a, b):
        if self._table is not None:
            return self._table[a][b]
        return self.index[compose(self.elements[a], self.elements[b])]

    def inv(self, a):
        return self.inverse[a]

    def conj(self, g, x):
        """Index of g x g^-1."""
        return self.mul(self.mul(g, x), self.inverse[g])

    def closure(self, seed):
        """Subgroup generated by the given element indices, as a frozenset."""
        known = {self.identity}
        frontier = [self.identity]
        seed = tuple(seed)
        while frontier:
            nxt = []
            for x in frontier:
                for g in seed:
                    y = self.mul(x, g)
                    if y not in known:
                        known.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(known)

    def conj_set(self, g, elems):
        return frozenset(self.conj(g, x) for x in elems)

    def is_abelian(self):
        gens = self.generator_indices or range(self.order)
        return all(
            self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
        )

    def __repr__(self):
        return f"FiniteGroup(degree={self.degree}, order={self.order})"


def _greedy_generators_tuples(group):
    """Small generating set of the whole group, for internal checks."""
    gens = []
    current = {group.elements[0]}
    for e in group.elements:
        if e in current:
            continue
        gens.append(e)
        # regenerate closure over tuples
        known = {identity_perm(group.degree)}
        frontier = list(known)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = compose(x, g)
                    if y not in known:
                        known.add(y)
                        nxt.append(y)
            frontier = nxt
        current = known
        if len(current) == group.order:
            break
    return gens


def double_coset_reps(group, h_elems, k_elems):
    """Representatives g hitting every double coset HgK exactly once.

    Elements are scanned in index order, so the representative of each
    coset is its least element and the output is canonical.
    """
    covered = bytearray(group.order)
    reps = []
    h_sorted = sorted(h_elems)
    k_sorted = sorted(k_elems)
    for g in range(group.order):
        if covered[g]:
            continue
        reps.append(g)
        for h in h_sorted:
            hg = group.mul(h, g)
            for k in k_sorted:
                covered[group.mul(hg, k)] = 1
    return tuple(reps)


# ---------------------------------------------------------------------------
# subgroup lattice


@dataclass(frozen=True)
class Subgroup:
    id: int
    elems: frozenset
    sorted_elems: tuple
    order: int
    gens: tuple


@dataclass(frozen=True)
class SubgroupClass:
    index: int
    rep: int
    members: tuple


class SubgroupLattice:
    """All subgroups of a group with conjugacy, normalizers and Moebius data.

    Subgroups are sorted by (order, element tuple), so ids are canonical
    and the class representative (least id in its class) carries the
    lexicographically least element set.
    """

    def __init__(self, group):
        self.group = group
        sets = _enumerate_subgroup_sets(group)
        ordered = sorted(sets, key=lambda fs: (len(fs), tuple(sorted(fs))))
        self.subgroups = []
        for i, fs in enumerate(ordered):
            selems = tuple(sorted(fs))
            self.subgroups.append(
                Subgroup(i, fs, selems, len(fs), _greedy_gens(group, selems))
            )
        self.by_set = {s.elems: s.id for s in self.subgroups}
        self._build_classes()
        self._build_normalizers()
        self._build_inclusion()
        self._mobius = {}
        self._derived = {}
        self._perfect = {}
        self._op_residual = {}
        self._dcosets = {}

    # -- construction ------------------------------------------------------

    def _build_classes(self):
        group = self.group
        m = len(self.subgroups)
        self.class_index = [None] * m
        self.to_rep = [None] * m
        self.classes = []
        for i in range(m):
            if self.class_index[i] is not None:
                continue
            found = {}
            for g in range(group.order):
                t = self.by_set[group.conj_set(g, self.subgroups[i].sorted_elems)]
                if t not in found:
                    found[t] = g
            cidx = len(self.classes)
            members = tuple(sorted(found))
            for t, g in found.items():
                self.class_index[t] = cidx
                # ^g S_i = S_t, so ^(g^-1) S_t = S_i = class rep
                self.to_rep[t] = group.inverse[g]
            self.classes.append(SubgroupClass(cidx, i, members))

    def _build_normalizers(self):
        group = self.group
        self.normalizer_ids = []
        for s in self.subgroups:
            norm = frozenset(
                g for g in range(group.order)
                if group.conj_set(g, s.sorted_elems) == s.elems
            )
            self.normalizer_ids.append(self.by_set[norm])

    def _build_inclusion(self):
        subs = self.subgroups
        self.subs_of = []
        for h in subs:
            self.subs_of.append(tuple(
                k.id for k in subs if k.order <= h.order and k.elems <= h.elems
            ))

    # -- basic queries -----------------------------------------------------

    def __len__(self):
        return len(self.subgroups)

    def subgroup(self, sid):
        return self.subgroups[sid]

    def is_subgroup_of(self, kid, hid):
        return self.subgroups[kid].elems <= self.subgroups[hid].elems

    def conj_subgroup_id(self, g, sid):
        return self.by_set[self.group.conj_set(g, self.subgroups[sid].sorted_elems)]

    def class_rep(self, sid):
        return self.classes[self.class_index[sid]].rep

    def normalizer(self, sid):
        return self.subgroups[self.normalizer_ids[sid]]

    def full_group_id(self):
        return len(self.subgroups) - 1

    def trivial_id(self):
        return 0

    # -- double cosets -----------------------------------------------------

    def double_coset_reps(self, hid, kid):
        key = (hid, kid)
        reps = self._dcosets.get(key)
        if reps is None:
            reps = double_coset_reps(
                self.group,
                self.subgroups[hid].sorted_elems,
                self.subgroups[kid].sorted_elems,
            )
            self._dcosets[key] = reps
        return reps

    # -- Moebius function ----------------------------------------------------

    def mobius(self, kid, hid):
        """Moebius value mu(K, H) of the subgroup poset interval [K, H]."""
        if not self.is_subgroup_of(kid, hid):
            raise InputError("mobius requires K <= H")
        key = (kid, hid)
        val = self._mobius.get(key)
        if val is not None:
            return val
        if kid == hid:
            val = 1
        else:
            kelems = self.subgroups[kid].elems
            total = 0
            for lid in self.subs_of[hid]:
                if lid != hid and kelems <= self.subgroups[lid].elems:
                    total += self.mobius(kid, lid)
            val = -total
        self._mobius[key] = val
        return val

    # -- derived series and residuals ----------------------------------------

    def derived_id(self, hid):
        val = self._derived.get(hid)
        if val is None:
            group = self.group
            elems = self.subgroups[hid].sorted_elems
            comms = set()
            for x in elems:
                xi = group.inverse[x]
                for y in elems:
                    comms.add(group.mul(group.mul(xi, group.inverse[y]),
                                        group.mul(x, y)))
            val = self.by_set[group.closure(sorted(comms))]
            self._derived[hid] = val
        return val

    def derived_series(self, hid):
        series = [hid]
        while True:
            nxt = self.derived_id(series[-1])
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def perfect_residual_id(self, hid):
        """Last term of the derived series: the smallest normal subgroup
        with solvable quotient."""
        val = self._perfect.get(hid)
        if val is None:
            val = self.derived_series(hid)[-1]
            self._perfect[hid] = val
        return val

    def o_p_residual_id(self, hid, p):
        """Subgroup generated by the elements of order coprime to p."""
        if not _is_prime(p):
            raise InputError(f"{p} is not prime")
        key = (hid, p)
        val = self._op_residual.get(key)
        if val is None:
            group = self.group
            seed = [x for x in self.subgroups[hid].sorted_elems
                    if group.element_orders[x] % p != 0]
            val = self.by_set[group.closure(seed)]
            self._op_residual[key] = val
        return val

    def perfect_class_reps(self):
        """Class representatives of the perfect subgroups, ascending."""
        return tuple(
            c.rep for c in self.classes if self.derived_id(c.rep) == c.rep
        )

    def is_solvable(self, hid):
        return self.perfect_residual_id(hid) == 0


def _greedy_gens(group, sorted_elems):
    """Canonical small generating set: scan elements ascending, keep the
    ones that enlarge the generated subgroup."""
    target = len(sorted_elems)
    gens = []
    current = {group.identity}
    for x in sorted_elems:
        if x in current:
            continue
        gens.append(x)
        current = group.closure(gens)
        if len(current) == target:
            break
    return tuple(gens)


def _enumerate_subgroup_sets(group):
    """Every subgroup as a frozenset of element indices.

    Cyclic subgroups are seeded first, then the collection is closed
    under joins with cyclic subgroups.  Every subgroup is the join of
    the cyclic subgroups of its elements, and any join can be built one
    cyclic factor at a time, so the fixpoint is the full lattice.  The
    layering reaches nonsolvable subgroups too, which extension by
    normal prime steps alone cannot.
    """
    ident = frozenset({group.identity})
    gens_of = {ident: ()}
    cyclic = []
    for g in range(1, group.order):
        fs = group.closure((g,))
        if fs not in gens_of:
            gens_of[fs] = (g,)
            cyclic.append((fs, g))
    cyclic.sort(key=lambda t: (len(t[0]), tuple(sorted(t[0]))))
    queue = [ident] + [fs for fs, _ in cyclic]
    pos = 0
    while pos < len(queue):
        s = queue[pos]
        pos += 1
        sgens = gens_of[s]
        for cfs, cgen in cyclic:
            if cfs <= s:
                continue
            joined = group.closure(sgens + (cgen,))
            if joined not in gens_of:
                gens_of[joined] = sgens + (cgen,)
                queue.append(joined)
    return list(gens_of)


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
# quotients and Sylow subgroups


def quotient_group(group, n_elems, k_elems):
    """Quotient N/K as a permutation group on the left cosets of K in N.

    Requires K normal in N; the action on cosets is then faithful for
    the quotient.  Returns (Q, onto, cosets) where onto maps an element
    index of N to its image index in Q and cosets lists the left cosets
    in the order of their Q point labels.
    """
    n_sorted = sorted(n_elems)
    k_sorted = sorted(k_elems)
    coset_of = {}
    cosets = []
    for x in n_sorted:
        if x in coset_of:
            continue
        cs = frozenset(group.mul(x, k) for k in k_sorted)
        cid = len(cosets)
        cosets.append(cs)
        for y in cs:
            coset_of[y] = cid
    reps = [min(cs) for cs in cosets]
    perms = {}
    for x in n_sorted:
        perm = tuple(coset_of[group.mul(x, r)] for r in reps)
        perms.setdefault(perm, []).append(x)
    quotient = FiniteGroup.from_elements(len(cosets), perms)
    if quotient.order * len(k_sorted) != len(n_sorted):
        raise InvariantViolationError("quotient construction requires K normal in N")
    onto = {}
    for perm, xs in perms.items():
        qi = quotient.index[perm]
        for x in xs:
            onto[x] = qi
    return quotient, onto, cosets


def sylow_subgroup(group, p):
    """A Sylow p-subgroup of the whole group, as a frozenset of indices.

    Deterministic: grows a p-subgroup by the least suitable p-element of
    its normalizer until the full p-part of the order is reached.
    """
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    target = 1
    n = group.order
    while n % p == 0:
        target *= p
        n //= p
    current = frozenset({group.identity})
    while len(current) < target:
        grown = False
        for g in range(group.order):
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


# ---------------------------------------------------------------------------
# named groups and the group spec grammar


def cyclic_group(n, order_cap=DEFAULT_ORDER_CAP):
    if n < 1:
        raise InputError("C<n> requires n >= 1")
    if n == 1:
        return FiniteGroup.from_generators(1, [], order_cap)
    cyc = tuple(list(range(1, n)) + [0])
    return FiniteGroup.from_generators(n, [cyc], order_cap)


def symmetric_group(n, order_cap=DEFAULT_ORDER_CAP):
    if n < 1:
        raise InputError("S<n> requires n >= 1")
    if n == 1:
        return FiniteGroup.from_generators(1, [], order_cap)
    swap = tuple([1, 0] + list(range(2, n)))
    cyc = tuple(list(range(1, n)) + [0])
    return FiniteGroup.from_generators(n, [swap, cyc], order_cap)


def alternating_group(n, order_cap=DEFAULT_ORDER_CAP):
    if n < 1:
        raise InputError("A<n> requires n >= 1")
    if n <= 2:
        return FiniteGroup.from_generators(max(n, 1), [], order_cap)
    gens = []
    for i in range(n - 2):
        images = list(range(n))
        images[i], images[i + 1], images[i + 2] = images[i + 1], images[i + 2], images[i]
        gens.append(tuple(images))
    return FiniteGroup.from_generators(n, gens, order_cap)


def dihedral_group(n, order_cap=DEFAULT_ORDER_CAP):
    """Dihedral group of order 2n acting on n points."""
    if n < 3:
        raise InputError("D<n> requires n >= 3")
    rot = tuple(list(range(1, n)) + [0])
    refl = tuple((n - i) % n for i in range(n))
    return FiniteGroup.from_generators(n, [rot, refl], order_cap)


def klein_group(order_cap=DEFAULT_ORDER_CAP):
    return FiniteGroup.from_generators(
        4, [(1, 0, 3, 2), (2, 3, 0, 1)], order_cap
    )


def quaternion_group(order_cap=DEFAULT_ORDER_CAP):
    # regular action of Q8 on itself, points 1,i,-1,-i,j,k,-j,-k
    i_gen = parse_cycles(8, "(1 2 3 4)(5 6 7 8)")
    j_gen = parse_cycles(8, "(1 5 3 7)(2 8 4 6)")
    return FiniteGroup.from_generators(8, [i_gen, j_gen], order_cap)


_NAMED_RE = re.compile(r"^([CSDA])(\d+)$")


def parse_group_spec(spec, order_cap=DEFAULT_ORDER_CAP):
    """Build a group from the input grammar.

    Named entries: C<n>, D<n>, S<n>, A<n>, Q8, V4.  Explicit permutation
    groups: perm:<degree>:<cycles;cycles;...> with 1-based cycles like
    (1 2 3)(4 5).
    """
    spec = spec.strip()
    if spec == "Q8":
        return quaternion_group(order_cap)
    if spec == "V4":
        return klein_group(order_cap)
    m = _NAMED_RE.match(spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "C":
            return cyclic_group(n, order_cap)
        if kind == "S":
            return symmetric_group(n, order_cap)
        if kind == "A":
            return alternating_group(n, order_cap)
        return dihedral_group(n, order_cap)
    if spec.startswith("perm:"):
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise InputError(f"expected perm:<degree>:<cycles;...>, got {spec!r}")
        try:
            degree = int(parts[1])
        except ValueError:
            raise InputError(f"bad degree {parts[1]!r} in {spec!r}") from None
        if degree < 1:
            raise InputError(f"degree must be positive in {spec!r}")
        gens = []
        if parts[2].strip():
            for chunk in parts[2].split(";"):
                gens.append(parse_cycles(degree, chunk.strip()))
        return FiniteGroup.from_generators(degree, gens, order_cap)
    raise InputError(f"unrecognized group spec {spec!r}")
