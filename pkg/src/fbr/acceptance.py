"""The acceptance suite: one callable per criterion, exact throughout.

Each criterion returns a dict with id, name, passed and a short detail
string.  Everything is exact arithmetic, so there are no tolerances;
sampling (only above rank 15, where exhaustive pair scans are ruled
out) is seeded and therefore reproducible byte for byte.
"""

from __future__ import annotations

import json
import random

from . import burnside, species as sp, spectrum as spc
from .cyclo import prime_ideals
from .errors import FbrError
from .ring import build_ring

CATALOG_GROUPS = ("C2", "C4", "V4", "C6", "S3", "D4", "Q8", "A4", "S4", "A5", "S5")
CATALOG_FIBERS = ("1", "2", "6")
RANK_CAP_FIBER6 = 60
EXHAUSTIVE_RANK = 15
SAMPLE_PAIRS = 200
DEFAULT_SEED = 1729

# small sub-catalog used for the determinism re-run
DETERMINISM_GROUPS = ("C2", "C6", "S3", "D4")


class Session:
    """Caches rings across criteria so the suite builds each (G, A) once."""

    def __init__(self, groups=None, fibers=None, seed=DEFAULT_SEED):
        self.groups = tuple(groups) if groups else CATALOG_GROUPS
        self.fibers = tuple(fibers) if fibers else CATALOG_FIBERS
        self.seed = seed
        self._rings = {}

    def ring(self, gspec, fspec):
        key = (gspec, fspec)
        if key not in self._rings:
            self._rings[key] = build_ring(gspec, fspec)
        return self._rings[key]

    def pairs(self):
        out = []
        for g in self.groups:
            for f in self.fibers:
                ring = self.ring(g, f)
                if f == "6" and ring.rank > RANK_CAP_FIBER6:
                    continue
                out.append((g, f))
        return out

    def pair_seed(self, gspec, fspec):
        i = self.groups.index(gspec) * len(CATALOG_FIBERS) + \
            self.fibers.index(fspec)
        return self.seed * 1000003 + i


def _result(cid, name, passed, detail):
    return {"id": cid, "name": name, "passed": bool(passed), "detail": detail}


def criterion_species_isomorphism(session):
    """Square species table, nonzero determinant, pairwise-distinct rows."""
    bad = []
    checked = 0
    for g, f in session.pairs():
        ring = session.ring(g, f)
        table = sp.species_table(ring)
        duals = sp.dual_orbits(ring)
        if len(table) != ring.rank or len(duals) != ring.rank:
            bad.append(f"{g}/{f}: not square")
            continue
        if len(set(table)) != len(table):
            bad.append(f"{g}/{f}: repeated rows")
        try:
            sp.species_determinant(ring)
        except FbrError:
            bad.append(f"{g}/{f}: singular")
        checked += 1
    detail = f"{checked} rings checked" if not bad else "; ".join(bad)
    return _result(1, "species-isomorphism", not bad, detail)


def _idempotent_pairs(ring, rng):
    n = ring.rank
    if n <= EXHAUSTIVE_RANK:
        return [(a, b) for a in range(n) for b in range(n)], "exhaustive"
    pairs = {(a, a) for a in range(n)}
    while len(pairs) < SAMPLE_PAIRS:
        pairs.add((rng.randrange(n), rng.randrange(n)))
    return sorted(pairs), f"sampled {len(pairs)}"


def criterion_idempotents(session):
    """Species-delta property, orthogonality, partition of unity."""
    bad = []
    notes = []
    for g, f in session.pairs():
        ring = session.ring(g, f)
        rng = random.Random(session.pair_seed(g, f))
        pairs, mode = _idempotent_pairs(ring, rng)
        total = ring.zero()
        for d in range(ring.rank):
            total = total + sp.idempotent(ring, d)
        if total != ring.one():
            bad.append(f"{g}/{f}: idempotents do not sum to 1")
        for a, b in pairs:
            ea = sp.idempotent(ring, a)
            eb = sp.idempotent(ring, b)
            prod = ring.multiply(ea, eb)
            want = ea if a == b else ring.zero()
            if prod != want:
                bad.append(f"{g}/{f}: e{a}*e{b} wrong")
                break
            v = sp.apply_species(ring, a, eb)
            expect = 1 if a == b else 0
            if not (v.is_rational() and v.rational_value() == expect):
                bad.append(f"{g}/{f}: species of e{b} at {a} wrong")
                break
        notes.append(f"{g}/{f}:{mode.split()[0]}")
    detail = f"{len(notes)} rings" if not bad else "; ".join(bad)
    return _result(2, "eq1-idempotents", not bad, detail)


GOLDEN_C2_TABLE = [[2, 1, 1], [0, 1, 1], [0, 1, -1]]
GOLDEN_C2_IDEMPOTENTS = [
    {0: "1/2"},
    {0: "-1/2", 1: "1/2", 2: "1/2"},
    {1: "1/2", 2: "-1/2"},
]


def criterion_micro_instances(session):
    """Hand-verified golden values for (C2, A=2) and the (S3, A=2) rank."""
    bad = []
    ring = session.ring("C2", "2")
    table = sp.species_table(ring)
    got = [[_as_int(v) for v in row] for row in table]
    if got != GOLDEN_C2_TABLE:
        bad.append(f"C2/2 table {got}")
    for d, golden in enumerate(GOLDEN_C2_IDEMPOTENTS):
        e = sp.idempotent(ring, d)
        rendered = {k: str(v.rational_value()) for k, v in e.coeffs.items()}
        if rendered != golden:
            bad.append(f"C2/2 idempotent {d}: {rendered}")
    if session.ring("S3", "2").rank != 6:
        bad.append("S3/2 rank != 6")
    detail = "golden values match" if not bad else "; ".join(bad)
    return _result(3, "micro-instances", not bad, detail)


def _as_int(v):
    if not v.is_integer():
        raise FbrError("expected integer species value")
    return int(v.rational_value())


def criterion_structure_constants(session):
    """s(ab) = s(a)s(b) plus the independent table-of-marks oracle."""
    bad = []
    for g, f in session.pairs():
        ring = session.ring(g, f)
        rng = random.Random(session.pair_seed(g, f) + 1)
        n = ring.rank
        if n <= EXHAUSTIVE_RANK:
            pairs = [(a, b) for a in range(n) for b in range(a, n)]
        else:
            pairs = sorted({(rng.randrange(n), rng.randrange(n))
                            for _ in range(SAMPLE_PAIRS)})
        for a, b in pairs:
            prod = ring.multiply(ring.basis_element(a), ring.basis_element(b))
            for d in range(n):
                lhs = sp.apply_species(ring, d, prod)
                rhs = sp.species_table(ring)[d][a] * sp.species_table(ring)[d][b]
                if lhs != rhs:
                    bad.append(f"{g}/{f}: s{d}({a}*{b})")
                    break
            if bad:
                break
        if bad:
            break
    # Burnside embedding versus the marks oracle, trivial fiber
    for g in session.groups:
        ring = session.ring(g, "1")
        lattice = ring.lattice
        marks = burnside.table_of_marks(lattice)
        m = len(lattice.classes)
        rng = random.Random(session.seed * 31 + 7)
        if m <= EXHAUSTIVE_RANK:
            cpairs = [(a, b) for a in range(m) for b in range(a, m)]
        else:
            cpairs = sorted({(rng.randrange(m), rng.randrange(m))
                             for _ in range(SAMPLE_PAIRS)})
        for a, b in cpairs:
            oracle = burnside.product_via_marks(lattice, a, b, marks)
            xa = ring.burnside_embed({a: 1})
            xb = ring.burnside_embed({b: 1})
            got = {k: _as_int(v)
                   for k, v in ring.burnside_project(ring.multiply(xa, xb)).items()}
            if got != oracle:
                bad.append(f"{g}: marks oracle at ({a},{b})")
                break
        if bad:
            break
    detail = "all products certified" if not bad else "; ".join(bad)
    return _result(4, "structure-constants", not bad, detail)


def criterion_spectrum_partitions(session):
    """Regularization equals the congruence oracle for every ideal and
    every p dividing the group order; characteristic zero is discrete."""
    bad = []
    checked = 0
    for g, f in session.pairs():
        ring = session.ring(g, f)
        try:
            part0 = spc.p_equivalence_partition(
                ring, spc.PrimeDescriptor.char_zero())
        except FbrError as exc:
            bad.append(f"{g}/{f} char0: {exc}")
            continue
        if any(len(c) != 1 for c in part0.classes):
            bad.append(f"{g}/{f}: char0 partition not discrete")
        for p in _prime_divisors(ring.group.order):
            seen = []
            for ideal in prime_ideals(p, ring.level):
                prime = spc.PrimeDescriptor.char_p(p, ring.level, ideal)
                try:
                    part = spc.p_equivalence_partition(ring, prime)
                except FbrError as exc:
                    bad.append(f"{g}/{f} p={p}: {exc}")
                    break
                seen.append(part.classes)
                regs = part.regular_representatives
                if len(set(regs)) != len(regs):
                    bad.append(f"{g}/{f} p={p}: repeated regular class")
            if len({tuple(s) for s in seen}) > 1:
                bad.append(f"{g}/{f} p={p}: partition depends on the ideal")
            checked += 1
    detail = f"{checked} (ring, p) pairs" if not bad else "; ".join(bad)
    return _result(5, "spectrum-partitions", not bad, detail)


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def criterion_block_decomposition(session):
    """Block count, integrality, orthogonality and partition of unity."""
    bad = []
    for g, f in session.pairs():
        ring = session.ring(g, f)
        comps = spc.components(ring)
        expected = 2 if g in ("A5", "S5") else 1
        if len(comps) != expected:
            bad.append(f"{g}/{f}: {len(comps)} blocks")
            continue
        try:
            blocks = spc.block_idempotents(ring)
        except FbrError as exc:
            bad.append(f"{g}/{f}: {exc}")
            continue
        total = ring.zero()
        for bi in blocks:
            total = total + bi.element
        if total != ring.one():
            bad.append(f"{g}/{f}: blocks do not sum to 1")
        for i, bi in enumerate(blocks):
            for j, bj in enumerate(blocks):
                prod = ring.multiply(bi.element, bj.element)
                want = bi.element if i == j else ring.zero()
                if prod != want:
                    bad.append(f"{g}/{f}: block orthogonality ({i},{j})")
    detail = "all block systems verified" if not bad else "; ".join(bad)
    return _result(6, "block-decomposition", not bad, detail)


def criterion_block_bases(session):
    """Block bases are independent and span; e_[1] fixes solvable pairs."""
    bad = []
    for g, f in session.pairs():
        ring = session.ring(g, f)
        for comp in spc.components(ring):
            try:
                spc.block_basis(ring, comp)
            except FbrError as exc:
                bad.append(f"{g}/{f} block {comp.index}: {exc}")
        solvable = next(c for c in spc.components(ring)
                        if c.perfect_id == ring.lattice.trivial_id())
        e1 = spc.block_idempotent(ring, solvable).element
        for b in solvable.basis_orbits:
            x = ring.basis_element(b)
            if ring.multiply(x, e1) != x:
                bad.append(f"{g}/{f}: e_[1] moves solvable orbit {b}")
                break
    detail = "all block bases verified" if not bad else "; ".join(bad)
    return _result(7, "block-bases", not bad, detail)


def criterion_weyl_isomorphism(session):
    """Inflation bijection for (A5, J=A5) and (S5, J=A5), fibers 1 and 2."""
    bad = []
    cases = [(g, f) for g in ("A5", "S5") for f in ("1", "2")
             if g in session.groups and f in session.fibers]
    for g, f in cases:
        ring = session.ring(g, f)
        perfect = [j for j in ring.lattice.perfect_class_reps() if j != 0]
        if len(perfect) != 1:
            bad.append(f"{g}/{f}: expected one nontrivial perfect class")
            continue
        try:
            iso = spc.weyl_block_iso(ring, perfect[0])
        except FbrError as exc:
            bad.append(f"{g}/{f}: {exc}")
            continue
        comp = next(c for c in spc.components(ring)
                    if c.perfect_id == perfect[0])
        if len(iso.bijection) != len(comp.basis_orbits):
            bad.append(f"{g}/{f}: bijection size mismatch")
    detail = f"{len(cases)} cases verified" if not bad else "; ".join(bad)
    return _result(8, "weyl-isomorphism", not bad, detail)


def run_criteria(session):
    return [
        criterion_species_isomorphism(session),
        criterion_idempotents(session),
        criterion_micro_instances(session),
        criterion_structure_constants(session),
        criterion_spectrum_partitions(session),
        criterion_block_decomposition(session),
        criterion_block_bases(session),
        criterion_weyl_isomorphism(session),
    ]


def criterion_determinism(seed):
    """Two fresh runs over a reduced catalog must serialize identically."""
    reports = []
    for _ in range(2):
        session = Session(groups=DETERMINISM_GROUPS, seed=seed)
        rep = run_criteria(session)
        reports.append(json.dumps(rep, sort_keys=True, separators=(",", ":")))
    passed = reports[0] == reports[1]
    detail = (f"byte-identical over {'/'.join(DETERMINISM_GROUPS)}"
              if passed else "reports differ between runs")
    return _result(9, "determinism", passed, detail)


def run_all(groups=None, fibers=None, seed=DEFAULT_SEED):
    """Full acceptance report as a JSON-ready dict."""
    session = Session(groups=groups, fibers=fibers, seed=seed)
    criteria = run_criteria(session)
    criteria.append(criterion_determinism(seed))
    return {
        "seed": seed,
        "groups": list(session.groups),
        "fibers": list(session.fibers),
        "criteria": criteria,
        "passed": all(c["passed"] for c in criteria),
    }
