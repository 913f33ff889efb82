"""Standard basis, double coset products, retraction, functorial maps."""

import itertools
import json
import random
from pathlib import Path

import pytest

from fbr import burnside
from fbr.cyclo import Cyclotomic
from fbr.errors import InputError
from fbr.ring import build_ring, conjugate, induce, restrict

GOLDEN = json.loads((Path(__file__).parent / "golden" / "c2_a2.json").read_text())


def int_coeffs(x):
    return {k: int(v.rational_value()) for k, v in x.coeffs.items()}


# -- basis -----------------------------------------------------------------------

def test_basis_c2_a2(ring_factory):
    ring = ring_factory("C2", "2")
    assert ring.rank == 3
    descs = [ring.orbit_descriptor(i) for i in range(3)]
    assert [d["subgroup"]["order"] for d in descs] == [1, 2, 2]
    assert descs[1]["hom"]["images"] == [[0]]
    assert descs[2]["hom"]["images"] == [[1]]


def test_basis_s3_a2(ring_factory):
    assert ring_factory("S3", "2").rank == 6


@pytest.mark.parametrize("spec,classes", [
    ("C2", 2), ("S3", 4), ("D4", 8), ("A4", 5), ("Q8", 6),
])
def test_trivial_fiber_rank_is_class_count(ring_factory, spec, classes):
    assert ring_factory(spec, "1").rank == classes


def test_canonicalize_well_defined(ring_factory):
    ring = ring_factory("S3", "2")
    g = ring.group
    rng = random.Random(3)
    for i in range(ring.rank):
        o = ring.basis.orbits[i]
        values = ring.pair_values_map(i)
        # canonical input returns itself with an identity-acting witness
        oidx, w = ring.canonicalize_pair(o.subgroup_id, values)
        assert oidx == i
        from fbr.abelian import conj_values_map
        assert conj_values_map(g, values, w) == values
        # arbitrary conjugates land on the same orbit
        for _ in range(4):
            x = rng.randrange(g.order)
            moved = conj_values_map(g, values, x)
            sid = ring.lattice.by_set[frozenset(moved)]
            oidx2, w2 = ring.canonicalize_pair(sid, moved)
            assert oidx2 == i
            assert conj_values_map(g, moved, w2) == values


# -- multiplication -----------------------------------------------------------------

def test_identity_element(ring_factory):
    for spec, fiber in (("C2", "2"), ("S3", "2"), ("A4", "6")):
        ring = ring_factory(spec, fiber)
        one = ring.one()
        for i in range(ring.rank):
            x = ring.basis_element(i)
            assert ring.multiply(one, x) == x


def test_golden_products_c2_a2(ring_factory):
    ring = ring_factory("C2", "2")
    for key, want in GOLDEN["products"].items():
        i, j = (int(t) for t in key.split(","))
        got = int_coeffs(ring.multiply(ring.basis_element(i), ring.basis_element(j)))
        assert got == {int(k): v for k, v in want.items()}


def test_commutative_associative_exhaustive(ring_factory):
    for spec, fiber in (("S3", "2"), ("C4", "2"), ("A4", "6")):
        ring = ring_factory(spec, fiber)
        n = ring.rank
        elems = [ring.basis_element(i) for i in range(n)]
        for a in range(n):
            for b in range(a, n):
                assert ring.multiply(elems[a], elems[b]) == \
                    ring.multiply(elems[b], elems[a])
        rng = random.Random(11)
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(40)] if n > 8 else \
            list(itertools.product(range(n), repeat=3))
        for a, b, c in triples:
            lhs = ring.multiply(ring.multiply(elems[a], elems[b]), elems[c])
            rhs = ring.multiply(elems[a], ring.multiply(elems[b], elems[c]))
            assert lhs == rhs


def test_double_coset_order_independence(ring_factory):
    for spec, fiber in (("S3", "2"), ("D4", "2"), ("A4", "6")):
        ring = ring_factory(spec, fiber)
        for i in range(ring.rank):
            for j in range(i, ring.rank):
                assert dict(ring.structure_constants(i, j)) == \
                    ring.multiply_basis(i, j, reverse=True)


def test_multiply_level_mismatch():
    r1 = build_ring("C2", "2")
    r2 = build_ring("C2", "1")
    with pytest.raises(InputError):
        r1.multiply(r1.one(), r2.one())


# -- retraction ----------------------------------------------------------------------

def test_pi_retraction(ring_factory):
    ring = ring_factory("S3", "2")
    full = ring.lattice.full_group_id()
    rng = random.Random(5)
    for i in range(ring.rank):
        x = ring.basis_element(i)
        if ring.basis.orbits[i].subgroup_id == full:
            assert ring.pi_retraction(x) == x
        else:
            assert ring.pi_retraction(x).is_zero()
    for _ in range(10):
        x = ring.element_from_ints({rng.randrange(ring.rank): rng.randint(-3, 3)
                                    for _ in range(2)})
        y = ring.element_from_ints({rng.randrange(ring.rank): rng.randint(-3, 3)
                                    for _ in range(2)})
        assert ring.pi_retraction(ring.multiply(x, y)) == \
            ring.multiply(ring.pi_retraction(x), ring.pi_retraction(y))


# -- Burnside ring embedding -----------------------------------------------------------

def test_embed_and_project(ring_factory):
    ring = ring_factory("S3", "2")
    m = len(ring.lattice.classes)
    top = ring.burnside_embed({m - 1: 1})
    assert top == ring.one()
    for c in range(m):
        x = ring.burnside_embed({c: 1})
        proj = {k: int(v.rational_value())
                for k, v in ring.burnside_project(x).items()}
        assert proj == {c: 1}
    # [G/1]^2 = |G| [G/1]
    reg = ring.burnside_embed({0: 1})
    assert ring.multiply(reg, reg) == reg.scale(ring.group.order)


def test_products_match_marks_oracle(ring_factory):
    for spec in ("S3", "D4", "A4", "A5"):
        ring = ring_factory(spec, "1")
        lat = ring.lattice
        marks = burnside.table_of_marks(lat)
        m = len(lat.classes)
        for a in range(m):
            for b in range(a, m):
                oracle = burnside.product_via_marks(lat, a, b, marks)
                xa = ring.burnside_embed({a: 1})
                xb = ring.burnside_embed({b: 1})
                got = {k: int(v.rational_value())
                       for k, v in ring.burnside_project(ring.multiply(xa, xb)).items()}
                assert got == oracle


def test_table_of_marks_triangular(ring_factory):
    lat = ring_factory("S4", "1").lattice
    marks = burnside.table_of_marks(lat)
    m = len(lat.classes)
    for l in range(m):
        assert marks[l][l] > 0
        for c in range(m):
            if marks[l][c]:
                assert lat.subgroups[lat.classes[l].rep].order <= \
                    lat.subgroups[lat.classes[c].rep].order


# -- induction, restriction, conjugation ------------------------------------------------

def test_restriction_example(ring_factory):
    ring = ring_factory("S3", "2")
    lat = ring.lattice
    a3 = next(s.id for s in lat.subgroups if s.order == 3)
    c2 = next(s.id for s in lat.subgroups if s.order == 2)
    sub_a3 = ring.subring(a3)
    c2_triv = ring.trivial_pair_orbit(lat.class_rep(c2))
    res = restrict(ring.basis_element(c2_triv), sub_a3)
    assert int_coeffs(res) == {0: 1}
    assert sub_a3.basis.orbits[0].subgroup_id == sub_a3.lattice.trivial_id()


def test_induce_restrict_identity(ring_factory):
    ring = ring_factory("S3", "2")
    full = ring.lattice.full_group_id()
    sub = ring.subring(full)
    for i in range(ring.rank):
        x = ring.basis_element(i)
        assert int_coeffs(induce(x, sub)) == int_coeffs(x)
        assert int_coeffs(restrict(x, sub)) == int_coeffs(x)


def test_induction_transitivity(ring_factory):
    ring = ring_factory("S3", "2")
    lat = ring.lattice
    a3 = next(s.id for s in lat.subgroups if s.order == 3)
    r_triv = ring.subring(lat.trivial_id())
    r_a3 = ring.subring(a3)
    r_full = ring.subring(lat.full_group_id())
    for i in range(r_triv.rank):
        x = r_triv.basis_element(i)
        assert induce(induce(x, r_a3), r_full) == induce(x, r_full)


def test_restriction_transitivity(ring_factory):
    ring = ring_factory("S3", "2")
    lat = ring.lattice
    a3 = next(s.id for s in lat.subgroups if s.order == 3)
    r_triv = ring.subring(lat.trivial_id())
    r_a3 = ring.subring(a3)
    for i in range(ring.rank):
        x = ring.basis_element(i)
        assert restrict(restrict(x, r_a3), r_triv) == restrict(x, r_triv)


def test_conjugation_is_ring_map(ring_factory):
    ring = ring_factory("S3", "2")
    lat = ring.lattice
    g = ring.group
    c2_ids = [s.id for s in lat.subgroups if s.order == 2]
    src = ring.subring(c2_ids[0])
    mover = next(x for x in range(g.order)
                 if lat.conj_subgroup_id(x, c2_ids[0]) == c2_ids[1])
    dst = ring.subring(c2_ids[1])
    g_images = g.elements[mover]
    for a in range(src.rank):
        for b in range(src.rank):
            xa, xb = src.basis_element(a), src.basis_element(b)
            lhs = conjugate(src.multiply(xa, xb), g_images, dst)
            rhs = dst.multiply(conjugate(xa, g_images, dst),
                               conjugate(xb, g_images, dst))
            assert lhs == rhs


def test_element_json_shape(ring_factory):
    ring = ring_factory("C2", "2")
    doc = ring.one().to_json()
    assert set(doc) == {"basis", "coeffs"}
    assert doc["basis"][0]["subgroup"]["order"] == 2
    assert list(doc["coeffs"]) == ["1"]
