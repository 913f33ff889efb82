"""Command line front end.

Verbs: basis, multiply, species, idempotents, spectrum, blocks, weyl,
verify-all.  Output is JSON (default) or an aligned text table; both
are byte-stable for a fixed configuration and seed.  Exit codes: 0 ok,
1 input error, 2 resource cap exceeded, 3 theorem or invariant
violation (including failed verify-all criteria).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import acceptance, cache, species as sp, spectrum as spc
from .cyclo import render_cyclotomic
from .errors import (FbrError, InputError, InvariantViolationError,
                     ResourceLimitError, TheoremViolationError)
from .perm import DEFAULT_ORDER_CAP, cycle_string, parse_group_spec
from .ring import build_ring


def _parser():
    parser = argparse.ArgumentParser(
        prog="fbr",
        description="Exact computation in fibered Burnside rings",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, needs_group=True):
        if needs_group:
            p.add_argument("--group", required=True,
                           help="C<n>, D<n>, S<n>, A<n>, Q8, V4 or perm:<deg>:<cycles;...>")
            p.add_argument("--fiber", default="1",
                           help="invariant factors like 2x4, or 1 for the trivial fiber")
        p.add_argument("--format", choices=["json", "table"], default="json")
        p.add_argument("--cache-dir", default=os.environ.get("FBR_CACHE_DIR"))
        p.add_argument("--cap-order", type=int, default=DEFAULT_ORDER_CAP)
        p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)

    common(sub.add_parser("basis", help="list the monomial basis orbits"))
    p = sub.add_parser("multiply", help="product of two basis orbits")
    common(p)
    p.add_argument("left", type=int)
    p.add_argument("right", type=int)
    common(sub.add_parser("species", help="emit the species table"))
    common(sub.add_parser("idempotents", help="emit the primitive idempotents"))
    p = sub.add_parser("spectrum", help="P-equivalence partition of dual pairs")
    common(p)
    p.add_argument("--char", required=True,
                   help="residue characteristic: 0 or a prime p")
    common(sub.add_parser("blocks", help="block idempotents and block bases"))
    p = sub.add_parser("weyl", help="inflation bijection onto a block")
    common(p)
    p.add_argument("--perfect", required=True,
                   help="perfect subgroup selector: 1 or a named group of matching order")
    p = sub.add_parser("verify-all", help="run the acceptance suite")
    p.add_argument("--group", default=None, help="restrict the catalog to one group")
    p.add_argument("--fiber", default=None, help="restrict the catalog to one fiber")
    common(p, needs_group=False)
    return parser


def _load_ring(args):
    if args.cache_dir:
        ring = cache.load_session(args.cache_dir, args.group, args.fiber)
        if ring is not None:
            return ring
    return build_ring(args.group, args.fiber, order_cap=args.cap_order)


def _save_ring(args, ring):
    if args.cache_dir:
        cache.save_session(args.cache_dir, ring, args.group, args.fiber)


def _emit(args, doc, table_lines):
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in table_lines:
            print(line)


def _envelope(args, verb, ring=None):
    doc = {"command": verb, "group": args.group, "fiber": args.fiber}
    if ring is not None:
        doc["level"] = ring.level
        doc["rank"] = ring.rank
    return doc


def _orbit_label(ring, i):
    d = ring.orbit_descriptor(i)
    gens = ",".join(d["subgroup"]["generators"]) or "1"
    images = d["hom"]["images"]
    return f"[{gens} | {images}]"


def cmd_basis(args):
    ring = _load_ring(args)
    doc = _envelope(args, "basis", ring)
    doc["orbits"] = [ring.orbit_descriptor(i) for i in range(ring.rank)]
    lines = [f"rank {ring.rank}  level {ring.level}"]
    for i in range(ring.rank):
        o = ring.basis.orbits[i]
        lines.append(f"b{i:<3} order {ring.lattice.subgroups[o.subgroup_id].order:<4}"
                     f" size {o.orbit_size:<4} {_orbit_label(ring, i)}")
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def cmd_multiply(args):
    ring = _load_ring(args)
    if not (0 <= args.left < ring.rank and 0 <= args.right < ring.rank):
        raise InputError(f"orbit indices must lie in 0..{ring.rank - 1}")
    prod = ring.multiply(ring.basis_element(args.left),
                         ring.basis_element(args.right))
    doc = _envelope(args, "multiply", ring)
    doc["left"] = args.left
    doc["right"] = args.right
    doc["product"] = prod.to_json()
    lines = [f"b{args.left} * b{args.right} =" ] + [
        f"  {render_cyclotomic(prod.coeffs[k]):>8} * b{k}" for k in prod.support()
    ]
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def cmd_species(args):
    ring = _load_ring(args)
    table = sp.species_table(ring)
    doc = _envelope(args, "species", ring)
    doc["rows"] = [sp.dual_descriptor(ring, d) for d in range(ring.rank)]
    doc["cols"] = [ring.orbit_descriptor(i) for i in range(ring.rank)]
    doc["values"] = [[v.to_json() for v in row] for row in table]
    width = max((len(render_cyclotomic(v)) for row in table for v in row),
                default=1)
    lines = [" ".join(f"{render_cyclotomic(v):>{width}}" for v in row)
             for row in table]
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def cmd_idempotents(args):
    ring = _load_ring(args)
    doc = _envelope(args, "idempotents", ring)
    doc["idempotents"] = [
        {"dual": sp.dual_descriptor(ring, d),
         "element": sp.idempotent(ring, d).to_json()}
        for d in range(ring.rank)
    ]
    lines = []
    for d in range(ring.rank):
        e = sp.idempotent(ring, d)
        terms = " + ".join(f"({render_cyclotomic(e.coeffs[k])})*b{k}"
                           for k in e.support())
        lines.append(f"e{d} = {terms}")
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def cmd_spectrum(args):
    ring = _load_ring(args)
    char = args.char.strip()
    if char == "0":
        prime = spc.PrimeDescriptor.char_zero()
    else:
        try:
            p = int(char)
        except ValueError:
            raise InputError(f"--char must be 0 or a prime, got {char!r}") from None
        prime = spc.PrimeDescriptor.char_p(p, ring.level)
    part = spc.p_equivalence_partition(ring, prime)
    doc = _envelope(args, "spectrum", ring)
    doc["characteristic"] = prime.characteristic
    doc["ideal"] = prime.ideal.to_json() if prime.ideal else None
    doc["classes"] = [list(c) for c in part.classes]
    doc["regular_representatives"] = (
        list(part.regular_representatives)
        if part.regular_representatives is not None else None)
    doc["dual_orbits"] = [sp.dual_descriptor(ring, d) for d in range(ring.rank)]
    lines = [f"characteristic {prime.characteristic}: "
             f"{len(part.classes)} classes"]
    for i, c in enumerate(part.classes):
        rep = ("" if part.regular_representatives is None
               else f"  regular rep d{part.regular_representatives[i]}")
        lines.append(f"  class {i}: {list(c)}{rep}")
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def _subgroup_descriptor(ring, sid):
    sub = ring.lattice.subgroups[sid]
    return {"order": sub.order,
            "class": ring.lattice.class_index[sid],
            "generators": [cycle_string(ring.group.elements[g]) for g in sub.gens]}


def cmd_blocks(args):
    ring = _load_ring(args)
    comps = spc.components(ring)
    doc = _envelope(args, "blocks", ring)
    doc["blocks"] = []
    lines = [f"{len(comps)} blocks"]
    for comp in comps:
        bi = spc.block_idempotent(ring, comp)
        basis = spc.block_basis(ring, comp)
        doc["blocks"].append({
            "perfect": _subgroup_descriptor(ring, comp.perfect_id),
            "dual_orbits": list(comp.dual_orbits),
            "basis_orbits": list(comp.basis_orbits),
            "idempotent": bi.element.to_json(),
            "basis": [x.to_json() for x in basis],
        })
        terms = " + ".join(f"({render_cyclotomic(bi.element.coeffs[k])})*b{k}"
                           for k in bi.element.support())
        lines.append(f"block J order {ring.lattice.subgroups[comp.perfect_id].order}:"
                     f" rank {len(comp.basis_orbits)}, e = {terms}")
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def _resolve_perfect(ring, selector):
    perfect = ring.lattice.perfect_class_reps()
    if selector.strip() == "1":
        order = 1
    else:
        order = parse_group_spec(selector).order
    matches = [j for j in perfect
               if ring.lattice.subgroups[j].order == order]
    if not matches:
        raise InputError(f"no perfect subgroup class of order {order}")
    if len(matches) > 1:
        raise InputError(f"ambiguous perfect subgroup selector {selector!r}")
    return matches[0]


def cmd_weyl(args):
    ring = _load_ring(args)
    jid = _resolve_perfect(ring, args.perfect)
    iso = spc.weyl_block_iso(ring, jid)
    doc = _envelope(args, "weyl", ring)
    doc["perfect"] = _subgroup_descriptor(ring, jid)
    doc["weyl_group_order"] = iso.weyl_ring.group.order
    doc["bijection"] = [
        {"weyl_orbit": iso.weyl_ring.orbit_descriptor(w), "orbit": ring.orbit_descriptor(g)}
        for w, g in iso.bijection
    ]
    doc["verified"] = True
    lines = [f"W = N(J)/J of order {iso.weyl_ring.group.order}; "
             f"block rank {len(iso.bijection)}; verified"]
    for w, g in iso.bijection:
        lines.append(f"  w{w} -> b{g}")
    _emit(args, doc, lines)
    _save_ring(args, ring)
    return 0


def cmd_verify_all(args):
    groups = [args.group] if args.group else None
    fibers = [args.fiber] if args.fiber else None
    report = acceptance.run_all(groups=groups, fibers=fibers, seed=args.seed)
    doc = {"command": "verify-all", "group": args.group, "fiber": args.fiber}
    doc.update(report)
    lines = []
    for c in report["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        lines.append(f"{status}  {c['id']}. {c['name']}  {c['detail']}")
    lines.append("overall " + ("PASS" if report["passed"] else "FAIL"))
    _emit(args, doc, lines)
    return 0 if report["passed"] else 3


_COMMANDS = {
    "basis": cmd_basis,
    "multiply": cmd_multiply,
    "species": cmd_species,
    "idempotents": cmd_idempotents,
    "spectrum": cmd_spectrum,
    "blocks": cmd_blocks,
    "weyl": cmd_weyl,
    "verify-all": cmd_verify_all,
}


def run_command(argv):
    args = _parser().parse_args(argv)
    return _COMMANDS[args.verb](args)


def main(argv=None):
    try:
        return run_command(sys.argv[1:] if argv is None else argv)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 2
    except (TheoremViolationError, InvariantViolationError) as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return 3
    except FbrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
