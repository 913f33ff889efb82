"""Session cache: lattice, basis and structure constants on disk.

A cache entry is keyed by a digest of the normalized group and fiber
specs.  Loading checks the format version, the digest and a payload
checksum; any mismatch or corruption makes the caller recompute, with
a notice on stderr.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

from .abelian import parse_fiber_spec
from .perm import FiniteGroup, SubgroupLattice, Subgroup, SubgroupClass, _greedy_gens
from .ring import FiberedBurnsideRing

FORMAT_VERSION = 1


def session_key(group_spec, fiber_spec):
    fiber = parse_fiber_spec(fiber_spec)
    canon = json.dumps(
        {"group": group_spec.strip(), "fiber": list(fiber.invariant_factors)},
        sort_keys=True,
    )
    return hashlib.sha256(canon.encode()).hexdigest()


def _payload_checksum(payload):
    body = {k: v for k, v in payload.items() if k != "checksum"}
    canon = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def ring_payload(ring, group_spec, fiber_spec):
    lattice = ring.lattice
    payload = {
        "format_version": FORMAT_VERSION,
        "group_spec": group_spec.strip(),
        "fiber_spec": fiber_spec.strip(),
        "digest": session_key(group_spec, fiber_spec),
        "degree": ring.group.degree,
        "elements": [list(e) for e in ring.group.elements],
        "generators": list(ring.group.generator_indices),
        "level": ring.level,
        "subgroups": [list(s.sorted_elems) for s in lattice.subgroups],
        "class_index": list(lattice.class_index),
        "to_rep": list(lattice.to_rep),
        "classes": [{"rep": c.rep, "members": list(c.members)}
                    for c in lattice.classes],
        "normalizers": list(lattice.normalizer_ids),
        "basis": [[o.subgroup_id, o.hom_index] for o in ring.basis.orbits],
        "structure": {
            f"{i},{j}": [[k, c] for k, c in val]
            for (i, j), val in sorted(ring._structure.items())
        },
    }
    payload["checksum"] = _payload_checksum(payload)
    return payload


def _lattice_from_payload(group, payload):
    lattice = SubgroupLattice.__new__(SubgroupLattice)
    lattice.group = group
    subgroups = []
    for i, elems in enumerate(payload["subgroups"]):
        fs = frozenset(elems)
        selems = tuple(sorted(elems))
        subgroups.append(Subgroup(i, fs, selems, len(fs),
                                  _greedy_gens(group, selems)))
    lattice.subgroups = subgroups
    lattice.by_set = {s.elems: s.id for s in subgroups}
    lattice.class_index = list(payload["class_index"])
    lattice.to_rep = list(payload["to_rep"])
    lattice.classes = [
        SubgroupClass(i, c["rep"], tuple(c["members"]))
        for i, c in enumerate(payload["classes"])
    ]
    lattice.normalizer_ids = list(payload["normalizers"])
    lattice._build_inclusion()
    lattice._mobius = {}
    lattice._derived = {}
    lattice._perfect = {}
    lattice._op_residual = {}
    lattice._dcosets = {}
    return lattice


def ring_from_payload(payload, hom_cap=None):
    """Rebuild a ring session from a payload; None if it does not verify."""
    if payload.get("format_version") != FORMAT_VERSION:
        return None
    if payload.get("checksum") != _payload_checksum(payload):
        return None
    if payload.get("digest") != session_key(payload["group_spec"],
                                            payload["fiber_spec"]):
        return None
    group = FiniteGroup(payload["degree"],
                        [tuple(e) for e in payload["elements"]],
                        tuple(payload["generators"]))
    fiber = parse_fiber_spec(payload["fiber_spec"])
    lattice = _lattice_from_payload(group, payload)
    kwargs = {} if hom_cap is None else {"hom_cap": hom_cap}
    ring = FiberedBurnsideRing(group, fiber, level=payload["level"],
                               lattice=lattice, **kwargs)
    stored_basis = [tuple(b) for b in payload["basis"]]
    rebuilt = [(o.subgroup_id, o.hom_index) for o in ring.basis.orbits]
    if stored_basis != rebuilt:
        return None
    for key, val in payload["structure"].items():
        i, j = (int(t) for t in key.split(","))
        ring._structure[(i, j)] = tuple((int(k), int(c)) for k, c in val)
    return ring


def cache_path(cache_dir, group_spec, fiber_spec):
    return Path(cache_dir) / f"{session_key(group_spec, fiber_spec)}.json"


def save_session(cache_dir, ring, group_spec, fiber_spec):
    path = cache_path(cache_dir, group_spec, fiber_spec)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = ring_payload(ring, group_spec, fiber_spec)
    path.write_text(json.dumps(payload, sort_keys=True))
    return path


def load_session(cache_dir, group_spec, fiber_spec, hom_cap=None):
    """Ring from cache, or None (with a stderr notice) when unusable."""
    path = cache_path(cache_dir, group_spec, fiber_spec)
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
        ring = ring_from_payload(payload, hom_cap)
    except Exception:
        ring = None
    if ring is None:
        print(f"notice: cache entry {path.name} unusable, recomputing",
              file=sys.stderr)
    return ring
