"""Command line behavior: documents, schemas, caching, exit codes."""

import json
from pathlib import Path

import pytest

from fbr import cache
from fbr.cli import main

SCHEMA_DIR = Path(__file__).parent.parent / "schemas"

try:
    import jsonschema
    from referencing import Registry, Resource
    HAVE_JSONSCHEMA = True
except ImportError:
    HAVE_JSONSCHEMA = False

needs_jsonschema = pytest.mark.skipif(not HAVE_JSONSCHEMA,
                                      reason="jsonschema not installed")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def validate(doc, schema_name):
    registry = Registry()
    for path in SCHEMA_DIR.glob("*.json"):
        resource = Resource.from_contents(json.loads(path.read_text()))
        registry = registry.with_resource(resource.contents["$id"], resource)
    schema = json.loads((SCHEMA_DIR / schema_name).read_text())
    jsonschema.validate(doc, schema, registry=registry)


@needs_jsonschema
def test_basis_document(capsys):
    code, out = run(capsys, "basis", "--group", "C2", "--fiber", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["rank"] == 3
    validate(doc, "basis.json")


@needs_jsonschema
def test_multiply_document(capsys):
    code, out = run(capsys, "multiply", "--group", "C2", "--fiber", "2", "0", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["product"]["coeffs"]["0"]["coeffs"] == ["2/1"]
    validate(doc, "multiply.json")


@needs_jsonschema
def test_species_document(capsys):
    code, out = run(capsys, "species", "--group", "S3", "--fiber", "2")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["values"]) == 6
    validate(doc, "species.json")


@needs_jsonschema
def test_idempotents_document(capsys):
    code, out = run(capsys, "idempotents", "--group", "C2", "--fiber", "2")
    assert code == 0
    validate(json.loads(out), "idempotents.json")


@needs_jsonschema
def test_spectrum_document(capsys):
    code, out = run(capsys, "spectrum", "--group", "S3", "--fiber", "2",
                    "--char", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["characteristic"] == 2
    assert len(doc["classes"]) == 2
    validate(doc, "spectrum.json")
    code, out = run(capsys, "spectrum", "--group", "S3", "--fiber", "2",
                    "--char", "0")
    doc = json.loads(out)
    assert doc["ideal"] is None
    validate(doc, "spectrum.json")


@needs_jsonschema
def test_blocks_document(capsys):
    code, out = run(capsys, "blocks", "--group", "A5", "--fiber", "1")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["blocks"]) == 2
    validate(doc, "blocks.json")


@needs_jsonschema
def test_weyl_document(capsys):
    code, out = run(capsys, "weyl", "--group", "S5", "--fiber", "2",
                    "--perfect", "A5")
    assert code == 0
    doc = json.loads(out)
    assert doc["weyl_group_order"] == 2
    assert len(doc["bijection"]) == 3
    assert doc["verified"] is True
    validate(doc, "weyl.json")


@needs_jsonschema
def test_verify_all_document(capsys):
    code, out = run(capsys, "verify-all", "--group", "S3", "--fiber", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert len(doc["criteria"]) == 9
    validate(doc, "verify-all.json")


def test_exit_codes(capsys):
    code, _ = run(capsys, "basis", "--group", "X9", "--fiber", "1")
    assert code == 1
    code, _ = run(capsys, "basis", "--group", "S5", "--fiber", "1",
                  "--cap-order", "10")
    assert code == 2
    code, _ = run(capsys, "multiply", "--group", "C2", "--fiber", "2", "0", "7")
    assert code == 1
    code, _ = run(capsys, "weyl", "--group", "S3", "--fiber", "2",
                  "--perfect", "C2")
    assert code == 1


def test_byte_identical_runs(capsys):
    outs = []
    for _ in range(2):
        code, out = run(capsys, "verify-all", "--group", "S3", "--fiber", "2",
                        "--seed", "5")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    outs = []
    for _ in range(2):
        code, out = run(capsys, "species", "--group", "C6", "--fiber", "6")
        outs.append(out)
    assert outs[0] == outs[1]
    outs = []
    for _ in range(2):
        code, out = run(capsys, "blocks", "--group", "A5", "--fiber", "2")
        outs.append(out)
    assert outs[0] == outs[1]


def test_table_format(capsys):
    code, out = run(capsys, "species", "--group", "C2", "--fiber", "2",
                    "--format", "table")
    assert code == 0
    assert out.splitlines() == [" 2  1  1", " 0  1  1", " 0  1 -1"]


# -- cache ---------------------------------------------------------------------------

def test_cache_round_trip(tmp_path, ring_factory):
    ring = ring_factory("S3", "2")
    # populate some structure constants
    for i in range(ring.rank):
        ring.structure_constants(0, i)
    cache.save_session(tmp_path, ring, "S3", "2")
    loaded = cache.load_session(tmp_path, "S3", "2")
    assert loaded is not None
    assert [(o.subgroup_id, o.hom_index) for o in loaded.basis.orbits] == \
        [(o.subgroup_id, o.hom_index) for o in ring.basis.orbits]
    for key, val in ring._structure.items():
        assert loaded._structure[key] == val
    # loaded ring computes identical new constants
    for i in range(ring.rank):
        for j in range(ring.rank):
            assert loaded.structure_constants(i, j) == ring.structure_constants(i, j)


def test_cache_corruption_recovers(tmp_path, ring_factory, capsys):
    ring = ring_factory("S3", "2")
    path = cache.save_session(tmp_path, ring, "S3", "2")
    path.write_text(path.read_text().replace('"level"', '"lvl"', 1))
    assert cache.load_session(tmp_path, "S3", "2") is None
    assert "recomputing" in capsys.readouterr().err


def test_cache_keys_distinct():
    assert cache.session_key("S3", "2") != cache.session_key("S3", "6")
    assert cache.session_key("S3", "2") != cache.session_key("S4", "2")
    assert cache.session_key("S3", "A=2") == cache.session_key("S3", "2")


def test_cache_from_cli(tmp_path, capsys):
    code, out1 = run(capsys, "basis", "--group", "S3", "--fiber", "2",
                     "--cache-dir", str(tmp_path))
    assert code == 0
    assert len(list(tmp_path.glob("*.json"))) == 1
    code, out2 = run(capsys, "basis", "--group", "S3", "--fiber", "2",
                     "--cache-dir", str(tmp_path))
    assert code == 0
    assert out1 == out2
