import json

import pytest

from gorlab import io, random_module, resolve, tor
from gorlab.errors import SchemaError


def test_canonical_json_is_sorted_and_terminated():
    text = io.canonical_json({"b": 1, "a": [2, 3]})
    assert text == '{\n  "a": [\n    2,\n    3\n  ],\n  "b": 1\n}\n'


def test_ring_round_trip(tmp_path, R3):
    path = str(tmp_path / "ring.json")
    io.store_ring(R3, path)
    again = io.load_ring(path)
    assert again == R3
    io.store_ring(again, str(tmp_path / "ring2.json"))
    assert (tmp_path / "ring.json").read_bytes() == \
        (tmp_path / "ring2.json").read_bytes()


def test_module_round_trip_bytes(tmp_path, R3):
    M = random_module(R3, 2, 2, seed=61)
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    io.store_module(M, a)
    io.store_module(io.load_module(a), b)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    # loading preserves the isomorphism invariants
    again = io.load_module(a)
    assert again.dim == M.dim and again.ring == R3


def test_non_canonical_field_order_is_canonicalized(tmp_path, R3):
    M = random_module(R3, 1, 1, seed=62)
    path = str(tmp_path / "m.json")
    io.store_module(M, path)
    d = json.loads((tmp_path / "m.json").read_text())
    scrambled = {"presentation": d["presentation"], "ring": d["ring"]}
    (tmp_path / "scrambled.json").write_text(
        json.dumps(scrambled, sort_keys=False, indent=None))
    out = str(tmp_path / "out.json")
    io.store_module(io.load_module(str(tmp_path / "scrambled.json")), out)
    assert (tmp_path / "out.json").read_bytes() == (tmp_path / "m.json").read_bytes()


def test_ring_reference_by_relative_path(tmp_path, R3):
    sub = tmp_path / "nested"
    sub.mkdir()
    io.store_ring(R3, str(sub / "ring.json"))
    M = random_module(R3, 1, 1, seed=63)
    io.store_module(M, str(sub / "m.json"), ring_ref="ring.json")
    again = io.load_module(str(sub / "m.json"))
    assert again.ring == R3


def test_schema_error_pointers(tmp_path, R3):
    M = random_module(R3, 1, 1, seed=64)
    path = str(tmp_path / "m.json")
    io.store_module(M, path)
    d = json.loads((tmp_path / "m.json").read_text())

    def reject(mutate, pointer):
        bad = json.loads(json.dumps(d))
        mutate(bad)
        (tmp_path / "bad.json").write_text(json.dumps(bad))
        with pytest.raises(SchemaError) as exc:
            io.load_module(str(tmp_path / "bad.json"))
        assert exc.value.pointer == pointer

    reject(lambda b: b["presentation"][0].__setitem__(0, [1, 2, 3]),
           "/presentation/0/0")
    reject(lambda b: b["presentation"][0][0].__setitem__(1, "x"),
           "/presentation/0/0/1")
    reject(lambda b: b.pop("ring"), "")
    reject(lambda b: b["ring"].pop("form"), "/ring")
    reject(lambda b: b["ring"].__setitem__("form", [[1, 0], [0, "y"]]),
           "/ring/form/1/1")


def test_invalid_json_raises_schema_error(tmp_path):
    (tmp_path / "junk.json").write_text("{nope")
    with pytest.raises(SchemaError):
        io.load_json(str(tmp_path / "junk.json"))


def test_result_dicts_are_integer_only(R3):
    M = random_module(R3, 2, 1, seed=65)
    N = random_module(R3, 1, 1, seed=66)
    payloads = [
        io.module_info(M),
        io.resolution_to_dict(resolve(M, 4), 4),
        io.table_to_dict(tor(M, N, 6)),
    ]

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert x is None or isinstance(x, (int, str, bool))

    for payload in payloads:
        walk(payload)
        json.loads(io.canonical_json(payload))  # serializable as-is
