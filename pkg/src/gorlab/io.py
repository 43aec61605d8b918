"""Canonical JSON serialization for rings, modules, series and reports.

All files are UTF-8 JSON with sorted keys, two-space indentation and a
trailing newline; storing a loaded file reproduces it byte for byte.  Every
number is an integer — no floating point appears in any artifact.  Schema
violations raise SchemaError carrying a JSON pointer to the offending spot.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import SchemaError
from .koszul import KoszulVerdict
from .modules import FiniteModule, Presentation, from_presentation, nu, radical_rows
from .resolution import MinimalFreeResolution, resolve
from .ring import ShortGorensteinRing, make_ring
from .series import RationalityCertificate, TruncatedIntegerSeries


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_text(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as ex:
        raise SchemaError(f"invalid JSON in {path}: {ex.msg}") from ex


def _require(cond: bool, message: str, pointer: str):
    if not cond:
        raise SchemaError(message, pointer)


def _int_matrix(obj, pointer: str) -> list:
    _require(isinstance(obj, list) and obj, "expected a nonempty array", pointer)
    width = None
    for i, row in enumerate(obj):
        _require(isinstance(row, list), "expected an array of integers",
                 f"{pointer}/{i}")
        if width is None:
            width = len(row)
        _require(len(row) == width, "ragged matrix", f"{pointer}/{i}")
        for j, v in enumerate(row):
            _require(isinstance(v, int) and not isinstance(v, bool),
                     "expected an integer", f"{pointer}/{i}/{j}")
    return obj


# ---------------------------------------------------------------------------
# rings


def ring_to_dict(ring: ShortGorensteinRing) -> dict:
    return {"p": int(ring.p), "e": int(ring.e),
            "form": [[int(v) for v in row] for row in ring.form]}


def ring_from_dict(d, pointer: str = "") -> ShortGorensteinRing:
    _require(isinstance(d, dict), "expected a ring object", pointer)
    for key in ("p", "e", "form"):
        _require(key in d, f"missing key {key!r}", pointer)
    _require(isinstance(d["p"], int), "expected an integer", f"{pointer}/p")
    _require(isinstance(d["e"], int), "expected an integer", f"{pointer}/e")
    form = _int_matrix(d["form"], f"{pointer}/form")
    _require(len(form) == d["e"] and len(form[0]) == d["e"],
             f"form must be {d['e']}x{d['e']}", f"{pointer}/form")
    return make_ring(d["p"], d["e"], form)


def load_ring(path: str) -> ShortGorensteinRing:
    return ring_from_dict(load_json(path))


def store_ring(ring: ShortGorensteinRing, path: str):
    write_text(path, canonical_json(ring_to_dict(ring)))


# ---------------------------------------------------------------------------
# modules


def canonical_presentation(M: FiniteModule) -> Presentation:
    """Minimal cover plus first-syzygy relation matrix."""
    res = resolve(M, 1)
    if not res.finite and len(res.betti_head) < 2:
        res.extend(1, ignore_budget=True)
    g = res.betti_head[0]
    r = res.betti_head[1] if len(res.betti_head) > 1 else 0
    if r == 0:
        entries = np.zeros((g, 0, M.ring.dim), dtype=np.int64)
    else:
        entries = res.diff(1).transpose(1, 0, 2)
    return Presentation(M.ring, entries)


def module_to_dict(M: FiniteModule, ring_ref=None) -> dict:
    """ring_ref: a path string to reference the ring by file, else inline."""
    P = canonical_presentation(M)
    return {
        "ring": ring_ref if ring_ref is not None else ring_to_dict(M.ring),
        "presentation": [[[int(c) for c in P.entries[i, j]]
                          for j in range(P.relations)]
                         for i in range(P.generators)],
    }


def presentation_from_dict(ring, obj, pointer: str = "/presentation") -> Presentation:
    _require(isinstance(obj, list) and obj, "expected a generator array", pointer)
    d = ring.dim
    rows = []
    width = None
    for i, gen in enumerate(obj):
        _require(isinstance(gen, list), "expected a relation array",
                 f"{pointer}/{i}")
        if width is None:
            width = len(gen)
        _require(len(gen) == width, "ragged presentation", f"{pointer}/{i}")
        for j, elem in enumerate(gen):
            _require(isinstance(elem, list) and len(elem) == d,
                     f"element must have {d} coefficients",
                     f"{pointer}/{i}/{j}")
            for t, v in enumerate(elem):
                _require(isinstance(v, int) and not isinstance(v, bool),
                         "expected an integer", f"{pointer}/{i}/{j}/{t}")
        rows.append(gen)
    entries = np.asarray(rows, dtype=np.int64)
    if entries.size == 0:
        entries = np.zeros((len(obj), 0, d), dtype=np.int64)
    return Presentation(ring, entries)


def module_from_dict(d, base_dir: str = ".") -> FiniteModule:
    _require(isinstance(d, dict), "expected a module object", "")
    _require("ring" in d, "missing key 'ring'", "")
    _require("presentation" in d, "missing key 'presentation'", "")
    if isinstance(d["ring"], str):
        ring = ring_from_dict(load_json(os.path.join(base_dir, d["ring"])),
                              "/ring")
    else:
        ring = ring_from_dict(d["ring"], "/ring")
    P = presentation_from_dict(ring, d["presentation"])
    M, _ = from_presentation(P)
    return M


def load_module(path: str) -> FiniteModule:
    return module_from_dict(load_json(path), os.path.dirname(path) or ".")


def store_module(M: FiniteModule, path: str, ring_ref=None):
    write_text(path, canonical_json(module_to_dict(M, ring_ref)))


# ---------------------------------------------------------------------------
# computation results


def resolution_to_dict(res: MinimalFreeResolution, steps: int) -> dict:
    betti = [int(b) for b in res.betti(steps)]
    head = min(steps, res.head)
    mats = []
    for i in range(1, head + 1):
        G = res.diff(i)
        mats.append([[[int(c) for c in G[a, j]] for j in range(G.shape[1])]
                     for a in range(G.shape[0])])
    return {"betti": betti, "materialized_through": head,
            "differentials": mats}


def table_to_dict(table, induced=None) -> dict:
    entries = []
    for t in table.entries:
        rec = {"i": int(t.i), "length": int(t.length), "nu": int(t.nu),
               "m_annihilated": bool(t.m_annihilated),
               "provenance": t.provenance}
        if induced is not None and t.i < len(induced):
            rec["induced_rank"] = int(induced[t.i].rank)
        entries.append(rec)
    return {"entries": entries, "window": int(table.window),
            "junction": None if table.junction is None else int(table.junction)}


def series_to_dict(S: TruncatedIntegerSeries,
                   cert: RationalityCertificate | None) -> dict:
    return {
        "kind": S.kind,
        "coefficients": [int(c) for c in S.coefficients],
        "certificate": None if cert is None else {
            "s": int(cert.s),
            "numerator": [int(q) for q in cert.numerator],
            "e": int(cert.e),
        },
    }


def verdict_to_dict(v: KoszulVerdict) -> dict:
    witness = None
    if v.witness is not None:
        j, element = v.witness
        witness = {"j": int(j), "element": [int(c) for c in element]}
    return {"verdict": v.verdict, "witness": witness, "i_max": int(v.i_max)}


def module_info(M: FiniteModule) -> dict:
    from .modules import hilbert_function
    U, _ = radical_rows(M)
    return {
        "dim": int(M.dim),
        "nu": int(nu(M)),
        "radical_dim": int(U.shape[0]),
        "hilbert": [int(h) for h in hilbert_function(M)],
        "ring": ring_to_dict(M.ring),
    }
