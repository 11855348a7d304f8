"""Bit-exact JSON document formats.

All documents are JSON with fixed schemas and deterministic writers
(sorted keys, fixed indentation), so identical inputs produce identical
bytes.  Rationals are serialized as strings like ``"1/3"`` (integers stay
bare, ``"2"``), which round-trips exactly.

Schemas:

* cubeset:  ``{"cubes": [{"id", "dim", "faces": {"d0_1": id, ...}}]}``
  where ``d{a}_{i}`` is the face on side ``a`` along axis ``i``;
* path:     ``{"start": id, "segments": [{"cube": id,
  "breakpoints": [[t, [x, ...]], ...]}]}``;
* chain:    ``{"from": id, "to": id, "cubes": [id, ...]}``;
* kinks:    ``{"points": [{"cube": id, "coords": [x, ...]}, ...]}``;
* poset:    ``{"from", "to", "max_length", "truncated",
  "proper_non_self_linked", "objects": [[id, ...], ...],
  "covers": [[coarser, finer], ...]}``;
* complex:  ``{"vertices": [label, ...], "maximal_simplices": [[i, ...], ...],
  "flags": [...]}``;
* homology: ``{"betti": [...], "torsion": [[...], ...], "flags": [...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from ..carrier import Point, canonicalize
from ..chains import CubeChain, RefinementPoset
from ..cubeset import CubeSet, validate
from ..dpath import KinkSequence, PLPath, Segment
from ..errors import FormatError, PrecubicalError
from ..nerve import HomologyResult, SimplicialComplex

__all__ = [
    "parse_cubeset",
    "write_cubeset",
    "parse_path",
    "write_path",
    "parse_chain",
    "write_chain",
    "parse_kinks",
    "write_kinks",
    "parse_poset",
    "write_poset",
    "parse_complex",
    "write_complex",
    "parse_homology",
    "write_homology",
    "loads",
    "dumps",
]


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    return doc


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise FormatError(f"{where}: rationals must be strings or integers, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{where}: cannot parse rational {value!r}") from None
    raise FormatError(f"{where}: cannot parse rational {value!r}")


def _rational_str(x: Fraction) -> str:
    return str(x)


def _expect(doc: dict, key: str, where: str) -> Any:
    if key not in doc:
        raise FormatError(f"{where}: missing key {key!r}")
    return doc[key]


# -- cubeset -------------------------------------------------------------------


def parse_cubeset(text: str, check: bool = True) -> CubeSet:
    doc = loads(text)
    entries = _expect(doc, "cubes", "cubeset")
    if not isinstance(entries, list):
        raise FormatError("cubeset: 'cubes' must be a list")
    cubes: dict[str, int] = {}
    faces: dict[str, dict[tuple[int, int], str]] = {}
    for k, entry in enumerate(entries):
        where = f"cubeset cube #{k}"
        cid = _expect(entry, "id", where)
        dim = _expect(entry, "dim", where)
        if not isinstance(cid, str) or not isinstance(dim, int) or dim < 0:
            raise FormatError(f"{where}: bad id or dim")
        if cid in cubes:
            raise FormatError(f"{where}: duplicate id {cid!r}")
        cubes[cid] = dim
        table: dict[tuple[int, int], str] = {}
        for key, fid in entry.get("faces", {}).items():
            try:
                alpha_s, i_s = key.removeprefix("d").split("_")
                alpha, i = int(alpha_s), int(i_s)
                if alpha not in (0, 1) or not 1 <= i <= dim:
                    raise ValueError
            except ValueError:
                raise FormatError(f"{where}: bad face key {key!r}") from None
            table[(i, alpha)] = fid
        if table:
            faces[cid] = table
    X = CubeSet(cubes, faces)
    if check:
        bad = validate(X)
        if bad:
            listing = "; ".join(f"{v.kind} at {v.cube!r}: {v.detail}" for v in bad[:10])
            raise FormatError(f"cubeset fails validation ({len(bad)} violations): {listing}")
    return X


def write_cubeset(X: CubeSet, extra: dict | None = None) -> str:
    entries = []
    for cid in sorted(X.cubes()):
        entry: dict[str, Any] = {"id": cid, "dim": X.dim(cid)}
        table = X.face_table(cid)
        if table:
            entry["faces"] = {f"d{alpha}_{i}": fid for (i, alpha), fid in sorted(table.items())}
        entries.append(entry)
    doc: dict[str, Any] = {"cubes": entries}
    if extra:
        doc.update(extra)
    return dumps(doc)


# -- paths ---------------------------------------------------------------------


def parse_path(text: str, X: CubeSet | None = None) -> PLPath:
    doc = loads(text)
    segs_doc = _expect(doc, "segments", "path")
    if not isinstance(segs_doc, list) or not segs_doc:
        raise FormatError("path: 'segments' must be a non-empty list")
    segments = []
    for k, seg in enumerate(segs_doc):
        where = f"path segment #{k}"
        cube = _expect(seg, "cube", where)
        bps = _expect(seg, "breakpoints", where)
        points = []
        for bp in bps:
            if not isinstance(bp, list) or len(bp) != 2:
                raise FormatError(f"{where}: breakpoints must be [t, [coords]] pairs")
            t = _rational(bp[0], where)
            coords = tuple(_rational(x, where) for x in bp[1])
            points.append((t, coords))
        try:
            segments.append(Segment(cube, tuple(points)))
        except PrecubicalError as e:
            raise FormatError(f"{where}: {e}") from None
    try:
        p = PLPath(tuple(segments))
    except PrecubicalError as e:
        raise FormatError(f"path: {e}") from None
    if X is not None:
        try:
            p.validate(X)
        except PrecubicalError as e:
            raise FormatError(f"path: {e}") from None
        declared = doc.get("start")
        if declared is not None and p.start_point(X).cube != declared:
            raise FormatError(
                f"path: declared start {declared!r} but path begins at {p.start_point(X).cube!r}"
            )
    return p


def write_path(p: PLPath, X: CubeSet | None = None) -> str:
    doc: dict[str, Any] = {
        "segments": [
            {
                "cube": seg.cube,
                "breakpoints": [
                    [_rational_str(t), [_rational_str(x) for x in coords]] for t, coords in seg.points
                ],
            }
            for seg in p.segments
        ]
    }
    if X is not None:
        doc["start"] = p.start_point(X).cube
    return dumps(doc)


# -- chains and posets ---------------------------------------------------------


def parse_chain(text: str, X: CubeSet | None = None) -> CubeChain:
    doc = loads(text)
    chain = CubeChain(
        _expect(doc, "from", "chain"),
        _expect(doc, "to", "chain"),
        tuple(_expect(doc, "cubes", "chain")),
    )
    if X is not None:
        try:
            chain.validate(X)
        except PrecubicalError as e:
            raise FormatError(f"chain: {e}") from None
    return chain


def write_chain(chain: CubeChain) -> str:
    return dumps({"from": chain.source, "to": chain.target, "cubes": list(chain.cubes)})


def parse_poset(text: str) -> tuple[RefinementPoset, bool]:
    """Returns the poset plus whether the source complex carried the
    nerve-lemma guarantee (proper and non-self-linked)."""
    doc = loads(text)
    source = _expect(doc, "from", "poset")
    target = _expect(doc, "to", "poset")
    objects = tuple(
        CubeChain(source, target, tuple(cubes)) for cubes in _expect(doc, "objects", "poset")
    )
    covers = tuple((int(a), int(b)) for a, b in _expect(doc, "covers", "poset"))
    poset = RefinementPoset(
        source,
        target,
        objects,
        covers,
        bool(_expect(doc, "truncated", "poset")),
        int(_expect(doc, "max_length", "poset")),
    )
    return poset, bool(doc.get("proper_non_self_linked", True))


def write_poset(poset: RefinementPoset, proper_non_self_linked: bool = True) -> str:
    return dumps(
        {
            "from": poset.source,
            "to": poset.target,
            "max_length": poset.max_length,
            "truncated": poset.truncated,
            "proper_non_self_linked": proper_non_self_linked,
            "objects": [list(c.cubes) for c in poset.objects],
            "covers": [list(c) for c in poset.covers],
        }
    )


# -- kink sequences --------------------------------------------------------------


def parse_kinks(text: str, X: CubeSet | None = None) -> KinkSequence:
    doc = loads(text)
    pts = []
    for k, entry in enumerate(_expect(doc, "points", "kinks")):
        where = f"kink point #{k}"
        cube = _expect(entry, "cube", where)
        coords = tuple(_rational(x, where) for x in _expect(entry, "coords", where))
        pts.append(Point(cube, coords))
    ks = KinkSequence(tuple(pts))
    if X is not None:
        ks = KinkSequence(tuple(canonicalize(X, q) for q in ks.points))
        try:
            ks.validate(X)
        except PrecubicalError as e:
            raise FormatError(f"kinks: {e}") from None
    return ks


def write_kinks(ks: KinkSequence) -> str:
    return dumps(
        {
            "points": [
                {"cube": q.cube, "coords": [_rational_str(x) for x in q.coords]} for q in ks.points
            ]
        }
    )


# -- complexes and homology ------------------------------------------------------


def parse_complex(text: str) -> SimplicialComplex:
    doc = loads(text)
    return SimplicialComplex(
        tuple(_expect(doc, "vertices", "complex")),
        tuple(tuple(int(v) for v in s) for s in _expect(doc, "maximal_simplices", "complex")),
        frozenset(doc.get("flags", [])),
    )


def write_complex(K: SimplicialComplex) -> str:
    return dumps(
        {
            "vertices": list(K.labels),
            "maximal_simplices": [list(s) for s in K.maximal],
            "flags": sorted(K.flags),
        }
    )


def parse_homology(text: str) -> HomologyResult:
    doc = loads(text)
    return HomologyResult(
        tuple(int(b) for b in _expect(doc, "betti", "homology")),
        tuple(tuple(int(t) for t in ts) for ts in _expect(doc, "torsion", "homology")),
        frozenset(doc.get("flags", [])),
    )


def write_homology(h: HomologyResult) -> str:
    return dumps(
        {
            "betti": list(h.betti),
            "torsion": [list(t) for t in h.torsion],
            "flags": sorted(h.flags),
        }
    )
