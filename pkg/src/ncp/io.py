"""JSON interchange for posets and decompositions, DOT export, and the
comparison of imported posets against the exceptional-group table."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .catalog import reference_table
from .poset import Decomposition, GradedPoset, Part, rank_profile
from .sperner import is_strongly_sperner

POSET_FORMAT = "ncp-poset-v1"
DECOMP_FORMAT = "ncp-decomposition-v1"


class SchemaError(ValueError):
    pass


@dataclass
class PosetFile:
    poset: GradedPoset
    meta: dict[str, Any] = field(default_factory=dict)


def poset_to_json(P: GradedPoset, meta: dict | None = None) -> dict:
    labels = P.labels or tuple(str(i) for i in range(P.m))
    return {
        "format": POSET_FORMAT,
        "meta": dict(meta or {}),
        "elements": [{"id": i, "rank": P.rank[i], "label": labels[i]} for i in range(P.m)],
        "covers": [[i, j] for i, j in P.covers()],
    }


def _dump(obj, path) -> None:
    # one element or cover per line keeps diffs and diagnostics readable
    lines = ["{"]
    keys = list(obj)
    for n, key in enumerate(keys):
        val = obj[key]
        sep = "," if n + 1 < len(keys) else ""
        if isinstance(val, list):
            lines.append(f"  {json.dumps(key)}: [")
            for m, item in enumerate(val):
                tail = "," if m + 1 < len(val) else ""
                lines.append(f"    {json.dumps(item, ensure_ascii=False)}{tail}")
            lines.append(f"  ]{sep}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val, ensure_ascii=False)}{sep}")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_poset(P: GradedPoset, path, meta: dict | None = None) -> None:
    _dump(poset_to_json(P, meta), path)


def _load_json(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None


def _line_of(path, needle: str) -> int | None:
    for k, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if needle in line:
            return k
    return None


def _fail(path, msg: str, needle: str | None = None):
    line = _line_of(path, needle) if needle else None
    where = f"{path}:{line}" if line else f"{path}"
    raise SchemaError(f"{where}: {msg}")


def poset_from_json(data: Any, path="<data>") -> PosetFile:
    if not isinstance(data, dict) or data.get("format") != POSET_FORMAT:
        _fail(path, f"expected format {POSET_FORMAT!r}", '"format"')
    meta = data.get("meta") or {}
    if not isinstance(meta, dict):
        _fail(path, "meta must be an object", '"meta"')
    elements = data.get("elements")
    covers = data.get("covers")
    if not isinstance(elements, list) or not isinstance(covers, list):
        _fail(path, "elements and covers must be lists")
    m = len(elements)
    rank = [None] * m
    labels = [""] * m
    for el in elements:
        if not isinstance(el, dict) or not isinstance(el.get("id"), int) or not isinstance(el.get("rank"), int):
            _fail(path, f"malformed element {el!r}", json.dumps(el)[:20] if el else None)
        i = el["id"]
        if not (0 <= i < m) or rank[i] is not None:
            _fail(path, f"element ids must be dense 0..{m - 1} without repeats, got {i}", f'"id": {i},')
        rank[i] = el["rank"]
        labels[i] = str(el.get("label", i))
    seen = set()
    for c in covers:
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(x, int) for x in c)):
            _fail(path, f"malformed cover {c!r}")
        lo, hi = c
        needle = f"[{lo}, {hi}]"
        if not (0 <= lo < m and 0 <= hi < m):
            _fail(path, f"cover {c} refers to an unknown id", needle)
        if (lo, hi) in seen:
            _fail(path, f"duplicate cover {c}", needle)
        if rank[hi] != rank[lo] + 1:
            _fail(path, f"cover {c} goes from rank {rank[lo]} to rank {rank[hi]}", needle)
        seen.add((lo, hi))
    return PosetFile(GradedPoset.from_covers(rank, sorted(seen), labels), meta)


def import_poset_file(path) -> PosetFile:
    return poset_from_json(_load_json(path), path)


def import_poset(path) -> GradedPoset:
    return import_poset_file(path).poset


def export_dot(P: GradedPoset, path) -> None:
    Path(path).write_text(to_dot(P), encoding="utf-8")


def to_dot(P: GradedPoset) -> str:
    lines = ["digraph poset {", "  rankdir=BT;", "  node [shape=box];"]
    for r, level in enumerate(P.rank_levels()):
        if level:
            ids = " ".join(f"n{i};" for i in sorted(level))
            lines.append(f"  {{ rank=same; {ids} }}")
    labels = P.labels or tuple(str(i) for i in range(P.m))
    for i in range(P.m):
        lines.append(f"  n{i} [label={json.dumps(labels[i], ensure_ascii=False)}];")
    for i, j in sorted(P.covers()):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def decomposition_to_json(D: Decomposition) -> dict:
    parts = []
    for p in D.parts:
        if p.kind == "boolean":
            declared = {"type": "boolean", "rank": p.size}
        elif p.kind == "chain":
            declared = {"type": "chain", "length": p.size}
        else:
            declared = {"type": "untyped"}
        rec = {"elements": list(p.elements), "declared": declared,
               "span": list(p.span) if p.span else None, "tag": p.tag}
        if p.structure is not None:
            rec["structure"] = p.structure
        if p.boolean_map is not None:
            rec["boolean_map"] = list(p.boolean_map)
        parts.append(rec)
    return {"format": DECOMP_FORMAT, "parts": parts}


def decomposition_from_json(data: Any, path="<data>") -> Decomposition:
    if not isinstance(data, dict) or data.get("format") != DECOMP_FORMAT:
        _fail(path, f"expected format {DECOMP_FORMAT!r}", '"format"')
    parts = []
    for k, rec in enumerate(data.get("parts", [])):
        if not isinstance(rec, dict) or not isinstance(rec.get("elements"), list):
            _fail(path, f"part {k} is malformed")
        decl = rec.get("declared") or {"type": "untyped"}
        kind = decl.get("type", "untyped")
        if kind not in ("boolean", "chain", "untyped"):
            _fail(path, f"part {k} declares unknown type {kind!r}")
        size = decl.get("rank") if kind == "boolean" else decl.get("length")
        span = tuple(rec["span"]) if rec.get("span") is not None else None
        bmap = tuple(rec["boolean_map"]) if rec.get("boolean_map") is not None else None
        parts.append(Part(tuple(sorted(rec["elements"])), kind, size, span,
                          rec.get("tag"), rec.get("structure"), bmap))
    return Decomposition(tuple(parts))


def export_decomposition(D: Decomposition, path) -> None:
    _dump(decomposition_to_json(D), path)


def import_decomposition(path) -> Decomposition:
    return decomposition_from_json(_load_json(path), path)


@dataclass
class ReferenceReport:
    group: str | None
    rank_vector: tuple[int, ...]
    gamma_vector: tuple[int, ...] | None
    strongly_sperner: bool
    expected_rank_vector: tuple[int, ...] | None
    expected_gamma_vector: tuple[int, ...] | None
    mismatches: list[str]

    @property
    def matches(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return asdict(self) | {"matches": self.matches}


def verify_reference_table(path, group: str | None = None) -> ReferenceReport:
    """Compare an imported poset with its row of the exceptional table.

    The expectation comes from an ``expected`` record in the file, or else
    from the table row named by ``group`` or by ``meta.group``.
    """
    data = _load_json(path)
    pf = poset_from_json(data, path)
    expected = data.get("expected")
    name = group or pf.meta.get("group")
    if expected is None and name is not None:
        expected = reference_table().get(name)
        if expected is None:
            raise SchemaError(f"{path}: no table row for group {name!r}")
    if expected is None:
        raise SchemaError(f"{path}: no expected record and no group name")
    prof = rank_profile(pf.poset)
    strong = is_strongly_sperner(pf.poset).strongly_sperner
    exp_r = tuple(expected["rank_vector"])
    exp_g = tuple(expected["gamma_vector"])
    bad = []
    if prof.rank_vector != exp_r:
        bad.append(f"rank vector {prof.rank_vector} != expected {exp_r}")
    if prof.gamma_vector != exp_g:
        bad.append(f"gamma vector {prof.gamma_vector} != expected {exp_g}")
    if not strong:
        bad.append("poset is not strongly Sperner")
    return ReferenceReport(name, prof.rank_vector, prof.gamma_vector, strong, exp_r, exp_g, bad)
