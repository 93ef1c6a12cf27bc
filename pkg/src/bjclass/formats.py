"""Text and JSON formats for algebras, elements and reports."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .blockalg import Algebra, Block, Element
from .scalars import Kind


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        detail = ""
        if text is not None and position is not None:
            detail = f"\n  {text}\n  {' ' * position}^"
        super().__init__(f"{message}{where}{detail}")


_TOKEN = re.compile(r"\s*(?:(?P<word>[A-Za-z]+)|(?P<num>\d+)|(?P<sym>[=;+()]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _parse_text(text: str) -> Algebra:
    toks = _tokens(text)
    i = 0

    def expect(kind, value=None):
        nonlocal i
        k, v, p = toks[i]
        if k != kind or (value is not None and v.upper() != value):
            want = repr(value) if value is not None else kind
            got = repr(v) if k != "end" else "end of input"
            raise ParseError(f"expected {want}, found {got}", p, text)
        i += 1
        return v, p

    expect("word", "FIELD")
    expect("sym", "=")
    fv, fp = expect("word")
    if fv.upper() not in ("R", "C"):
        raise ParseError(f"field must be R or C, got {fv!r}", fp, text)
    field = Kind(fv.upper())
    expect("sym", ";")
    blocks = []
    while True:
        k, v, p = toks[i]
        if k == "word" and v.upper() in ("R", "C", "H"):
            i += 1
            blocks.append((Block(1, Kind(v.upper())), p))
        elif k == "word" and v.upper() == "M":
            i += 1
            nv, np_ = expect("num")
            if int(nv) < 1:
                raise ParseError("block size must be at least 1", np_, text)
            expect("sym", "(")
            kv, kp = expect("word")
            if kv.upper() not in ("R", "C", "H"):
                raise ParseError(f"unknown scalar kind {kv!r}", kp, text)
            expect("sym", ")")
            blocks.append((Block(int(nv), Kind(kv.upper())), p))
        else:
            got = repr(v) if k != "end" else "end of input"
            raise ParseError(f"expected a block (R, C, H or Mn(K)), found {got}", p, text)
        k, v, p = toks[i]
        if k == "end":
            break
        expect("sym", "+")
    for b, p in blocks:
        if field == Kind.C and b.kind != Kind.C:
            raise ParseError(f"complex algebras only have complex blocks, got {b}", p, text)
    return Algebra(field, tuple(b for b, _ in blocks))


def _parse_json(data) -> Algebra:
    if not isinstance(data, dict) or "field" not in data or "blocks" not in data:
        raise ParseError("algebra JSON needs 'field' and 'blocks'")
    try:
        field = Kind.parse(data["field"])
        if field == Kind.H:
            raise ValueError("field must be R or C")
        blocks = []
        for j, b in enumerate(data["blocks"]):
            if not isinstance(b, dict) or set(b) - {"n", "k"} or "k" not in b:
                raise ValueError(f"block {j} must look like {{\"n\": 2, \"k\": \"C\"}}")
            n = b.get("n", 1)
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise ValueError(f"block {j} has an invalid size {n!r}")
            blocks.append(Block(n, Kind.parse(b["k"])))
        return Algebra(field, tuple(blocks))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_algebra(source) -> Algebra:
    """Parse `field=R; R + C + M2(H)` text, a JSON string, or an already-decoded dict."""
    if isinstance(source, Algebra):
        return source
    if isinstance(source, dict):
        return _parse_json(source)
    text = str(source)
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from None
        return _parse_json(data)
    return _parse_text(text)


def format_algebra(algebra: Algebra) -> str:
    return str(algebra)


def load_algebra(arg: str) -> Algebra:
    """Accept a descriptor string or a path to a file holding one."""
    p = Path(arg)
    if len(arg) < 4096 and p.is_file():
        return parse_algebra(p.read_text())
    return parse_algebra(arg)


def load_element(path, algebra: Algebra) -> Element:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid element JSON: {exc.msg}", exc.pos, None) from None
    try:
        return Element.from_json(algebra, data)
    except ValueError as exc:
        raise ParseError(f"invalid element: {exc}") from None


def dump_element(element: Element, path) -> None:
    Path(path).write_text(json.dumps(element.to_json()))


def _table(rows: list) -> str:
    if not rows:
        return ""
    width = max(len(str(k)) for k, _ in rows)
    return "\n".join(f"{str(k).ljust(width)}  {v}" for k, v in rows)


def emit_report(report, fmt: str = "json") -> str:
    """Render a report object (anything with to_json) as JSON or a plain table."""
    data = report.to_json() if hasattr(report, "to_json") else report
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=False)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    if hasattr(report, "table_rows"):
        return _table(report.table_rows())
    rows = []
    for k, v in data.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v)
        rows.append((k, v))
    return _table(rows)
