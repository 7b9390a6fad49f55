"""Rule-based recovery of triple lists from raw model output.

Surface forms are tried in a fixed priority order and the first one that
yields anything wins:

1. the whole input is a strict JSON list of 3-string lists (status ``clean``)
2. fenced code blocks, whose bodies go through stages 3-5
3. bracketed lists embedded in text, with repairs for trailing commas,
   single quotes, Python tuples and missing outer brackets
4. lines holding parenthesized 3-tuples
5. lines of the form ``s | r | o``

If none of them produces a triple list the outcome is the empty fallback.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from .graph import Triple


class ParseStatus(str, Enum):
    CLEAN = "clean"
    RECOVERED = "recovered"
    EMPTY_FALLBACK = "empty_fallback"


@dataclass(frozen=True)
class ParseOutcome:
    triples: tuple[Triple, ...]
    status: ParseStatus
    diagnostics: tuple[str, ...] = field(default=())


_FENCE = re.compile(r"```[^\n`]*\n?(.*?)(?:```|\Z)", re.DOTALL)
_TRAILING_COMMA = re.compile(r",(\s*[\]\)])")
_STR = r'"(?:[^"\\]|\\.)*"|\'(?:[^\'\\]|\\.)*\''
_QUOTED_ITEM = re.compile(
    r"\[\s*(%s)\s*,\s*(%s)\s*,\s*(%s)\s*,?\s*\]" % (_STR, _STR, _STR), re.DOTALL
)
_BARE_ITEM = re.compile(r"\[([^\[\]\"'\n]*)\]")
_ITEM_SEP = re.compile(r"\s*,?\s*")
_BULLET = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+")
_TABLE_RULE = re.compile(r"^\s*\|?\s*:?-{2,}:?\s*(\|\s*:?-{2,}:?\s*)*\|?\s*$")


def canonical(triples: Iterable[Sequence[str]]) -> str:
    """Render triples in the canonical ``[["s","r","o"],...]`` text form."""
    return json.dumps([list(t) for t in triples], ensure_ascii=False, separators=(",", ":"))


# ---------------------------------------------------------------------------
# value -> triples


def _coerce_label(v) -> Optional[str]:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    if isinstance(v, (int, float, bool)):
        return str(v)
    return None


def _triples_from_value(value, notes: list[str]) -> Optional[list[Triple]]:
    """Interpret a parsed literal as a triple list, or return None if it is not one."""
    if not isinstance(value, (list, tuple)):
        return None
    if not all(isinstance(item, (list, tuple)) for item in value):
        return None
    out: list[Triple] = []
    shaped = 0
    for item in value:
        if len(item) != 3:
            notes.append(f"dropped item with {len(item)} fields: {_excerpt(repr(item))}")
            continue
        labels = [_coerce_label(v) for v in item]
        if any(lab is None for lab in labels):
            notes.append(f"dropped item with nested values: {_excerpt(repr(item))}")
            continue
        shaped += 1
        if not all(isinstance(v, str) for v in item):
            notes.append(f"coerced non-string labels in {_excerpt(repr(item))}")
        t = Triple(*labels)
        if t.is_partial():
            notes.append(f"dropped partially empty triple {_excerpt(repr(tuple(t)))}")
            continue
        out.append(t)
    if value and not shaped:
        return None
    return out


def _excerpt(s: str, n: int = 60) -> str:
    return s if len(s) <= n else s[: n - 3] + "..."


def _load_literal(text: str, notes: list[str]):
    """Parse a bracketed literal, applying the tolerance repairs in turn."""
    try:
        return json.loads(text)
    except (ValueError, RecursionError):
        pass
    repaired = _TRAILING_COMMA.sub(r"\1", text)
    if repaired != text:
        try:
            value = json.loads(repaired)
            notes.append("removed trailing comma")
            return value
        except (ValueError, RecursionError):
            pass
    try:
        value = ast.literal_eval(text)
    except (ValueError, SyntaxError, TypeError, MemoryError, RecursionError):
        return None
    notes.append("parsed as a Python literal (single quotes or tuples)")
    return value


# ---------------------------------------------------------------------------
# stage 1


def _strict(raw: str) -> Optional[list[Triple]]:
    try:
        value = json.loads(raw.strip())
    except (ValueError, RecursionError):
        return None
    if not isinstance(value, list):
        return None
    out = []
    for item in value:
        if not (isinstance(item, list) and len(item) == 3 and all(isinstance(v, str) for v in item)):
            return None
        t = Triple(*item)
        if t.is_partial():
            return None
        out.append(t)
    return out


# ---------------------------------------------------------------------------
# stage 3: bracketed regions


def _balanced_end(text: str, start: int) -> Optional[int]:
    """Index just past the bracket matching ``text[start]``, honouring quoted strings."""
    depth = 0
    quote: Optional[str] = None
    i = start
    while i < len(text):
        ch = text[i]
        if quote:
            if ch == "\\":
                i += 2
                continue
            if ch == quote or (ch == "\n" and quote == "'"):
                quote = None
        elif ch in "\"'":
            # An apostrophe inside a word is prose, not a string opener.
            if ch == "'" and i > 0 and text[i - 1].isalnum():
                pass
            else:
                quote = ch
        elif ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return None


def _item_run(text: str, pos: int) -> tuple[list[Triple], int, list[str]]:
    """Consecutive bracketed 3-item lists starting at ``pos``."""
    triples: list[Triple] = []
    notes: list[str] = []
    end = pos
    while True:
        m = _QUOTED_ITEM.match(text, pos)
        if m:
            try:
                labels = [ast.literal_eval(g) for g in m.groups()]
            except (ValueError, SyntaxError):
                break
        else:
            m = _BARE_ITEM.match(text, pos)
            if not m:
                break
            parts = [p.strip() for p in m.group(1).split(",")]
            if len(parts) != 3 or not all(parts):
                break
            labels = parts
            if not notes or notes[-1] != "accepted unquoted labels":
                notes.append("accepted unquoted labels")
        t = Triple(*labels)
        if t.is_partial():
            notes.append(f"dropped partially empty triple {_excerpt(repr(tuple(t)))}")
        else:
            triples.append(t)
        end = m.end()
        pos = _ITEM_SEP.match(text, end).end()
    return triples, end, notes


def _bracket_stage(text: str) -> tuple[list[Triple], list[str], bool]:
    triples: list[Triple] = []
    notes: list[str] = []
    found = False
    covered: list[tuple[int, int]] = []
    i = text.find("[")
    while i != -1:
        end = _balanced_end(text, i)
        if end is not None:
            local: list[str] = []
            value = _load_literal(text[i:end], local)
            got = _triples_from_value(value, local) if value is not None else None
            if got is not None:
                triples += got
                notes += local
                found = True
                covered.append((i, end))
                i = text.find("[", end)
                continue
        # Outer bracket open (truncated or broken list), or a bare run of items.
        j = i + 1
        while j < len(text) and text[j].isspace():
            j += 1
        outer_open = j < len(text) and text[j] == "["
        start = j if outer_open else i
        run, run_end, local = _item_run(text, start)
        count = len(run) + sum(1 for n in local if n.startswith("dropped"))
        if count >= 2 or (outer_open and count >= 1):
            triples += run
            notes += local
            notes.append("outer brackets missing or unbalanced; kept complete items")
            found = True
            covered.append((i, run_end))
            i = text.find("[", run_end)
            continue
        i = text.find("[", i + 1)
    if found and _has_outside_text(text, covered):
        notes.insert(0, "discarded text outside the triple list")
    return triples, notes, found


def _has_outside_text(text: str, spans: list[tuple[int, int]]) -> bool:
    pos = 0
    for a, b in spans:
        if text[pos:a].strip():
            return True
        pos = b
    return bool(text[pos:].strip().strip("]"))


# ---------------------------------------------------------------------------
# stages 4 and 5: line forms


def _tuple_stage(text: str) -> tuple[list[Triple], list[str], bool]:
    triples: list[Triple] = []
    notes: list[str] = []
    found = False
    for line in text.splitlines():
        body = _BULLET.sub("", line).strip().rstrip(",;").strip()
        if not (body.startswith("(") and body.endswith(")")):
            continue
        local: list[str] = []
        try:
            value = ast.literal_eval("[" + body + "]")
        except (ValueError, SyntaxError, TypeError, MemoryError, RecursionError):
            value = None
        got = _triples_from_value(value, local) if value is not None else None
        if got is None:
            inner = body[1:-1]
            if "(" in inner or ")" in inner:
                continue
            parts = [p.strip().strip("\"'") for p in inner.split(",")]
            if len(parts) != 3 or not all(parts):
                continue
            got = [Triple(*parts)]
        triples += got
        notes += local
        found = True
    if found:
        notes.append("read parenthesized tuple lines")
    return triples, notes, found


def _pipe_stage(text: str) -> tuple[list[Triple], list[str], bool]:
    triples: list[Triple] = []
    notes: list[str] = []
    lines = text.splitlines()
    for k, line in enumerate(lines):
        if line.count("|") < 2 or _TABLE_RULE.match(line):
            continue
        if k + 1 < len(lines) and _TABLE_RULE.match(lines[k + 1]):
            notes.append(f"skipped table header {_excerpt(line.strip())!r}")
            continue
        body = _BULLET.sub("", line).strip()
        if body.startswith("|"):
            body = body[1:]
        if body.endswith("|"):
            body = body[:-1]
        parts = [p.strip() for p in body.split("|")]
        if len(parts) != 3 or not all(parts):
            continue
        triples.append(Triple(*parts))
    if triples:
        notes.append("read pipe-delimited lines")
    return triples, notes, bool(triples)


def _recover(text: str) -> tuple[list[Triple], list[str], bool]:
    for stage in (_bracket_stage, _tuple_stage, _pipe_stage):
        got = stage(text)
        if got[2]:
            return got
    return [], [], False


# ---------------------------------------------------------------------------
# public API


def extract_triples(raw: str) -> ParseOutcome:
    """Recover the triple list from raw generated text. Never raises."""
    try:
        return _extract(raw)
    except RecursionError:
        return ParseOutcome((), ParseStatus.EMPTY_FALLBACK, ("input nested too deeply",))


def _extract(raw: str) -> ParseOutcome:
    strict = _strict(raw)
    if strict is not None:
        return ParseOutcome(tuple(strict), ParseStatus.CLEAN)

    fenced = _FENCE.findall(raw)
    if fenced:
        triples: list[Triple] = []
        notes: list[str] = []
        found = False
        for body in fenced:
            got = _strict(body)
            if got is not None:
                triples += got
                found = True
                continue
            t, n, f = _recover(body)
            triples += t
            notes += n
            found = found or f
        if found:
            return ParseOutcome(tuple(triples), ParseStatus.RECOVERED, ("read fenced code block", *notes))

    triples, notes, found = _recover(raw)
    if found:
        return ParseOutcome(tuple(triples), ParseStatus.RECOVERED, tuple(notes))
    return ParseOutcome((), ParseStatus.EMPTY_FALLBACK, ("no triple list found; using the empty list",))


def is_well_formed(raw: str) -> bool:
    return _strict(raw) is not None


def parse_rate(outcomes: Sequence[ParseOutcome]) -> float:
    """Fraction of outcomes that did not fall back to the empty list."""
    if not outcomes:
        raise ValueError("parse_rate needs at least one outcome")
    ok = sum(1 for o in outcomes if o.status is not ParseStatus.EMPTY_FALLBACK)
    return ok / len(outcomes)
