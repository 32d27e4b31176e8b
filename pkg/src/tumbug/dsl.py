"""Line-oriented text format for diagrams with bit-exact round-trip.

Records, one per line, ``#`` comments:

    meta <key>="<value>"
    elem <id> <Kind> [key="value"]...
    contain <child-id> <parent-id>
    edge <id> <Time|Motion|Force|Causation|Tube|Relationship> [<src>] -> [<dst>] [role="..."]
    group <id> <StateDiagram|SplitTime> members=<id,...> [marker=<id>] [owner=<id>]
                                        [trunk=<id>] [junction=<id>] [probs=<p,...>]
    attr <owner-id> <attribute>=<value>

Attribute values are ``"text"``, a number (``:unit`` suffix allowed),
a wildcard keyword (``DK DC DNE STAR PLUS OPT``), ``range[lo,hi]`` with
``(`` / ``)`` for excluded end points, ``ball[lo,hi]``, ``exist[x]``, or
``fuzzy[name:lo,peak,hi]``.

Serialization is canonical: elements sort by id, then containment, edges,
groups, and bindings by (owner, attribute).  Numbers print as the shortest
decimal that round-trips.  parse(serialize(d)) reproduces d exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    AttributeBinding,
    CAPayload,
    CorrelationBoxPayload,
    Diagram,
    Edge,
    EdgeKind,
    Element,
    GenericPayload,
    GroupKind,
    ModelError,
    MotivationTrianglePayload,
    Position,
    RobinsonIconPayload,
    SlotSpec,
    SplitTimeGroup,
    StateDiagramGroup,
    SwirlyArrayPayload,
    Kind,
)
from .values import (
    BallInRange,
    ExistenceLevel,
    ExprSyntaxError,
    FuzzyLabel,
    Range,
    Scalar,
    Text,
    Value,
    Wildcard,
    expr_text,
    fmt_num,
    parse_expr,
)

__all__ = ["SourceSpan", "ParseError", "parse", "serialize", "value_literal", "parse_value_literal"]

_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")
_KEY_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_ATTR_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_NUMBER_RE = re.compile(r"^-?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")
_UNIT_RE = re.compile(r"^[A-Za-z%][A-Za-z0-9_%/-]*$")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    col_start: int
    col_end: int

    def __post_init__(self):
        if self.line < 1 or self.col_start < 1 or self.col_end < self.col_start:
            raise ValueError("spans are 1-based with end >= start")


class ParseError(Exception):
    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(
            f"{span.line}:{span.col_start}-{span.col_end}: expected {expected}, found {found}"
        )


@dataclass(frozen=True)
class _Token:
    text: str
    span: SourceSpan


def _quote(s: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in s) + '"'


def _unquote(tok: _Token, raw: str) -> str:
    if len(raw) < 2 or not raw.startswith('"') or not raw.endswith('"'):
        raise ParseError(tok.span, "quoted string", raw)
    out = []
    i = 1
    while i < len(raw) - 1:
        c = raw[i]
        if c == "\\":
            if i + 1 >= len(raw) - 1:
                raise ParseError(tok.span, "escape sequence", raw)
            esc = raw[i + 1]
            if esc not in _UNESCAPES:
                raise ParseError(tok.span, "known escape", f"\\{esc}")
            out.append(_UNESCAPES[esc])
            i += 2
        elif c == '"':
            raise ParseError(tok.span, "escaped quote", raw)
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _tokenize_line(line: str, lineno: int) -> list[_Token]:
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            break
        start = i
        in_quotes = False
        while i < n:
            c = line[i]
            if in_quotes:
                if c == "\\":
                    i += 2
                    continue
                if c == '"':
                    in_quotes = False
                i += 1
                continue
            if c == '"':
                in_quotes = True
                i += 1
                continue
            if c.isspace():
                break
            i += 1
        if in_quotes or i > n:
            raise ParseError(
                SourceSpan(lineno, start + 1, min(i, n)), "closing quote", "end of line"
            )
        tokens.append(_Token(line[start:i], SourceSpan(lineno, start + 1, i)))
    return tokens


# --------------------------------------------------------------------------
# Value literals.


def value_literal(v: Value) -> str:
    if isinstance(v, Text):
        return _quote(v.value)
    if isinstance(v, Scalar):
        if v.unit is not None:
            return f"{fmt_num(v.value)}:{v.unit}"
        return fmt_num(v.value)
    if isinstance(v, Wildcard):
        return v.value
    if isinstance(v, ExistenceLevel):
        return f"exist[{fmt_num(v.level)}]"
    if isinstance(v, Range):
        return "range" + _range_body(v)
    if isinstance(v, BallInRange):
        return "ball" + _range_body(v.range)
    if isinstance(v, FuzzyLabel):
        return (
            f"fuzzy[{v.name}:{fmt_num(v.lo)},{fmt_num(v.peak)},{fmt_num(v.hi)}]"
        )
    raise TypeError(f"not a value: {v!r}")


def _range_body(r: Range) -> str:
    open_cap = "[" if r.lo_inclusive else "("
    close_cap = "]" if r.hi_inclusive else ")"
    lo = "-inf" if r.lo is None else fmt_num(r.lo)
    hi = "inf" if r.hi is None else fmt_num(r.hi)
    return f"{open_cap}{lo},{hi}{close_cap}"


def parse_value_literal(tok: _Token, raw: str) -> Value:
    if raw.startswith('"'):
        return Text(_unquote(tok, raw))
    if raw in Wildcard.__members__:
        return Wildcard[raw]
    for prefix in ("range", "ball"):
        if raw.startswith(prefix) and len(raw) > len(prefix) and raw[len(prefix)] in "[(":
            r = _parse_range_body(tok, raw[len(prefix):])
            return r if prefix == "range" else BallInRange(r)
    if raw.startswith("exist[") and raw.endswith("]"):
        level = _parse_number(tok, raw[6:-1])
        try:
            return ExistenceLevel(level)
        except ValueError as exc:
            raise ParseError(tok.span, "existence level in [0,1]", raw) from exc
    if raw.startswith("fuzzy[") and raw.endswith("]"):
        body = raw[6:-1]
        if ":" not in body:
            raise ParseError(tok.span, "fuzzy[name:lo,peak,hi]", raw)
        name, _, nums = body.partition(":")
        parts = nums.split(",")
        if len(parts) != 3 or not _ATTR_RE.match(name):
            raise ParseError(tok.span, "fuzzy[name:lo,peak,hi]", raw)
        lo, peak, hi = (_parse_number(tok, p) for p in parts)
        try:
            return FuzzyLabel(name, lo, peak, hi)
        except ValueError as exc:
            raise ParseError(tok.span, "lo <= peak <= hi", raw) from exc
    number, _, unit = raw.partition(":")
    if _NUMBER_RE.match(number):
        if unit and not _UNIT_RE.match(unit):
            raise ParseError(tok.span, "unit tag", unit)
        try:
            return Scalar(float(number), unit or None)
        except ValueError as exc:
            raise ParseError(tok.span, "finite number", raw) from exc
    raise ParseError(tok.span, "value literal", raw)


def _parse_number(tok: _Token, raw: str) -> float:
    if not _NUMBER_RE.match(raw):
        raise ParseError(tok.span, "number", raw)
    return float(raw)


def _parse_range_body(tok: _Token, body: str) -> Range:
    if len(body) < 4 or body[0] not in "[(" or body[-1] not in "])":
        raise ParseError(tok.span, "range[lo,hi]", body)
    lo_inc = body[0] == "["
    hi_inc = body[-1] == "]"
    parts = body[1:-1].split(",")
    if len(parts) != 2:
        raise ParseError(tok.span, "two range bounds", body)
    lo = None if parts[0] == "-inf" else _parse_number(tok, parts[0])
    hi = None if parts[1] == "inf" else _parse_number(tok, parts[1])
    try:
        return Range(lo, hi, lo_inc, hi_inc)
    except ValueError as exc:
        raise ParseError(tok.span, "lo <= hi", body) from exc


# --------------------------------------------------------------------------
# Payload encoding.


def _encode_payload(el: Element) -> dict[str, str]:
    p = el.payload
    pairs: dict[str, str] = {}
    if isinstance(p, GenericPayload):
        if p.label is not None:
            pairs["label"] = p.label
        pairs.update(p.props)
    elif isinstance(p, CorrelationBoxPayload):
        if p.slots:
            pairs["slots"] = ",".join(
                f"{s.name}:{s.element}.{s.attribute}" for s in p.slots
            )
        for name in sorted(p.equations):
            pairs[f"eq.{name}"] = expr_text(p.equations[name])
    elif isinstance(p, CAPayload):
        if p.label is not None:
            pairs["label"] = p.label
        if p.open_ended:
            pairs["ellipsis"] = "true"
        for b in p.forced:
            pairs[f"forced.{b.attribute}"] = value_literal(b.value)
        for b in p.detected:
            pairs[f"detected.{b.attribute}"] = value_literal(b.value)
    elif isinstance(p, MotivationTrianglePayload):
        if p.label is not None:
            pairs["label"] = p.label
        if p.markers:
            pairs["markers"] = ",".join(f"{lv}:{va}" for lv, va in sorted(p.markers))
        if p.robinson is not None:
            pairs["robinson"] = p.robinson
    elif isinstance(p, RobinsonIconPayload):
        if p.label is not None:
            pairs["label"] = p.label
        if p.active:
            pairs["active"] = ",".join(sorted(p.active))
        pairs["valence"] = p.valence
        if p.subnode is not None:
            pairs["subnode"] = p.subnode
        if p.cathected_target is not None:
            pairs["target"] = p.cathected_target
    elif isinstance(p, SwirlyArrayPayload):
        if p.label is not None:
            pairs["label"] = p.label
        if p.cells:
            pairs["cells"] = ",".join(
                f"{name}:{fmt_num(x)}:{fmt_num(y)}" for name, x, y in p.cells
            )
        if p.active:
            pairs["active"] = ",".join(sorted(p.active))
    return pairs


def _decode_payload(kind: Kind, pairs: dict[str, tuple[_Token, str]]):
    """Build the kind's payload from decoded key/value pairs (consumes them)."""

    def take(key: str) -> str | None:
        entry = pairs.pop(key, None)
        return None if entry is None else entry[1]

    from .model import payload_type

    ptype = payload_type(kind)
    if ptype is GenericPayload:
        label = take("label")
        props = {k: v for k, (_, v) in sorted(pairs.items())}
        pairs.clear()
        return GenericPayload(label=label, props=props)
    if ptype is CorrelationBoxPayload:
        slots = []
        raw_slots = pairs.pop("slots", None)
        if raw_slots is not None:
            tok, text = raw_slots
            for part in filter(None, text.split(",")):
                m = re.match(r"^([A-Za-z0-9_-]+):([A-Za-z0-9_-]+)\.(.+)$", part)
                if not m:
                    raise ParseError(tok.span, "slot as name:element.attribute", part)
                slots.append(SlotSpec(m.group(1), m.group(2), m.group(3)))
        equations = {}
        for key in sorted(k for k in pairs if k.startswith("eq.")):
            tok, text = pairs.pop(key)
            try:
                equations[key[3:]] = parse_expr(text)
            except ExprSyntaxError as exc:
                raise ParseError(tok.span, "arithmetic expression", text) from exc
        return CorrelationBoxPayload(slots=tuple(slots), equations=equations)
    if ptype is CAPayload:
        label = take("label")
        open_ended = take("ellipsis") == "true"
        forced = []
        detected = []
        for key in sorted(pairs):
            if key.startswith("forced.") or key.startswith("detected."):
                tok, text = pairs.pop(key)
                prefix, _, attr = key.partition(".")
                binding = AttributeBinding(attr, parse_value_literal(tok, text))
                (forced if prefix == "forced" else detected).append(binding)
        return CAPayload(
            forced=tuple(forced), detected=tuple(detected), open_ended=open_ended, label=label
        )
    if ptype is MotivationTrianglePayload:
        label = take("label")
        robinson = take("robinson")
        markers = set()
        raw = pairs.pop("markers", None)
        if raw is not None:
            tok, text = raw
            for part in filter(None, text.split(",")):
                level, sep, valence = part.partition(":")
                if not sep:
                    raise ParseError(tok.span, "marker as level:valence", part)
                markers.add((level, valence))
        return MotivationTrianglePayload(
            markers=frozenset(markers), robinson=robinson, label=label
        )
    if ptype is RobinsonIconPayload:
        label = take("label")
        active = take("active")
        return RobinsonIconPayload(
            active=frozenset(filter(None, (active or "").split(","))),
            valence=take("valence") or "+",
            subnode=take("subnode"),
            cathected_target=take("target"),
            label=label,
        )
    if ptype is SwirlyArrayPayload:
        label = take("label")
        cells = []
        raw = pairs.pop("cells", None)
        if raw is not None:
            tok, text = raw
            for part in filter(None, text.split(",")):
                bits = part.split(":")
                if len(bits) != 3:
                    raise ParseError(tok.span, "cell as name:x:y", part)
                cells.append((bits[0], _parse_number(tok, bits[1]), _parse_number(tok, bits[2])))
        active = take("active")
        return SwirlyArrayPayload(
            cells=tuple(cells),
            active=frozenset(filter(None, (active or "").split(","))),
            label=label,
        )
    raise AssertionError(f"unhandled payload type {ptype}")


# --------------------------------------------------------------------------
# Parsing.


def parse(text: str | bytes) -> Diagram:
    """Parse DSL text into a diagram; raises ParseError at the first fault."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(SourceSpan(1, 1, 1), "UTF-8 text", "invalid bytes") from exc

    elems: list[tuple[int, list[_Token]]] = []
    contains: list[tuple[int, list[_Token]]] = []
    edges: list[tuple[int, list[_Token]]] = []
    groups: list[tuple[int, list[_Token]]] = []
    attrs: list[tuple[int, list[_Token]]] = []
    metas: list[tuple[int, list[_Token]]] = []
    buckets = {
        "elem": elems,
        "contain": contains,
        "edge": edges,
        "group": groups,
        "attr": attrs,
        "meta": metas,
    }

    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(line, lineno)
        if not tokens:
            continue
        head = tokens[0]
        if head.text not in buckets:
            raise ParseError(head.span, "record keyword", head.text)
        buckets[head.text].append((lineno, tokens))

    d = Diagram()

    for lineno, tokens in metas:
        if len(tokens) != 2:
            raise ParseError(tokens[0].span, "meta key=\"value\"", " ".join(t.text for t in tokens))
        key, value = _split_pair(tokens[1], quoted=True)
        if key in d.meta:
            raise ParseError(tokens[1].span, "unique meta key", key)
        d.meta[key] = value

    for lineno, tokens in elems:
        if len(tokens) < 3:
            raise ParseError(tokens[0].span, "elem <id> <Kind>", "end of record")
        eid = _require_id(tokens[1])
        try:
            kind = Kind(tokens[2].text)
        except ValueError:
            raise ParseError(tokens[2].span, "element kind", tokens[2].text) from None
        pairs: dict[str, tuple[_Token, str]] = {}
        for tok in tokens[3:]:
            key, value = _split_pair(tok, quoted=True)
            if key in pairs:
                raise ParseError(tok.span, "unique key", key)
            pairs[key] = (tok, value)
        position = _take_position(pairs)
        try:
            payload = _decode_payload(kind, pairs)
        except (ModelError, ValueError) as exc:
            raise ParseError(tokens[2].span, "well-formed payload", str(exc)) from exc
        if pairs:
            stray = sorted(pairs)[0]
            raise ParseError(pairs[stray][0].span, f"no {stray!r} key on {kind.value}", stray)
        if eid in d.elements:
            raise ParseError(tokens[1].span, "unique element id", eid)
        try:
            d.add_element(Element(kind=kind, payload=payload, position=position, id=eid))
        except ModelError as exc:
            raise ParseError(tokens[1].span, "insertable element", str(exc)) from exc

    for lineno, tokens in contains:
        if len(tokens) != 3:
            raise ParseError(tokens[0].span, "contain <child> <parent>", "record shape")
        child, parent = _require_id(tokens[1]), _require_id(tokens[2])
        try:
            d.contain(child, parent)
        except ModelError as exc:
            raise ParseError(tokens[1].span, "legal containment", str(exc)) from exc

    for lineno, tokens in edges:
        _parse_edge(d, tokens)

    for lineno, tokens in groups:
        _parse_group(d, tokens)

    for lineno, tokens in attrs:
        if len(tokens) != 3:
            raise ParseError(tokens[0].span, "attr <owner> <attribute>=<value>", "record shape")
        owner = _require_id(tokens[1])
        if owner not in d.elements and owner not in d.edges:
            raise ParseError(tokens[1].span, "existing owner", owner)
        name, _, raw = tokens[2].text.partition("=")
        if not _ATTR_RE.match(name) or not raw:
            raise ParseError(tokens[2].span, "attribute=value", tokens[2].text)
        value = parse_value_literal(tokens[2], raw)
        try:
            binding = AttributeBinding(name, value)
        except ModelError as exc:
            raise ParseError(tokens[2].span, "legal binding", str(exc)) from exc
        # Hosting legality is the validator's concern, not the parser's.
        d.bindings.append((owner, binding))

    return d


def _require_id(tok: _Token) -> str:
    if not _ID_RE.match(tok.text):
        raise ParseError(tok.span, "identifier", tok.text)
    return tok.text


def _split_pair(tok: _Token, quoted: bool) -> tuple[str, str]:
    key, sep, raw = tok.text.partition("=")
    if not sep or not _KEY_RE.match(key):
        raise ParseError(tok.span, "key=\"value\"", tok.text)
    if quoted:
        return key, _unquote(tok, raw)
    return key, raw


def _take_position(pairs: dict[str, tuple[_Token, str]]) -> Position | None:
    pos = pairs.pop("pos", None)
    size = pairs.pop("size", None)
    if pos is None:
        if size is not None:
            raise ParseError(size[0].span, "pos together with size", "size alone")
        return None
    tok, text = pos
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(tok.span, "pos as x,y", text)
    x, y = (_parse_number(tok, p) for p in parts)
    w = h = None
    if size is not None:
        stok, stext = size
        sparts = stext.split(",")
        if len(sparts) != 2:
            raise ParseError(stok.span, "size as w,h", stext)
        w, h = (_parse_number(stok, p) for p in sparts)
    return Position(x, y, w, h)


def _parse_edge(d: Diagram, tokens: list[_Token]) -> None:
    if len(tokens) < 3:
        raise ParseError(tokens[0].span, "edge <id> <Kind> [src] -> [dst]", "end of record")
    eid = _require_id(tokens[1])
    try:
        kind = EdgeKind(tokens[2].text)
    except ValueError:
        raise ParseError(tokens[2].span, "edge kind", tokens[2].text) from None
    rest = tokens[3:]
    source = target = role = None
    i = 0
    if i < len(rest) and rest[i].text != "->" and "=" not in rest[i].text:
        source = _require_id(rest[i])
        i += 1
    if i >= len(rest) or rest[i].text != "->":
        span = rest[i].span if i < len(rest) else tokens[-1].span
        found = rest[i].text if i < len(rest) else "end of record"
        raise ParseError(span, "'->'", found)
    i += 1
    if i < len(rest) and "=" not in rest[i].text:
        target = _require_id(rest[i])
        i += 1
    for tok in rest[i:]:
        key, value = _split_pair(tok, quoted=True)
        if key != "role":
            raise ParseError(tok.span, "role key", key)
        role = value
    if eid in d.edges or eid in d.elements or eid in d.groups:
        raise ParseError(tokens[1].span, "unique edge id", eid)
    try:
        d.add_edge(Edge(kind=kind, source=source, target=target, role=role, id=eid))
    except (ModelError, ValueError) as exc:
        raise ParseError(tokens[1].span, "insertable edge", str(exc)) from exc


def _parse_group(d: Diagram, tokens: list[_Token]) -> None:
    if len(tokens) < 3:
        raise ParseError(tokens[0].span, "group <id> <Kind>", "end of record")
    gid = _require_id(tokens[1])
    try:
        gkind = GroupKind(tokens[2].text)
    except ValueError:
        raise ParseError(tokens[2].span, "group kind", tokens[2].text) from None
    keys: dict[str, tuple[_Token, str]] = {}
    for tok in tokens[3:]:
        key, value = _split_pair(tok, quoted=False)
        if key in keys:
            raise ParseError(tok.span, "unique key", key)
        keys[key] = (tok, value)

    def take(key: str) -> tuple[_Token, str] | None:
        return keys.pop(key, None)

    members_entry = take("members")
    if members_entry is None:
        raise ParseError(tokens[2].span, "members=<id,...>", "no members key")
    members_tok, members_raw = members_entry
    members = [m for m in members_raw.split(",") if m]

    if gkind is GroupKind.STATE_DIAGRAM:
        states, tubes = [], []
        for m in members:
            if m in d.elements:
                states.append(m)
            elif m in d.edges:
                tubes.append(m)
            else:
                raise ParseError(members_tok.span, "existing member id", m)
        marker = take("marker")
        owner = take("owner")
        if keys:
            stray = sorted(keys)[0]
            raise ParseError(keys[stray][0].span, "StateDiagram group key", stray)
        group = StateDiagramGroup(
            states=tuple(states),
            tubes=tuple(tubes),
            marker=None if marker is None else marker[1],
            owner=None if owner is None else owner[1],
            id=gid,
        )
    else:
        trunk = take("trunk")
        junction = take("junction")
        if trunk is None or junction is None:
            raise ParseError(tokens[2].span, "trunk= and junction=", "missing keys")
        probs_entry = take("probs")
        probabilities = None
        if probs_entry is not None:
            ptok, praw = probs_entry
            probabilities = tuple(_parse_number(ptok, p) for p in praw.split(",") if p)
        if keys:
            stray = sorted(keys)[0]
            raise ParseError(keys[stray][0].span, "SplitTime group key", stray)
        try:
            group = SplitTimeGroup(
                trunk=trunk[1],
                branches=tuple(members),
                junction=junction[1],
                probabilities=probabilities,
                id=gid,
            )
        except (ModelError, ValueError) as exc:
            raise ParseError(tokens[1].span, "legal probabilities", str(exc)) from exc
    if gid in d.groups or gid in d.elements or gid in d.edges:
        raise ParseError(tokens[1].span, "unique group id", gid)
    try:
        d.add_group(group)
    except ModelError as exc:
        raise ParseError(tokens[1].span, "resolvable group members", str(exc)) from exc


# --------------------------------------------------------------------------
# Serialization.


def serialize(d: Diagram) -> str:
    """Canonical text for a diagram; stable across runs and insert orders."""
    lines: list[str] = []
    for key in sorted(d.meta):
        lines.append(f"meta {key}={_quote(d.meta[key])}")
    for eid in sorted(d.elements):
        el = d.elements[eid]
        pairs = _encode_payload(el)
        if el.position is not None:
            pairs["pos"] = f"{fmt_num(el.position.x)},{fmt_num(el.position.y)}"
            if el.position.w is not None and el.position.h is not None:
                pairs["size"] = f"{fmt_num(el.position.w)},{fmt_num(el.position.h)}"
        parts = [f"{k}={_quote(v)}" for k, v in sorted(pairs.items())]
        lines.append(" ".join(["elem", eid, el.kind.value] + parts))
    for child in sorted(d.containment):
        lines.append(f"contain {child} {d.containment[child]}")
    for eid in sorted(d.edges):
        e = d.edges[eid]
        parts = ["edge", eid, e.kind.value]
        if e.source is not None:
            parts.append(e.source)
        parts.append("->")
        if e.target is not None:
            parts.append(e.target)
        if e.role is not None:
            parts.append(f"role={_quote(e.role)}")
        lines.append(" ".join(parts))
    for gid in sorted(d.groups):
        g = d.groups[gid]
        if isinstance(g, StateDiagramGroup):
            parts = [
                "group",
                gid,
                GroupKind.STATE_DIAGRAM.value,
                "members=" + ",".join((*g.states, *g.tubes)),
            ]
            if g.marker is not None:
                parts.append(f"marker={g.marker}")
            if g.owner is not None:
                parts.append(f"owner={g.owner}")
        else:
            parts = [
                "group",
                gid,
                GroupKind.SPLIT_TIME.value,
                "members=" + ",".join(g.branches),
                f"trunk={g.trunk}",
                f"junction={g.junction}",
            ]
            if g.probabilities is not None:
                parts.append("probs=" + ",".join(fmt_num(p) for p in g.probabilities))
        lines.append(" ".join(parts))
    rendered = [
        (owner, binding.attribute, value_literal(binding.value))
        for owner, binding in d.bindings
    ]
    for owner, attribute, literal in sorted(rendered):
        lines.append(f"attr {owner} {attribute}={literal}")
    return "\n".join(lines) + ("\n" if lines else "")
