"""Combination grammar: diagram validation, SCOVA classification, queries.

Arrows and object-like blocks combine in six shapes (solitary arrow,
solitary nonquan, arrow out, arrow in, arrow between, self loop).  Which
shape is meaningful for which arrow kind is data, not code: the legality
table ships with defaults and can be overridden from a plain-text file.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

from .model import (
    CHANGE_ARROW_KINDS,
    CONTAINER_KINDS,
    Diagram,
    Edge,
    EdgeKind,
    GroupKind,
    Kind,
    LOCATION_BOX_FAMILY,
    NONQUAN_KINDS,
    SplitTimeGroup,
    StateDiagramGroup,
    UnknownOwner,
)
from .values import Text, Value, Wildcard

__all__ = [
    "Shape",
    "LegalityTable",
    "default_legality",
    "load_legality",
    "parse_legality",
    "ViolationCode",
    "Violation",
    "validate",
    "BasicKind",
    "scova_classify",
    "generalize",
    "resolve_query",
    "UnknownKind",
    "edge_shape",
]


class Shape(str, enum.Enum):
    SOLITARY_ARROW = "SolitaryArrow"
    SOLITARY_NONQUAN = "SolitaryNonquan"
    ARROW_OUT = "ArrowOut"
    ARROW_IN = "ArrowIn"
    ARROW_BETWEEN = "ArrowBetween"
    SELF_LOOP = "SelfLoop"


_ARROW_COLUMNS = (EdgeKind.TIME, EdgeKind.MOTION, EdgeKind.FORCE, EdgeKind.CAUSATION)

LegalityTable = dict[tuple[Shape, EdgeKind], bool]


def default_legality() -> LegalityTable:
    """Built-in table: time never attaches, motion never points into its
    mover from nowhere, force never self-loops; solitary anything is fine."""
    legal_shapes = {
        EdgeKind.TIME: {Shape.SOLITARY_ARROW, Shape.SOLITARY_NONQUAN},
        EdgeKind.MOTION: {
            Shape.SOLITARY_ARROW,
            Shape.SOLITARY_NONQUAN,
            Shape.ARROW_OUT,
            Shape.ARROW_BETWEEN,
            Shape.SELF_LOOP,
        },
        EdgeKind.FORCE: {
            Shape.SOLITARY_ARROW,
            Shape.SOLITARY_NONQUAN,
            Shape.ARROW_OUT,
            Shape.ARROW_IN,
            Shape.ARROW_BETWEEN,
        },
        EdgeKind.CAUSATION: {
            Shape.SOLITARY_ARROW,
            Shape.SOLITARY_NONQUAN,
            Shape.ARROW_OUT,
            Shape.ARROW_IN,
            Shape.ARROW_BETWEEN,
            Shape.SELF_LOOP,
        },
    }
    return {
        (shape, kind): shape in legal_shapes[kind]
        for shape in Shape
        for kind in _ARROW_COLUMNS
    }


def parse_legality(text: str) -> LegalityTable:
    """Parse a 6x4 L/I table: one row per shape, columns Time Motion Force
    Causation.  ``#`` starts a comment."""
    table: LegalityTable = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"expected '<Shape> L/I L/I L/I L/I', got {raw!r}")
        try:
            shape = Shape(parts[0])
        except ValueError as exc:
            raise ValueError(f"unknown shape {parts[0]!r}") from exc
        for kind, cell in zip(_ARROW_COLUMNS, parts[1:]):
            if cell not in ("L", "I"):
                raise ValueError(f"cell must be L or I, got {cell!r}")
            table[(shape, kind)] = cell == "L"
    missing = [
        (s.value, k.value)
        for s in Shape
        for k in _ARROW_COLUMNS
        if (s, k) not in table
    ]
    if missing:
        raise ValueError(f"legality table incomplete, missing cells: {missing}")
    return table


def load_legality(path: str | Path) -> LegalityTable:
    return parse_legality(Path(path).read_text(encoding="utf-8"))


class ViolationCode(str, enum.Enum):
    TIME_ATTACHED = "TIME_ATTACHED"
    ARROW_SHAPE_ILLEGAL = "ARROW_SHAPE_ILLEGAL"
    SELF_LOOP_FORBIDDEN = "SELF_LOOP_FORBIDDEN"
    ATTR_HOST_ILLEGAL = "ATTR_HOST_ILLEGAL"
    ATTR_CONFLICT = "ATTR_CONFLICT"
    UNKNOWN_REF = "UNKNOWN_REF"
    CONTAINMENT_INVALID = "CONTAINMENT_INVALID"
    POSITION_REQUIRED = "POSITION_REQUIRED"
    BOX_NESTING = "BOX_NESTING"
    XOR_TOO_FEW = "XOR_TOO_FEW"
    GROUP_MEMBER_INVALID = "GROUP_MEMBER_INVALID"
    STATE_MARKER_MISPLACED = "STATE_MARKER_MISPLACED"
    STATE_TUBE_ENDPOINT = "STATE_TUBE_ENDPOINT"
    SPLIT_PROBS_INVALID = "SPLIT_PROBS_INVALID"
    ATTEND_NOT_DATA = "ATTEND_NOT_DATA"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    ids: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.code.value} {','.join(self.ids)} {self.message}"


def edge_shape(edge: Edge) -> Shape:
    if edge.source is None and edge.target is None:
        return Shape.SOLITARY_ARROW
    if edge.source is not None and edge.target is None:
        return Shape.ARROW_OUT
    if edge.source is None and edge.target is not None:
        return Shape.ARROW_IN
    if edge.source == edge.target:
        return Shape.SELF_LOOP
    return Shape.ARROW_BETWEEN


def _legality_code(kind: EdgeKind, shape: Shape) -> ViolationCode:
    if kind is EdgeKind.TIME:
        return ViolationCode.TIME_ATTACHED
    if shape is Shape.SELF_LOOP:
        return ViolationCode.SELF_LOOP_FORBIDDEN
    return ViolationCode.ARROW_SHAPE_ILLEGAL


# Box strictness: a looser box directly inside a stricter one inverts the
# stricter box's constraints, which is disallowed.
_STRICTNESS = {
    Kind.VERBATIM_BOX: 3,
    Kind.DESCRIPTIVE_BOX: 2,
    Kind.AGGREGATION_BOX: 1,
    Kind.CA_AGGREGATION_BOX: 1,
    Kind.XOR_BOX: 1,
}


def validate(d: Diagram, table: LegalityTable | None = None) -> list[Violation]:
    """Check a diagram against the combination grammar.

    Returns violations as data; an empty list means the diagram is clean.
    Pure and deterministic: equal diagrams yield equal violation lists.
    """
    table = table if table is not None else default_legality()
    out: list[Violation] = []

    # Referential integrity and containment.
    for child in sorted(d.containment):
        parent = d.containment[child]
        if child not in d.elements or parent not in d.elements:
            out.append(
                Violation(
                    ViolationCode.UNKNOWN_REF,
                    (child, parent),
                    "containment references a missing element",
                )
            )
            continue
        if d.elements[parent].kind not in CONTAINER_KINDS:
            out.append(
                Violation(
                    ViolationCode.CONTAINMENT_INVALID,
                    (child, parent),
                    f"parent {parent} is not a container",
                )
            )
    for child in sorted(d.containment):
        seen = {child}
        node = d.containment.get(child)
        while node is not None:
            if node in seen:
                out.append(
                    Violation(
                        ViolationCode.CONTAINMENT_INVALID,
                        (child,),
                        "containment cycle",
                    )
                )
                break
            seen.add(node)
            node = d.containment.get(node)

    for eid in sorted(d.edges):
        edge = d.edges[eid]
        for endpoint in (edge.source, edge.target):
            if endpoint is not None and endpoint not in d.elements:
                out.append(
                    Violation(
                        ViolationCode.UNKNOWN_REF,
                        (eid, endpoint),
                        "edge endpoint does not exist",
                    )
                )

    # Fixed positions inside Verbatim and Descriptive boxes.
    for child in sorted(d.containment):
        parent = d.containment[child]
        if child not in d.elements or parent not in d.elements:
            continue
        pkind = d.elements[parent].kind
        if pkind in (Kind.VERBATIM_BOX, Kind.DESCRIPTIVE_BOX):
            if d.elements[child].position is None:
                out.append(
                    Violation(
                        ViolationCode.POSITION_REQUIRED,
                        (child, parent),
                        f"elements inside a {pkind.value} need fixed positions",
                    )
                )

    # Legality table over change arrows.
    for eid in sorted(d.edges):
        edge = d.edges[eid]
        if edge.kind not in CHANGE_ARROW_KINDS:
            continue
        if any(
            ep is not None and ep not in d.elements
            for ep in (edge.source, edge.target)
        ):
            continue  # already reported as UNKNOWN_REF
        shape = edge_shape(edge)
        if not table[(shape, edge.kind)]:
            out.append(
                Violation(
                    _legality_code(edge.kind, shape),
                    (eid,),
                    f"{edge.kind.value} arrow not meaningful as {shape.value}",
                )
            )

    # Attribute hosting.
    for owner, binding in d.bindings:
        if owner in d.elements:
            kind = d.elements[owner].kind
            if kind not in NONQUAN_KINDS:
                out.append(
                    Violation(
                        ViolationCode.ATTR_HOST_ILLEGAL,
                        (owner,),
                        f"{kind.value} cannot host attribute {binding.attribute!r}",
                    )
                )
        elif owner in d.edges:
            if d.edges[owner].kind not in CHANGE_ARROW_KINDS:
                out.append(
                    Violation(
                        ViolationCode.ATTR_HOST_ILLEGAL,
                        (owner,),
                        f"{d.edges[owner].kind.value} edge cannot host attributes",
                    )
                )
        else:
            out.append(
                Violation(
                    ViolationCode.UNKNOWN_REF,
                    (owner,),
                    "binding owner does not exist",
                )
            )
    seen_attrs: dict[tuple[str, str], Value] = {}
    conflicted: set[tuple[str, str]] = set()
    for owner, binding in d.bindings:
        key = (owner, binding.attribute)
        if key in seen_attrs and seen_attrs[key] != binding.value:
            if key not in conflicted:
                conflicted.add(key)
                out.append(
                    Violation(
                        ViolationCode.ATTR_CONFLICT,
                        (owner,),
                        f"attribute {binding.attribute!r} bound to conflicting values",
                    )
                )
        seen_attrs.setdefault(key, binding.value)

    # Box nesting direction.
    for child in sorted(d.containment):
        parent = d.containment[child]
        if child not in d.elements or parent not in d.elements:
            continue
        ck = d.elements[child].kind
        pk = d.elements[parent].kind
        if ck in _STRICTNESS and pk in _STRICTNESS:
            if _STRICTNESS[ck] < _STRICTNESS[pk]:
                out.append(
                    Violation(
                        ViolationCode.BOX_NESTING,
                        (child, parent),
                        f"{ck.value} is looser than enclosing {pk.value}",
                    )
                )

    # XOR boxes need something to choose between: contained alternatives or
    # split-time branches forking at the box.
    branch_counts: dict[str, int] = {}
    for gid in sorted(d.groups):
        group = d.groups[gid]
        if isinstance(group, SplitTimeGroup) and group.junction:
            branch_counts[group.junction] = branch_counts.get(
                group.junction, 0
            ) + len(group.branches)
    for xid in d.elements_of_kind(Kind.XOR_BOX):
        alternatives = len(d.children_of(xid)) + branch_counts.get(xid, 0)
        if alternatives < 2:
            out.append(
                Violation(
                    ViolationCode.XOR_TOO_FEW,
                    (xid,),
                    f"XOR box offers {alternatives} alternatives, needs at least 2",
                )
            )

    # Groups.
    for gid in sorted(d.groups):
        group = d.groups[gid]
        if isinstance(group, StateDiagramGroup):
            for sid in group.states:
                if sid not in d.elements or d.elements[sid].kind is not Kind.STATE_CIRCLE:
                    out.append(
                        Violation(
                            ViolationCode.GROUP_MEMBER_INVALID,
                            (gid, sid),
                            "state member must be an existing StateCircle",
                        )
                    )
            for tid in group.tubes:
                tube = d.edges.get(tid)
                if tube is None or tube.kind is not EdgeKind.TUBE:
                    out.append(
                        Violation(
                            ViolationCode.GROUP_MEMBER_INVALID,
                            (gid, tid),
                            "tube member must be an existing Tube edge",
                        )
                    )
                    continue
                for endpoint in (tube.source, tube.target):
                    if endpoint not in group.states:
                        out.append(
                            Violation(
                                ViolationCode.STATE_TUBE_ENDPOINT,
                                (gid, tid),
                                "tube endpoint is not a member state",
                            )
                        )
            if group.marker is not None:
                if group.marker not in group.states and group.marker not in group.tubes:
                    out.append(
                        Violation(
                            ViolationCode.STATE_MARKER_MISPLACED,
                            (gid, group.marker),
                            "marker must sit on a member state or tube",
                        )
                    )
        else:
            for tid in (group.trunk, *group.branches):
                edge = d.edges.get(tid)
                if edge is None or edge.kind is not EdgeKind.TIME:
                    out.append(
                        Violation(
                            ViolationCode.GROUP_MEMBER_INVALID,
                            (gid, tid),
                            "split-time member must be an existing Time edge",
                        )
                    )
            if group.junction and (
                group.junction not in d.elements
                or d.elements[group.junction].kind is not Kind.XOR_BOX
            ):
                out.append(
                    Violation(
                        ViolationCode.GROUP_MEMBER_INVALID,
                        (gid, group.junction),
                        "split-time junction must be an XorBox",
                    )
                )
            if group.probabilities is not None:
                probs = group.probabilities
                bad = (
                    len(probs) != len(group.branches)
                    or any(not 0.0 <= p <= 1.0 for p in probs)
                    or abs(sum(probs) - 1.0) > 1e-9
                )
                if bad:
                    out.append(
                        Violation(
                            ViolationCode.SPLIT_PROBS_INVALID,
                            (gid,),
                            "branch probabilities must lie in [0,1] and sum to 1",
                        )
                    )

    # Attend rings flag attention on data motion only.
    for rid in d.elements_of_kind(Kind.ATTEND_RING):
        ring = d.elements[rid]
        edge_id = ring.payload.props.get("edge")
        problem = None
        if edge_id is None or edge_id not in d.edges:
            problem = "attend ring must reference a Motion edge"
        else:
            edge = d.edges[edge_id]
            if edge.kind is not EdgeKind.MOTION:
                problem = f"attend ring sits on a {edge.kind.value} edge"
            else:
                moved = _moved_element(d, edge_id)
                if moved is None or d.elements[moved].kind is not Kind.DATA_OBJECT_CIRCLE:
                    problem = "attended motion must move a DataObjectCircle"
        if problem is not None:
            out.append(Violation(ViolationCode.ATTEND_NOT_DATA, (rid,), problem))

    return out


def _moved_element(d: Diagram, edge_id: str) -> str | None:
    """What a motion edge moves: its 'moves' attribute if present (shorthand
    transfer notation), otherwise its source element."""
    moved = d.binding_value(edge_id, "moves")
    if isinstance(moved, Text) and moved.value in d.elements:
        return moved.value
    edge = d.edges[edge_id]
    if edge.source is not None and edge.source in d.elements:
        return edge.source
    return None


# --------------------------------------------------------------------------
# SCOVA: the five Basic Building Blocks.


class BasicKind(str, enum.Enum):
    S = "S"  # system-like
    C = "C"  # change-like
    O = "O"  # object-like
    V = "V"  # value-like
    A = "A"  # attribute-like


class UnknownKind(KeyError):
    pass


# Pseudo-kinds: grammar concepts that are classifiable but are not diagram
# elements themselves.
PSEUDO_KINDS = ("AttributeLine", "Wildcard", "RangeCap")

_SCOVA: dict[str, BasicKind] = {
    Kind.PHYSICAL_OBJECT_CIRCLE.value: BasicKind.O,
    Kind.DATA_OBJECT_CIRCLE.value: BasicKind.O,
    Kind.CA_OBJECT_CIRCLE.value: BasicKind.O,
    Kind.DATA_POINT.value: BasicKind.O,
    Kind.STATE_CIRCLE.value: BasicKind.O,
    Kind.CELL.value: BasicKind.O,
    Kind.SENSOR_BAR.value: BasicKind.O,
    Kind.MARKER_0D.value: BasicKind.O,
    Kind.MARKER_1D.value: BasicKind.O,
    Kind.MARKER_2D.value: BasicKind.O,
    Kind.VERBATIM_BOX.value: BasicKind.O,
    Kind.DESCRIPTIVE_BOX.value: BasicKind.O,
    Kind.AGGREGATION_BOX.value: BasicKind.O,
    Kind.CA_AGGREGATION_BOX.value: BasicKind.O,
    Kind.XOR_BOX.value: BasicKind.O,
    Kind.SWIRLY_ARRAY.value: BasicKind.O,
    Kind.LABEL_STRING.value: BasicKind.O,
    Kind.VALUE_BAR.value: BasicKind.V,
    Kind.CORRELATION_BOX.value: BasicKind.C,
    Kind.TIME_ANCHOR.value: BasicKind.C,
    Kind.ATTEND_RING.value: BasicKind.A,
    Kind.DATA_SET_BOX.value: BasicKind.S,
    Kind.MOTIVATION_TRIANGLE.value: BasicKind.S,
    Kind.ROBINSON_ICON.value: BasicKind.S,
    Kind.MODAL_VERB_ICON.value: BasicKind.S,
    Kind.ZOOM_BOX_PAIR.value: BasicKind.S,
    EdgeKind.TIME.value: BasicKind.C,
    EdgeKind.MOTION.value: BasicKind.C,
    EdgeKind.FORCE.value: BasicKind.C,
    EdgeKind.CAUSATION.value: BasicKind.C,
    EdgeKind.TUBE.value: BasicKind.O,
    EdgeKind.RELATIONSHIP.value: BasicKind.O,
    GroupKind.STATE_DIAGRAM.value: BasicKind.S,
    GroupKind.SPLIT_TIME.value: BasicKind.S,
    "AttributeLine": BasicKind.A,
    "Wildcard": BasicKind.V,
    "RangeCap": BasicKind.V,
}


# Building-block names for the arrows and composites, accepted alongside
# the bare edge/group kind names.
_KIND_ALIASES = {
    "TimeArrow": EdgeKind.TIME.value,
    "MotionArrow": EdgeKind.MOTION.value,
    "ForceArrow": EdgeKind.FORCE.value,
    "CausationArrow": EdgeKind.CAUSATION.value,
    "PathwayTube": EdgeKind.TUBE.value,
    "RelationshipMarker": EdgeKind.RELATIONSHIP.value,
    "StateDiagramGroup": GroupKind.STATE_DIAGRAM.value,
    "SplitTimeGroup": GroupKind.SPLIT_TIME.value,
    "SplitTimeArrow": GroupKind.SPLIT_TIME.value,
}


def all_classifiable_kinds() -> list[str]:
    """Every canonical name scova_classify accepts (aliases excluded)."""
    return sorted(_SCOVA)


def _kind_name(kind) -> str:
    if isinstance(kind, enum.Enum):
        name = kind.value
    else:
        name = str(kind)
    return _KIND_ALIASES.get(name, name)


def scova_classify(kind) -> BasicKind:
    """Reduce any concrete Building Block to its Basic Building Block."""
    name = _kind_name(kind)
    try:
        return _SCOVA[name]
    except KeyError:
        raise UnknownKind(name) from None


_IAM_KINDS = {k.value for k in LOCATION_BOX_FAMILY} | {GroupKind.STATE_DIAGRAM.value}
_NONQUAN_NAMES = {k.value for k in NONQUAN_KINDS}
_ARROW_NAMES = {k.value for k in CHANGE_ARROW_KINDS}


def generalize(kind) -> frozenset[str]:
    """Place a block on the generalization axes: Nonquan, IAM, ChangeArrow.

    Location boxes sit on two axes at once (they are both nonquantified
    objects and interchangeably actualizable maps), so the result is a set.
    """
    name = _kind_name(kind)
    if name not in _SCOVA:
        raise UnknownKind(name)
    axes = set()
    if name in _NONQUAN_NAMES:
        axes.add("Nonquan")
    if name in _IAM_KINDS:
        axes.add("IAM")
    if name in _ARROW_NAMES:
        axes.add("ChangeArrow")
    if not axes:
        axes.add("Other")
    return frozenset(axes)


def resolve_query(d: Diagram, owner: str, attribute: str) -> Value:
    """Answer a placed 0D-marker query: the value of owner's attribute.

    Unbound attributes answer DK.  When the owner itself says nothing, one
    hop along an outgoing Relationship marker is followed before giving up.
    """
    if owner not in d.elements and owner not in d.edges:
        raise UnknownOwner(owner)
    value = d.binding_value(owner, attribute)
    if value is not None:
        return value
    for eid in sorted(d.edges):
        edge = d.edges[eid]
        if edge.kind is EdgeKind.RELATIONSHIP and edge.source == owner:
            if edge.target is None:
                continue
            value = d.binding_value(edge.target, attribute)
            if value is not None:
                return value
    return Wildcard.DK
