"""Sentence-to-diagram conversion heuristics as a trigger rule engine.

Fourteen rules map prose-level cues (barriers, lifting, causal connectives,
...) to the Building Blocks a faithful diagram needs.  Triggers are
caller-supplied tags, not extracted from text.  Rules load from a data file
so the set stays editable; the shipped file mirrors the fourteen heuristics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .model import Diagram, EdgeKind, Kind, LOCATION_BOX_FAMILY, MARKER_KINDS
from .lexicon import tables_dir

__all__ = [
    "TriggerTag",
    "Trigger",
    "Rule",
    "Requirement",
    "CheckReport",
    "RuleSetError",
    "load_rules",
    "parse_rules",
    "default_rules",
    "requirements_for",
    "check",
]


class RuleSetError(ValueError):
    pass


class TriggerTag(str, enum.Enum):
    BARRIER = "barrier"
    LIFT_CARRY = "lift-carry"
    DAMAGE_INTERFERENCE = "damage-interference"
    SPATIAL_RELATION = "spatial-relation"
    RELATIVE_TIME = "relative-time"
    DOWNWARD_GRAVITY = "downward-gravity"
    INTERIOR = "interior"
    SPEED = "speed"
    COLLECTIVE_VIEW = "collective-view"
    LINE_OF_SIGHT = "line-of-sight"
    CAUSAL_CONNECTIVE = "causal-connective"
    TRANSFER_TRAVEL = "transfer-travel"
    INFORMATION_TRANSFER = "information-transfer"
    TEMPORAL_PROCESS = "temporal-process"


@dataclass(frozen=True)
class Trigger:
    """A tag, optionally carrying the cue word that fired it ("because")."""

    tag: TriggerTag
    cue: str | None = None


# Requirement kinds: concrete element kinds, the arrow names, or the
# abstract classes AnyBox / AnyMarker.
_ARROW_NAMES = {
    "TimeArrow": EdgeKind.TIME,
    "MotionArrow": EdgeKind.MOTION,
    "ForceArrow": EdgeKind.FORCE,
    "CausationArrow": EdgeKind.CAUSATION,
}
_ABSTRACT = ("AnyBox", "AnyMarker")

_ANYBOX_KINDS = LOCATION_BOX_FAMILY | {Kind.DATA_SET_BOX}


def _known_kind(name: str) -> bool:
    if name in _ARROW_NAMES or name in _ABSTRACT:
        return True
    return name in {k.value for k in Kind}


@dataclass(frozen=True)
class Rule:
    index: int
    tag: TriggerTag
    mandatory: frozenset[str]
    advisory: frozenset[str]
    mandatory_cues: frozenset[str]  # cue words that promote advisory kinds

    def __post_init__(self):
        for name in self.mandatory | self.advisory:
            if not _known_kind(name):
                raise RuleSetError(f"rule {self.index}: unknown kind {name!r}")


@dataclass(frozen=True)
class Requirement:
    mandatory: frozenset[str] = frozenset()
    advisory: frozenset[str] = frozenset()

    def union(self, other: "Requirement") -> "Requirement":
        mandatory = self.mandatory | other.mandatory
        return Requirement(mandatory, (self.advisory | other.advisory) - mandatory)


def parse_rules(text: str) -> dict[TriggerTag, Rule]:
    """Parse the rule file: ``<index> <tag> <mandatory> <advisory> <cues>``
    per line, comma-separated kind lists, ``-`` for empty."""
    rules: dict[TriggerTag, Rule] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise RuleSetError(f"line {lineno}: expected 5 fields, got {len(parts)}")
        index_text, tag_text, mand_text, adv_text, cue_text = parts
        try:
            index = int(index_text)
            tag = TriggerTag(tag_text)
        except ValueError as exc:
            raise RuleSetError(f"line {lineno}: {exc}") from exc
        if tag in rules:
            raise RuleSetError(f"line {lineno}: duplicate rule for {tag.value}")
        split = lambda t: frozenset(filter(None, t.split(","))) if t != "-" else frozenset()
        rules[tag] = Rule(index, tag, split(mand_text), split(adv_text), split(cue_text))
    missing = set(TriggerTag) - set(rules)
    if missing:
        raise RuleSetError(f"missing rules for: {sorted(t.value for t in missing)}")
    return rules


def load_rules(path: str | Path | None = None) -> dict[TriggerTag, Rule]:
    path = Path(path) if path is not None else tables_dir() / "heuristics.tbl"
    return parse_rules(path.read_text(encoding="utf-8"))


_DEFAULT_RULES: dict[TriggerTag, Rule] | None = None


def default_rules() -> dict[TriggerTag, Rule]:
    global _DEFAULT_RULES
    if _DEFAULT_RULES is None:
        _DEFAULT_RULES = load_rules()
    return _DEFAULT_RULES


def requirements_for(
    triggers: Iterable[TriggerTag | Trigger],
    rules: dict[TriggerTag, Rule] | None = None,
) -> Requirement:
    """Union of the triggered heuristics' required Building Blocks.

    Cue words can harden a rule: "because" promotes the causal-connective
    rule's advisory CausationArrow to mandatory.
    """
    rules = rules if rules is not None else default_rules()
    req = Requirement()
    for trigger in triggers:
        if isinstance(trigger, TriggerTag):
            trigger = Trigger(trigger)
        rule = rules[trigger.tag]
        if trigger.cue is not None and trigger.cue in rule.mandatory_cues:
            req = req.union(Requirement(rule.mandatory | rule.advisory, frozenset()))
        else:
            req = req.union(Requirement(rule.mandatory, rule.advisory))
    return req


@dataclass(frozen=True)
class CheckReport:
    satisfied: tuple[str, ...]
    missing: tuple[str, ...]
    advisory_satisfied: tuple[str, ...]
    advisory_missing: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.missing


def _present(d: Diagram, name: str) -> bool:
    if name in _ARROW_NAMES:
        return bool(d.edges_of_kind(_ARROW_NAMES[name]))
    if name == "AnyBox":
        return any(e.kind in _ANYBOX_KINDS for e in d.elements.values())
    if name == "AnyMarker":
        return any(e.kind in MARKER_KINDS for e in d.elements.values()) or bool(
            d.edges_of_kind(EdgeKind.RELATIONSHIP)
        )
    return any(e.kind.value == name for e in d.elements.values())


def check(d: Diagram, req: Requirement) -> CheckReport:
    """Which required Building Blocks the diagram actually contains."""
    sat, miss, asat, amiss = [], [], [], []
    for name in sorted(req.mandatory):
        (sat if _present(d, name) else miss).append(name)
    for name in sorted(req.advisory):
        (asat if _present(d, name) else amiss).append(name)
    return CheckReport(tuple(sat), tuple(miss), tuple(asat), tuple(amiss))
